"""Classic equilibrium refinements evaluated on enumerated classes.

Each test looks at off-path messages.  For mean-action games built from a
continuous message interval the off-path messages include every level in that
interval, not just the grid: all conditions are piecewise constant in the
level between finitely many breakpoints, so checking the breakpoints and one
interior point per gap is exact.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

from ._exact import fmt
from .game import Game, GameError, br_over_all_beliefs, conditional_prior, best_responses, sender_payoff
from .persuasion import PersuasionCache

GP_MAX_TYPES = 12


@dataclass(frozen=True)
class CriterionVerdict:
    name: str
    passed: bool
    witness: dict | None = None


def _prof(x):
    return x.profile if hasattr(x, "profile") else x


# -- off-path deviations -------------------------------------------------------

@dataclass(frozen=True)
class _Deviation:
    """An off-path message: a finite message index, or a bare level for mean games."""

    message: int | None
    level: Fraction | None

    def name(self, game: Game) -> str:
        return game.messages[self.message].label if self.message is not None else fmt(self.level)


def _deviations(game: Game, prof, extra_thresholds=True):
    on = set(prof.on_path())
    devs = [_Deviation(m, game.messages[m].level) for m in range(game.n_messages)
            if m not in on and not game.messages[m].terminal]
    if game.is_mean and game.message_interval is not None:
        used = {game.messages[m].level for m in on}
        have = {d.level for d in devs}
        for lv in _continuum_points(game, prof, used):
            if lv not in used and lv not in have:
                devs.append(_Deviation(None, lv))
                have.add(lv)
        devs.sort(key=lambda d: d.level)
    return devs


def _continuum_points(game: Game, prof, used):
    lo, hi = game.message_interval
    T = game.n_types
    u = prof.payoffs
    s = [game.sender_payoff.slope(game, t) for t in range(T)]
    vals = set(game.type_values)
    for size in range(1, T + 1):
        for sub in combinations(range(T), size):
            mass = sum(game.prior[t] for t in sub)
            vals.add(sum(game.prior[t] * game.type_values[t] for t in sub) / mass)
    cuts = {lo, hi}
    for t in range(T):
        for v in vals:
            cuts.add((v - u[t]) / s[t])
        for j in range(T):
            if s[t] != s[j]:
                cuts.add((u[j] - u[t]) / (s[t] - s[j]))
    cuts = sorted(c for c in cuts if lo <= c <= hi)
    pts = list(cuts)
    for a, b in zip(cuts, cuts[1:]):
        k = 2
        while True:
            p = a + (b - a) / k
            if p not in used:
                pts.append(p)
                break
            k += 1
    return pts


# -- helpers shared by the criteria -------------------------------------------

def _dev_payoff(game: Game, t: int, dev: _Deviation, response) -> Fraction:
    if game.is_mean:
        return response - game.sender_payoff.slope(game, t) * dev.level
    return sender_payoff(game, t, dev.message, response)


def _responses(game: Game, dev: _Deviation, types):
    """BR over beliefs on ``types``: action indices, or the (lo, hi) wage interval."""
    if game.is_mean:
        return game.value_range(types)
    return br_over_all_beliefs(game, dev.message, types)


def _max_gain(game, t, dev, resp):
    if game.is_mean:
        return _dev_payoff(game, t, dev, resp[1])
    return max(_dev_payoff(game, t, dev, a) for a in resp)


def _min_gain(game, t, dev, resp):
    if game.is_mean:
        return _dev_payoff(game, t, dev, resp[0])
    return min(_dev_payoff(game, t, dev, a) for a in resp)


def _candidate_set(game, prof, dev):
    everyone = range(game.n_types)
    resp = _responses(game, dev, everyone)
    return [t for t in everyone if prof.payoffs[t] <= _max_gain(game, t, dev, resp)]


def _names(game, ts):
    return [game.type_labels[t] for t in ts]


def _second_step(game, prof, dev, base, name):
    resp = _responses(game, dev, base)
    for t in base:
        floor = _min_gain(game, t, dev, resp)
        if floor > prof.payoffs[t]:
            return CriterionVerdict(name, False, {
                "message": dev.name(game), "D": _names(game, base), "deviator": game.type_labels[t],
                "deviation_floor": floor, "equilibrium_payoff": prof.payoffs[t]})
    return None


# -- the criteria ---------------------------------------------------------------

def intuitive_criterion(game: Game, cls) -> CriterionVerdict:
    prof = _prof(cls)
    for dev in _deviations(game, prof):
        D = _candidate_set(game, prof, dev)
        if not D:
            continue
        v = _second_step(game, prof, dev, D, "intuitive")
        if v is not None:
            return v
    return CriterionVerdict("intuitive", True)


def _dominates(game, prof, dev, t1, t2) -> bool:
    """``t1`` strictly benefits whenever ``t2`` weakly does, and sometimes strictly."""
    u = prof.payoffs
    if game.is_mean:
        lo, hi = game.value_range()
        th1 = u[t1] + game.sender_payoff.slope(game, t1) * dev.level
        th2 = u[t2] + game.sender_payoff.slope(game, t2) * dev.level
        if not th1 < hi:
            return False
        if th2 > hi:
            return True
        return max(th2, lo) > th1
    acts = br_over_all_beliefs(game, dev.message)
    gain1 = [_dev_payoff(game, t1, dev, a) - u[t1] for a in acts]
    gain2 = [_dev_payoff(game, t2, dev, a) - u[t2] for a in acts]
    if not any(g > 0 for g in gain1):
        return False
    return all(g1 > 0 for g1, g2 in zip(gain1, gain2) if g2 >= 0)


def d1_maximal(game: Game, cls, dev, D) -> list:
    prof = _prof(cls)
    out = []
    for t in D:
        beaten = any(_dominates(game, prof, dev, s, t) and not _dominates(game, prof, dev, t, s)
                     for s in D if s != t)
        if not beaten:
            out.append(t)
    return out


def d1_criterion(game: Game, cls) -> CriterionVerdict:
    prof = _prof(cls)
    for dev in _deviations(game, prof):
        D = _candidate_set(game, prof, dev)
        if not D:
            continue
        top = d1_maximal(game, prof, dev, D)
        if not top:
            continue
        v = _second_step(game, prof, dev, top, "D1")
        if v is not None:
            return v
    return CriterionVerdict("D1", True)


def gp_criterion(game: Game, cls) -> CriterionVerdict:
    """Fails when some subset of plausible deviators is a self-fulfilling reading of a message."""
    prof = _prof(cls)
    u = prof.payoffs
    T = game.n_types
    for dev in _deviations(game, prof):
        D = _candidate_set(game, prof, dev)
        if len(D) > GP_MAX_TYPES:
            raise GameError(f"subset search over {len(D)} types exceeds the limit of {GP_MAX_TYPES}")
        for size in range(1, len(D) + 1):
            for sub in combinations(D, size):
                belief = conditional_prior(game, sub)
                if game.is_mean:
                    acts = [sum(b * v for b, v in zip(belief, game.type_values))]
                else:
                    acts = best_responses(game, dev.message, belief)
                for a in acts:
                    gains = [_dev_payoff(game, t, dev, a) - u[t] for t in range(T)]
                    inside = all(gains[t] >= 0 for t in sub) and any(gains[t] > 0 for t in sub)
                    outside = all(gains[t] <= 0 for t in range(T) if t not in sub)
                    if inside and outside:
                        return CriterionVerdict("G-P", False, {
                            "message": dev.name(game), "D": _names(game, D), "subset": _names(game, sub),
                            "response": a if game.is_mean else game.actions[a]})
    return CriterionVerdict("G-P", True)


def undefeated(game: Game, cls, classes) -> CriterionVerdict:
    """Fails when another class sends an off-path message that all its senders weakly prefer."""
    prof = _prof(cls)
    on = set(prof.on_path())
    for other in classes:
        op = _prof(other)
        if op is prof:
            continue
        for m in op.on_path():
            if m in on:
                continue
            senders = op.senders(m)
            if all(op.payoffs[t] >= prof.payoffs[t] for t in senders) and \
                    any(op.payoffs[t] > prof.payoffs[t] for t in senders):
                return CriterionVerdict("undefeated", False, {
                    "defeater": getattr(other, "label", "?"), "message": game.messages[m].label,
                    "senders": _names(game, senders)})
    return CriterionVerdict("undefeated", True)


CRITERIA = ("intuitive", "D1", "G-P", "undefeated", "persuasive-most", "persuasive-least")


@dataclass
class Comparison:
    game: Game
    classes: list
    verdicts: list = field(default_factory=list)   # per class: {criterion: CriterionVerdict}

    def selected(self, criterion: str) -> list:
        return [c.label for c, v in zip(self.classes, self.verdicts) if v[criterion].passed]

    def to_dict(self) -> dict:
        from .io import encode

        rows = []
        for c, v in zip(self.classes, self.verdicts):
            row = {"label": c.label, "payoffs": [encode(p) for p in c.payoffs]}
            for name in CRITERIA:
                row[name] = {"pass": v[name].passed, "witness": _jsonable(v[name].witness)}
            rows.append(row)
        return {"game": self.game.name, "rows": rows,
                "selected": {name: self.selected(name) for name in CRITERIA}}

    def to_text(self) -> str:
        head = ["class", "payoffs"] + list(CRITERIA)
        body = []
        for c, v in zip(self.classes, self.verdicts):
            pay = "(" + ", ".join(fmt(p, 2) for p in c.payoffs) + ")"
            body.append([c.label, pay] + ["pass" if v[n].passed else "fail" for n in CRITERIA])
        widths = [max(len(r[i]) for r in [head] + body) for i in range(len(head))]
        lines = ["  ".join(x.ljust(w) for x, w in zip(r, widths)).rstrip() for r in [head] + body]
        lines.append("")
        for n in CRITERIA:
            sel = self.selected(n)
            lines.append(f"{n}: " + (", ".join(sel) if sel else "none"))
        return "\n".join(lines) + "\n"


def _jsonable(w):
    if w is None:
        return None
    from .io import encode

    return {k: (encode(v) if isinstance(v, Fraction) else v) for k, v in w.items()}


def comparison_table(game: Game, classes) -> Comparison:
    classes = list(classes)
    cache = PersuasionCache(game)
    most = {id(c) for c in cache.most_persuasive(classes)}
    least = {id(c) for c in cache.least_persuasive(classes)}
    comp = Comparison(game, classes)
    for c in classes:
        comp.verdicts.append({
            "intuitive": intuitive_criterion(game, c),
            "D1": d1_criterion(game, c),
            "G-P": gp_criterion(game, c),
            "undefeated": undefeated(game, c, classes),
            "persuasive-most": CriterionVerdict("persuasive-most", id(c) in most),
            "persuasive-least": CriterionVerdict("persuasive-least", id(c) in least),
        })
    return comp
