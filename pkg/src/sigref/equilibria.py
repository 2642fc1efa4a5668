"""Sequential equilibria: verification and exhaustive enumeration."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, product

from ._exact import UNIQUE, fmt, simplex_point, solve_linear
from .game import (
    Game,
    GameError,
    LinearCost,
    Profile,
    RatioCost,
    best_responses,
    br_over_all_beliefs,
    make_profile,
    mean_value,
    posterior,
    pure_sender,
    sender_payoff,
    supporting_belief,
)

log = logging.getLogger(__name__)


class GridRequired(GameError):
    pass


class SupportBoundExceeded(GameError):
    pass


MAX_SUPPORT = 3


@dataclass(frozen=True)
class EquilibriumClass:
    """One equilibrium outcome; off-path responses are a representative deterrent."""

    label: str
    profile: Profile

    @property
    def payoffs(self) -> tuple:
        return self.profile.payoffs

    @property
    def sender(self) -> tuple:
        return self.profile.sender

    def on_path(self) -> tuple:
        return self.profile.on_path()

    def outcome_key(self) -> tuple:
        p = self.profile
        on = p.on_path()
        return (p.sender, tuple(p.receiver[m] for m in on), p.payoffs)


@dataclass
class EquilibriumCheck:
    ok: bool
    violations: list

    def __bool__(self) -> bool:
        return self.ok


def payoff_equivalent(a, b) -> bool:
    pa = a.payoffs if hasattr(a, "payoffs") else a
    pb = b.payoffs if hasattr(b, "payoffs") else b
    return len(pa) == len(pb) and all(x == y for x, y in zip(pa, pb))


def _is_distribution(v) -> bool:
    return all(x >= 0 for x in v) and sum(v) == 1


def is_sequential_equilibrium(game: Game, profile: Profile) -> EquilibriumCheck:
    """Check sender optimality, receiver optimality and on-path Bayes consistency."""
    bad = []
    T, M = game.n_types, game.n_messages
    for t in range(T):
        if not _is_distribution(profile.sender[t]):
            bad.append(f"sender strategy of {game.type_labels[t]} is not a distribution")
    if bad:
        return EquilibriumCheck(False, bad)
    for m in range(M):
        msg = game.messages[m]
        r = profile.receiver[m]
        b = profile.beliefs[m] if profile.beliefs else None
        post = posterior(game, profile.sender, m)
        if post is not None and b != post:
            bad.append(f"belief at {msg.label} is not the Bayes posterior")
            b = post
        if msg.terminal:
            continue
        if r is None:
            bad.append(f"no receiver response at {msg.label}")
            continue
        if game.is_mean:
            if b is not None:
                if r != mean_value(game, b):
                    bad.append(f"action at {msg.label} is not the posterior mean")
            else:
                lo, hi = game.value_range()
                if not lo <= r <= hi:
                    bad.append(f"action at {msg.label} is not optimal for any belief")
            continue
        if not _is_distribution(r):
            bad.append(f"receiver response at {msg.label} is not a distribution")
            continue
        supp = [a for a, p in enumerate(r) if p > 0]
        if b is not None:
            brs = best_responses(game, m, b)
            if not set(supp) <= set(brs):
                bad.append(f"receiver at {msg.label} plays a non-best response")
        elif supporting_belief(game, m, supp) is None:
            bad.append(f"receiver response at {msg.label} is optimal for no belief")
    if bad:
        return EquilibriumCheck(False, bad)
    for t in range(T):
        vals = [sender_payoff(game, t, m, profile.receiver[m]) for m in range(M)]
        best = max(vals)
        for m in profile.support(t):
            if vals[m] < best:
                bad.append(f"{game.type_labels[t]} gains by deviating from {game.messages[m].label}")
    return EquilibriumCheck(not bad, bad)


def find_deterrent(game: Game, m: int, payoffs):
    """Receiver response at off-path ``m`` that keeps every type at or below ``payoffs``.

    Returns ``(response, belief)`` or None.  Finite-action candidates are tried
    in order: pure actions optimal for some belief, uniform mixtures over sets
    of actions jointly optimal for some belief, then any such mixture found by
    vertex enumeration.  Mean actions use a point mass on the lowest type.
    """
    T = game.n_types
    if game.messages[m].terminal:
        ok = all(game.terminal[t][m][0] <= payoffs[t] for t in range(T))
        return (None, None) if ok else None
    if game.is_mean:
        low = game.lowest_type()
        wage = game.type_values[low]
        if all(sender_payoff(game, t, m, wage) <= payoffs[t] for t in range(T)):
            belief = tuple(Fraction(int(t == low)) for t in range(T))
            return wage, belief
        return None
    A = len(game.actions)
    rows = game.sender_payoff
    for a in br_over_all_beliefs(game, m):
        if all(rows[t][m][a] <= payoffs[t] for t in range(T)):
            return _pure(a, A), supporting_belief(game, m, [a])
    joint = []
    for size in range(2, A + 1):
        for subset in combinations(range(A), size):
            belief = supporting_belief(game, m, subset)
            if belief is not None:
                joint.append((subset, belief))
    for subset, belief in joint:
        w = Fraction(1, len(subset))
        if all(sum(w * rows[t][m][a] for a in subset) <= payoffs[t] for t in range(T)):
            return tuple(w if a in subset else Fraction(0) for a in range(A)), belief
    for subset, belief in joint:
        ineqs = [([rows[t][m][a] for a in subset], payoffs[t]) for t in range(T)]
        y = simplex_point(len(subset), ineqs)
        if y is not None:
            full = [Fraction(0)] * A
            for a, v in zip(subset, y):
                full[a] = v
            return tuple(full), belief
    return None


def _pure(a: int, A: int) -> tuple:
    return tuple(Fraction(int(b == a)) for b in range(A))


def label_for(game: Game, profile: Profile) -> str:
    T = game.n_types
    supports = [profile.support(t) for t in range(T)]
    pure = all(len(s) == 1 for s in supports)
    if pure:
        ms = [s[0] for s in supports]
        names = [game.messages[m].label for m in ms]
        if len(set(ms)) == 1:
            return f"pooling@{names[0]}"
        if len(set(ms)) == T:
            return "separating[" + ",".join(names) + "]"
        return "[" + ",".join(names) + "]"
    parts = []
    for t in range(T):
        supp = supports[t]
        if len(supp) == 1:
            parts.append(game.messages[supp[0]].label)
        else:
            parts.append("+".join(f"{fmt(profile.sender[t][m])}*{game.messages[m].label}" for m in supp))
    return "mixed[" + ",".join(parts) + "]"


def _collect(game: Game, profiles) -> list:
    seen = set()
    out = []
    counts: dict = {}
    for prof in profiles:
        cls = EquilibriumClass("", prof)
        key = cls.outcome_key()
        if key in seen:
            continue
        seen.add(key)
        lab = label_for(game, prof)
        counts[lab] = counts.get(lab, 0) + 1
        if counts[lab] > 1:
            lab = f"{lab}#{counts[lab]}"
        out.append(EquilibriumClass(lab, prof))
    return out


def _as_game(game_or_spec, grid):
    if isinstance(game_or_spec, Game):
        return game_or_spec
    if hasattr(game_or_spec, "to_game"):
        if grid is None:
            raise GridRequired("a continuous message space needs an explicit message grid")
        return game_or_spec.to_game(grid)
    raise TypeError(f"expected a Game, got {type(game_or_spec).__name__}")


def single_crossing_order(game: Game):
    """Types ordered by value when the mean-action cost has the single-crossing property.

    Returns None if the game is not a mean-action game with strictly
    decreasing marginal signal cost in the type value.
    """
    if not game.is_mean or any(m.terminal for m in game.messages):
        return None
    order = sorted(range(game.n_types), key=lambda t: game.type_values[t])
    vals = [game.type_values[t] for t in order]
    if any(a >= b for a, b in zip(vals, vals[1:])):
        return None
    slopes = [game.sender_payoff.slope(game, t) for t in order]
    if any(s <= 0 for s in slopes) or any(a <= b for a, b in zip(slopes, slopes[1:])):
        return None
    return order


def enumerate_pure_equilibria(game_or_spec, grid=None, *, monotone=None) -> list:
    """All pure-sender equilibrium classes, in a deterministic order.

    Mean-action games with single-crossing costs are searched over monotone
    assignments only (``monotone=False`` forces the exhaustive product).
    """
    game = _as_game(game_or_spec, grid)
    if game.is_mean:
        order = single_crossing_order(game)
        if monotone is None:
            monotone = order is not None
        if monotone:
            if order is None:
                raise GameError("monotone search needs a single-crossing mean-action game")
            return _collect(game, _mean_monotone(game, order))
        return _collect(game, _mean_product(game))
    return _collect(game, _finite_product(game))


def _finite_product(game: Game):
    T, M = game.n_types, game.n_messages
    for assignment in product(range(M), repeat=T):
        sender = pure_sender(game, assignment)
        on = sorted(set(assignment))
        beliefs = {m: posterior(game, sender, m) for m in on}
        live = [m for m in on if not game.messages[m].terminal]
        options = [best_responses(game, m, beliefs[m]) for m in live]
        for choice in product(*options):
            resp = dict(zip(live, choice))
            pay = [sender_payoff(game, t, assignment[t], resp.get(assignment[t])) for t in range(T)]
            if any(sender_payoff(game, t, m, resp.get(m)) > pay[t] for t in range(T) for m in on):
                continue
            receiver = [None] * M
            full_beliefs = [None] * M
            for m in on:
                full_beliefs[m] = beliefs[m]
                if m in resp:
                    receiver[m] = resp[m]
            ok = True
            for m in range(M):
                if m in beliefs:
                    continue
                found = find_deterrent(game, m, pay)
                if found is None:
                    ok = False
                    break
                receiver[m], full_beliefs[m] = found
            if ok:
                yield make_profile(game, sender, receiver, full_beliefs)


def _mean_finish(game: Game, assignment):
    """Profile for a pure mean-action assignment, or None if it is not an equilibrium."""
    T, M = game.n_types, game.n_messages
    sender = pure_sender(game, assignment)
    receiver = [None] * M
    beliefs = [None] * M
    for m in set(assignment):
        beliefs[m] = posterior(game, sender, m)
        if not game.messages[m].terminal:
            receiver[m] = mean_value(game, beliefs[m])
    pay = [sender_payoff(game, t, assignment[t], receiver[assignment[t]]) for t in range(T)]
    for m in range(M):
        if beliefs[m] is not None:
            if any(sender_payoff(game, t, m, receiver[m]) > pay[t] for t in range(T)):
                return None
        else:
            found = find_deterrent(game, m, pay)
            if found is None:
                return None
            receiver[m], beliefs[m] = found
    return make_profile(game, sender, receiver, beliefs)


def _mean_product(game: Game):
    for assignment in product(range(game.n_messages), repeat=game.n_types):
        prof = _mean_finish(game, assignment)
        if prof is not None:
            yield prof


def _mean_monotone(game: Game, order):
    """Depth-first search over nondecreasing assignments with pool-level pruning."""
    T = game.n_types
    pos = sorted(range(game.n_messages), key=lambda m: (game.messages[m].level, m))
    levels = [game.messages[m].level for m in pos]
    vals = [game.type_values[t] for t in order]
    pri = [game.prior[t] for t in order]
    slope = [game.sender_payoff.slope(game, t) for t in order]
    low_wage = min(vals)

    def close_ok(pools, upto):
        # pools: list of (start, end, position, wage); check IC and off-path below `upto`
        used = {p[2] for p in pools}
        off = next((i for i in range(upto) if i not in used), None)
        for (s, e, q, w) in pools:
            for k in range(s, e):
                u = w - slope[k] * levels[q]
                for (_, _, q2, w2) in pools:
                    if w2 - slope[k] * levels[q2] > u:
                        return False
                if off is not None and low_wage - slope[k] * levels[off] > u:
                    return False
        return True

    def rec(i, start, cur, pools):
        # types [start, i) pool at position `cur`
        if i == T:
            mass = sum(pri[start:T])
            w = sum(p * v for p, v in zip(pri[start:T], vals[start:T])) / mass
            final = pools + [(start, T, cur, w)]
            if not close_ok(final, len(pos)):
                return
            yield _monotone_profile(game, order, pos, final, levels, slope)
            return
        yield from rec(i + 1, start, cur, pools)
        mass = sum(pri[start:i])
        w = sum(p * v for p, v in zip(pri[start:i], vals[start:i])) / mass
        closed = pools + [(start, i, cur, w)]
        for nxt in range(cur + 1, len(pos)):
            if close_ok(closed, nxt):
                yield from rec(i + 1, i, nxt, closed)

    for first in range(len(pos)):
        yield from rec(1, 0, first, [])


def _monotone_profile(game: Game, order, pos, pools, levels, slope) -> Profile:
    """Profile for a verified monotone pooling structure, built without re-checking."""
    T, M = game.n_types, game.n_messages
    low = game.lowest_type()
    point = tuple(Fraction(int(t == low)) for t in range(T))
    zero = Fraction(0)
    one = Fraction(1)
    rows = [[zero] * M for _ in range(T)]
    receiver = [game.type_values[low]] * M
    beliefs = [point] * M
    payoffs = [None] * T
    for (s, e, q, w) in pools:
        m = pos[q]
        receiver[m] = w
        mass = sum(game.prior[order[k]] for k in range(s, e))
        b = [zero] * T
        for k in range(s, e):
            t = order[k]
            rows[t][m] = one
            b[t] = game.prior[t] / mass
            payoffs[t] = w - slope[k] * levels[q]
        beliefs[m] = tuple(b)
    return Profile(tuple(map(tuple, rows)), tuple(receiver), tuple(beliefs), tuple(payoffs))


def enumerate_mixed_equilibria(game: Game, max_support: int = 2) -> list:
    """Pure classes plus mixed ones found by support enumeration (supports up to ``max_support``).

    Supports are balanced as in nondegenerate support enumeration; a support
    whose indifference system has a continuum of solutions is skipped, so
    only its pure members are reported.
    """
    if max_support > MAX_SUPPORT:
        raise SupportBoundExceeded(f"support size {max_support} exceeds {MAX_SUPPORT}")
    if max_support < 1:
        raise SupportBoundExceeded("support size must be at least 1")
    pure = [c.profile for c in enumerate_pure_equilibria(game, monotone=False)]
    mixed = _mean_mixed(game, max_support) if game.is_mean else _finite_mixed(game, max_support)
    return _collect(game, pure + list(mixed))


def _subsets(n: int, k: int):
    for size in range(1, k + 1):
        yield from combinations(range(n), size)


def _finite_mixed(game: Game, k: int):
    T, M, A = game.n_types, game.n_messages, len(game.actions)
    us = game.sender_payoff
    ur = game.action_model.receiver_payoff
    for supports in product(list(_subsets(M, k)), repeat=T):
        extra = sum(len(s) - 1 for s in supports)
        if extra == 0:
            continue
        on = sorted({m for s in supports for m in s})
        live = [m for m in on if not game.messages[m].terminal]
        for recv in product(*[list(_subsets(A, k)) for _ in live]):
            if sum(len(b) - 1 for b in recv) != extra:
                continue
            B = dict(zip(live, recv))
            # receiver mixing from sender indifference
            yidx = {(m, a): i for i, (m, a) in enumerate((m, a) for m in live for a in B[m])}
            ny = len(yidx)

            def payoff_row(t, m):
                row = [Fraction(0)] * ny
                if game.messages[m].terminal:
                    return row, game.terminal[t][m][0]
                for a in B[m]:
                    row[yidx[(m, a)]] = us[t][m][a]
                return row, Fraction(0)

            rows, rhs = [], []
            for m in live:
                rows.append([Fraction(int(key[0] == m)) for key in yidx])
                rhs.append(Fraction(1))
            for t, s in enumerate(supports):
                for m1, m2 in zip(s, s[1:]):
                    r1, c1 = payoff_row(t, m1)
                    r2, c2 = payoff_row(t, m2)
                    rows.append([x - y for x, y in zip(r1, r2)])
                    rhs.append(c2 - c1)
            status, y = solve_linear(rows, rhs, ny)
            if status != UNIQUE or any(v <= 0 for v in y):
                continue
            # sender mixing from receiver indifference
            xidx = {(t, m): i for i, (t, m) in enumerate((t, m) for t, s in enumerate(supports) for m in s)}
            nx = len(xidx)
            rows, rhs = [], []
            for t in range(T):
                rows.append([Fraction(int(key[0] == t)) for key in xidx])
                rhs.append(Fraction(1))
            for m in live:
                for a1, a2 in zip(B[m], B[m][1:]):
                    row = [Fraction(0)] * nx
                    for (t, mm), i in xidx.items():
                        if mm == m:
                            row[i] = game.prior[t] * (ur[t][m][a1] - ur[t][m][a2])
                    rows.append(row)
                    rhs.append(Fraction(0))
            status, x = solve_linear(rows, rhs, nx)
            if status != UNIQUE or any(v <= 0 for v in x):
                continue
            sender = [[Fraction(0)] * M for _ in range(T)]
            for (t, m), i in xidx.items():
                sender[t][m] = x[i]
            receiver = [None] * M
            for m in live:
                receiver[m] = tuple(y[yidx[(m, a)]] if a in B[m] else Fraction(0) for a in range(A))
            prof = _complete(game, sender, receiver)
            if prof is not None:
                yield prof


def _complete(game: Game, sender, receiver):
    """Check on-path optimality, fill off-path deterrents, return the profile or None."""
    T, M = game.n_types, game.n_messages
    beliefs = [posterior(game, sender, m) for m in range(M)]
    for m in range(M):
        if beliefs[m] is None or game.messages[m].terminal:
            continue
        if game.is_mean:
            if receiver[m] != mean_value(game, beliefs[m]):
                return None
        else:
            brs = set(best_responses(game, m, beliefs[m]))
            if not {a for a, p in enumerate(receiver[m]) if p > 0} <= brs:
                return None
    receiver = list(receiver)
    pay = []
    for t in range(T):
        vals = {m: sender_payoff(game, t, m, receiver[m]) for m in range(M) if beliefs[m] is not None}
        supp = [m for m in range(M) if sender[t][m] > 0]
        u = vals[supp[0]]
        if any(vals[m] != u for m in supp) or any(v > u for v in vals.values()):
            return None
        pay.append(u)
    for m in range(M):
        if beliefs[m] is None:
            found = find_deterrent(game, m, pay)
            if found is None:
                return None
            receiver[m], beliefs[m] = found
    return make_profile(game, sender, receiver, beliefs)


def _mean_mixed(game: Game, k: int):
    T, M = game.n_types, game.n_messages
    vals = game.type_values
    for supports in product(list(_subsets(M, k)), repeat=T):
        if all(len(s) == 1 for s in supports):
            continue
        on = sorted({m for s in supports for m in s})
        live = [m for m in on if not game.messages[m].terminal]
        senders = {m: [t for t, s in enumerate(supports) if m in s] for m in on}
        known = {}
        for m in live:
            ts = senders[m]
            if len(ts) == 1:
                known[m] = vals[ts[0]]
            elif all(len(supports[t]) == 1 for t in ts):
                mass = sum(game.prior[t] for t in ts)
                known[m] = sum(game.prior[t] * vals[t] for t in ts) / mass
        unknown = [m for m in live if m not in known]
        widx = {m: i for i, m in enumerate(unknown)}

        def side(t, m):
            # payoff of t at m as (coefficients on unknown wages, constant)
            row = [Fraction(0)] * len(unknown)
            if game.messages[m].terminal:
                return row, game.terminal[t][m][0]
            c = -game.cost(t, game.messages[m].level)
            if m in widx:
                row[widx[m]] = Fraction(1)
                return row, c
            return row, c + known[m]

        rows, rhs = [], []
        for t, s in enumerate(supports):
            for m1, m2 in zip(s, s[1:]):
                r1, c1 = side(t, m1)
                r2, c2 = side(t, m2)
                rows.append([a - b for a, b in zip(r1, r2)])
                rhs.append(c2 - c1)
        if unknown or rows:
            status, w = solve_linear(rows, rhs, len(unknown))
            if status != UNIQUE:
                continue
        else:
            w = ()
        wage = dict(known)
        wage.update({m: w[i] for m, i in widx.items()})
        mixers = [t for t, s in enumerate(supports) if len(s) > 1]
        xidx = {(t, m): i for i, (t, m) in enumerate((t, m) for t in mixers for m in supports[t])}
        nx = len(xidx)
        rows, rhs = [], []
        for t in mixers:
            rows.append([Fraction(int(key[0] == t)) for key in xidx])
            rhs.append(Fraction(1))
        for m in live:
            row = [Fraction(0)] * nx
            const = Fraction(0)
            for t in senders[m]:
                coef = game.prior[t] * (vals[t] - wage[m])
                if (t, m) in xidx:
                    row[xidx[(t, m)]] += coef
                else:
                    const += coef
            if any(row):
                rows.append(row)
                rhs.append(-const)
            elif const != 0:
                rows = None
                break
        if rows is None:
            continue
        status, x = solve_linear(rows, rhs, nx)
        if status != UNIQUE or any(v <= 0 for v in x):
            continue
        sender = [[Fraction(0)] * M for _ in range(T)]
        for t, s in enumerate(supports):
            if len(s) == 1:
                sender[t][s[0]] = Fraction(1)
        for (t, m), i in xidx.items():
            sender[t][m] = x[i]
        receiver = [wage.get(m) for m in range(M)]
        prof = _complete(game, sender, receiver)
        if prof is not None:
            yield prof
