"""Persuasiveness: comparing how an on-path message is read in two equilibria.

A challenger equilibrium is more persuasive than an incumbent when one of its
on-path messages triggers an unraveling: some sender of that message strictly
prefers the challenger, and the senders who prefer the incumbent can be
eliminated one at a time.  Each eliminated type must do at least as well in the
challenger as at any of its incumbent messages, once the receiver there has
stopped believing in the types already eliminated or in those that prefer the
challenger.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import networkx as nx

from ._exact import fmt
from .game import Game, GameError, best_responses, mean_value, sender_payoff


class MessageOffPathInChallenger(GameError):
    pass


def _prof(x):
    return x.profile if hasattr(x, "profile") else x


def _label(x, default="?"):
    return getattr(x, "label", default)


@dataclass(frozen=True)
class PreferenceSplit:
    message: int
    weakly_better: tuple   # senders with u(t, challenger) >= u(t, incumbent)
    worse: tuple           # senders with u(t, challenger) < u(t, incumbent)


@dataclass(frozen=True)
class StepCertificate:
    """Bound for one incumbent message of an eliminated type."""

    message: int
    belief: tuple | None     # restricted incumbent belief, None for terminal messages
    bound: Fraction          # best payoff the type could get at ``message``
    challenger_payoff: Fraction


@dataclass(frozen=True)
class Elimination:
    type: int
    certificates: tuple


@dataclass(frozen=True)
class PersuasionWitness:
    message: int
    strict_type: int
    weakly_better: tuple
    worse: tuple
    order: tuple            # Elimination records, highest rank first

    @property
    def trivial(self) -> bool:
        return not self.worse

    def elimination_order(self) -> tuple:
        return tuple(e.type for e in self.order)

    def describe(self, game: Game) -> str:
        t = game.type_labels
        head = f"{game.messages[self.message].label}: {t[self.strict_type]} strictly prefers the challenger"
        if self.trivial:
            return head + "; no sender prefers the incumbent"
        parts = []
        for e in self.order:
            for c in e.certificates:
                parts.append(f"{t[e.type]} at {game.messages[c.message].label}: "
                             f"{fmt(c.challenger_payoff, 2)} >= {fmt(c.bound, 2)}")
        return head + "; eliminate " + ", ".join(parts)


def preference_split(game: Game, challenger, incumbent, m) -> PreferenceSplit:
    ch, inc = _prof(challenger), _prof(incumbent)
    m = game.message_index(m)
    senders = ch.senders(m)
    if not senders:
        raise MessageOffPathInChallenger(f"{game.messages[m].label} is not sent in the challenger")
    better = tuple(t for t in senders if ch.payoffs[t] >= inc.payoffs[t])
    worse = tuple(t for t in senders if ch.payoffs[t] < inc.payoffs[t])
    return PreferenceSplit(m, better, worse)


def incumbent_bound(game: Game, incumbent, t: int, m: int, excluded):
    """Best payoff for ``t`` at incumbent message ``m`` once ``excluded`` types are ruled out.

    Returns ``(bound, belief)``.  The remaining support always contains ``t``
    itself, since ``t`` sends ``m`` in the incumbent.
    """
    inc = _prof(incumbent)
    if game.messages[m].terminal:
        return game.terminal[t][m][0], None
    mu = inc.beliefs[m]
    keep = [0 if s in excluded else mu[s] for s in range(game.n_types)]
    total = sum(keep)
    belief = tuple(x / total for x in keep)
    if game.is_mean:
        return sender_payoff(game, t, m, mean_value(game, belief)), belief
    return max(sender_payoff(game, t, m, a) for a in best_responses(game, m, belief)), belief


def _certify(game, ch, inc, t, eliminated, better):
    excluded = set(eliminated) | set(better)
    certs = []
    for m2 in inc.support(t):
        bound, belief = incumbent_bound(game, inc, t, m2, excluded)
        if ch.payoffs[t] < bound:
            return None
        certs.append(StepCertificate(m2, belief, bound, ch.payoffs[t]))
    return tuple(certs)


def unraveling_exists(game: Game, challenger, incumbent, m):
    """Witness that ``m`` triggers an unraveling of the incumbent, or None.

    Search runs over sets of already-eliminated types with memoized dead ends;
    candidates are tried in type order, so the returned order is the
    lexicographically smallest valid one.
    """
    ch, inc = _prof(challenger), _prof(incumbent)
    split = preference_split(game, ch, inc, m)
    strict = [t for t in split.weakly_better if ch.payoffs[t] > inc.payoffs[t]]
    if not strict:
        return None
    worse = split.worse
    dead = set()

    def go(done: frozenset, order: tuple):
        if len(done) == len(worse):
            return order
        if done in dead:
            return None
        for t in worse:
            if t in done:
                continue
            certs = _certify(game, ch, inc, t, done, split.weakly_better)
            if certs is None:
                continue
            found = go(done | {t}, order + (Elimination(t, certs),))
            if found is not None:
                return found
        dead.add(done)
        return None

    order = go(frozenset(), ())
    if order is None:
        return None
    return PersuasionWitness(split.message, strict[-1], split.weakly_better, worse, order)


def more_persuasive(game: Game, challenger, incumbent):
    """First witness over the challenger's on-path messages in game order, or None."""
    ch = _prof(challenger)
    for m in ch.on_path():
        w = unraveling_exists(game, ch, incumbent, m)
        if w is not None:
            return w
    return None


def _equivalent(a, b) -> bool:
    return _prof(a).payoffs == _prof(b).payoffs


class PersuasionCache:
    """Memoized pairwise comparisons over a fixed game."""

    def __init__(self, game: Game):
        self.game = game
        self._memo = {}

    def witness(self, challenger, incumbent):
        key = (id(challenger), id(incumbent))
        if key not in self._memo:
            self._memo[key] = (challenger, incumbent, more_persuasive(self.game, challenger, incumbent))
        return self._memo[key][2]

    def beats(self, a, b) -> bool:
        return self.witness(a, b) is not None

    def most_persuasive(self, classes) -> list:
        """Classes that beat, and are not beaten by, every non-equivalent class."""
        ranked = sorted(classes, key=lambda c: -sum(_prof(c).payoffs))
        out = []
        for c in classes:
            others = [d for d in ranked if not _equivalent(c, d)]
            if all(self.beats(c, d) and not self.beats(d, c) for d in others):
                out.append(c)
        return out

    def beats_all(self, classes) -> list:
        ranked = sorted(classes, key=lambda c: -sum(_prof(c).payoffs))
        return [c for c in classes
                if all(self.beats(c, d) for d in ranked if not _equivalent(c, d))]

    def least_persuasive(self, classes) -> list:
        ranked = sorted(classes, key=lambda c: sum(_prof(c).payoffs))
        return [c for c in classes
                if all(self.beats(d, c) for d in ranked if not _equivalent(c, d))]


@dataclass
class PersuasionDigraph:
    game: Game
    classes: list
    edges: dict = field(default_factory=dict)   # (i, j) -> witness, i more persuasive than j

    def _select(self, pred) -> list:
        return [c for i, c in enumerate(self.classes) if pred(i)]

    def _others(self, i):
        return [j for j in range(len(self.classes)) if not _equivalent(self.classes[i], self.classes[j])]

    @property
    def beats_all(self) -> list:
        """Classes with an out-edge to every non-equivalent class."""
        return self._select(lambda i: all((i, j) in self.edges for j in self._others(i)))

    @property
    def most_persuasive(self) -> list:
        """Classes that beat every non-equivalent class and are beaten by none."""
        return self._select(lambda i: all((i, j) in self.edges and (j, i) not in self.edges
                                          for j in self._others(i)))

    @property
    def least_persuasive(self) -> list:
        return self._select(lambda i: all((j, i) in self.edges for j in self._others(i)))

    def cycles(self) -> list:
        g = nx.DiGraph()
        g.add_nodes_from(range(len(self.classes)))
        g.add_edges_from(self.edges)
        comps = [sorted(c) for c in nx.strongly_connected_components(g) if len(c) > 1]
        return sorted(comps)

    def to_dot(self) -> str:
        game = self.game
        lines = [f'digraph "{_esc(game.name)}" {{', "  rankdir=LR;", "  node [shape=box];"]
        for i, c in enumerate(self.classes):
            pay = ", ".join(fmt(v, 2) for v in _prof(c).payoffs)
            lines.append(f'  n{i} [label="{_esc(_label(c))}\\n({pay})"];')
        for (i, j) in sorted(self.edges):
            w = self.edges[(i, j)]
            msg = game.messages[w.message].label
            order = ",".join(game.type_labels[t] for t in w.elimination_order())
            lab = msg if not order else f"{msg} [{order}]"
            lines.append(f'  n{i} -> n{j} [label="{_esc(lab)}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"

    def to_dict(self) -> dict:
        from .io import encode

        game = self.game
        tl = game.type_labels
        edges = []
        for (i, j) in sorted(self.edges):
            w = self.edges[(i, j)]
            edges.append({
                "from": _label(self.classes[i]),
                "to": _label(self.classes[j]),
                "message": game.messages[w.message].label,
                "strict_type": tl[w.strict_type],
                "weakly_better": [tl[t] for t in w.weakly_better],
                "worse": [tl[t] for t in w.worse],
                "elimination": [
                    {"type": tl[e.type],
                     "steps": [{"message": game.messages[c.message].label,
                                "belief": None if c.belief is None else {tl[s]: encode(p) for s, p in enumerate(c.belief) if p},
                                "bound": encode(c.bound),
                                "challenger_payoff": encode(c.challenger_payoff)} for c in e.certificates]}
                    for e in w.order],
            })
        return {
            "game": game.name,
            "classes": [{"label": _label(c), "payoffs": [encode(v) for v in _prof(c).payoffs]} for c in self.classes],
            "edges": edges,
            "most_persuasive": [_label(c) for c in self.most_persuasive],
            "beats_all": [_label(c) for c in self.beats_all],
            "least_persuasive": [_label(c) for c in self.least_persuasive],
            "cycles": [[_label(self.classes[i]) for i in comp] for comp in self.cycles()],
        }


def _esc(s: str) -> str:
    return s.replace("\\", "\\\\").replace('"', '\\"')


def persuasion_digraph(game: Game, classes) -> PersuasionDigraph:
    """Test every ordered pair of non-equivalent classes."""
    classes = list(classes)
    edges = {}
    for i, a in enumerate(classes):
        for j, b in enumerate(classes):
            if i == j or _equivalent(a, b):
                continue
            w = more_persuasive(game, a, b)
            if w is not None:
                edges[(i, j)] = w
    return PersuasionDigraph(game, classes, edges)
