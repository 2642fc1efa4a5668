"""Finite signaling games.

A sender privately learns a type, sends a message, and a receiver responds.
Receivers either pick from a finite action set (``FiniteActions``) or choose a
real action equal to the posterior mean of the type value (``MeanAction``, the
competitive-wage receiver of job-market signaling).  All numbers are exact
``Fraction`` values; indices are used internally and labels at the edges.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence, Union

from ._exact import as_fraction, simplex_point


class GameError(ValueError):
    """Base class for malformed games or invalid queries.

    ``violations`` lists every problem found when several were detected at once.
    """

    def __init__(self, message: str, violations: Sequence[str] = ()):
        super().__init__(message)
        self.violations = list(violations) or [message]


class PriorNotDistribution(GameError):
    pass


class DuplicateLabel(GameError):
    pass


class MissingPayoffEntry(GameError):
    pass


class MeanActionMissingLevels(GameError):
    pass


class EmptySubset(GameError):
    pass


class TerminalMessage(GameError):
    pass


@dataclass(frozen=True)
class Message:
    label: str
    level: Fraction | None = None
    terminal: bool = False


@dataclass(frozen=True)
class RatioCost:
    """Signal cost ``level / type_value``."""

    kind = "ratio"

    def slope(self, game: "Game", t: int) -> Fraction:
        return 1 / game.type_values[t]


@dataclass(frozen=True)
class LinearCost:
    """Signal cost ``coefficients[t] * level``."""

    coefficients: tuple

    kind = "linear"

    def slope(self, game: "Game", t: int) -> Fraction:
        return self.coefficients[t]


Cost = Union[RatioCost, LinearCost]


@dataclass(frozen=True)
class FiniteActions:
    actions: tuple
    # receiver_payoff[t][m][a]; None rows for terminal messages
    receiver_payoff: tuple


@dataclass(frozen=True)
class MeanAction:
    pass


@dataclass(frozen=True, eq=False)
class Game:
    name: str
    type_labels: tuple
    type_values: tuple
    prior: tuple
    messages: tuple
    action_model: FiniteActions | MeanAction
    # sender_payoff[t][m][a] for finite actions, a Cost for mean actions
    sender_payoff: object
    # terminal[t][m] = (u_S, u_R) or None
    terminal: tuple = ()
    # continuous message interval the grid messages were drawn from, if any
    message_interval: tuple | None = None
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    @property
    def n_types(self) -> int:
        return len(self.type_labels)

    @property
    def n_messages(self) -> int:
        return len(self.messages)

    @property
    def is_mean(self) -> bool:
        return isinstance(self.action_model, MeanAction)

    @property
    def actions(self) -> tuple:
        return () if self.is_mean else self.action_model.actions

    def type_index(self, t) -> int:
        if isinstance(t, int):
            return t
        return self.type_labels.index(t)

    def message_index(self, m) -> int:
        if isinstance(m, int):
            return m
        for i, msg in enumerate(self.messages):
            if msg.label == m:
                return i
        if not isinstance(m, str):
            # mean-action grids may be addressed by level
            for i, msg in enumerate(self.messages):
                if msg.level is not None and msg.level == m:
                    return i
        raise KeyError(f"unknown message {m!r}")

    def action_index(self, a) -> int:
        if isinstance(a, int):
            return a
        return self.actions.index(a)

    def cost(self, t: int, level: Fraction) -> Fraction:
        return self.sender_payoff.slope(self, t) * level

    def lowest_type(self) -> int:
        return min(range(self.n_types), key=lambda t: (self.type_values[t], t))

    def value_range(self, types=None) -> tuple:
        vals = [self.type_values[t] for t in (range(self.n_types) if types is None else types)]
        return min(vals), max(vals)


def _fractions(xs):
    return tuple(as_fraction(x) for x in xs)


def finite_game(name, types, prior, messages, actions, sender, receiver,
                terminal=None, values=None) -> Game:
    """Build a finite-action game from labeled tables.

    ``sender`` and ``receiver`` map ``(type, message, action)`` label triples to
    payoffs; ``terminal`` maps ``(type, message)`` to ``(u_S, u_R)``.  Missing
    entries stay ``None`` so that ``validate_game`` can report them.
    """
    msgs = tuple(m if isinstance(m, Message) else Message(str(m)) for m in messages)
    terminal = terminal or {}
    tset = {m for (_, m) in terminal}
    msgs = tuple(Message(m.label, m.level, m.terminal or m.label in tset) for m in msgs)
    us, ur, term = [], [], []
    for t in types:
        rs, rr, rt = [], [], []
        for m in msgs:
            if m.terminal:
                rs.append(None)
                rr.append(None)
                v = terminal.get((t, m.label))
                rt.append(None if v is None else (as_fraction(v[0]), as_fraction(v[1])))
            else:
                rs.append(tuple(_opt(sender.get((t, m.label, a))) for a in actions))
                rr.append(tuple(_opt(receiver.get((t, m.label, a))) for a in actions))
                rt.append(None)
        us.append(tuple(rs))
        ur.append(tuple(rr))
        term.append(tuple(rt))
    vals = values if values is not None else range(1, len(types) + 1)
    return Game(name, tuple(types), _fractions(vals), _fractions(prior), msgs,
                FiniteActions(tuple(actions), tuple(ur)), tuple(us), tuple(term))


def mean_game(name, types, values, prior, messages, cost: Cost, terminal=None,
              message_interval=None) -> Game:
    """Build a mean-action game; ``messages`` is a list of Message or (label, level)."""
    msgs = []
    for m in messages:
        if isinstance(m, Message):
            msgs.append(Message(m.label, None if m.level is None else as_fraction(m.level), m.terminal))
        else:
            label, level = m
            msgs.append(Message(str(label), None if level is None else as_fraction(level)))
    terminal = terminal or {}
    tset = {m for (_, m) in terminal}
    msgs = [Message(m.label, m.level, m.terminal or m.label in tset) for m in msgs]
    term = tuple(
        tuple(None if not m.terminal or (t, m.label) not in terminal
              else tuple(map(as_fraction, terminal[(t, m.label)])) for m in msgs)
        for t in types)
    if isinstance(cost, LinearCost):
        cost = LinearCost(_fractions(cost.coefficients))
    interval = None if message_interval is None else _fractions(message_interval)
    return Game(name, tuple(types), _fractions(values), _fractions(prior), tuple(msgs),
                MeanAction(), cost, term, interval)


def _opt(v):
    return None if v is None else as_fraction(v)


def validate_game(game: Game) -> None:
    """Raise on the first category of violation, listing every violation found."""
    found: list[tuple[type, str]] = []
    if len(game.prior) != game.n_types:
        found.append((PriorNotDistribution, "prior length differs from number of types"))
    if any(p <= 0 for p in game.prior):
        found.append((PriorNotDistribution, "prior must give every type positive mass"))
    if sum(game.prior) != 1:
        found.append((PriorNotDistribution, f"prior sums to {sum(game.prior)}, not 1"))
    for kind, labels in (("type", game.type_labels), ("message", [m.label for m in game.messages]),
                         ("action", game.actions)):
        seen = set()
        for lab in labels:
            if lab in seen:
                found.append((DuplicateLabel, f"duplicate {kind} label {lab!r}"))
            seen.add(lab)
    if game.n_messages == 0:
        found.append((GameError, "game has no messages"))
    for t in range(game.n_types):
        for m, msg in enumerate(game.messages):
            where = f"({game.type_labels[t]}, {msg.label})"
            if msg.terminal:
                if not game.terminal or game.terminal[t][m] is None:
                    found.append((MissingPayoffEntry, f"terminal payoff missing for {where}"))
                continue
            if game.is_mean:
                continue
            for a, lab in enumerate(game.actions):
                if game.sender_payoff[t][m][a] is None:
                    found.append((MissingPayoffEntry, f"sender payoff missing for {where}, {lab}"))
                if game.action_model.receiver_payoff[t][m][a] is None:
                    found.append((MissingPayoffEntry, f"receiver payoff missing for {where}, {lab}"))
    if game.is_mean:
        for msg in game.messages:
            if not msg.terminal and msg.level is None:
                found.append((MeanActionMissingLevels, f"message {msg.label!r} has no numeric level"))
        if not isinstance(game.sender_payoff, (RatioCost, LinearCost)):
            found.append((GameError, "mean-action games need a quasi-linear cost"))
        elif isinstance(game.sender_payoff, RatioCost) and any(v <= 0 for v in game.type_values):
            found.append((GameError, "ratio cost needs positive type values"))
        elif isinstance(game.sender_payoff, LinearCost) and len(game.sender_payoff.coefficients) != game.n_types:
            found.append((GameError, "linear cost needs one coefficient per type"))
    elif not game.actions:
        found.append((GameError, "finite-action game has no actions"))
    if found:
        cls = found[0][0]
        raise cls(found[0][1], [msg for _, msg in found])


def posterior(game: Game, sender, m):
    """Bayes posterior after ``m`` under ``sender[t][m]``; None when ``m`` is off path."""
    m = game.message_index(m)
    mass = [game.prior[t] * sender[t][m] for t in range(game.n_types)]
    total = sum(mass)
    if total == 0:
        return None
    return tuple(x / total for x in mass)


def conditional_prior(game: Game, subset) -> tuple:
    """Prior restricted to ``subset`` and renormalized, as a full-length vector."""
    ks = {game.type_index(t) for t in subset}
    if not ks:
        raise EmptySubset("conditional prior of an empty set of types")
    total = sum(game.prior[t] for t in ks)
    return tuple(game.prior[t] / total if t in ks else Fraction(0) for t in range(game.n_types))


def mean_value(game: Game, belief) -> Fraction:
    return sum(b * v for b, v in zip(belief, game.type_values))


def receiver_utility(game: Game, m: int, a: int, belief) -> Fraction:
    table = game.action_model.receiver_payoff
    return sum(belief[t] * table[t][m][a] for t in range(game.n_types) if belief[t])


def best_responses(game: Game, m, belief):
    """Optimal receiver actions at ``m`` under ``belief``.

    Finite actions give the tuple of maximizing action indices (ties kept);
    mean actions give the posterior mean.
    """
    m = game.message_index(m)
    if game.messages[m].terminal:
        raise TerminalMessage(f"message {game.messages[m].label!r} ends the game")
    belief = tuple(as_fraction(b) for b in belief)
    if game.is_mean:
        return mean_value(game, belief)
    vals = [receiver_utility(game, m, a, belief) for a in range(len(game.actions))]
    best = max(vals)
    return tuple(a for a, v in enumerate(vals) if v == best)


def supporting_belief(game: Game, m: int, actions, restriction=None):
    """A belief on ``restriction`` making every action in ``actions`` optimal at ``m``.

    Returned as a full-length vector, or None when no such belief exists.
    """
    types = sorted(range(game.n_types) if restriction is None else {game.type_index(t) for t in restriction})
    key = ("support", m, tuple(actions), tuple(types))
    if key in game._cache:
        return game._cache[key]
    table = game.action_model.receiver_payoff
    acts = list(actions)
    a0 = acts[0]
    eqs, ineqs = [], []
    for a in acts[1:]:
        eqs.append(([table[t][m][a] - table[t][m][a0] for t in types], Fraction(0)))
    for b in range(len(game.actions)):
        if b not in acts:
            ineqs.append(([table[t][m][b] - table[t][m][a0] for t in types], Fraction(0)))
    x = simplex_point(len(types), ineqs, eqs)
    out = None
    if x is not None:
        full = [Fraction(0)] * game.n_types
        for t, v in zip(types, x):
            full[t] = v
        out = tuple(full)
    game._cache[key] = out
    return out


def br_over_all_beliefs(game: Game, m, restriction=None):
    """Actions optimal at ``m`` under some belief supported on ``restriction``.

    Mean actions give the closed interval ``(lo, hi)`` of type values instead.
    """
    m = game.message_index(m)
    if game.messages[m].terminal:
        raise TerminalMessage(f"message {game.messages[m].label!r} ends the game")
    types = sorted(range(game.n_types) if restriction is None else {game.type_index(t) for t in restriction})
    if not types:
        raise EmptySubset("no types to form beliefs over")
    if game.is_mean:
        return game.value_range(types)
    return tuple(a for a in range(len(game.actions)) if supporting_belief(game, m, [a], types) is not None)


def sender_payoff(game: Game, t, m, response=None) -> Fraction:
    """Sender payoff of type ``t`` sending ``m`` when the receiver plays ``response``.

    ``response`` is an action index, a probability vector over actions, or a
    real action for mean-action games; it is ignored for terminal messages.
    """
    t = game.type_index(t)
    m = game.message_index(m)
    msg = game.messages[m]
    if msg.terminal:
        return game.terminal[t][m][0]
    if game.is_mean:
        return as_fraction(response) - game.cost(t, msg.level)
    row = game.sender_payoff[t][m]
    if isinstance(response, int):
        return row[response]
    if isinstance(response, str):
        return row[game.action_index(response)]
    return sum(p * row[a] for a, p in enumerate(response) if p)


def level_payoff(game: Game, t: int, level: Fraction, wage: Fraction) -> Fraction:
    """Mean-action sender payoff at an arbitrary message level."""
    return wage - game.cost(t, level)


@dataclass(frozen=True)
class Profile:
    """Assessment: sender strategy, receiver strategy, beliefs and sender payoffs.

    ``sender[t][m]`` are probabilities.  ``receiver[m]`` is an action
    distribution (finite actions), a real action (mean actions) or None for
    terminal messages.  ``beliefs[m]`` is None when left unspecified off path.
    """

    sender: tuple
    receiver: tuple
    beliefs: tuple
    payoffs: tuple

    def on_path(self) -> tuple:
        k = len(self.receiver)
        return tuple(m for m in range(k) if any(row[m] for row in self.sender))

    def support(self, t: int) -> tuple:
        return tuple(m for m, p in enumerate(self.sender[t]) if p)

    def senders(self, m: int) -> tuple:
        return tuple(t for t, row in enumerate(self.sender) if row[m])


def expected_payoff(game: Game, sender, receiver, t: int) -> Fraction:
    return sum(p * sender_payoff(game, t, m, receiver[m]) for m, p in enumerate(sender[t]) if p)


def make_profile(game: Game, sender, receiver, beliefs=None) -> Profile:
    """Normalize numbers, fill on-path Bayes beliefs when absent, compute payoffs."""
    sender = tuple(tuple(as_fraction(p) for p in row) for row in sender)
    rec = []
    for m, r in enumerate(receiver):
        if game.messages[m].terminal or r is None:
            rec.append(None)
        elif game.is_mean:
            rec.append(as_fraction(r))
        elif isinstance(r, int):
            rec.append(tuple(Fraction(int(a == r)) for a in range(len(game.actions))))
        else:
            rec.append(tuple(as_fraction(p) for p in r))
    if beliefs is None:
        beliefs = [posterior(game, sender, m) for m in range(game.n_messages)]
    beliefs = tuple(None if b is None else tuple(as_fraction(x) for x in b) for b in beliefs)
    payoffs = tuple(expected_payoff(game, sender, rec, t) for t in range(game.n_types))
    return Profile(sender, tuple(rec), beliefs, payoffs)


def pure_sender(game: Game, assignment) -> tuple:
    """Sender strategy matrix from a type -> message index assignment."""
    k = game.n_messages
    return tuple(tuple(Fraction(int(j == m)) for j in range(k)) for m in assignment)
