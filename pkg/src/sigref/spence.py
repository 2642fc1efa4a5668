"""Monotone (job-market style) signaling games with quasi-linear costs.

A ``SpenceSpec`` has ordered type values, a prior, a signal cost that is
linear in the message level, and message bounds.  The receiver pays the
posterior mean.  This module computes the Riley and lex-max outcomes in closed
form, builds message grids on which equilibria can be enumerated exactly, and
checks that the lex-max outcome is the unique most persuasive one on a grid.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product

from ._exact import as_fraction, fmt
from .game import Game, GameError, LinearCost, RatioCost, mean_game


class InfeasibleBounds(GameError):
    pass


class LengthMismatch(GameError):
    pass


class IndexOutOfRange(GameError):
    pass


class SpecError(GameError):
    pass


DEFAULT_STEP = Fraction(1, 20)


@dataclass(frozen=True)
class SpenceSpec:
    name: str
    type_labels: tuple
    values: tuple
    prior: tuple
    cost: RatioCost | LinearCost
    bounds: tuple

    @property
    def n(self) -> int:
        return len(self.values)

    def slope(self, t: int) -> Fraction:
        if isinstance(self.cost, RatioCost):
            return 1 / self.values[t]
        return self.cost.coefficients[t]

    def payoff(self, t: int, m: Fraction, wage: Fraction) -> Fraction:
        return wage - self.slope(t) * m

    def pool_mean(self, types) -> Fraction:
        mass = sum(self.prior[t] for t in types)
        return sum(self.prior[t] * self.values[t] for t in types) / mass

    def to_game(self, grid) -> Game:
        levels = sorted({as_fraction(x) for x in grid})
        lo, hi = self.bounds
        if not levels or levels[0] < lo or levels[-1] > hi:
            raise SpecError("grid must be non-empty and lie within the message bounds")
        msgs = [(fmt(m), m) for m in levels]
        return mean_game(self.name, self.type_labels, self.values, self.prior, msgs, self.cost,
                         message_interval=self.bounds)


def default_upper_bound(values, slopes, m_low) -> Fraction:
    """Smallest integer at least 10% above the least message satisfying the high-cost condition."""
    need = max(((values[-1] - values[0]) + s * m_low) / s for s in slopes[:-1]) if len(values) > 1 else m_low
    return Fraction(max(math.ceil(Fraction(11, 10) * need), math.floor(m_low) + 1))


def spence_spec(values, prior, cost=None, bounds=None, labels=None, name="spence") -> SpenceSpec:
    """Validated spec; ``bounds`` defaults to ``(0, default_upper_bound)``."""
    values = tuple(as_fraction(v) for v in values)
    prior = tuple(as_fraction(p) for p in prior)
    cost = cost or RatioCost()
    if isinstance(cost, LinearCost):
        cost = LinearCost(tuple(as_fraction(c) for c in cost.coefficients))
    labels = tuple(labels) if labels else tuple(f"t{i + 1}" for i in range(len(values)))
    probe = SpenceSpec(name, labels, values, prior, cost, (Fraction(0), Fraction(0)))
    slopes = [probe.slope(t) for t in range(len(values))] if _shape_ok(values, cost) else []
    if bounds is None:
        m_low = Fraction(0)
        m_high = default_upper_bound(values, slopes, m_low) if slopes else Fraction(1)
    else:
        m_low, m_high = (as_fraction(b) for b in bounds)
    spec = SpenceSpec(name, labels, values, prior, cost, (m_low, m_high))
    validate_spec(spec)
    return spec


def _shape_ok(values, cost) -> bool:
    if not values or any(v <= 0 for v in values):
        return False
    if isinstance(cost, LinearCost):
        return len(cost.coefficients) == len(values) and all(c > 0 for c in cost.coefficients)
    return True


def validate_spec(spec: SpenceSpec) -> None:
    bad = []
    n = spec.n
    if n == 0:
        bad.append("no types")
    if len(spec.prior) != n or any(p <= 0 for p in spec.prior) or sum(spec.prior) != 1:
        bad.append("prior must be a full-support distribution over the types")
    if len(set(spec.type_labels)) != n:
        bad.append("duplicate type labels")
    if any(v <= 0 for v in spec.values):
        bad.append("type values must be positive")
    if any(a >= b for a, b in zip(spec.values, spec.values[1:])):
        bad.append("type values must be strictly increasing")
    if isinstance(spec.cost, LinearCost) and len(spec.cost.coefficients) != n:
        bad.append("linear cost needs one coefficient per type")
    lo, hi = spec.bounds
    if lo < 0 or hi <= lo:
        bad.append("bounds must satisfy 0 <= m_l < m_h")
    if not bad:
        slopes = [spec.slope(t) for t in range(n)]
        if any(s <= 0 for s in slopes):
            bad.append("signal cost must increase in the message")
        # single crossing: cost of moving m -> m' strictly decreases in the type
        for a, b in zip(slopes, slopes[1:]):
            if not a > b:
                bad.append("single crossing fails: marginal cost must fall with the type")
                break
        for t in range(n - 1):
            if not spec.payoff(t, hi, spec.values[-1]) < spec.payoff(t, lo, spec.values[0]):
                bad.append(f"upper bound {fmt(hi)} is not costly enough for type {spec.type_labels[t]}")
    if bad:
        raise SpecError(bad[0], bad)


def spence_from_dict(data: dict, path: str = "$") -> SpenceSpec:
    from .io import SchemaError, _cost, _list, _need, _num, _prior, _types

    labels, values = _types(_need(data, "types", path), f"{path}.types")
    prior = _prior(_need(data, "prior", path), f"{path}.prior", len(values))
    cost = _cost(_need(data, "cost", path), f"{path}.cost", len(values))
    bounds = data.get("bounds")
    if bounds is not None:
        bounds = _list(bounds, f"{path}.bounds")
        if len(bounds) != 2:
            raise SchemaError(f"{path}.bounds", "expected [m_l, m_h]")
        bounds = [_num(b, f"{path}.bounds[{i}]") for i, b in enumerate(bounds)]
    return spence_spec(values, prior, cost, bounds, labels, str(data.get("name", "spence")))


def spence_to_dict(spec: SpenceSpec) -> dict:
    from .io import encode

    cost = {"kind": spec.cost.kind}
    if isinstance(spec.cost, LinearCost):
        cost["coefficients"] = [encode(c) for c in spec.cost.coefficients]
    return {
        "name": spec.name,
        "types": [{"label": l, "value": encode(v)} for l, v in zip(spec.type_labels, spec.values)],
        "prior": [encode(p) for p in spec.prior],
        "cost": cost,
        "bounds": [encode(b) for b in spec.bounds],
    }


@dataclass(frozen=True)
class Outcome:
    """Pure outcome: message, wage and payoff per type, plus the pooling partition."""

    messages: tuple
    actions: tuple
    payoffs: tuple
    partition: tuple = field(default=())

    def to_dict(self, spec: SpenceSpec) -> dict:
        from .io import encode

        return {
            "types": list(spec.type_labels),
            "messages": [encode(m) for m in self.messages],
            "actions": [encode(a) for a in self.actions],
            "payoffs": [encode(u) for u in self.payoffs],
            "partition": [[spec.type_labels[t] for t in pool] for pool in self.partition],
        }


def riley_outcome(spec: SpenceSpec) -> Outcome:
    """Least-cost fully separating outcome, built by binding each downward constraint."""
    lo, hi = spec.bounds
    msgs = [lo]
    pays = [spec.payoff(0, lo, spec.values[0])]
    for k in range(1, spec.n):
        m = (spec.values[k] - pays[k - 1]) / spec.slope(k - 1)
        if m > hi:
            raise InfeasibleBounds(f"separating {spec.type_labels[k]} needs message {fmt(m)} above {fmt(hi)}")
        msgs.append(m)
        pays.append(spec.payoff(k, m, spec.values[k]))
    return Outcome(tuple(msgs), spec.values, tuple(pays), tuple((t,) for t in range(spec.n)))


def consecutive_partitions(n: int):
    for cuts in product((False, True), repeat=max(n - 1, 0)):
        pools, cur = [], [0]
        for t in range(1, n):
            if cuts[t - 1]:
                pools.append(tuple(cur))
                cur = []
            cur.append(t)
        pools.append(tuple(cur))
        yield tuple(pools)


def minimal_pool_messages(spec: SpenceSpec, partition):
    """Smallest messages keeping every lower type from mimicking the next pool.

    Returns ``(messages, wages)`` per pool; messages may exceed the upper bound.
    """
    lo = spec.bounds[0]
    msgs, wages, lower = [], [], []
    pays = {}
    for j, pool in enumerate(partition):
        w = spec.pool_mean(pool)
        if j == 0:
            m = lo
        else:
            m = max((w - pays[t]) / spec.slope(t) for t in lower)
            m = max(m, lo)
        msgs.append(m)
        wages.append(w)
        for t in pool:
            pays[t] = spec.payoff(t, m, w)
            lower.append(t)
    return msgs, wages


def _pooled_outcome(spec, partition, msgs, wages) -> Outcome:
    m_of, w_of = [None] * spec.n, [None] * spec.n
    for pool, m, w in zip(partition, msgs, wages):
        for t in pool:
            m_of[t], w_of[t] = m, w
    pays = tuple(spec.payoff(t, m_of[t], w_of[t]) for t in range(spec.n))
    return Outcome(tuple(m_of), tuple(w_of), pays, tuple(partition))


def is_outcome_equilibrium(spec: SpenceSpec, out: Outcome) -> bool:
    """Incentive compatibility plus deterrence of off-path messages by the lowest wage."""
    lo, hi = spec.bounds
    bundles = set(zip(out.messages, out.actions))
    for t in range(spec.n):
        u = out.payoffs[t]
        if any(spec.payoff(t, m, w) > u for m, w in bundles):
            return False
        off = lo if lo not in out.messages else None
        if off is not None and spec.payoff(t, off, spec.values[0]) > u:
            return False
    return all(lo <= m <= hi for m in out.messages)


def lex_key(payoffs) -> tuple:
    return tuple(reversed(payoffs))


def lex_dominates(p1, p2) -> bool:
    """True iff some type strictly gains and every higher type weakly gains."""
    if len(p1) != len(p2):
        raise LengthMismatch("payoff vectors have different lengths")
    for t in range(len(p1)):
        if p1[t] > p2[t] and all(p1[s] >= p2[s] for s in range(t + 1, len(p1))):
            return True
    return False


def lex_max_outcome(spec: SpenceSpec) -> Outcome:
    best = None
    for part in consecutive_partitions(spec.n):
        msgs, wages = minimal_pool_messages(spec, part)
        if any(m > spec.bounds[1] for m in msgs):
            continue
        out = _pooled_outcome(spec, part, msgs, wages)
        if not is_outcome_equilibrium(spec, out):
            continue
        if best is None or lex_key(out.payoffs) > lex_key(best.payoffs):
            best = out
    if best is None:
        raise InfeasibleBounds("no partition yields an equilibrium within the message bounds")
    return best


def truncated_game(spec: SpenceSpec, j: int) -> SpenceSpec:
    """The spec restricted to the ``j`` lowest types, prior renormalized (j is 1-based)."""
    if not 1 <= j <= spec.n:
        raise IndexOutOfRange(f"j must lie in 1..{spec.n}, got {j}")
    if j == spec.n:
        return spec
    mass = sum(spec.prior[:j])
    cost = spec.cost if isinstance(spec.cost, RatioCost) else LinearCost(spec.cost.coefficients[:j])
    return SpenceSpec(f"{spec.name}[:{j}]", spec.type_labels[:j], spec.values[:j],
                      tuple(p / mass for p in spec.prior[:j]), cost, spec.bounds)


def canonical_grid(spec: SpenceSpec, step=DEFAULT_STEP) -> tuple:
    """Message grid with every binding indifference level plus a uniform fill.

    ``step=None`` skips the fill.
    """
    lo, hi = spec.bounds
    pts = {lo, hi}
    for part in consecutive_partitions(spec.n):
        msgs, _ = minimal_pool_messages(spec, part)
        pts.update(m for m in msgs if lo <= m <= hi)
    try:
        pts.update(riley_outcome(spec).messages)
    except InfeasibleBounds:
        pass
    if step is not None:
        step = as_fraction(step)
        if step <= 0:
            raise SpecError("grid step must be positive")
        k = 0
        while lo + k * step <= hi:
            pts.add(lo + k * step)
            k += 1
    return tuple(sorted(pts))


def class_messages(game: Game, cls) -> tuple:
    """Message level chosen by each type in a pure class."""
    return tuple(game.messages[cls.profile.support(t)[0]].level for t in range(game.n_types))


@dataclass
class TheoremReport:
    spec_name: str
    grid_size: int
    n_classes: int
    lex_max: Outcome
    lmse_labels: list
    most_persuasive: list
    outgoing_ok: bool
    incoming_ok: bool
    unique_ok: bool
    failures: list

    @property
    def passed(self) -> bool:
        return self.outgoing_ok and self.incoming_ok and self.unique_ok and not self.failures

    def to_dict(self, spec: SpenceSpec) -> dict:
        return {
            "spec": self.spec_name,
            "grid_size": self.grid_size,
            "classes": self.n_classes,
            "lex_max": self.lex_max.to_dict(spec),
            "lmse_classes": self.lmse_labels,
            "most_persuasive": self.most_persuasive,
            "lmse_beats_all": self.outgoing_ok,
            "nothing_beats_lmse": self.incoming_ok,
            "most_persuasive_is_lmse": self.unique_ok,
            "passed": self.passed,
            "failures": self.failures,
        }


def verify_theorems(spec: SpenceSpec, grid=None, *, full_graph: bool = False) -> TheoremReport:
    """Check on a grid that the lex-max outcome is the unique most persuasive one.

    The default path tests every pair involving the lex-max class and uses the
    short-circuit selection of the most persuasive set; ``full_graph=True``
    builds the whole persuasion digraph instead.
    """
    from .equilibria import enumerate_pure_equilibria
    from .persuasion import PersuasionCache, persuasion_digraph

    grid = canonical_grid(spec) if grid is None else grid
    game = spec.to_game(grid)
    classes = enumerate_pure_equilibria(game)
    lex = lex_max_outcome(spec)
    failures = []
    lmse = [c for c in classes if c.payoffs == lex.payoffs]
    if not lmse:
        failures.append("lex-max outcome is not among the grid classes")
        return TheoremReport(spec.name, len(grid), len(classes), lex, [], [], False, False, False, failures)
    best = max(classes, key=lambda c: lex_key(c.payoffs))
    if best.payoffs != lex.payoffs:
        failures.append(f"grid class {best.label} lex-dominates the closed-form lex-max outcome")
    cache = PersuasionCache(game)
    anchor = lmse[0]
    outgoing = incoming = True
    for c in classes:
        if c.payoffs == anchor.payoffs:
            continue
        if cache.witness(anchor, c) is None:
            outgoing = False
            failures.append(f"{anchor.label} is not more persuasive than {c.label}")
        if cache.witness(c, anchor) is not None:
            incoming = False
            failures.append(f"{c.label} is more persuasive than {anchor.label}")
    if full_graph:
        most = persuasion_digraph(game, classes).most_persuasive
    else:
        most = cache.most_persuasive(classes)
    most_labels = [c.label for c in most]
    unique = (len(most) == 1 and most[0].payoffs == lex.payoffs
              and class_messages(game, most[0]) == lex.messages)
    if not unique:
        failures.append(f"most persuasive set is {most_labels}, expected the lex-max class alone")
    return TheoremReport(spec.name, len(grid), len(classes), lex, [c.label for c in lmse], most_labels,
                         outgoing, incoming, unique, failures)


def random_spec(rng, max_types: int = 4, margin=Fraction(1, 20), max_value: int = 6) -> SpenceSpec:
    """Random ratio-cost spec with distinct integer type values and a rational prior.

    Every prior entry is at least ``margin``; ``rng`` is a ``random.Random``.
    """
    n = rng.randint(2, max_types)
    values = sorted(rng.sample(range(1, max_value + 1), n))
    while True:
        w = [rng.randint(1, 100) for _ in range(n)]
        prior = [Fraction(x, sum(w)) for x in w]
        if min(prior) >= margin:
            break
    return spence_spec(values, prior, name=f"random-{n}")


def suite_grid(spec: SpenceSpec, points: int = 8) -> tuple:
    """Binding messages plus an even fill of ``points`` steps across the bounds."""
    lo, hi = spec.bounds
    return canonical_grid(spec, (hi - lo) / points)
