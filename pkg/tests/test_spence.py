import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import fixture_game, two_type_spence
from oracles import lex_greater, pooling_mimic_message, riley_messages
from sigref.equilibria import enumerate_pure_equilibria, is_sequential_equilibrium
from sigref.game import LinearCost, make_profile, pure_sender
from sigref.spence import (
    IndexOutOfRange,
    InfeasibleBounds,
    LengthMismatch,
    SpecError,
    canonical_grid,
    lex_dominates,
    lex_max_outcome,
    random_spec,
    riley_outcome,
    spence_spec,
    suite_grid,
    truncated_game,
    verify_theorems,
)


def three():
    return fixture_game("spence3")


def test_riley_two_and_three_types():
    out = riley_outcome(two_type_spence(F(1, 4)))
    assert out.messages == (0, 1) and out.payoffs == (1, F(3, 2))
    out = riley_outcome(three())
    assert out.messages == (0, 1, 3) and out.payoffs == (1, F(3, 2), 2)


def test_riley_single_type():
    spec = spence_spec([2], [1])
    out = riley_outcome(spec)
    assert out.messages == (spec.bounds[0],) and out.payoffs == (2,)


@settings(max_examples=50, deadline=None)
@given(st.lists(st.integers(1, 30), min_size=2, max_size=5, unique=True))
def test_riley_matches_indifference_recursion(vals):
    vals = sorted(vals)
    spec = spence_spec(vals, [F(1, len(vals))] * len(vals))
    slopes = [F(1, v) for v in vals]
    assert list(riley_outcome(spec).messages) == riley_messages([F(v) for v in vals], slopes)


def test_riley_out_of_bounds():
    with pytest.raises((InfeasibleBounds, SpecError)):
        riley_outcome(spence_spec([1, 2, 3], ["1/3"] * 3, bounds=[0, "2.9"]))


def test_lex_max_two_type():
    assert lex_max_outcome(two_type_spence(F(3, 4))).payoffs == (1, F(3, 2))
    assert lex_max_outcome(two_type_spence(F(1, 4))).payoffs == (F(7, 4), F(7, 4))
    assert lex_max_outcome(two_type_spence(F(1, 2))).payoffs == (F(3, 2), F(3, 2))


def test_lex_max_three_type():
    out = lex_max_outcome(three())
    assert out.partition == ((0,), (1, 2))
    mean = (F(1, 5) * 2 + F(9, 20) * 3) / (F(1, 5) + F(9, 20))
    m = pooling_mimic_message(F(1), F(1), mean)
    assert out.messages == (0, m, m)
    assert m == F(22, 13) and round(float(m), 4) == 1.6923
    for got, want in zip(out.payoffs, (1, 1.85, 2.13)):
        assert abs(float(got) - want) < 0.01


def test_lex_max_with_linear_costs():
    spec = spence_spec(["2/3", 1], ["1/2", "1/2"], LinearCost(("1/2", "1/4")), bounds=[0, 1])
    assert lex_max_outcome(spec).payoffs == (F(5, 6), F(5, 6))


def test_lex_dominates_examples():
    a, b, c = (1, F(185, 100), F(213, 100)), (1, F(3, 2), 2), (F(21, 10),) * 3
    assert lex_dominates(a, b)
    assert not lex_dominates(c, a)
    assert not lex_dominates(a, a)
    with pytest.raises(LengthMismatch):
        lex_dominates((1, 2), (1,))


@given(st.lists(st.tuples(st.integers(0, 3), st.integers(0, 3)), min_size=1, max_size=5))
def test_lex_dominates_is_top_down_order(pairs):
    p1, p2 = [a for a, _ in pairs], [b for _, b in pairs]
    assert lex_dominates(p1, p2) == lex_greater(p1, p2)
    assert not (lex_dominates(p1, p2) and lex_dominates(p2, p1))


def test_truncation():
    spec = three()
    t2 = truncated_game(spec, 2)
    assert t2.values == (1, 2) and t2.prior == (F(7, 11), F(4, 11))
    assert truncated_game(spec, 3) is spec
    assert lex_max_outcome(truncated_game(spec, 1)).payoffs == (1,)
    with pytest.raises(IndexOutOfRange):
        truncated_game(spec, 0)


def test_canonical_grids():
    g = canonical_grid(two_type_spence(F(1, 4)))
    assert {0, 1, F(3, 4)} <= set(g)
    g = canonical_grid(three())
    assert {0, 1, 3, F(36, 11), F(22, 13)} <= set(g)
    assert round(float(F(36, 11)), 4) == 3.2727
    one = spence_spec([2], [1])
    assert canonical_grid(one, None) == one.bounds
    assert canonical_grid(one, F(1, 2))[:3] == (0, F(1, 2), 1)


def test_verify_theorems_examples():
    rep = verify_theorems(two_type_spence(F(1, 4)), canonical_grid(two_type_spence(F(1, 4)), F(1, 4)))
    assert rep.passed and rep.lex_max.payoffs == (F(7, 4), F(7, 4))
    rep = verify_theorems(two_type_spence(F(1, 2)), canonical_grid(two_type_spence(F(1, 2)), F(1, 4)))
    assert rep.passed and rep.lex_max.payoffs == (F(3, 2), F(3, 2))
    rep = verify_theorems(three(), canonical_grid(three(), F(1, 4)), full_graph=True)
    assert rep.passed and rep.most_persuasive == ["[0,22/13,22/13]"]


def test_spec_validation():
    with pytest.raises(SpecError):
        spence_spec([2, 1], ["1/2", "1/2"])
    with pytest.raises(SpecError):
        spence_spec([1, 2], ["1/2", "1/2"], LinearCost(("1/4", "1/2")))
    with pytest.raises(SpecError):
        spence_spec([1, 2], ["1/2", "1/2"], bounds=[0, "1/2"])


def test_riley_is_grid_equilibrium_and_lex_below_max():
    rng = random.Random(7)
    for _ in range(15):
        spec = random_spec(rng)
        riley, lex = riley_outcome(spec), lex_max_outcome(spec)
        assert riley.payoffs == lex.payoffs or lex_dominates(lex.payoffs, riley.payoffs)
        grid = canonical_grid(spec, None)
        game = spec.to_game(grid)
        idx = [grid.index(m) for m in riley.messages]
        wages = [spec.values[0]] * len(grid)
        for t, i in enumerate(idx):
            wages[i] = spec.values[t]
        point = [tuple(int(s == t) for s in range(spec.n)) for t in range(spec.n)]
        beliefs = [point[idx.index(i)] if i in idx else point[0] for i in range(len(grid))]
        prof = make_profile(game, pure_sender(game, idx), wages, beliefs)
        assert is_sequential_equilibrium(game, prof)


def test_truncated_games_never_beat_lmse_at_the_top():
    rng = random.Random(11)
    for _ in range(8):
        spec = random_spec(rng)
        lex = lex_max_outcome(spec)
        for j in range(1, spec.n + 1):
            sub = truncated_game(spec, j)
            for c in enumerate_pure_equilibria(sub.to_game(suite_grid(sub))):
                assert lex.payoffs[j - 1] >= c.payoffs[j - 1]


@settings(max_examples=100)
@given(st.randoms(use_true_random=False))
def test_reverse_single_crossing(rnd):
    spec = three()
    t, t2 = sorted(rnd.sample(range(spec.n), 2))
    m, m2 = sorted(rnd.sample(range(0, 50), 2))
    m, m2 = F(m, 10), F(m2, 10)
    a, a2 = F(rnd.randint(10, 30), 10), F(rnd.randint(10, 30), 10)
    if spec.payoff(t2, m, a) >= spec.payoff(t2, m2, a2):
        assert spec.payoff(t, m, a) > spec.payoff(t, m2, a2)


def test_grid_classes_are_monotone():
    spec = three()
    game = spec.to_game(canonical_grid(spec, F(1, 2)))
    for c in enumerate_pure_equilibria(game):
        levels = [game.messages[c.profile.support(t)[0]].level for t in range(spec.n)]
        assert levels == sorted(levels)
