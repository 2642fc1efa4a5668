from fractions import Fraction

import pytest

from sigref.equilibria import enumerate_mixed_equilibria, enumerate_pure_equilibria
from sigref.io import load_fixture
from sigref.spence import canonical_grid, spence_spec

F = Fraction

_cache = {}


def cached(key, build):
    if key not in _cache:
        _cache[key] = build()
    return _cache[key]


def fixture_game(name):
    return cached(("game", name), lambda: load_fixture(name))


def pure_classes(name):
    return cached(("pure", name), lambda: enumerate_pure_equilibria(fixture_game(name)))


def mixed_classes(name, k=2):
    return cached(("mixed", name, k), lambda: enumerate_mixed_equilibria(fixture_game(name), k))


def two_type_spence(p):
    """Low type value 1 with probability p, high type value 2, cost m / t."""
    return spence_spec([1, 2], [F(p), 1 - F(p)], labels=["t_L", "t_H"], name=f"two-type p={p}")


def spence_grid_game(spec, step=Fraction(1, 4)):
    key = ("grid", spec.name, spec.prior, step)
    return cached(key, lambda: spec.to_game(canonical_grid(spec, step)))


def grid_classes(spec, step=Fraction(1, 4)):
    key = ("gridcls", spec.name, spec.prior, step)
    return cached(key, lambda: enumerate_pure_equilibria(spence_grid_game(spec, step)))


def by_payoffs(classes, payoffs):
    want = tuple(F(x) for x in payoffs)
    hits = [c for c in classes if c.payoffs == want]
    assert hits, f"no class with payoffs {payoffs}"
    return hits[0]


def by_label(classes, label):
    hits = [c for c in classes if c.label == label]
    assert hits, f"no class labelled {label}; have {[c.label for c in classes]}"
    return hits[0]


@pytest.fixture
def beer_quiche():
    return fixture_game("beer_quiche")
