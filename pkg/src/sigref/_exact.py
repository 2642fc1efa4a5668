"""Exact rational helpers: number coercion, linear solves, polytope feasibility."""

from __future__ import annotations

from decimal import Decimal
from fractions import Fraction
from itertools import combinations
from typing import Sequence

UNIQUE = "unique"
INCONSISTENT = "inconsistent"
UNDERDETERMINED = "underdetermined"


def as_fraction(x) -> Fraction:
    """Coerce ints, floats, decimals and strings like ``"1/3"`` to a Fraction.

    Floats go through their shortest repr so ``0.35`` becomes ``7/20``.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not numbers here")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, float):
        if x != x or x in (float("inf"), float("-inf")):
            raise ValueError(f"non-finite number {x!r}")
        return Fraction(repr(x))
    if isinstance(x, (Decimal, str)):
        return Fraction(str(x).strip())
    raise TypeError(f"cannot interpret {x!r} as a number")


def fmt(x: Fraction, digits: int | None = None) -> str:
    """Short human label: integers as-is, terminating decimals as decimals, else p/q."""
    x = Fraction(x)
    if digits is not None:
        return f"{float(x):.{digits}f}"
    if x.denominator == 1:
        return str(x.numerator)
    d = x.denominator
    for p in (2, 5):
        while d % p == 0:
            d //= p
    if d == 1:
        s = repr(float(x))
        if Fraction(s) == x:
            return s
    return f"{x.numerator}/{x.denominator}"


def solve_linear(rows: Sequence[Sequence[Fraction]], rhs: Sequence[Fraction], n: int):
    """Gauss-Jordan elimination over the rationals.

    Returns ``(status, solution)``; ``solution`` is only set when the status is
    ``UNIQUE``.
    """
    m = [list(map(Fraction, r)) + [Fraction(b)] for r, b in zip(rows, rhs)]
    pivots = []
    r = 0
    for c in range(n):
        p = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        piv = m[r][c]
        m[r] = [v / piv for v in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    for i in range(r, len(m)):
        if m[i][n] != 0:
            return INCONSISTENT, None
    if r < n:
        return UNDERDETERMINED, None
    sol = [Fraction(0)] * n
    for i, c in enumerate(pivots):
        sol[c] = m[i][n]
    return UNIQUE, tuple(sol)


def rank(rows: Sequence[Sequence[Fraction]], n: int) -> int:
    m = [list(map(Fraction, r)) for r in rows]
    r = 0
    for c in range(n):
        p = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        for i in range(r + 1, len(m)):
            if m[i][c] != 0:
                f = m[i][c] / m[r][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        r += 1
    return r


def feasible_point(n: int, eqs, ineqs):
    """Find a point with ``a.x == b`` for every eq and ``a.x <= b`` for every ineq.

    The feasible region must be bounded (callers always add a simplex), so it is
    non-empty iff it has a vertex; vertices are enumerated exactly. Returns a
    tuple of Fractions or None.
    """
    eq_rows = [list(a) for a, _ in eqs]
    eq_rhs = [b for _, b in eqs]
    r = rank(eq_rows, n) if eq_rows else 0
    need = n - r
    for chosen in combinations(range(len(ineqs)), need):
        rows = eq_rows + [list(ineqs[i][0]) for i in chosen]
        rhs = eq_rhs + [ineqs[i][1] for i in chosen]
        status, x = solve_linear(rows, rhs, n)
        if status != UNIQUE:
            continue
        if all(sum(a * v for a, v in zip(row, x)) <= b for row, b in ineqs):
            return x
    return None


def simplex_point(n: int, extra_ineqs=(), extra_eqs=()):
    """Feasible point of the probability simplex in R^n under extra constraints."""
    eqs = [([Fraction(1)] * n, Fraction(1))] + list(extra_eqs)
    ineqs = [([Fraction(-1) if j == i else Fraction(0) for j in range(n)], Fraction(0)) for i in range(n)]
    return feasible_point(n, eqs, ineqs + list(extra_ineqs))
