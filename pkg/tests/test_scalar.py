from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from reflectionlab.scalar import (PHI, SQRT5, QSqrt5, SpanTester, charpoly, inverse, mat_mul, nullspace,
                                  rank, sign, simplify)

fractions = st.fractions(min_value=-20, max_value=20, max_denominator=12)
elements = st.builds(QSqrt5, fractions, fractions)
nonzero = elements.filter(bool)


def test_golden_ratio_identities():
    assert PHI * PHI == PHI + 1
    assert SQRT5 * SQRT5 == 5
    assert (PHI - 1) * PHI == 1
    assert PHI.conjugate() == 1 - PHI
    assert PHI.norm() == -1


@given(elements, elements, elements)
def test_field_axioms(x, y, z):
    assert (x + y) + z == x + (y + z)
    assert x * (y + z) == x * y + x * z
    assert x * y == y * x
    assert x - x == 0


@given(nonzero)
def test_division_inverts_multiplication(x):
    assert x * (1 / x) == 1
    assert (x * PHI) / x == PHI


@given(elements, elements)
def test_sign_matches_float(x, y):
    d = x - y
    if d:
        assert sign(d) == (1 if float(d) > 0 else -1)
        assert (x < y) == (float(x) < float(y))


@given(fractions)
def test_simplify_drops_to_rational(q):
    s = simplify(QSqrt5(q, 0))
    assert not isinstance(s, QSqrt5) and s == q


def test_exact_sign_near_zero():
    # 161/72 - sqrt(5) is about 1.4e-4
    assert sign(QSqrt5(Fraction(161, 72), -1)) == 1
    assert sign(QSqrt5(Fraction(-161, 72), 1)) == -1


small = st.integers(-4, 4)


@given(st.lists(st.lists(small, min_size=3, max_size=3), min_size=3, max_size=3))
def test_inverse_or_singular(m):
    if rank(m) < 3:
        assert nullspace(m)
        return
    inv = inverse(m)
    ident = [[1 if i == j else 0 for j in range(3)] for i in range(3)]
    assert mat_mul(m, inv) == ident


@given(st.lists(st.lists(small, min_size=4, max_size=4), min_size=1, max_size=4))
def test_rank_nullity(rows):
    ns = nullspace(rows)
    assert rank(rows) + len(ns) == 4
    for v in ns:
        assert all(sum(Fraction(a) * b for a, b in zip(r, v)) == 0 for r in rows)


def test_span_tester():
    t = SpanTester([[1, 0, 1], [0, 1, 1]])
    assert t.dim == 2
    assert t.contains([2, -3, -1])
    assert not t.contains([0, 0, 1])


def test_charpoly_of_rotation_by_fifth_of_turn():
    # companion matrix of x^2 - (phi - 1) x + 1, order-5 rotation
    m = [[0, -1], [1, PHI - 1]]
    cp = charpoly(m)
    assert cp[0] == 1 and cp[-1] == 1
    assert cp[1] == 1 - PHI


def test_division_by_zero():
    with pytest.raises(ZeroDivisionError):
        PHI / QSqrt5(0, 0)
