"""Exact scalar field and circle-point ordering."""

from __future__ import annotations

import math
from fractions import Fraction

import pytest
from hypothesis import assume, given, settings
import hypothesis.strategies as st

from linkform.errors import (
    ExactnessError,
    FieldExtensionError,
    ParseError,
    PreconditionError,
)
from linkform.field import (
    ExactPoint,
    FieldElem,
    IsolatedPoint,
    RootOfUnity,
    arg_compare,
    cayley,
    cayley_param,
    hermitian_signature,
    same_point,
)

from _strategies import (
    gaussian_elems,
    quad_elems,
    real_quad_elems,
    rou_points,
    small_fracs,
)


# -- field arithmetic ---------------------------------------------------------


@given(quad_elems(), quad_elems(), quad_elems())
def test_ring_axioms(x, y, z):
    assert (x + y) * z == x * z + y * z
    assert x * (y * z) == (x * y) * z
    assert x + y == y + x
    assert x * y == y * x
    assert x - x == FieldElem(0)


@given(quad_elems(nonzero=True))
def test_inverse(x):
    assert x * x.inverse() == FieldElem(1)
    assert (FieldElem(1) / x) * x == FieldElem(1)


@given(quad_elems(), quad_elems())
def test_conjugation(x, y):
    assert (x * y).conj() == x.conj() * y.conj()
    assert (x + y).conj() == x.conj() + y.conj()
    assert x.conj().conj() == x
    n2 = x.abs2()
    assert n2.is_real() and n2.sign() >= 0


@given(quad_elems())
def test_float_embedding_is_a_homomorphism(x):
    # corroborate exact arithmetic against floating point
    z = x.to_complex()
    assert abs((x * x).to_complex() - z * z) < 1e-9 * (1 + abs(z)) ** 2
    assert abs((x + x).to_complex() - 2 * z) < 1e-9


@given(real_quad_elems())
def test_sign_matches_float(x):
    z = x.to_complex().real
    assume(abs(z) > 1e-9)  # float oracle is meaningless at the exact zero
    assert x.sign() == (1 if z > 0 else -1)


def test_sign_exact_near_ties():
    # sqrt(2) ~ 1.41421356...: exact sign must beat float rounding stories
    x = FieldElem(Fraction(-141421356, 10**8), b=1, d=2)
    assert x.sign() == 1
    assert FieldElem(Fraction(-141421357, 10**8), b=1, d=2).sign() < 0
    assert FieldElem(0).sign() == 0


@given(real_quad_elems())
def test_real_bounds_bracket(x):
    lo, hi = x.real_bounds(20)
    assert hi - lo <= Fraction(1, 2**20)
    assert lo <= Fraction(str(round(float(x.to_complex().real), 12))) + Fraction(1, 10**6)
    v = x.to_complex().real
    assert float(lo) - 1e-6 <= v <= float(hi) + 1e-6


@given(quad_elems())
def test_abs_upper(x):
    assert float(x.abs_upper()) + 1e-9 >= abs(x.to_complex())


@given(quad_elems())
def test_string_roundtrip(x):
    assert FieldElem.from_string(str(x), d=2) == x


def test_parse_errors():
    with pytest.raises(ParseError):
        FieldElem.from_string("")
    with pytest.raises(ParseError):
        FieldElem.from_string("1/0")
    with pytest.raises(ParseError):
        FieldElem.from_string("2*q")
    with pytest.raises(ParseError):
        # sqrt term without a session radicand
        FieldElem.from_string("1/2*r")


def test_mixing_radicands_raises():
    with pytest.raises(FieldExtensionError):
        FieldElem(0, b=1, d=2) + FieldElem(0, b=1, d=3)
    # rationals mix with anything
    assert FieldElem(1) + FieldElem(0, b=1, d=3) == FieldElem(1, b=1, d=3)


def test_radicand_validation():
    with pytest.raises(ValueError):
        FieldElem(0, b=1, d=4)  # not squarefree
    with pytest.raises(ValueError):
        FieldElem(0, b=1, d=0)  # sqrt part without radicand


# -- circle points ------------------------------------------------------------


def test_cayley_example():
    p = cayley(Fraction(1, 2))
    assert p == ExactPoint(Fraction(3, 5), Fraction(4, 5))
    assert cayley_param(p) == FieldElem(Fraction(1, 2))


@given(small_fracs)
def test_cayley_roundtrip(s):
    p = cayley(s)
    assert (p.x * p.x + p.y * p.y) == FieldElem(1)
    assert cayley_param(p) == FieldElem(s)


@given(rou_points)
def test_roots_of_unity_are_roots_of_unity(p):
    z = p.value()
    assert z ** p.n == FieldElem(1)
    # primitivity: no smaller positive power is 1
    for k in range(1, p.n):
        assert z ** k != FieldElem(1)


@given(rou_points)
def test_conj_is_an_involution(p):
    assert p.conj().conj() == p
    assert (p.value().conj() - p.conj().value()).is_zero()


def test_structural_equality_across_flavours():
    assert RootOfUnity(1, 4) == ExactPoint(0, 1)
    assert hash(RootOfUnity(1, 4)) == hash(ExactPoint(0, 1))
    assert RootOfUnity(2, 6) == RootOfUnity(1, 3)
    assert RootOfUnity(0, 5) == RootOfUnity(0, 1)  # reduces before the order check
    with pytest.raises(PreconditionError):
        RootOfUnity(1, 5)


def test_point_ordering_matches_float_argument():
    pts = [RootOfUnity(k, 8) for k in (1, 3, 5, 7)]
    pts += [RootOfUnity(1, 6), RootOfUnity(1, 3), RootOfUnity(1, 2), RootOfUnity(0, 1)]
    pts += [cayley(Fraction(p, q)) for p, q in ((1, 2), (-1, 2), (7, 1), (-7, 3))]
    srt = sorted(pts)
    turns = [p.approx_turn() for p in srt]
    assert turns == sorted(turns)
    assert srt[0].is_one()


@given(st.fractions(min_value=-30, max_value=30, max_denominator=40),
       st.fractions(min_value=-30, max_value=30, max_denominator=40))
def test_arg_compare_exact_points(s1, s2):
    p1, p2 = cayley(s1), cayley(s2)
    c = arg_compare(p1, p2)
    if s1 == s2:
        assert c == 0
    elif (s1 >= 0) == (s2 >= 0):
        # same semicircle: order follows the Cayley parameter
        assert c == (-1 if s1 < s2 else 1)
    else:
        # upper (s >= 0) precedes lower (s < 0)
        assert c == (-1 if s1 >= 0 else 1)


def _sqrt3_pos():
    # s^2 - 3, positive root: the point e^{2 pi i/3}
    return IsolatedPoint([FieldElem(-3), FieldElem(0), FieldElem(1)],
                         Fraction(1), Fraction(2))


def test_isolated_point_semantics():
    iso = _sqrt3_pos()
    assert iso.index == 1
    assert same_point(iso, RootOfUnity(1, 3))
    assert iso != RootOfUnity(1, 3)  # structural inequality
    assert arg_compare(iso, RootOfUnity(1, 4)) > 0
    assert arg_compare(iso, RootOfUnity(1, 2)) < 0
    # same defining data, different interval: structurally equal
    iso2 = IsolatedPoint([FieldElem(-3), FieldElem(0), FieldElem(1)],
                         Fraction(3, 2), Fraction(9, 5))
    assert iso == iso2 and hash(iso) == hash(iso2)
    assert same_point(iso.conj(), RootOfUnity(2, 3))
    with pytest.raises(ExactnessError):
        iso.value()


def test_isolated_point_validation():
    sq = [FieldElem(-3), FieldElem(0), FieldElem(1)]
    with pytest.raises(PreconditionError):
        IsolatedPoint(sq, Fraction(-2), Fraction(2))  # two roots
    with pytest.raises(PreconditionError):
        IsolatedPoint(sq, Fraction(5), Fraction(6))  # no root
    with pytest.raises(PreconditionError):
        # non-squarefree
        IsolatedPoint([FieldElem(1), FieldElem(2), FieldElem(1)],
                      Fraction(-2), Fraction(0))


def test_isolated_vs_isolated_disambiguation():
    # roots of s^2 - 2 and s^2 - 3 interleave; gcd is trivial
    a = IsolatedPoint([FieldElem(-2), FieldElem(0), FieldElem(1)],
                      Fraction(1), Fraction(19, 10))
    b = _sqrt3_pos()
    assert arg_compare(a, b) < 0 and arg_compare(b, a) > 0
    # common factor: (s^2-3)(s^2-2) vs s^2-3 share the sqrt(3) root
    prod = [FieldElem(6), FieldElem(0), FieldElem(-5), FieldElem(0), FieldElem(1)]
    c = IsolatedPoint(prod, Fraction(8, 5), Fraction(9, 5))
    assert same_point(c, b)


def test_minus_one_is_its_own_class():
    m1 = ExactPoint(-1, 0)
    assert arg_compare(m1, RootOfUnity(1, 2)) == 0
    assert arg_compare(RootOfUnity(1, 3), m1) < 0 < arg_compare(RootOfUnity(2, 3), m1)
    assert arg_compare(cayley(Fraction(-5)), m1) > 0  # lower semicircle follows -1
    with pytest.raises(PreconditionError):
        cayley_param(m1)


# -- hermitian signature ------------------------------------------------------


def _float_signature(rows):
    vals = [[z.to_complex() for z in row] for row in rows]
    # exact matrices are tiny; a plain Jacobi-free numpy oracle is fine
    import numpy as np

    ev = np.linalg.eigvalsh(np.array(vals))
    return ev


@given(st.lists(st.lists(gaussian_elems(), min_size=3, max_size=3),
                min_size=3, max_size=3))
@settings(max_examples=60)
def test_signature_matches_float_oracle(b):
    m = [[b[i][j] + b[j][i].conj() for j in range(3)] for i in range(3)]
    ev = _float_signature(m)
    assume(min(abs(v) for v in ev) > 1e-7)
    expected = sum(1 for v in ev if v > 0) - sum(1 for v in ev if v < 0)
    assert hermitian_signature(m) == expected


def test_signature_corner_cases():
    z = FieldElem(0)
    i1 = FieldElem(0, 1)
    assert hermitian_signature([]) == 0
    assert hermitian_signature([[z]]) == 0
    assert hermitian_signature([[FieldElem(5)]]) == 1
    # hyperbolic plane
    assert hermitian_signature([[z, i1], [-i1, z]]) == 0
    # hyperbolic + positive line
    m = [[z, i1, z], [-i1, z, z], [z, z, FieldElem(3)]]
    assert hermitian_signature(m) == 1
    with pytest.raises(PreconditionError):
        hermitian_signature([[i1]])  # not Hermitian


@given(quad_elems(nonzero=True), quad_elems(nonzero=True))
def test_signature_rank_two(x, y):
    # [[0, z], [conj z, w]] with w real: signature 0 when z != 0 dominates
    w = y.real()
    m = [[FieldElem(0), x], [x.conj(), w]]
    sig = hermitian_signature(m)
    # det = -|x|^2 < 0 always: one positive, one negative eigenvalue
    assert sig == 0
