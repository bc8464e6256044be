"""Coefficient-ring arithmetic, checked against independent brute-force oracles."""

import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as hst

from supertower.errors import ExactDivisionError, ModeError
from supertower.ground import (
    COLLAPSED,
    FULL,
    GroundElem,
    TwistScalar,
    bar_involution,
    collapse_pi,
    divide_by_int,
    divide_exact,
    qpi_binomial,
    qpi_factorial,
    qpi_integer,
    ring_arith,
)


def brute_mul(a: dict, b: dict) -> dict:
    """Oracle: convolution with pi-exponent reduction, independent of GroundElem."""
    out = {}
    for (qa, pa), ca in a.items():
        for (qb, pb), cb in b.items():
            k = (qa + qb, (pa + pb) % 2)
            out[k] = out.get(k, 0) + ca * cb
    return {k: v for k, v in out.items() if v}


def gauss_binomial_oracle(n: int, k: int) -> dict:
    """Oracle: the Gaussian binomial as a subset generating function.

    Sum over k-subsets S of {0..n-1} of t**(sum(S) - k(k-1)/2), enumerated
    directly; no division involved.
    """
    out = {}
    base = k * (k - 1) // 2
    for subset in itertools.combinations(range(n), k):
        e = sum(subset) - base
        out[e] = out.get(e, 0) + 1
    return out


elems = hst.builds(
    lambda d: GroundElem({(q, p): c for (q, p), c in d.items()}),
    hst.dictionaries(
        hst.tuples(hst.integers(-4, 4), hst.integers(0, 1)),
        hst.integers(-9, 9),
        max_size=5,
    ),
)


class TestRingArith:
    def test_pi_squares_to_one(self):
        assert GroundElem.pi() * GroundElem.pi() == GroundElem.one()

    def test_q_inverse_pair(self):
        assert GroundElem.q(1) * GroundElem.q(-1) == GroundElem.one()

    def test_one_plus_qpi_squared(self):
        e = GroundElem.one() + GroundElem.monomial(1, 1)
        expected = GroundElem.from_triples([[0, 0, 1], [1, 1, 2], [2, 0, 1]])
        assert e * e == expected

    def test_mode_conflict(self):
        with pytest.raises(ModeError, match="ring mode conflict"):
            ring_arith(GroundElem.one(FULL), GroundElem.one(COLLAPSED), "add")

    def test_ring_arith_ops(self):
        a = GroundElem.q(2)
        b = GroundElem.pi()
        assert ring_arith(a, b, "add") == a + b
        assert ring_arith(a, b, "sub") == a - b
        assert ring_arith(a, b, "mul") == GroundElem.monomial(2, 1)

    @given(elems, elems)
    @settings(max_examples=60, deadline=None)
    def test_mul_matches_oracle(self, a, b):
        assert (a * b).terms == brute_mul(a.terms, b.terms)

    @given(elems, elems)
    @settings(max_examples=60, deadline=None)
    def test_commutativity(self, a, b):
        assert a * b == b * a
        assert a + b == b + a

    @given(elems, elems, elems)
    @settings(max_examples=60, deadline=None)
    def test_associativity_distributivity(self, a, b, c):
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c

    def test_canonical_serialization_order(self):
        e = GroundElem({(2, 0): 1, (-1, 1): 3, (-1, 0): 2})
        assert e.to_triples() == [[-1, 0, 2], [-1, 1, 3], [2, 0, 1]]
        assert GroundElem.from_triples(e.to_triples()) == e


class TestTwistedIntegers:
    def test_zero_convention(self):
        assert qpi_integer(0, TwistScalar(1, 1)).is_zero()
        assert qpi_factorial(0, TwistScalar(1, 1)).is_one()

    def test_two_with_odd_twist(self):
        assert qpi_integer(2, TwistScalar(1, 1)) == GroundElem.one() + GroundElem.monomial(1, 1)

    def test_three_geometric(self):
        got = qpi_integer(3, TwistScalar(1, 0))
        assert got == GroundElem.from_triples([[0, 0, 1], [1, 0, 1], [2, 0, 1]])

    def test_binomial_edge(self):
        for n in range(7):
            assert qpi_binomial(n, 0, TwistScalar(2, 1)).is_one()

    def test_binomial_two_one(self):
        assert qpi_binomial(2, 1, TwistScalar(1, 1)) == GroundElem.one() + GroundElem.monomial(1, 1)

    def test_binomial_four_two(self):
        got = qpi_binomial(4, 2, TwistScalar(1, 0))
        assert got == GroundElem.from_triples(
            [[0, 0, 1], [1, 0, 1], [2, 0, 2], [3, 0, 1], [4, 0, 1]])

    @pytest.mark.parametrize("c", [TwistScalar(1, 0), TwistScalar(1, 1), TwistScalar(2, 1)])
    def test_binomial_matches_subset_oracle(self, c):
        for n in range(9):
            for k in range(n + 1):
                oracle = gauss_binomial_oracle(n, k)
                expected = GroundElem(
                    {(c.d * e, (c.eps * e) & 1): v for e, v in oracle.items()})
                assert qpi_binomial(n, k, c) == expected

    def test_binomial_symmetry_and_positivity(self):
        c = TwistScalar(1, 1)
        for n in range(13):
            for k in range(n + 1):
                b = qpi_binomial(n, k, c)
                assert b == qpi_binomial(n, n - k, c)
                assert all(v > 0 for v in b.terms.values())
                i = qpi_integer(n, c)
                assert all(v > 0 for v in i.terms.values()) or n == 0

    def test_out_of_range(self):
        with pytest.raises(ValueError):
            qpi_binomial(2, 3, TwistScalar(1, 0))


class TestBarAndCollapse:
    def test_bar_examples(self):
        q = GroundElem.q()
        assert bar_involution(q) == GroundElem.q(-1)
        e = GroundElem.one() + GroundElem.monomial(1, 1)
        assert bar_involution(e) == GroundElem.one() + GroundElem.monomial(-1, 1)

    @given(elems)
    @settings(max_examples=50, deadline=None)
    def test_bar_is_involution(self, a):
        assert bar_involution(bar_involution(a)) == a

    @given(elems, elems)
    @settings(max_examples=50, deadline=None)
    def test_bar_is_ring_hom(self, a, b):
        assert bar_involution(a * b) == bar_involution(a) * bar_involution(b)
        assert bar_involution(a + b) == bar_involution(a) + bar_involution(b)

    def test_collapse_examples(self):
        one, pi = GroundElem.one(), GroundElem.pi()
        assert collapse_pi(one + pi) == GroundElem.from_int(2, COLLAPSED)
        assert collapse_pi(GroundElem.monomial(1, 1) - GroundElem.q()).is_zero()
        halved = divide_by_int(collapse_pi(one + pi), 2)
        assert halved == GroundElem.one(COLLAPSED)

    @given(elems, elems)
    @settings(max_examples=50, deadline=None)
    def test_collapse_is_ring_hom(self, a, b):
        assert collapse_pi(a * b) == collapse_pi(a) * collapse_pi(b)
        assert collapse_pi(a + b) == collapse_pi(a) + collapse_pi(b)


class TestDivision:
    def test_exact_laurent(self):
        c = TwistScalar(1, 0)
        n6 = qpi_factorial(4, c)
        n2 = qpi_factorial(2, c)
        got = divide_exact(n6, n2)
        assert got * n2 == n6

    def test_exact_with_pi(self):
        c = TwistScalar(1, 1)
        a = qpi_factorial(4, c)
        b = qpi_factorial(3, c)
        assert divide_exact(a, b) == qpi_integer(4, c)

    def test_inexact_raises(self):
        with pytest.raises(ExactDivisionError):
            divide_exact(GroundElem.q() + GroundElem.one(),
                         GroundElem.from_int(2))

    def test_zero_divisor_detected(self):
        one_plus_pi = GroundElem.one() + GroundElem.pi()
        with pytest.raises(ExactDivisionError):
            divide_exact(one_plus_pi * one_plus_pi, one_plus_pi)

    def test_divide_by_int_collapsed_dyadic(self):
        e = GroundElem.from_int(3, COLLAPSED)
        assert divide_by_int(e, 2) == GroundElem({(0, 0): Fraction(3, 2)}, COLLAPSED)


def test_unit_recognition():
    assert GroundElem.monomial(3, 1, -1).is_unit()
    assert not (GroundElem.one() + GroundElem.pi()).is_unit()
    assert GroundElem({(2, 0): Fraction(1, 4)}, COLLAPSED).is_unit()
    assert not GroundElem({(0, 0): Fraction(3, 2)}, COLLAPSED).is_unit()
