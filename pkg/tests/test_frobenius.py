"""Trace forms, Gram matrices, Nakayama maps, tensor structures, dual identification."""

from fractions import Fraction
from math import comb

import pytest

from supertower.errors import ValidationError
from supertower.frobenius import (
    check_dual_iso,
    check_frobenius,
    frobenius_tensor,
    nakayama,
    tensor_nakayama_matrix,
)
from supertower.linalg import Mat
from supertower.superalgebra import tensor_algebra
from supertower.towers import (
    build_nilcoxeter,
    build_wreath,
    clifford_base,
    longest_element,
    nilcoxeter_frobenius,
    nilcoxeter_nakayama_closed_form,
    wreath_nakayama_closed_form,
)


@pytest.fixture(scope="module")
def clifford():
    return clifford_base()


class TestCheckFrobenius:
    @pytest.mark.parametrize("n,d,eps", [(2, 1, 1), (3, 1, 1), (4, 1, 0), (5, 2, 1)])
    def test_nilcoxeter_longest_trace(self, n, d, eps):
        alg, basis = build_nilcoxeter(n, d, eps)
        frob = nilcoxeter_frobenius(alg, basis)
        ell = comb(n, 2)
        assert (frob.delta, frob.sigma) == (d * ell, (eps * ell) & 1)

    def test_group_algebra_trace(self):
        # the wreath over the one-dimensional trivial base is the plain group algebra
        from supertower.superalgebra import Degree, SuperAlgebra
        triv = SuperAlgebra(["1"], [Degree(0, 0)], {0: Fraction(1)},
                            products={(0, 0): {0: Fraction(1)}}, generators=[])
        base = check_frobenius(triv, {0: Fraction(1)}, 0, 0)
        alg, frob = build_wreath(base, 3)
        assert alg.dim == 6
        assert (frob.delta, frob.sigma) == (0, 0)

    def test_trace_on_identity_fails(self):
        # graded (supported in bidegree (0,0)) but the Gram matrix is singular
        alg, _ = build_nilcoxeter(2, 1, 0)
        unit_idx = next(iter(alg.unit))
        with pytest.raises(ValidationError, match="not Frobenius"):
            check_frobenius(alg, {unit_idx: Fraction(1)}, 0, 0)

    def test_off_degree_trace_rejected(self):
        alg, basis = build_nilcoxeter(2, 1, 0)
        w0 = basis.index[(1, 0)]
        with pytest.raises(ValidationError, match="trace not graded"):
            check_frobenius(alg, {w0: Fraction(1)}, 0, 0)

    def test_degenerate_trace_fails(self):
        # trace supported on a non-top homogeneous element: graded but singular
        alg, basis = build_nilcoxeter(3, 1, 0)
        from supertower.towers import apply_s, identity_perm
        s1 = basis.index[apply_s(identity_perm(3), 0, side="right")]
        with pytest.raises(ValidationError, match="not Frobenius"):
            check_frobenius(alg, {s1: Fraction(1)}, 1, 0)


class TestNakayama:
    def test_symmetric_even_case_is_identity(self):
        from supertower.superalgebra import Degree, SuperAlgebra
        # the even group algebra of Z/2: symmetric form, identity automorphism
        alg = SuperAlgebra(["1", "g"], [Degree(0, 0), Degree(0, 0)],
                           {0: Fraction(1)},
                           products={(0, 0): {0: Fraction(1)}, (0, 1): {1: Fraction(1)},
                                     (1, 0): {1: Fraction(1)}, (1, 1): {0: Fraction(1)}})
        frob = check_frobenius(alg, {0: Fraction(1)}, 0, 0)
        assert frob.nakayama == Mat.identity(2)

    def test_clifford_identity(self, clifford):
        assert clifford.nakayama == Mat.identity(2)

    @pytest.mark.parametrize("n,d,eps", [(2, 1, 1), (3, 1, 1), (4, 1, 1), (4, 2, 1)])
    def test_nilcoxeter_reversal(self, n, d, eps):
        alg, basis = build_nilcoxeter(n, d, eps)
        frob = nilcoxeter_frobenius(alg, basis)
        assert frob.nakayama == nilcoxeter_nakayama_closed_form(alg, basis)

    def test_defining_identity(self, clifford):
        alg, basis = build_nilcoxeter(3, 1, 1)
        frob = nilcoxeter_frobenius(alg, basis)
        for a in range(alg.dim):
            pa = alg.degrees[a].par
            for b in range(alg.dim):
                sign = -1 if (pa and alg.degrees[b].par) else 1
                lhs = frob.form(a, b)
                rhs = sign * frob.form_vec({b: Fraction(1)}, frob.nakayama.col(a))
                assert lhs == rhs


class TestWreathNakayama:
    def test_even_commutative_base_fixes_transposition(self):
        from supertower.superalgebra import Degree, SuperAlgebra
        triv = SuperAlgebra(["1"], [Degree(0, 0)], {0: Fraction(1)},
                            products={(0, 0): {0: Fraction(1)}}, generators=[])
        base = check_frobenius(triv, {0: Fraction(1)}, 0, 0)
        alg, frob = build_wreath(base, 2)
        # sigma = 0 and the reversal fixes the single transposition
        assert frob.nakayama == wreath_nakayama_closed_form(base, 2, alg)
        assert frob.nakayama == Mat.identity(alg.dim)

    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_clifford_base_matches_closed_form(self, clifford, n):
        alg, frob = build_wreath(clifford, n)
        assert frob.nakayama == wreath_nakayama_closed_form(clifford, n, alg)

    def test_transposition_sign(self, clifford):
        # with an odd trace degree the transposition picks up the sign
        alg, frob = build_wreath(clifford, 2)
        from supertower.towers import all_perms, identity_perm
        perms = all_perms(2)
        s1_idx = 0 * len(perms) + perms.index((1, 0))
        got = frob.nakayama.col(s1_idx)
        assert got == {s1_idx: Fraction(-1)}

    def test_tensor_reversal_sign(self, clifford):
        # psi(c (x) c) = -(c (x) c): two odd factors reversed
        alg, frob = build_wreath(clifford, 2)
        from supertower.towers import all_perms
        perms = all_perms(2)
        cc_idx = (1 * 2 + 1) * len(perms) + perms.index((0, 1))
        assert frob.nakayama.col(cc_idx) == {cc_idx: Fraction(-1)}


class TestFrobeniusTensor:
    def test_unit_factor(self, clifford):
        from supertower.superalgebra import Degree, SuperAlgebra
        triv = SuperAlgebra(["1"], [Degree(0, 0)], {0: Fraction(1)},
                            products={(0, 0): {0: Fraction(1)}}, generators=[])
        triv_frob = check_frobenius(triv, {0: Fraction(1)}, 0, 0)
        combined = frobenius_tensor(clifford, triv_frob)
        assert (combined.delta, combined.sigma) == (clifford.delta, clifford.sigma)
        assert combined.nakayama == tensor_nakayama_matrix(clifford, triv_frob)

    def test_degrees_add(self):
        a2, b2 = build_nilcoxeter(2, 1, 1)
        a3, b3 = build_nilcoxeter(3, 1, 1)
        f2 = nilcoxeter_frobenius(a2, b2)
        f3 = nilcoxeter_frobenius(a3, b3)
        combined = frobenius_tensor(f2, f3)
        assert combined.delta == f2.delta + f3.delta
        assert combined.sigma == (f2.sigma + f3.sigma) & 1

    def test_nakayama_is_signed_tensor(self, clifford):
        a2, b2 = build_nilcoxeter(2, 1, 1)
        a3, b3 = build_nilcoxeter(3, 1, 1)
        f2 = nilcoxeter_frobenius(a2, b2)
        f3 = nilcoxeter_frobenius(a3, b3)
        assert nakayama(frobenius_tensor(f2, f3)) == tensor_nakayama_matrix(f2, f3)
        assert nakayama(frobenius_tensor(clifford, clifford)) == \
            tensor_nakayama_matrix(clifford, clifford)


class TestDualIso:
    def test_builtins_pass(self, clifford):
        assert check_dual_iso(clifford).ok
        for n in (2, 3):
            alg, basis = build_nilcoxeter(n, 1, 1)
            assert check_dual_iso(nilcoxeter_frobenius(alg, basis)).ok

    def test_one_dimensional(self):
        from supertower.superalgebra import Degree, SuperAlgebra
        triv = SuperAlgebra(["1"], [Degree(0, 0)], {0: Fraction(1)},
                            products={(0, 0): {0: Fraction(1)}}, generators=[])
        assert check_dual_iso(check_frobenius(triv, {0: Fraction(1)}, 0, 0)).ok

    def test_identity_replacement_fails(self):
        alg, basis = build_nilcoxeter(3, 1, 0)
        frob = nilcoxeter_frobenius(alg, basis)
        import dataclasses
        tampered = dataclasses.replace(frob, nakayama=Mat.identity(alg.dim))
        rep = check_dual_iso(tampered)
        assert not rep.ok
        assert any(kind == "nakayama compatibility" for kind, _ in rep.violations)
