"""Cross-module invariants at the bounds the per-module contracts state."""

import time

from supertower.ground import GroundElem, TwistScalar, qpi_factorial
from supertower.grothendieck import G_SIDE, K_SIDE
from supertower.superalgebra import graded_dim, regular_module, shift_module
from supertower.towers import build_nilcoxeter, nakayama_of_wreath, clifford_base


def test_graded_dim_shift_law():
    alg, _ = build_nilcoxeter(3, 1, 1)
    m = regular_module(alg)
    base = graded_dim(m)
    for (n, s) in [(2, 0), (0, 1), (-1, 1), (3, 1)]:
        assert graded_dim(shift_module(m, n, s)) == GroundElem.monomial(n, s) * base


def test_level6_associativity_generator_leading():
    """Associativity audit at six strands.

    Checking ``(u_g a) b == u_g (a b)`` for every generator ``g`` and all
    basis pairs implies full associativity: any basis element is the
    left-associated product along its canonical word, so the general triple
    reduces to generator-leading ones by induction on length.
    """
    from fractions import Fraction

    alg, basis = build_nilcoxeter(6, 1, 1)
    gens = alg.generating_set()
    one = Fraction(1)
    dim = alg.dim
    for g in gens:
        for a in range(dim):
            ga = alg.basis_product(g, a)
            for b in range(dim):
                lhs = alg.product_vec(ga, {b: one})
                rhs = alg.product_vec({g: one}, alg.basis_product(a, b))
                assert lhs == rhs, (g, a, b)


def test_pairing_perfect_levelwise(layer6_11):
    for n in range(7):
        table = layer6_11.pairing_table(n)
        assert len(table) == 1 and table[0][0].is_unit()


def test_coassociativity_to_level_six(layer6_11):
    for side in (G_SIDE, K_SIDE):
        for n in range(7):
            d = layer6_11.basis_delta(side, (n, 0))
            lhs, rhs = {}, {}
            for ((ka, kb), c) in d.items():
                for ((k1, k2), c2) in layer6_11.basis_delta(side, ka).items():
                    key = (k1, k2, kb)
                    lhs[key] = lhs.get(key, layer6_11.zero()) + c * c2
                for ((k1, k2), c2) in layer6_11.basis_delta(side, kb).items():
                    key = (ka, k1, k2)
                    rhs[key] = rhs.get(key, layer6_11.zero()) + c * c2
            assert {k: v for k, v in lhs.items() if not v.is_zero()} == \
                {k: v for k, v in rhs.items() if not v.is_zero()}


def test_product_associativity_to_level_six(layer6_11):
    for side in (G_SIDE, K_SIDE):
        for a in range(1, 5):
            for b in range(1, 5):
                for c in range(1, 5):
                    if a + b + c > 6:
                        continue
                    va = layer6_11.basis_vector(side, a, 0)
                    vb = layer6_11.basis_vector(side, b, 0)
                    vc = layer6_11.basis_vector(side, c, 0)
                    assert layer6_11.nabla(layer6_11.nabla(va, vb), vc) == \
                        layer6_11.nabla(va, layer6_11.nabla(vb, vc))


def test_nakayama_of_wreath_op():
    cl = clifford_base()
    for n in (1, 2):
        mat = nakayama_of_wreath(cl, n)
        assert mat.nrows == cl.algebra.dim ** n * [1, 1, 2][n]


def test_power_invariance_to_level_eight():
    from supertower.grothendieck import GrothLayer
    from supertower.heisenberg import HeisenbergDouble, PowerBasis
    from supertower.towers import build_nilcoxeter_tower
    tower = build_nilcoxeter_tower(8, 1, 0, frobenius_cap=0)
    dbl = HeisenbergDouble(GrothLayer(tower))
    basis = PowerBasis(dbl)
    for n in range(1, 9):
        assert basis.lower_op({n: dbl.layer.one()}) is not None
