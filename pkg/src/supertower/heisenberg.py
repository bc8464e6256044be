"""The twisted Heisenberg double of a registered tower and its Fock space.

Elements live in the tensor product of the simple-side and projective-side
class modules, truncated at the tower bound.  The smash multiplication
follows the pairing-adjoint form: the projective factor acts on the simple
factor through the coproduct and the pairing, with twist-scalar exponents
controlled by the biadditive data.  The vacuum module is the simple side
itself; the projective-image submodule on powers of the level-one class
realizes the quantum Weyl algebra for the nilCoxeter tower.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import ExactDivisionError, ValidationError
from .ground import FULL, GroundElem, TwistScalar, divide_exact
from .grothendieck import (
    G_SIDE,
    K_SIDE,
    BasisKey,
    GrothLayer,
    GrothVector,
)
from .reporting import CheckRecord
from .superalgebra import graded_dim, induce_module, restrict_module
from .towers import TowerSpec


def derive_xi(chi: tuple[int, int], gamma: tuple[int, int]) -> tuple[int, int]:
    """The coproduct twist forced on the dual side by the pairing twist.

    For a one-dimensional level lattice the transposes act trivially on the
    stored multiples, leaving ``(chi' + gamma' - gamma'', chi'' + gamma' - gamma'')``.
    """
    return (chi[0] + gamma[0] - gamma[1], chi[1] + gamma[0] - gamma[1])


def check_compatibility(twist: "TwistDataSet") -> bool:
    """The product-side twist must be minus the transpose of the pairing twist."""
    return twist.chi[0] == -twist.gamma[0]


@dataclass(frozen=True)
class TwistDataSet:
    """All biadditive exponent data for one Heisenberg double."""

    c: TwistScalar
    chi: tuple[int, int]
    gamma: tuple[int, int]
    xi: tuple[int, int] = field(init=False)
    compatible: bool = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "xi", derive_xi(self.chi, self.gamma))
        object.__setattr__(self, "compatible", check_compatibility(self))

    @staticmethod
    def for_tower(tower: TowerSpec) -> "TwistDataSet":
        return TwistDataSet(tower.twist, tower.chi, tower.gamma)


@dataclass
class HeisenbergElem:
    """A finitely supported combination of ``simple-class # projective-class`` keys."""

    terms: dict[tuple[BasisKey, BasisKey], GroundElem] = field(default_factory=dict)

    def cleaned(self) -> "HeisenbergElem":
        return HeisenbergElem({k: c for k, c in self.terms.items() if not c.is_zero()})

    def add(self, other: "HeisenbergElem") -> "HeisenbergElem":
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out[k] + c if k in out else c
        return HeisenbergElem({k: c for k, c in out.items() if not c.is_zero()})

    def scale(self, c: GroundElem) -> "HeisenbergElem":
        return HeisenbergElem({k: v * c for k, v in self.terms.items() if not (v * c).is_zero()})

    def __eq__(self, other) -> bool:
        if not isinstance(other, HeisenbergElem):
            return NotImplemented
        return self.cleaned().terms == other.cleaned().terms

    def to_records(self, double: "HeisenbergDouble") -> list[dict]:
        out = []
        for (ka, kx) in sorted(self.terms):
            out.append({
                "plus_level": ka[0],
                "plus_label": double.layer.basis_label(G_SIDE, *ka),
                "minus_level": kx[0],
                "minus_label": double.layer.basis_label(K_SIDE, *kx),
                "coeff": self.terms[(ka, kx)].to_triples(),
            })
        return out

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        bits = [f"({c})*[{ka[0]}:{ka[1]}#{kx[0]}:{kx[1]}]"
                for (ka, kx), c in sorted(self.terms.items())]
        return " + ".join(bits)


class HeisenbergDouble:
    """Smash-product arithmetic over one Grothendieck layer."""

    def __init__(self, layer: GrothLayer, twist: TwistDataSet | None = None):
        self.layer = layer
        self.twist = twist if twist is not None else TwistDataSet.for_tower(layer.tower)
        if not self.twist.compatible:
            raise ValidationError("incompatible twist data: chi' must equal -gamma'")

    # -- constructors -----------------------------------------------------------

    def unit(self) -> HeisenbergElem:
        return HeisenbergElem({(((0, 0)), ((0, 0))): self.layer.one()})

    def monomial(self, a: BasisKey, x: BasisKey, coeff: GroundElem | None = None) -> HeisenbergElem:
        return HeisenbergElem({(a, x): coeff if coeff is not None else self.layer.one()})

    def plus_elem(self, a: BasisKey) -> HeisenbergElem:
        return self.monomial(a, (0, 0))

    def minus_elem(self, x: BasisKey) -> HeisenbergElem:
        return self.monomial((0, 0), x)

    def _scalar(self, k: int) -> GroundElem:
        return self.layer.scalar(k)

    # -- the left regular action --------------------------------------------------

    def regular_action(self, x: GrothVector, b: GrothVector) -> GrothVector:
        """Pairing-adjoint action of a projective-side class on a simple-side class."""
        assert x.side == K_SIDE and b.side == G_SIDE
        layer = self.layer
        g1 = self.twist.gamma[0]
        out = GrothVector(G_SIDE)
        for (kb1, kb2), cb in layer.delta(b).items():
            p = layer.pairing(x, layer.basis_vector(G_SIDE, *kb2))
            if p.is_zero():
                continue
            coeff = cb * p * self._scalar(g1 * kb1[0] * kb2[0])
            out = out.add(layer.basis_vector(G_SIDE, *kb1).scale(coeff))
        return out

    # -- the smash product ---------------------------------------------------------

    def smash_multiply(self, h1: HeisenbergElem, h2: HeisenbergElem) -> HeisenbergElem:
        """Bilinear extension of the commutation-and-contract product.

        For monomials ``a # x`` and ``b # y``: sum over the coproducts of
        ``x`` and ``b`` of the twist power
        ``gamma''(|b|, |x2|) + xi''(|b| - |x1|, |x2|) + gamma'(|b1|, |b2|)``
        times ``<x1, b2>  a b1 # x2 y``.
        """
        layer = self.layer
        g1, g2 = self.twist.gamma
        xi2 = self.twist.xi[1]
        out = HeisenbergElem()
        for (ka, kx), c1 in h1.terms.items():
            dx = layer.basis_delta(K_SIDE, kx)
            for (kb, ky), c2 in h2.terms.items():
                base = c1 * c2
                if base.is_zero():
                    continue
                db = layer.basis_delta(G_SIDE, kb)
                for (kx1, kx2), cx in dx.items():
                    for (kb1, kb2), cbb in db.items():
                        p = layer.pairing(
                            layer.basis_vector(K_SIDE, *kx1),
                            layer.basis_vector(G_SIDE, *kb2),
                        )
                        if p.is_zero():
                            continue
                        exp = (
                            g2 * kb[0] * kx2[0]
                            + xi2 * (kb[0] - kx1[0]) * kx2[0]
                            + g1 * kb1[0] * kb2[0]
                        )
                        coeff = base * cx * cbb * p * self._scalar(exp)
                        left = layer.basis_nabla(G_SIDE, ka, kb1)
                        right = layer.basis_nabla(K_SIDE, kx2, ky)
                        for kg, cg in left.entries.items():
                            for kk, ck in right.entries.items():
                                term = coeff * cg * ck
                                if term.is_zero():
                                    continue
                                key = (kg, kk)
                                out.terms[key] = (
                                    out.terms[key] + term if key in out.terms else term
                                )
        return out.cleaned()

    # -- the Fock space --------------------------------------------------------------

    def fock_act(self, h: HeisenbergElem, v: GrothVector) -> GrothVector:
        """Act on the vacuum module: contract the projective part, multiply the rest."""
        assert v.side == G_SIDE
        layer = self.layer
        out = GrothVector(G_SIDE)
        for (ka, kx), c in h.terms.items():
            acted = self.regular_action(layer.basis_vector(K_SIDE, *kx), v)
            if acted.is_zero():
                continue
            out = out.add(layer.nabla(layer.basis_vector(G_SIDE, *ka), acted).scale(c))
        return out

    def vacuum(self) -> GrothVector:
        return self.layer.unit_vector(G_SIDE)


# -- the projective-image Fock space (powers of the level-one class) ---------------


class PowerBasis:
    """The submodule spanned by powers of the level-one simple class.

    Vectors are stored as coefficient dictionaries on the power basis; the
    conversion back from class form divides by the class of the n-th power,
    which is exact precisely when a vector lies in the projective image.
    """

    def __init__(self, double: HeisenbergDouble):
        self.double = double
        self.layer = double.layer
        self._powers: list[GrothVector] = [self.layer.unit_vector(G_SIDE)]

    def power_class(self, n: int) -> GrothVector:
        while len(self._powers) <= n:
            prev = self._powers[-1]
            y1 = self.layer.basis_vector(G_SIDE, 1, 0)
            self._powers.append(self.layer.nabla(prev, y1))
        return self._powers[n]

    def from_powers(self, coeffs: dict[int, GroundElem]) -> GrothVector:
        out = GrothVector(G_SIDE)
        for n, c in coeffs.items():
            out = out.add(self.power_class(n).scale(c))
        return out

    def to_powers(self, v: GrothVector) -> dict[int, GroundElem] | None:
        """Inverse of ``from_powers``; None when the vector leaves the image."""
        out: dict[int, GroundElem] = {}
        for (lv, i), c in v.cleaned().entries.items():
            if i != 0:
                return None
            lead = self.power_class(lv).entries.get((lv, 0))
            if lead is None:
                return None
            try:
                out[lv] = divide_exact(c, lead)
            except ExactDivisionError:
                return None
        return {n: c for n, c in out.items() if not c.is_zero()}

    def lower_op(self, coeffs: dict[int, GroundElem]) -> dict[int, GroundElem] | None:
        """The level-one projective class acting through the pairing."""
        x = self.layer.basis_vector(K_SIDE, 1, 0)
        acted = self.double.regular_action(x, self.from_powers(coeffs))
        return self.to_powers(acted)

    def raise_op(self, coeffs: dict[int, GroundElem]) -> dict[int, GroundElem]:
        """Multiplication by the level-one simple class."""
        return {n + 1: c for n, c in coeffs.items()}


def _powers_eq(a: dict[int, GroundElem] | None, b: dict[int, GroundElem]) -> bool:
    if a is None:
        return False
    aa = {n: c for n, c in a.items() if not c.is_zero()}
    bb = {n: c for n, c in b.items() if not c.is_zero()}
    return aa == bb


def weyl_check(double: HeisenbergDouble, max_power: int) -> list[CheckRecord]:
    """The twisted Weyl relation, as elements and as operators on powers.

    Element level: lowering times raising minus the twist scalar times
    raising times lowering equals the identity element of the double.
    Operator level: the same identity applied to every power of the
    level-one class up to the bound, plus the lowering rule
    ``lower(e_n) == [n] e_(n-1)`` with the twisted integer coefficient.
    """
    from .ground import qpi_integer

    layer = double.layer
    records = []
    c1 = layer.scalar(1)
    lower = double.minus_elem((1, 0))
    raise_ = double.plus_elem((1, 0))
    lhs = double.smash_multiply(lower, raise_)
    rhs = double.smash_multiply(raise_, lower).scale(c1)
    records.append(CheckRecord(
        "weyl-element-identity", (), lhs.add(rhs.scale(GroundElem.from_int(-1, layer.mode))) == double.unit(),
        lhs=repr(lhs), rhs=repr(rhs.add(double.unit())),
    ))
    basis = PowerBasis(double)
    ok_ops = True
    first = None
    for n in range(max_power):
        e_n = {n: layer.one()}
        via_raise = basis.lower_op(basis.raise_op(e_n))
        lowered = basis.lower_op(e_n)
        via_lower = {k: v * c1 for k, v in basis.raise_op(lowered).items()} if lowered is not None else None
        if via_raise is None or via_lower is None:
            ok_ops = False
            first = first or n
            continue
        diff = dict(via_raise)
        for k, v in via_lower.items():
            diff[k] = diff[k] - v if k in diff else GroundElem.zero(layer.mode) - v
        if not _powers_eq({k: v for k, v in diff.items() if not v.is_zero()}, e_n):
            ok_ops = False
            first = first if first is not None else n
    records.append(CheckRecord(
        "weyl-operator-identity", (max_power,), ok_ops,
        detail="" if ok_ops else f"first failing power {first}",
    ))
    ok_lower = True
    ok_invariance = True
    for n in range(1, max_power + 1):
        got = basis.lower_op({n: layer.one()})
        if got is None:
            ok_invariance = False
            ok_lower = False
            continue
        coeff = qpi_integer(n, double.twist.c, layer.mode)
        if not _powers_eq(got, {n - 1: coeff}):
            ok_lower = False
    records.append(CheckRecord(
        "weyl-lowering-rule", (max_power,), ok_lower,
        rhs="[n] times the previous power",
    ))
    records.append(CheckRecord(
        "power-image-invariance", (max_power,), ok_invariance,
        rhs="lowering keeps the projective image",
    ))
    return records


# -- truncation-wide checks ---------------------------------------------------------


def _single_key(level: int) -> BasisKey:
    return (level, 0)


def check_action_compat(double: HeisenbergDouble, max_level: int) -> list[CheckRecord]:
    """Smash associativity and the module law on all bounded monomial tuples."""
    layer = double.layer
    records = []
    sums3 = [
        (a1, a2, a3)
        for a1 in range(max_level + 1)
        for a2 in range(max_level + 1 - a1)
        for a3 in range(max_level + 1 - a1 - a2)
    ]
    ok_assoc = True
    first = None
    for (a1, a2, a3) in sums3:
        for (x1, x2, x3) in sums3:
            h1 = double.monomial(_single_key(a1), _single_key(x1))
            h2 = double.monomial(_single_key(a2), _single_key(x2))
            h3 = double.monomial(_single_key(a3), _single_key(x3))
            lhs = double.smash_multiply(double.smash_multiply(h1, h2), h3)
            rhs = double.smash_multiply(h1, double.smash_multiply(h2, h3))
            if lhs != rhs:
                ok_assoc = False
                if first is None:
                    first = ((a1, x1), (a2, x2), (a3, x3))
    records.append(CheckRecord(
        "smash-associativity", (max_level,), ok_assoc,
        detail="" if ok_assoc else f"first failing triple {first}",
    ))
    ok_module = True
    first = None
    for a1 in range(max_level + 1):
        for a2 in range(max_level + 1 - a1):
            for m in range(max_level + 1 - a1 - a2):
                for x1 in range(max_level + 1):
                    for x2 in range(max_level + 1 - x1):
                        h1 = double.monomial(_single_key(a1), _single_key(x1))
                        h2 = double.monomial(_single_key(a2), _single_key(x2))
                        v = layer.basis_vector(G_SIDE, m, 0)
                        lhs = double.fock_act(double.smash_multiply(h1, h2), v)
                        rhs = double.fock_act(h1, double.fock_act(h2, v))
                        if lhs != rhs:
                            ok_module = False
                            if first is None:
                                first = ((a1, x1), (a2, x2), m)
    records.append(CheckRecord(
        "fock-module-law", (max_level,), ok_module,
        detail="" if ok_module else f"first failing instance {first}",
    ))
    return records


def check_general_relation(double: HeisenbergDouble, max_level: int) -> list[CheckRecord]:
    """The five-exponent commutation rule for the regular action on products."""
    layer = double.layer
    g1, g2 = double.twist.gamma
    c1, c2 = double.twist.chi
    records = []
    ok = True
    first = None
    for lx in range(max_level + 1):
        kx = _single_key(lx)
        dx = layer.basis_delta(K_SIDE, kx)
        for la in range(max_level + 1):
            for lb in range(max_level + 1 - la):
                a = layer.basis_vector(G_SIDE, la, 0)
                b = layer.basis_vector(G_SIDE, lb, 0)
                xv = layer.basis_vector(K_SIDE, *kx)
                lhs = double.regular_action(xv, layer.nabla(a, b))
                rhs = GrothVector(G_SIDE)
                for (kx1, kx2), cx in dx.items():
                    act_a = double.regular_action(layer.basis_vector(K_SIDE, *kx1), a)
                    act_b = double.regular_action(layer.basis_vector(K_SIDE, *kx2), b)
                    if act_a.is_zero() or act_b.is_zero():
                        continue
                    exp = (
                        g1 * (la - kx1[0]) * kx2[0]
                        + g1 * (lb - kx2[0]) * kx1[0]
                        + g2 * kx1[0] * kx2[0]
                        + c1 * kx1[0] * (lb - kx2[0])
                        + c2 * (la - kx1[0]) * kx2[0]
                    )
                    rhs = rhs.add(layer.nabla(act_a, act_b).scale(cx * layer.scalar(exp)))
                if lhs != rhs:
                    ok = False
                    if first is None:
                        first = (lx, la, lb)
    records.append(CheckRecord(
        "regular-action-product-rule", (max_level,), ok,
        detail="" if ok else f"first failing levels {first}",
    ))
    return records


# -- truncated faithfulness -----------------------------------------------------------

LaurentPoly = dict[int, Fraction]


def _lp_sub_mul(a: LaurentPoly, b: LaurentPoly, c: LaurentPoly, d: LaurentPoly) -> LaurentPoly:
    """``a*b - c*d`` on Laurent polynomials."""
    out: LaurentPoly = {}
    for e1, v1 in a.items():
        for e2, v2 in b.items():
            k = e1 + e2
            out[k] = out.get(k, Fraction(0)) + v1 * v2
    for e1, v1 in c.items():
        for e2, v2 in d.items():
            k = e1 + e2
            out[k] = out.get(k, Fraction(0)) - v1 * v2
    return {k: v for k, v in out.items() if v}


def _laurent_rows_rank(rows: list[dict[int, LaurentPoly]]) -> int:
    """Exact rank over the rational function field by cross-multiplication."""
    work = [dict(r) for r in rows if r]
    rank = 0
    while work:
        piv_col = min(min(r) for r in work)
        piv_idx = next(i for i, r in enumerate(work) if piv_col in r)
        piv = work.pop(piv_idx)
        rank += 1
        new_work = []
        for r in work:
            if piv_col in r:
                lead = r[piv_col]
                reduced = {}
                cols = set(r) | set(piv)
                for col in cols:
                    val = _lp_sub_mul(
                        r.get(col, {}), piv[piv_col], piv.get(col, {}), lead
                    )
                    if val:
                        reduced[col] = val
                if reduced:
                    new_work.append(reduced)
            else:
                new_work.append(r)
        work = new_work
    return rank


def check_faithfulness_truncated(double: HeisenbergDouble, max_level: int) -> list[CheckRecord]:
    """Linear independence of all bounded monomials acting on the doubled window.

    Builds the truncated action matrix of every ``a # x`` with levels at
    most the bound on the vacuum module up to twice the bound, clears the
    parity generator by both evaluations, and certifies full row rank by
    exact elimination over the rational function field.
    """
    layer = double.layer
    window = 2 * max_level
    if window > layer.tower.n_max:
        raise ValidationError("faithfulness window exceeds the tower truncation")
    monomials = [
        (a, x) for a in range(max_level + 1) for x in range(max_level + 1)
    ]
    rows_plus: list[dict[int, LaurentPoly]] = []
    rows_minus: list[dict[int, LaurentPoly]] = []
    for (a, x) in monomials:
        mono = double.monomial(_single_key(a), _single_key(x))
        row_p: dict[int, LaurentPoly] = {}
        row_m: dict[int, LaurentPoly] = {}
        for m in range(window + 1):
            if m - x + a > window or m - x < 0:
                continue
            image = double.fock_act(mono, layer.basis_vector(G_SIDE, m, 0))
            for (lv, i), coeff in image.cleaned().entries.items():
                feature = (window + 1) * m + lv
                ev_p = coeff.eval_pi(1)
                ev_m = coeff.eval_pi(-1)
                if ev_p:
                    row_p[feature] = ev_p
                if ev_m:
                    row_m[feature] = ev_m
        rows_plus.append(row_p)
        rows_minus.append(row_m)
    rank_p = _laurent_rows_rank(rows_plus)
    rank_m = _laurent_rows_rank(rows_minus)
    ok = rank_p == len(monomials) and rank_m == len(monomials)
    return [CheckRecord(
        "truncated-faithfulness", (max_level,), ok,
        lhs=f"ranks ({rank_p},{rank_m})", rhs=f"{len(monomials)} monomials",
    )]


# -- the decategorified Weyl relation at module level ----------------------------------


def categorified_weyl_shadow(tower: TowerSpec, max_level: int,
                             general_shift: bool = False) -> list[CheckRecord]:
    """Graded dimensions of restriction-after-induction versus the Weyl recursion.

    For each declared module at each level: restricting the one-step
    induction must have the graded dimension of the shifted one-step
    induction of the restriction plus the module itself.  The canonical
    statement fixes degree shift one with even parity (twist ``(1, 0)``);
    the general-twist shift is an extrapolation enabled separately and
    reported as such.
    """
    records = []
    if general_shift:
        sd, ss = tower.twist.d, tower.twist.eps
        tag = "categorified-weyl-shadow-general-shift"
    else:
        if (tower.twist.d, tower.twist.eps) != (1, 0):
            raise ValidationError("the canonical shadow requires twist (1, 0)")
        sd, ss = 1, 0
        tag = "categorified-weyl-shadow"
    shift = GroundElem.monomial(sd, ss)
    for lv in range(min(max_level, tower.n_max - 1) + 1):
        for decl in (tower.declared_projectives(lv) + tower.declared_simples(lv)):
            mod = decl.module
            up = tower.step_hom(lv)
            lhs = graded_dim(restrict_module(up, induce_module(up, mod)))
            if lv == 0:
                middle = GroundElem.zero(FULL)
            else:
                down = tower.step_hom(lv - 1)
                middle = graded_dim(induce_module(down, restrict_module(down, mod)))
            rhs = shift * middle + graded_dim(mod)
            records.append(CheckRecord(
                tag, (lv, decl.label), lhs == rhs,
                lhs=repr(lhs), rhs=repr(rhs),
            ))
    return records
