"""Frobenius structures on graded superalgebras.

A structure packages a homogeneous trace, the Gram form ``(a, b) = tr(ab)``,
and the automorphism measuring the form's signed asymmetry,
``(a, b) == (-1)**(par(a) par(b)) * (b, psi(a))``.  Nondegeneracy is tested
as Gram invertibility over the rationals, which under invariance is
equivalent to the kernel of the trace containing no nonzero left ideal.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import InternalInconsistencyError, ValidationError
from .linalg import Eliminator, Mat, Vec
from .superalgebra import (
    Degree,
    SuperAlgebra,
    ValidationReport,
    tensor_algebra,
    validate_automorphism,
)


@dataclass
class FrobeniusStructure:
    algebra: SuperAlgebra
    trace: Vec               # value of the trace on each basis element
    delta: int               # the form lands in bidegree (delta, sigma)
    sigma: int
    gram: Mat                # gram.entry(i, j) == tr(e_i e_j)
    nakayama: Mat

    def form(self, i: int, j: int) -> Fraction:
        return self.gram.entry(i, j)

    def form_vec(self, u: Vec, v: Vec) -> Fraction:
        out = Fraction(0)
        for i, a in u.items():
            col = {}
            for j, b in v.items():
                out += a * b * self.gram.entry(i, j)
        return out

    def __repr__(self) -> str:
        return f"FrobeniusStructure({self.algebra.name}, degree=({self.delta},{self.sigma}))"


def _trace_of_vec(trace: Vec, v: Vec) -> Fraction:
    out = Fraction(0)
    for k, c in v.items():
        t = trace.get(k)
        if t:
            out += c * t
    return out


def check_frobenius(
    alg: SuperAlgebra,
    trace: Vec,
    delta: int,
    sigma: int,
    check_invariance: bool = True,
) -> FrobeniusStructure:
    """Build and verify a Frobenius structure; raises on failure.

    Checks: the trace is supported in bidegree ``(delta, sigma)``, the Gram
    matrix is invertible, and ``(ab, c) == (a, bc)`` on basis triples.
    """
    sigma &= 1
    trace = {i: Fraction(c) for i, c in trace.items() if c}
    for i in trace:
        if alg.degrees[i] != Degree(delta, sigma):
            raise ValidationError("trace not graded")
    gram = Mat(alg.dim, alg.dim)
    trace_support = frozenset(trace)
    for i in range(alg.dim):
        for j in range(alg.dim):
            # skip products whose support provably misses the trace
            if not (alg.product_support(i, j) & trace_support):
                continue
            val = _trace_of_vec(trace, alg.basis_product(i, j))
            if val:
                gram.cols.setdefault(j, {})[i] = val
    el = Eliminator()
    for j in range(alg.dim):
        col = gram.cols.get(j)
        if col:
            el.add_row(dict(col))
    if el.rank != alg.dim:
        raise ValidationError("not Frobenius for this trace")
    if check_invariance:
        for i in range(alg.dim):
            for j in range(alg.dim):
                pij = alg.basis_product(i, j)
                for k in range(alg.dim):
                    lhs = Fraction(0)
                    for t, c in pij.items():
                        g = gram.entry(t, k)
                        if g:
                            lhs += c * g
                    rhs = Fraction(0)
                    for t, c in alg.basis_product(j, k).items():
                        g = gram.entry(i, t)
                        if g:
                            rhs += c * g
                    if lhs != rhs:
                        raise ValidationError(f"form not invariant at triple ({i},{j},{k})")
    psi = nakayama_matrix(alg, gram)
    return FrobeniusStructure(alg, trace, delta, sigma, gram, psi)


def nakayama_matrix(alg: SuperAlgebra, gram: Mat) -> Mat:
    """Solve for the automorphism column by column and verify it.

    ``(b, psi(a)) == (-1)**(par(a) par(b)) * (a, b)`` for all basis ``b``.
    A non-multiplicative solution means the supplied data was inconsistent
    and raises an internal-inconsistency error.
    """
    from .linalg import solve

    psi = Mat(alg.dim, alg.dim)
    for a in range(alg.dim):
        pa = alg.degrees[a].par
        rhs: Vec = {}
        for b in range(alg.dim):
            g = gram.entry(a, b)
            if g:
                rhs[b] = -g if (pa and alg.degrees[b].par) else g
        col = solve(gram, rhs)
        if col is None:
            raise InternalInconsistencyError("gram system for the nakayama map is inconsistent")
        if col:
            psi.cols[a] = col
    report = validate_automorphism(alg, psi)
    if not report.ok:
        raise InternalInconsistencyError(
            f"solved nakayama map is not an automorphism: {report.violations[:3]}"
        )
    return psi


def nakayama(frob: FrobeniusStructure) -> Mat:
    return frob.nakayama


def frobenius_tensor(f1: FrobeniusStructure, f2: FrobeniusStructure, algebra: SuperAlgebra | None = None) -> FrobeniusStructure:
    """The structure on the tensor algebra, with trace ``tr1 (x) tr2``."""
    ab = algebra if algebra is not None else tensor_algebra(f1.algebra, f2.algebra)
    dim2 = f2.algebra.dim
    trace: Vec = {}
    for i, a in f1.trace.items():
        for j, b in f2.trace.items():
            trace[i * dim2 + j] = a * b
    return check_frobenius(ab, trace, f1.delta + f2.delta, (f1.sigma + f2.sigma) & 1)


def tensor_nakayama_matrix(f1: FrobeniusStructure, f2: FrobeniusStructure) -> Mat:
    """The factorwise tensor ``psi1 (x) psi2`` (both maps are even, so no sign)."""
    dim1, dim2 = f1.algebra.dim, f2.algebra.dim
    out = Mat(dim1 * dim2, dim1 * dim2)
    for a in range(dim1):
        ca = f1.nakayama.cols.get(a, {})
        for b in range(dim2):
            cb = f2.nakayama.cols.get(b, {})
            col: Vec = {}
            for i, x in ca.items():
                for j, y in cb.items():
                    col[i * dim2 + j] = x * y
            if col:
                out.cols[a * dim2 + b] = col
    return out


def check_dual_iso(frob: FrobeniusStructure) -> ValidationReport:
    """Exhaustive check that the form identifies the algebra with its shifted dual.

    The candidate map sends ``b`` to the functional
    ``a -> (-1)**(par(a) par(b)) (a, b)``; it must be a degree-zero map of
    left modules, and composing with the right action must match
    multiplication through the nakayama automorphism:
    ``phi(b) . a == phi(b psi(a))`` evaluated against every basis element.
    """
    alg = frob.algebra
    bad: list[tuple[str, tuple]] = []
    dim = alg.dim

    def phi(bvec: Vec) -> Vec:
        # functional coordinates: phi(b)(e_a)
        out: Vec = {}
        for a in range(dim):
            pa = alg.degrees[a].par
            val = Fraction(0)
            for b, c in bvec.items():
                g = frob.gram.entry(a, b)
                if g:
                    val += -c * g if (pa and alg.degrees[b].par) else c * g
            if val:
                out[a] = val
        return out

    # degree-zero into the shifted dual: phi(b) nonzero on e_a only when
    # deg(a) + deg(b) == (delta, sigma)
    target = Degree(frob.delta, frob.sigma)
    for b in range(dim):
        f = phi({b: Fraction(1)})
        for a in f:
            if alg.degrees[a] + alg.degrees[b] != target:
                bad.append(("degree zero", (b, a)))

    # left-module map: phi(c b) == (-1)**(par(c) par(phi(b))) phi(b) o rho^r_c
    for c in range(dim):
        pc = alg.degrees[c].par
        for b in range(dim):
            lhs = phi(alg.basis_product(c, b))
            f = phi({b: Fraction(1)})
            pf = alg.degrees[b].par  # phi(b) sits in the dual with b's parity
            rhs: Vec = {}
            for a in range(dim):
                # (c . f)(e_a) = (-1)^(pc*pf) f(rho^r_c e_a)
                #             = (-1)^(pc*pf + pc*par(a)) f(e_a c)
                val = Fraction(0)
                for k, co in alg.basis_product(a, c).items():
                    fk = f.get(k)
                    if fk:
                        val += co * fk
                if val:
                    sign = -1 if (pc and ((pf + alg.degrees[a].par) & 1)) else 1
                    rhs[a] = sign * val
            if lhs != rhs:
                bad.append(("left module map", (c, b)))

    # right action versus nakayama twist: (phi(b) . a)(x) == phi(b psi(a))(x)
    for b in range(dim):
        f = phi({b: Fraction(1)})
        for a in range(dim):
            twisted = phi(alg.product_vec({b: Fraction(1)}, frob.nakayama.col(a)))
            for x in range(dim):
                # (f . a)(e_x) = f(a e_x)
                val = Fraction(0)
                for k, co in alg.basis_product(a, x).items():
                    fk = f.get(k)
                    if fk:
                        val += co * fk
                if val != twisted.get(x, Fraction(0)):
                    bad.append(("nakayama compatibility", (b, a, x)))
    return ValidationReport(f"dual bimodule iso for {alg.name}", bad)
