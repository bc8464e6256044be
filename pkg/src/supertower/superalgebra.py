"""Finite-dimensional graded superalgebras over exact rationals.

An algebra is given by a homogeneous basis, a degree table, sparse structure
constants and a unit vector.  Supermodules store one exact action matrix per
algebra basis element (computed lazily for large algebras).  All sign rules
live here: Koszul signs in tensor products and outer tensors, parity-shift
signs, signed transposes for duals, and the sign-commutation constraint that
defines graded homomorphism spaces.

Left modules satisfy ``act(a) @ act(b) == act(ab)``; right modules store the
matrices of right multiplication, so ``act(ab) == act(b) @ act(a)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from .errors import ValidationError
from .ground import FULL, GroundElem
from .linalg import Eliminator, Mat, Vec, vec_axpy


@dataclass(frozen=True)
class Degree:
    """An (integer, parity) bidegree."""

    z: int
    par: int

    def __post_init__(self):
        object.__setattr__(self, "par", self.par & 1)

    def __add__(self, other: "Degree") -> "Degree":
        return Degree(self.z + other.z, (self.par + other.par) & 1)

    def __neg__(self) -> "Degree":
        return Degree(-self.z, self.par)

    def shifted(self, n: int, s: int) -> "Degree":
        return Degree(self.z + n, (self.par + s) & 1)


LEFT = "left"
RIGHT = "right"


class SuperAlgebra:
    """A finite-dimensional bigraded superalgebra with sparse products.

    ``products`` maps a basis pair ``(i, j)`` to the sparse expansion of
    ``e_i e_j``; pairs may be filled lazily through ``product_fn`` so that
    large algebras never materialize a full multiplication table unless
    something actually walks all of it.
    """

    def __init__(
        self,
        labels: Sequence[str],
        degrees: Sequence[Degree],
        unit: Vec,
        products: dict[tuple[int, int], Vec] | None = None,
        product_fn: Callable[[int, int], Vec] | None = None,
        generators: Sequence[int] | None = None,
        support_fn: Callable[[int, int], frozenset] | None = None,
        name: str = "",
    ):
        assert len(labels) == len(degrees)
        self.labels = list(labels)
        self.degrees = list(degrees)
        self.unit = {i: Fraction(c) for i, c in unit.items() if c}
        self._products: dict[tuple[int, int], Vec] = dict(products or {})
        self._product_fn = product_fn
        self._support_fn = support_fn
        self.generators = list(generators) if generators is not None else None
        self.name = name or f"algebra(dim={len(labels)})"

    @property
    def dim(self) -> int:
        return len(self.labels)

    def degree(self, i: int) -> Degree:
        return self.degrees[i]

    def basis_product(self, i: int, j: int) -> Vec:
        key = (i, j)
        got = self._products.get(key)
        if got is None:
            if self._product_fn is None:
                return {}
            got = self._product_fn(i, j)
            self._products[key] = got
        return got

    def product_vec(self, u: Vec, v: Vec) -> Vec:
        out: Vec = {}
        for i, a in u.items():
            for j, b in v.items():
                vec_axpy(out, a * b, self.basis_product(i, j))
        return out

    def product_support(self, i: int, j: int) -> frozenset:
        """The support of a basis product, computable without its signs.

        Families whose basis products are signed basis elements supply a
        cheap rule through ``support_fn``; the default just reads the full
        product.
        """
        if self._support_fn is not None:
            return self._support_fn(i, j)
        return frozenset(self.basis_product(i, j))

    def generating_set(self) -> list[int]:
        """Indices whose products span the algebra; the full basis if unknown."""
        if self.generators is not None:
            return list(self.generators)
        return list(range(self.dim))

    def struct_consts(self) -> dict[tuple[int, int], Vec]:
        """Force and return the full structure-constant table."""
        for i in range(self.dim):
            for j in range(self.dim):
                self.basis_product(i, j)
        return self._products

    def __repr__(self) -> str:
        return f"SuperAlgebra({self.name}, dim={self.dim})"


@dataclass
class ValidationReport:
    subject: str
    violations: list[tuple[str, tuple]]

    @property
    def ok(self) -> bool:
        return not self.violations

    def raise_if_failed(self) -> None:
        if self.violations:
            head = "; ".join(f"{k}{idx}" for k, idx in self.violations[:5])
            raise ValidationError(f"{self.subject}: {len(self.violations)} violations ({head} ...)")

    def __repr__(self) -> str:
        state = "ok" if self.ok else f"{len(self.violations)} violations"
        return f"ValidationReport({self.subject}: {state})"


def validate_algebra(alg: SuperAlgebra, check_associativity: bool = True) -> ValidationReport:
    """Exhaustively check unit laws, degree additivity and associativity."""
    bad: list[tuple[str, tuple]] = []
    dim = alg.dim
    unit_deg_ok = all(
        alg.degrees[i] == Degree(0, 0) for i in alg.unit
    )
    if not unit_deg_ok:
        bad.append(("unit degree", ()))
    for j in range(dim):
        ej = {j: Fraction(1)}
        if alg.product_vec(alg.unit, ej) != ej:
            bad.append(("left unit law", (j,)))
        if alg.product_vec(ej, alg.unit) != ej:
            bad.append(("right unit law", (j,)))
    for i in range(dim):
        di = alg.degrees[i]
        for j in range(dim):
            dj = alg.degrees[j]
            for k, c in alg.basis_product(i, j).items():
                if not c:
                    continue
                dk = alg.degrees[k]
                if dk.z != di.z + dj.z:
                    bad.append(("degree additivity", (i, j, k)))
                if dk.par != (di.par + dj.par) & 1:
                    bad.append(("parity additivity", (i, j, k)))
    if check_associativity:
        for i in range(dim):
            for j in range(dim):
                pij = alg.basis_product(i, j)
                for k in range(dim):
                    lhs: Vec = {}
                    for t, c in pij.items():
                        vec_axpy(lhs, c, alg.basis_product(t, k))
                    rhs: Vec = {}
                    for t, c in alg.basis_product(j, k).items():
                        vec_axpy(rhs, c, alg.basis_product(i, t))
                    if lhs != rhs:
                        bad.append(("associativity", (i, j, k)))
    return ValidationReport(alg.name, bad)


def tensor_algebra(a: SuperAlgebra, b: SuperAlgebra, name: str = "") -> SuperAlgebra:
    """The super tensor product; products carry the Koszul sign."""
    dim_b = b.dim
    labels = [f"{la}(x){lb}" for la in a.labels for lb in b.labels]
    degrees = [da + db for da in a.degrees for db in b.degrees]

    def product(x: int, y: int) -> Vec:
        ia, ib = divmod(x, dim_b)
        ja, jb = divmod(y, dim_b)
        sign = -1 if (b.degrees[ib].par and a.degrees[ja].par) else 1
        out: Vec = {}
        pa = a.basis_product(ia, ja)
        pb = b.basis_product(ib, jb)
        for ka, ca in pa.items():
            for kb, cb in pb.items():
                out[ka * dim_b + kb] = sign * ca * cb
        return out

    unit: Vec = {}
    for ia, ca in a.unit.items():
        for ib, cb in b.unit.items():
            unit[ia * dim_b + ib] = ca * cb
    gens = None
    if a.generators is not None and b.generators is not None:
        ua = next(iter(a.unit))  # unit is a basis vector for all built-ins
        ub = next(iter(b.unit))
        gens = [g * dim_b + ub for g in a.generators] + [ua * dim_b + g for g in b.generators]
    return SuperAlgebra(
        labels, degrees, unit, product_fn=product, generators=gens,
        name=name or f"{a.name}(x){b.name}",
    )


class AlgebraHom:
    """A graded homomorphism given by the image of every source basis element.

    The unit need not map to the target unit; its image must be an even
    degree-zero idempotent.
    """

    def __init__(self, source: SuperAlgebra, target: SuperAlgebra, images: Sequence[Vec], name: str = ""):
        assert len(images) == source.dim
        self.source = source
        self.target = target
        self.images = [dict(v) for v in images]
        self.name = name or f"{source.name}->{target.name}"

    def apply_vec(self, v: Vec) -> Vec:
        out: Vec = {}
        for i, c in v.items():
            vec_axpy(out, c, self.images[i])
        return out

    def unit_image(self) -> Vec:
        return self.apply_vec(self.source.unit)

    def validate(self) -> ValidationReport:
        bad: list[tuple[str, tuple]] = []
        for i in range(self.source.dim):
            di = self.source.degrees[i]
            for k, c in self.images[i].items():
                if c and self.target.degrees[k] != di:
                    bad.append(("degree preservation", (i, k)))
        for i in range(self.source.dim):
            for j in range(self.source.dim):
                lhs = self.apply_vec(self.source.basis_product(i, j))
                rhs = self.target.product_vec(self.images[i], self.images[j])
                if lhs != rhs:
                    bad.append(("multiplicativity", (i, j)))
        e = self.unit_image()
        if self.target.product_vec(e, e) != e:
            bad.append(("unit image idempotent", ()))
        for k, c in e.items():
            if c and self.target.degrees[k] != Degree(0, 0):
                bad.append(("unit image degree", (k,)))
        return ValidationReport(self.name, bad)


def identity_hom(alg: SuperAlgebra) -> AlgebraHom:
    return AlgebraHom(alg, alg, [{i: Fraction(1)} for i in range(alg.dim)], name=f"id({alg.name})")


class SuperModule:
    """A bigraded module with one exact action matrix per algebra basis element."""

    def __init__(
        self,
        algebra: SuperAlgebra,
        degrees: Sequence[Degree],
        action: dict[int, Mat] | None = None,
        action_fn: Callable[[int], Mat] | None = None,
        side: str = LEFT,
        regular: bool = False,
        name: str = "",
    ):
        self.algebra = algebra
        self.degrees = list(degrees)
        self._action: dict[int, Mat] = dict(action or {})
        self._action_fn = action_fn
        self.side = side
        self.regular = regular
        self.name = name or f"module(dim={len(self.degrees)})"

    @property
    def dim(self) -> int:
        return len(self.degrees)

    def act(self, i: int) -> Mat:
        got = self._action.get(i)
        if got is None:
            if self._action_fn is None:
                raise KeyError(f"no action matrix for basis element {i}")
            got = self._action_fn(i)
            self._action[i] = got
        return got

    def act_vec(self, v: Vec) -> Mat:
        out = Mat.zero(self.dim, self.dim)
        for i, c in v.items():
            if c:
                out = out.add(self.act(i).scale(c))
        return out

    def apply(self, v: Vec, m: Vec) -> Vec:
        """Act by the algebra element ``v`` on the module vector ``m``."""
        out: Vec = {}
        for i, c in v.items():
            if c:
                vec_axpy_mat(out, c, self.act(i), m)
        return out

    def __repr__(self) -> str:
        return f"SuperModule({self.name}, dim={self.dim}, {self.side})"


def vec_axpy_mat(out: Vec, c: Fraction, mat: Mat, m: Vec) -> None:
    for j, x in m.items():
        col = mat.cols.get(j)
        if col:
            vec_axpy(out, c * x, col)


def regular_module(alg: SuperAlgebra, name: str = "") -> SuperModule:
    """The algebra acting on itself by left multiplication."""

    def action(i: int) -> Mat:
        m = Mat(alg.dim, alg.dim)
        for j in range(alg.dim):
            col = alg.basis_product(i, j)
            if col:
                m.cols[j] = dict(col)
        return m

    return SuperModule(
        alg, alg.degrees, action_fn=action, side=LEFT, regular=True,
        name=name or f"reg({alg.name})",
    )


def validate_module(mod: SuperModule, on_generators: bool = True) -> ValidationReport:
    """Check the action respects structure constants, unit and homogeneity."""
    alg = mod.algebra
    bad: list[tuple[str, tuple]] = []
    gens = alg.generating_set() if on_generators else list(range(alg.dim))
    if mod.act_vec(alg.unit) != Mat.identity(mod.dim):
        bad.append(("unit action", ()))
    for a in gens:
        da = alg.degrees[a]
        mat = mod.act(a)
        for j, col in mat.cols.items():
            dj = mod.degrees[j]
            for i, c in col.items():
                if c and mod.degrees[i] != dj + da:
                    bad.append(("homogeneity", (a, i, j)))
    for a in gens:
        for b in gens:
            ab = alg.basis_product(a, b)
            expected = mod.act_vec(ab)
            if mod.side == LEFT:
                got = mod.act(a).mul(mod.act(b))
            else:
                got = mod.act(b).mul(mod.act(a))
            if got != expected:
                bad.append(("structure constants", (a, b)))
    return ValidationReport(mod.name, bad)


def graded_dim(mod: SuperModule) -> GroundElem:
    """The bigraded dimension as a full-mode ground element."""
    terms: dict[tuple[int, int], int] = {}
    for d in mod.degrees:
        key = (d.z, d.par)
        terms[key] = terms.get(key, 0) + 1
    return GroundElem(terms, FULL)


def shift_module(mod: SuperModule, n: int, s: int = 0, name: str = "") -> SuperModule:
    """Degree shift by ``n`` and parity shift by ``s``.

    A parity shift negates the action of odd algebra elements on left
    modules; right-module parity shifts leave the action unchanged.
    """
    s &= 1
    degrees = [d.shifted(n, s) for d in mod.degrees]

    def action(i: int) -> Mat:
        base = mod.act(i)
        if s and mod.side == LEFT and mod.algebra.degrees[i].par:
            return base.scale(-1)
        return base

    return SuperModule(
        mod.algebra, degrees, action_fn=action, side=mod.side,
        regular=(mod.regular and n == 0 and s == 0),
        name=name or f"{mod.name}{{{n},{s}}}",
    )


def hom_graded_dim(src: SuperModule, dst: SuperModule) -> GroundElem:
    """Graded dimension of the space of signed module homomorphisms.

    A homogeneous map of parity ``e`` satisfies
    ``f(b m) == (-1)**(e * par(b)) * b f(m)``; the dimension of each
    bidegree's solution space is found by exact elimination.  When the
    source is the left regular module the answer is the graded dimension of
    the target (the evaluation-at-unit isomorphism), which this function
    uses as a fast path.
    """
    assert src.algebra is dst.algebra, "modules over different algebras"
    assert src.side == dst.side == LEFT
    if src.regular:
        return graded_dim(dst)
    alg = src.algebra
    gens = alg.generating_set()
    nd = dst.dim

    def key(r: int, j: int) -> int:
        return r * src.dim + j

    def bidegree(r: int, j: int) -> tuple[int, int]:
        d = dst.degrees[r]
        e = src.degrees[j]
        return (d.z - e.z, (d.par + e.par) & 1)

    blocks: dict[tuple[int, int], list[int]] = {}
    for r in range(nd):
        for j in range(src.dim):
            blocks.setdefault(bidegree(r, j), []).append(key(r, j))

    rows_by_block: dict[tuple[int, int], list[Vec]] = {}
    for b in gens:
        if alg.unit.get(b):
            continue  # the unit constraint is vacuous
        asrc = src.act(b)
        adst = dst.act(b)
        pb = alg.degrees[b].par
        # row-major view of the target action for this generator
        dst_rows: dict[int, list[tuple[int, Fraction]]] = {}
        for t, col in adst.cols.items():
            for r, c in col.items():
                dst_rows.setdefault(r, []).append((t, c))
        for j in range(src.dim):
            col = asrc.cols.get(j, {})
            for r in range(nd):
                row: Vec = {}
                for s_idx, c in col.items():
                    k2 = key(r, s_idx)
                    row[k2] = row.get(k2, Fraction(0)) + c
                # the component of f receiving this constraint has parity
                # par(r) + par(b) + par(j)
                par_f = (dst.degrees[r].par + src.degrees[j].par + pb) & 1
                sign = -1 if (pb and par_f) else 1
                for t, c in dst_rows.get(r, ()):
                    k2 = key(t, j)
                    row[k2] = row.get(k2, Fraction(0)) - sign * c
                row = {k2: v for k2, v in row.items() if v}
                if row:
                    block_keys = {bidegree(k2 // src.dim, k2 % src.dim) for k2 in row}
                    assert len(block_keys) == 1, "inhomogeneous constraint row"
                    rows_by_block.setdefault(block_keys.pop(), []).append(row)

    total = GroundElem.zero(FULL)
    for bk, keys in sorted(blocks.items()):
        el = Eliminator()
        for r in rows_by_block.get(bk, ()):
            el.add_row(r)
        nullity = len(keys) - el.rank
        if nullity:
            total = total + GroundElem.monomial(bk[0], bk[1], nullity)
    return total


def outer_tensor(
    left: SuperModule, right: SuperModule, algebra: SuperAlgebra | None = None, name: str = ""
) -> SuperModule:
    """Outer tensor of left modules; the action carries the Koszul sign.

    ``algebra`` may supply a previously built tensor algebra so repeated
    outer tensors over the same pair share one product table.
    """
    assert left.side == right.side == LEFT
    ab = algebra if algebra is not None else tensor_algebra(left.algebra, right.algebra)
    dim_b = right.algebra.dim
    dim_n = right.dim
    degrees = [dm + dn for dm in left.degrees for dn in right.degrees]

    def action(t: int) -> Mat:
        ia, ib = divmod(t, dim_b)
        am = left.act(ia)
        an = right.act(ib)
        pb = right.algebra.degrees[ib].par
        out = Mat(len(degrees), len(degrees))
        for jm in range(left.dim):
            colm = am.cols.get(jm)
            sign = -1 if (pb and left.degrees[jm].par) else 1
            for jn in range(right.dim):
                coln = an.cols.get(jn)
                if colm is None or coln is None:
                    continue
                col: Vec = {}
                for rm, cm in colm.items():
                    for rn, cn in coln.items():
                        col[rm * dim_n + rn] = sign * cm * cn
                if col:
                    out.cols[jm * dim_n + jn] = col
        return out

    return SuperModule(
        ab, degrees, action_fn=action, side=LEFT,
        regular=(left.regular and right.regular),
        name=name or f"{left.name}(box){right.name}",
    )


class Subspace:
    """A subspace of an ambient sparse vector space with coordinate solving.

    The basis is the deterministic independent subset of the spanning
    vectors (first-nonzero-column pivoting order).
    """

    def __init__(self, spanning: Iterable[Vec], ambient_dim: int):
        self.ambient_dim = ambient_dim
        self.basis: list[Vec] = []
        self._el = Eliminator()       # augmented with coordinate tracking
        self._rank_el = Eliminator()  # plain copy for independence tests
        for v in spanning:
            if self._rank_el.add_row(dict(v)):
                self._track_add(v)

    def _track_add(self, v: Vec) -> None:
        idx = len(self.basis)
        aug = dict(v)
        aug[self.ambient_dim + idx] = Fraction(1)
        self._el.add_row(aug)
        self.basis.append(dict(v))

    @property
    def dim(self) -> int:
        return len(self.basis)

    def coords(self, w: Vec) -> Vec | None:
        """Coordinates of ``w`` in the subspace basis, or None if outside."""
        red = self._el.reduce(dict(w))
        coords: Vec = {}
        for k, c in red.items():
            if k < self.ambient_dim:
                return None
            coords[k - self.ambient_dim] = -c
        return coords


def restrict_module(phi: AlgebraHom, mod: SuperModule, name: str = "") -> SuperModule:
    """Restriction along ``phi``: the corner ``phi(1) M`` with the pulled-back action."""
    assert mod.side == LEFT
    target, source = phi.target, phi.source
    assert mod.algebra is target
    e = phi.unit_image()
    if e == target.unit:
        # unital homomorphism: same underlying space
        def action(b: int) -> Mat:
            return mod.act_vec(phi.images[b])

        return SuperModule(
            source, mod.degrees, action_fn=action, side=LEFT,
            name=name or f"res({mod.name})",
        )
    emat = mod.act_vec(e)
    spanning = [emat.col(j) for j in range(mod.dim) if emat.cols.get(j)]
    sub = Subspace(spanning, mod.dim)

    def hom_degree(v: Vec) -> Degree:
        degs = {mod.degrees[i] for i in v}
        assert len(degs) == 1, "inhomogeneous corner basis vector"
        return degs.pop()

    degrees = [hom_degree(v) for v in sub.basis]

    def action(b: int) -> Mat:
        bmat = mod.act_vec(phi.images[b])
        out = Mat(sub.dim, sub.dim)
        for j, base in enumerate(sub.basis):
            img = bmat.apply(base)
            coords = sub.coords(img)
            assert coords is not None, "corner not stable under restricted action"
            if coords:
                out.cols[j] = coords
        return out

    return SuperModule(source, degrees, action_fn=action, side=LEFT, name=name or f"res({mod.name})")


def induce_module(phi: AlgebraHom, mod: SuperModule, name: str = "") -> SuperModule:
    """Induction along ``phi``: the corner tensored over the source, by row reduction.

    The result is ``(A phi(1)) (x)_B N`` presented as the quotient of
    ``corner (x) N`` by the span of ``a phi(b) (x) n  -  a (x) b n`` with
    ``b`` running over a generating set.  Pivoting is first-nonzero-column,
    so the quotient basis is reproducible.
    """
    assert mod.side == LEFT
    source, target = phi.source, phi.target
    assert mod.algebra is source

    e = phi.unit_image()
    unital = e == target.unit
    if unital:
        corner_degrees = list(target.degrees)
        corner_dim = target.dim

        def corner_vec(i: int) -> Vec:
            return {i: Fraction(1)}

        def corner_coords(w: Vec) -> Vec:
            return w

        def corner_left_mult(a: int, c: int) -> Vec:
            return target.basis_product(a, c)
    else:
        rm_e = [target.product_vec({j: Fraction(1)}, e) for j in range(target.dim)]
        sub = Subspace([v for v in rm_e if v], target.dim)
        corner_dim = sub.dim

        def hom_degree(v: Vec) -> Degree:
            degs = {target.degrees[i] for i in v}
            assert len(degs) == 1
            return degs.pop()

        corner_degrees = [hom_degree(v) for v in sub.basis]

        def corner_vec(i: int) -> Vec:
            return dict(sub.basis[i])

        def corner_coords(w: Vec) -> Vec:
            got = sub.coords(w)
            assert got is not None, "product left the corner"
            return got

        def corner_left_mult(a: int, c: int) -> Vec:
            prod = target.product_vec({a: Fraction(1)}, corner_vec(c))
            return corner_coords(prod)

    # special case: inducing the regular module of the source gives the corner
    if mod.regular and unital:
        return SuperModule(
            target, corner_degrees,
            action_fn=lambda a: Mat(
                corner_dim, corner_dim,
                {j: target.basis_product(a, j) for j in range(corner_dim) if target.basis_product(a, j)},
            ),
            side=LEFT, regular=True, name=name or f"ind({mod.name})",
        )

    nd = mod.dim
    flat_dim = corner_dim * nd

    def flat(c: int, n: int) -> int:
        return c * nd + n

    if unital and nd == 1:
        fast = _induce_one_dim_annihilated(phi, mod, corner_degrees, name)
        if fast is not None:
            return fast

    relations = Eliminator()
    gens = source.generating_set()
    for b in gens:
        if source.unit.get(b):
            continue
        phib = phi.images[b]
        bn = mod.act(b)
        for c in range(corner_dim):
            # a phi(b) expanded in corner coordinates
            if unital:
                left = target.product_vec(corner_vec(c), phib)
            else:
                left = corner_coords(target.product_vec(corner_vec(c), phib))
            for n in range(nd):
                row: Vec = {}
                for cc, coeff in left.items():
                    row[flat(cc, n)] = row.get(flat(cc, n), Fraction(0)) + coeff
                for nn, coeff in bn.cols.get(n, {}).items():
                    k = flat(c, nn)
                    row[k] = row.get(k, Fraction(0)) - coeff
                row = {k: v for k, v in row.items() if v}
                if row:
                    relations.add_row(row)

    pivot_cols = set(relations.pivots)
    free = [k for k in range(flat_dim) if k not in pivot_cols]
    free_pos = {k: t for t, k in enumerate(free)}
    degrees = [corner_degrees[k // nd] + mod.degrees[k % nd] for k in free]

    def reduce_flat(v: Vec) -> Vec:
        red = relations.reduce(v)
        return {free_pos[k]: c for k, c in red.items()}

    def action(a: int) -> Mat:
        out = Mat(len(free), len(free))
        for t, k in enumerate(free):
            c, n = divmod(k, nd)
            lifted: Vec = {}
            for cc, coeff in corner_left_mult(a, c).items():
                lifted[flat(cc, n)] = coeff
            col = reduce_flat(lifted)
            if col:
                out.cols[t] = col
        return out

    return SuperModule(target, degrees, action_fn=action, side=LEFT, name=name or f"ind({mod.name})")


def _induce_one_dim_annihilated(
    phi: AlgebraHom, mod: SuperModule, corner_degrees: list[Degree], name: str
) -> SuperModule | None:
    """Sign-free induction of a one-dimensional module killed by all generators.

    When every non-unit generator acts by zero, the relation space is
    spanned by single basis vectors ``(a phi(b)) (x) n``, so only the
    supports of corner products matter: a sign flip does not change the
    span.  Applies only when those supports are singletons (as for the
    permutation-basis families); returns None otherwise and the generic
    row-reduction runs instead.
    """
    source, target = phi.source, phi.target
    for b in source.generating_set():
        if source.unit.get(b):
            continue
        if mod.act(b).cols:
            return None
        img = phi.images[b]
        if len(img) != 1:
            return None
    killed: set[int] = set()
    for b in source.generating_set():
        if source.unit.get(b):
            continue
        (bi,) = phi.images[b]
        for c in range(target.dim):
            supp = target.product_support(c, bi)
            if len(supp) > 1:
                return None
            killed.update(supp)
    free = [k for k in range(target.dim) if k not in killed]
    degrees = [corner_degrees[k] + mod.degrees[0] for k in free]
    free_pos = {k: t for t, k in enumerate(free)}

    def action(a: int) -> Mat:
        out = Mat(len(free), len(free))
        for t, k in enumerate(free):
            col: Vec = {}
            for cc, coeff in target.basis_product(a, k).items():
                if cc in free_pos:
                    col[free_pos[cc]] = coeff
            if col:
                out.cols[t] = col
        return out

    return SuperModule(target, degrees, action_fn=action, side=LEFT,
                       name=name or f"ind({mod.name})")


def dual_module(mod: SuperModule, name: str = "") -> SuperModule:
    """The linear dual, with negated degrees and signed-transpose actions.

    The dual of a left module is a right module (precomposition with left
    multiplication); the dual of a right module is a left module through the
    signed right-multiplication operators.  Dualizing twice lands back on
    the original side.
    """
    degrees = [-d for d in mod.degrees]
    if mod.side == LEFT:

        def action(b: int) -> Mat:
            return mod.act(b).transpose()

        new_side = RIGHT
    else:

        def action(b: int) -> Mat:
            base = mod.act(b).transpose()
            pb = mod.algebra.degrees[b].par
            if not pb:
                return base
            out = Mat(mod.dim, mod.dim)
            for j, col in base.cols.items():
                pj = mod.degrees[j].par
                newcol = {}
                for i, c in col.items():
                    sign = -1 if ((pj + mod.degrees[i].par) & 1) else 1
                    newcol[i] = sign * c
                out.cols[j] = newcol
            return out

        new_side = LEFT
    return SuperModule(
        mod.algebra, degrees, action_fn=action, side=new_side,
        name=name or f"dual({mod.name})",
    )


def validate_automorphism(alg: SuperAlgebra, tau: Mat) -> ValidationReport:
    """Check that ``tau`` is a degree-preserving invertible algebra map.

    Multiplicativity is checked on generator-times-basis pairs when the
    algebra declares a generating set (which implies it on all pairs, by
    induction over products of generators), and on all pairs otherwise.
    """
    bad: list[tuple[str, tuple]] = []
    for j in range(alg.dim):
        dj = alg.degrees[j]
        for i, c in tau.cols.get(j, {}).items():
            if c and alg.degrees[i] != dj:
                bad.append(("degree preservation", (i, j)))
    el = Eliminator()
    for j in range(alg.dim):
        if tau.cols.get(j):
            el.add_row(dict(tau.cols[j]))
    if el.rank != alg.dim:
        bad.append(("invertibility", ()))
    if tau.apply(alg.unit) != alg.unit:
        bad.append(("unit preservation", ()))
    left_factors = alg.generators if alg.generators is not None else range(alg.dim)
    for i in left_factors:
        ti = tau.col(i)
        for j in range(alg.dim):
            lhs = tau.apply(alg.basis_product(i, j))
            rhs = alg.product_vec(ti, tau.col(j))
            if lhs != rhs:
                bad.append(("multiplicativity", (i, j)))
    return ValidationReport(f"automorphism of {alg.name}", bad)


def twist_module(mod: SuperModule, tau: Mat, validate: bool = True, name: str = "") -> SuperModule:
    """Precompose the action with the algebra automorphism ``tau``."""
    if validate:
        validate_automorphism(mod.algebra, tau).raise_if_failed()

    def action(b: int) -> Mat:
        return mod.act_vec(tau.col(b))

    return SuperModule(
        mod.algebra, list(mod.degrees), action_fn=action, side=mod.side,
        name=name or f"twist({mod.name})",
    )


# -- serialization (text, JSON-shaped) ----------------------------------------


def algebra_to_dict(alg: SuperAlgebra) -> dict:
    """The on-disk algebra format; forces the full structure-constant table."""
    structure = []
    for (i, j), col in sorted(alg.struct_consts().items()):
        for k in sorted(col):
            c = col[k]
            structure.append([i, j, k, c.numerator, c.denominator])
    unit = [[0, 1]] * alg.dim
    for i, c in alg.unit.items():
        unit[i] = [c.numerator, c.denominator]
    out = {
        "labels": list(alg.labels),
        "degrees": [[d.z, d.par] for d in alg.degrees],
        "unit": unit,
        "structure": structure,
    }
    if alg.generators is not None:
        out["generators"] = list(alg.generators)
    return out


def algebra_from_dict(data: dict, name: str = "") -> SuperAlgebra:
    labels = list(data["labels"])
    degrees = [Degree(z, par) for z, par in data["degrees"]]
    if len(labels) != len(degrees):
        raise ValidationError("labels and degrees disagree in length")
    unit: Vec = {}
    for i, pair in enumerate(data["unit"]):
        c = Fraction(pair[0], pair[1])
        if c:
            unit[i] = c
    products: dict[tuple[int, int], Vec] = {}
    for i, j, k, num, den in data["structure"]:
        if not (0 <= i < len(labels) and 0 <= j < len(labels) and 0 <= k < len(labels)):
            raise ValidationError(f"structure row ({i},{j},{k}) out of range")
        products.setdefault((i, j), {})[k] = Fraction(num, den)
    full = {
        (i, j): products.get((i, j), {})
        for i in range(len(labels))
        for j in range(len(labels))
    }
    return SuperAlgebra(
        labels, degrees, unit, products=full,
        generators=data.get("generators"), name=name or "loaded",
    )


def module_to_dict(mod: SuperModule) -> dict:
    actions = []
    for b in range(mod.algebra.dim):
        mat = mod.act(b)
        rows = []
        for j in sorted(mat.cols):
            for i in sorted(mat.cols[j]):
                c = mat.cols[j][i]
                rows.append([i, j, c.numerator, c.denominator])
        actions.append(rows)
    return {
        "degrees": [[d.z, d.par] for d in mod.degrees],
        "side": mod.side,
        "actions": actions,
    }


def module_from_dict(alg: SuperAlgebra, data: dict, name: str = "") -> SuperModule:
    degrees = [Degree(z, par) for z, par in data["degrees"]]
    dim = len(degrees)
    action: dict[int, Mat] = {}
    for b, rows in enumerate(data["actions"]):
        m = Mat(dim, dim)
        for i, j, num, den in rows:
            m.add_entry(i, j, Fraction(num, den))
        action[b] = m
    return SuperModule(alg, degrees, action=action, side=data.get("side", LEFT), name=name or "loaded")
