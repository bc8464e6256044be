"""Sparse exact linear algebra over the rationals.

Vectors are dicts ``index -> Fraction`` with no stored zeros; matrices are
column-major dicts of such vectors.  Everything here is artifact plumbing:
row reduction uses deterministic first-nonzero-column pivoting so quotient
bases and report output are reproducible.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable

Vec = dict[int, Fraction]


def vec_add(a: Vec, b: Vec) -> Vec:
    out = dict(a)
    for i, c in b.items():
        v = out.get(i, Fraction(0)) + c
        if v:
            out[i] = v
        elif i in out:
            del out[i]
    return out


def vec_scale(a: Vec, c) -> Vec:
    c = Fraction(c)
    if not c:
        return {}
    return {i: x * c for i, x in a.items()}


def vec_axpy(out: Vec, c: Fraction, a: Vec) -> None:
    """In-place ``out += c*a``."""
    if not c:
        return
    for i, x in a.items():
        v = out.get(i, Fraction(0)) + c * x
        if v:
            out[i] = v
        elif i in out:
            del out[i]


class Mat:
    """A sparse ``nrows x ncols`` matrix over the rationals."""

    __slots__ = ("nrows", "ncols", "cols")

    def __init__(self, nrows: int, ncols: int, cols: dict[int, Vec] | None = None):
        self.nrows = nrows
        self.ncols = ncols
        self.cols = {} if cols is None else {j: dict(c) for j, c in cols.items() if c}

    @staticmethod
    def identity(n: int) -> "Mat":
        return Mat(n, n, {j: {j: Fraction(1)} for j in range(n)})

    @staticmethod
    def zero(nrows: int, ncols: int) -> "Mat":
        return Mat(nrows, ncols)

    @staticmethod
    def from_entries(nrows: int, ncols: int, entries: Iterable[tuple[int, int, object]]) -> "Mat":
        m = Mat(nrows, ncols)
        for i, j, c in entries:
            m.add_entry(i, j, c)
        return m

    def add_entry(self, i: int, j: int, c) -> None:
        c = Fraction(c)
        if not c:
            return
        col = self.cols.setdefault(j, {})
        v = col.get(i, Fraction(0)) + c
        if v:
            col[i] = v
        else:
            del col[i]
            if not col:
                del self.cols[j]

    def entry(self, i: int, j: int) -> Fraction:
        return self.cols.get(j, {}).get(i, Fraction(0))

    def col(self, j: int) -> Vec:
        return dict(self.cols.get(j, {}))

    def apply(self, v: Vec) -> Vec:
        out: Vec = {}
        for j, c in v.items():
            col = self.cols.get(j)
            if col:
                vec_axpy(out, c, col)
        return out

    def mul(self, other: "Mat") -> "Mat":
        assert self.ncols == other.nrows, "shape mismatch"
        out = Mat(self.nrows, other.ncols)
        for j, col in other.cols.items():
            image = self.apply(col)
            if image:
                out.cols[j] = image
        return out

    def add(self, other: "Mat") -> "Mat":
        assert (self.nrows, self.ncols) == (other.nrows, other.ncols)
        out = Mat(self.nrows, self.ncols, self.cols)
        for j, col in other.cols.items():
            target = out.cols.setdefault(j, {})
            vec_axpy(target, Fraction(1), col)
            if not target:
                del out.cols[j]
        return out

    def scale(self, c) -> "Mat":
        c = Fraction(c)
        return Mat(self.nrows, self.ncols, {j: vec_scale(col, c) for j, col in self.cols.items() if c})

    def transpose(self) -> "Mat":
        out = Mat(self.ncols, self.nrows)
        for j, col in self.cols.items():
            for i, c in col.items():
                out.cols.setdefault(i, {})[j] = c
        return out

    def __eq__(self, other) -> bool:
        if not isinstance(other, Mat):
            return NotImplemented
        if (self.nrows, self.ncols) != (other.nrows, other.ncols):
            return False
        keys = set(self.cols) | set(other.cols)
        return all(self.cols.get(j, {}) == other.cols.get(j, {}) for j in keys)

    def __hash__(self):
        raise TypeError("Mat is not hashable")

    def is_zero(self) -> bool:
        return not self.cols

    def nnz(self) -> int:
        return sum(len(c) for c in self.cols.values())

    def __repr__(self) -> str:
        return f"Mat({self.nrows}x{self.ncols}, nnz={self.nnz()})"


class Eliminator:
    """Online Gaussian elimination with first-nonzero-column pivoting.

    Rows are fed one at a time; each is reduced against the pivots found so
    far.  Supports rank, membership tests and canonical reduction of new
    vectors modulo the accumulated row space.
    """

    def __init__(self):
        self.pivots: dict[int, Vec] = {}  # pivot column -> normalized row

    def reduce(self, row: Vec) -> Vec:
        """Fully reduce a row: eliminate every pivot-column entry."""
        out: Vec = {}
        row = dict(row)
        while row:
            j = min(row)
            piv = self.pivots.get(j)
            if piv is None:
                out[j] = row.pop(j)
            else:
                vec_axpy(row, -row[j], piv)
        return out

    def add_row(self, row: Vec) -> bool:
        """Insert a row; returns True if it increased the rank."""
        red = self.reduce(row)
        if not red:
            return False
        j = min(red)
        red = vec_scale(red, 1 / red[j])
        # keep earlier pivot rows fully reduced against the new one
        for pj, prow in self.pivots.items():
            if j in prow:
                vec_axpy(prow, -prow[j], red)
        self.pivots[j] = red
        return True

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def contains(self, row: Vec) -> bool:
        return not self.reduce(row)


def rank_of_rows(rows: Iterable[Vec]) -> int:
    el = Eliminator()
    for r in rows:
        el.add_row(r)
    return el.rank


def nullspace(rows: Iterable[Vec], ncols: int, col_order: list[int] | None = None) -> list[Vec]:
    """Basis of the right kernel of the row system, one vector per free column."""
    el = Eliminator()
    for r in rows:
        el.add_row(r)
    order = col_order if col_order is not None else list(range(ncols))
    pivot_cols = set(el.pivots)
    basis = []
    for j in order:
        if j in pivot_cols:
            continue
        v: Vec = {j: Fraction(1)}
        for pj, prow in el.pivots.items():
            if j in prow:
                v[pj] = -prow[j]
        basis.append(v)
    return basis


def solve(mat: Mat, rhs: Vec) -> Vec | None:
    """One solution of ``mat @ x == rhs``, or None if inconsistent.

    Free unknowns are set to zero, so the answer is deterministic.
    """
    marker = mat.ncols  # augmented column carrying the right-hand side
    rows: dict[int, Vec] = {}
    for j, col in mat.cols.items():
        for i, c in col.items():
            rows.setdefault(i, {})[j] = c
    for i, b in rhs.items():
        if b:
            rows.setdefault(i, {})[marker] = b
    el = Eliminator()
    for i in sorted(rows):
        el.add_row(rows[i])
    if marker in el.pivots:
        return None
    x: Vec = {}
    for pj, prow in el.pivots.items():
        b = prow.get(marker, Fraction(0))
        if b:
            x[pj] = b
    clean_rhs = {i: c for i, c in rhs.items() if c}
    return x if mat.apply(x) == clean_rhs else None


def invert(mat: Mat) -> Mat | None:
    """Exact inverse of a square matrix, or None if singular."""
    assert mat.nrows == mat.ncols
    n = mat.ncols
    # eliminate rows of [A | I]; pivots land in the A block iff A is invertible
    rows: dict[int, Vec] = {}
    for j, col in mat.cols.items():
        for i, c in col.items():
            rows.setdefault(i, {})[j] = c
    el = Eliminator()
    for i in range(n):
        row = dict(rows.get(i, {}))
        row[n + i] = Fraction(1)
        el.add_row(row)
    if set(el.pivots) != set(range(n)):
        return None
    out = Mat(n, n)
    for pj, prow in el.pivots.items():
        for k, c in prow.items():
            if k >= n:
                out.add_entry(pj, k - n, c)
    return out
