"""Exact sparse linear algebra plumbing."""

import random
from fractions import Fraction

from supertower.linalg import Eliminator, Mat, invert, nullspace, rank_of_rows, solve


def dense_rank_oracle(rows, ncols):
    """Plain dense Gaussian elimination over Fraction."""
    m = [[Fraction(r.get(j, 0)) for j in range(ncols)] for r in rows]
    rank = 0
    col = 0
    nr = len(m)
    while col < ncols and rank < nr:
        piv = next((i for i in range(rank, nr) if m[i][col]), None)
        if piv is None:
            col += 1
            continue
        m[rank], m[piv] = m[piv], m[rank]
        inv = 1 / m[rank][col]
        m[rank] = [x * inv for x in m[rank]]
        for i in range(nr):
            if i != rank and m[i][col]:
                f = m[i][col]
                m[i] = [a - f * b for a, b in zip(m[i], m[rank])]
        rank += 1
        col += 1
    return rank


def random_rows(rng, nrows, ncols, density=0.4):
    rows = []
    for _ in range(nrows):
        row = {}
        for j in range(ncols):
            if rng.random() < density:
                row[j] = Fraction(rng.randint(-4, 4))
        rows.append({k: v for k, v in row.items() if v})
    return rows


def test_rank_matches_dense_oracle():
    rng = random.Random(7)
    for _ in range(25):
        nrows, ncols = rng.randint(1, 7), rng.randint(1, 7)
        rows = random_rows(rng, nrows, ncols)
        assert rank_of_rows(rows) == dense_rank_oracle(rows, ncols)


def test_nullspace_vectors_annihilate():
    rng = random.Random(11)
    for _ in range(20):
        nrows, ncols = rng.randint(1, 6), rng.randint(1, 6)
        rows = random_rows(rng, nrows, ncols)
        basis = nullspace(rows, ncols)
        assert len(basis) == ncols - rank_of_rows(rows)
        for v in basis:
            for r in rows:
                assert sum(r.get(j, Fraction(0)) * c for j, c in v.items()) == 0


def test_solve_and_invert():
    rng = random.Random(13)
    for _ in range(20):
        n = rng.randint(1, 6)
        mat = Mat(n, n)
        for i in range(n):
            for j in range(n):
                if rng.random() < 0.6:
                    mat.add_entry(i, j, rng.randint(-3, 3))
        x_true = {j: Fraction(rng.randint(-3, 3)) for j in range(n)}
        x_true = {j: v for j, v in x_true.items() if v}
        rhs = mat.apply(x_true)
        got = solve(mat, rhs)
        assert got is not None
        assert mat.apply(got) == rhs
        inv = invert(mat)
        full_rank = rank_of_rows([mat.col(j) for j in range(n)]) == n
        if full_rank:
            assert inv is not None
            assert mat.mul(inv) == Mat.identity(n)
            assert inv.mul(mat) == Mat.identity(n)
        else:
            assert inv is None


def test_solve_inconsistent():
    mat = Mat.from_entries(2, 1, [(0, 0, 1), (1, 0, 2)])
    assert solve(mat, {0: Fraction(1), 1: Fraction(1)}) is None


def test_eliminator_membership():
    el = Eliminator()
    el.add_row({0: Fraction(1), 1: Fraction(2)})
    el.add_row({1: Fraction(1)})
    assert el.contains({0: Fraction(3), 1: Fraction(-1)})
    assert not el.contains({2: Fraction(1)})


def test_matrix_algebra():
    a = Mat.from_entries(2, 2, [(0, 0, 1), (0, 1, 2), (1, 1, 3)])
    b = Mat.from_entries(2, 2, [(0, 0, 1), (1, 0, 1)])
    ab = a.mul(b)
    assert ab.entry(0, 0) == 3  # 1*1 + 2*1
    assert ab.entry(1, 0) == 3
    assert a.transpose().transpose() == a
    assert a.add(a.scale(-1)).is_zero()
