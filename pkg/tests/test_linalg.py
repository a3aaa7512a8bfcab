from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from cyclotome.linalg import (GF, QQ, Field, SparseMatrix, compose, in_span, kernel_matrix, rank,
                              rank_profile, solve)


def dense_rank(rows, p=None):
    """Textbook Gaussian elimination, used as the oracle."""
    m = [[Fraction(x) if p is None else x % p for x in r] for r in rows]
    r = 0
    ncols = len(m[0]) if m else 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][c] if p is None else pow(m[r][c], -1, p)
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c] * inv
                m[i] = [(a - f * b) if p is None else (a - f * b) % p for a, b in zip(m[i], m[r])]
        r += 1
    return r


small_ints = st.integers(min_value=-3, max_value=3)


def matrices(max_side=6):
    return st.integers(1, max_side).flatmap(
        lambda r: st.integers(1, max_side).flatmap(
            lambda c: st.lists(st.lists(small_ints, min_size=c, max_size=c), min_size=r, max_size=r)))


def test_field_parsing():
    assert Field.parse("Q") == QQ
    assert Field.parse("Fp:7") == GF(7)
    assert GF(7).name == "Fp:7"
    with pytest.raises(ValueError):
        Field.parse("Fp:9")
    assert QQ("3/6") == Fraction(1, 2)
    assert GF(7)(Fraction(1, 2)) == 4


def test_rank_known_examples():
    assert rank(SparseMatrix.from_dense([[1, 2], [2, 4]])) == 1
    assert rank(SparseMatrix.from_dense([[1, 0], [0, 1]])) == 2
    assert rank(SparseMatrix.zeros(3, 4)) == 0
    # singular mod 3 but not over Q
    m = [[1, 1], [1, 4]]
    assert rank(SparseMatrix.from_dense(m)) == 2
    assert rank(SparseMatrix.from_dense(m, GF(3))) == 1


@given(matrices())
def test_rank_matches_dense_oracle(rows):
    assert rank(SparseMatrix.from_dense(rows)) == dense_rank(rows)


@given(matrices())
def test_rank_mod_p_matches_oracle(rows):
    assert rank(SparseMatrix.from_dense(rows, GF(5))) == dense_rank(rows, 5)


@given(matrices())
def test_kernel_is_kernel_of_right_size(rows):
    m = SparseMatrix.from_dense(rows)
    k = kernel_matrix(m)
    assert k.ncols == m.ncols - rank(m)
    assert compose(m, k).is_zero()
    assert rank(k) == k.ncols


@given(matrices(), st.lists(small_ints, min_size=6, max_size=6))
def test_solve_finds_preimages_of_images(rows, x):
    m = SparseMatrix.from_dense(rows)
    xv = {i: v for i, v in enumerate(x[:m.ncols]) if v}
    b = m.apply(xv)
    sol = solve(m, b)
    assert sol is not None
    assert m.apply(sol) == b


def test_solve_detects_inconsistency():
    m = SparseMatrix.from_dense([[1, 1], [2, 2]])
    assert solve(m, {0: 1, 1: 3}) is None


@given(matrices())
def test_rank_profile_and_span(rows):
    m = SparseMatrix.from_dense(rows)
    keep = rank_profile(m)
    assert len(keep) == rank(m)
    sub = m.submatrix(range(m.nrows), keep)
    assert in_span(m, sub)


@given(matrices(4), matrices(4))
def test_composition_is_associative_with_transpose(a, b):
    A = SparseMatrix.from_dense(a)
    B = SparseMatrix.from_dense(b)
    if A.ncols != B.nrows:
        B = SparseMatrix.from_dense([[1] * B.ncols for _ in range(A.ncols)])
    assert compose(A, B).transpose() == compose(B.transpose(), A.transpose())
