"""Shared generators: chain complexes with known homology, built as a
standard split complex conjugated by random invertible matrices."""

import random

from hypothesis import strategies as st

from cyclotome.chain import ChainComplex, DegreeWindow
from cyclotome.linalg import QQ, SparseMatrix, compose


def random_invertible(n, rng, fld=QQ):
    """Product of random elementary matrices, with its inverse."""
    m = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    inv = [row[:] for row in m]
    for _ in range(3 * n):
        i, j = rng.randrange(n), rng.randrange(n)
        if i == j:
            continue
        c = rng.choice([-2, -1, 1, 2])
        # row_i += c row_j on m; column_j -= c column_i on the inverse
        m[i] = [a + c * b for a, b in zip(m[i], m[j])]
        for r in inv:
            r[j] -= c * r[i]
    return SparseMatrix.from_dense(m, fld, ncols=n), SparseMatrix.from_dense(inv, fld, ncols=n)


def split_complex(lo, spec, seed, fld=QQ):
    """``spec[k] = (h, r)`` for degree ``lo + k``: homology ``h`` and
    ``rank d_n = r`` (``r = 0`` at the bottom).  Returns the complex and the
    expected homology dimensions."""
    rng = random.Random(seed)
    hi = lo + len(spec) - 1
    ranks = {lo + k: r for k, (_, r) in enumerate(spec)}
    ranks[lo] = 0
    ranks[hi + 1] = 0
    dims = {}
    for k, (h, _) in enumerate(spec):
        n = lo + k
        dims[n] = ranks[n] + h + ranks[n + 1]
    conj = {n: random_invertible(dims[n], rng, fld) for n in dims}
    d = {}
    for n in range(lo + 1, hi + 1):
        # standard d_n: the first ranks[n] coordinates of C_n map onto the last ranks[n] of C_{n-1}
        off = dims[n - 1] - ranks[n]
        std = SparseMatrix.from_entries(dims[n - 1], dims[n], [(off + i, i, 1) for i in range(ranks[n])], fld)
        d[n] = compose(compose(conj[n - 1][0], std), conj[n][1])
    cx = ChainComplex(DegreeWindow(lo, hi), dims, d, fld)
    expected = {lo + k: h for k, (h, _) in enumerate(spec)}
    return cx, expected


@st.composite
def complexes(draw, max_len=5, max_part=3):
    lo = draw(st.integers(-2, 2))
    n = draw(st.integers(1, max_len))
    spec = [(draw(st.integers(0, max_part)), draw(st.integers(0, max_part))) for _ in range(n)]
    seed = draw(st.integers(0, 10_000))
    return split_complex(lo, spec, seed)
