import pytest
from hypothesis import given, strategies as st

from cyclotome.chain import (Bicomplex, ChainComplex, ChainMap, ComplexError, DegreeWindow, InverseSystem,
                             WindowError, cone, inverse_limit, shift, truncate_ge, truncate_lt)
from cyclotome.linalg import QQ, SparseMatrix

from strategies import complexes, split_complex


def test_window_trust_encoding():
    w = DegreeWindow(0, 4)
    assert w.trusted(0) and w.trusted(4)
    empty = w.with_trust(6, 9)
    assert not any(empty.trusted(n) for n in w.degrees())
    assert empty.trust_lo == empty.trust_hi + 1
    with pytest.raises(WindowError):
        DegreeWindow(0, 2, 1, 5)


def test_constructor_rejects_nonzero_square():
    d1 = SparseMatrix.from_dense([[1]])
    d2 = SparseMatrix.from_dense([[1]])
    with pytest.raises(ComplexError):
        ChainComplex(DegreeWindow(0, 2), {0: 1, 1: 1, 2: 1}, {1: d1, 2: d2})


def test_circle_homology():
    # simplicial circle: 3 vertices, 3 edges
    d1 = SparseMatrix.from_dense([[-1, 0, 1], [1, -1, 0], [0, 1, -1]])
    cx = ChainComplex(DegreeWindow(0, 1), {0: 3, 1: 3}, {1: d1})
    assert cx.homology_table().dims() == {0: 1, 1: 1}


@given(complexes())
def test_homology_matches_construction(case):
    cx, expected = case
    assert {n: cx.homology(n)[0] for n in cx.window.degrees()} == expected


@given(complexes(), st.integers(-3, 3))
def test_shift_moves_homology(case, k):
    cx, expected = case
    sh = shift(cx, k)
    assert {n: sh.homology(n)[0] for n in sh.window.degrees()} == {n + k: h for n, h in expected.items()}


@given(complexes())
def test_cone_of_identity_is_acyclic(case):
    cx, _ = case
    c = cone(ChainMap.identity(cx))
    for n in c.window.degrees():
        if c.window.trusted(n):
            assert c.homology(n)[0] == 0


@given(complexes())
def test_truncations_split_homology(case):
    cx, expected = case
    w = cx.window
    for n in w.degrees():
        p = -n
        ge = truncate_ge(cx, p)
        lt = truncate_lt(cx, p)
        for m in ge.window.degrees():
            assert ge.homology(m)[0] == expected[m]
        for m in lt.window.degrees():
            if m > n:
                assert lt.homology(m)[0] == expected[m]
            else:
                assert lt.homology(m)[0] == 0


def _tensor_bicomplex(a, b):
    """``A ⊗ B`` as a bicomplex with the Koszul sign on ``d_II``."""
    from cyclotome.linalg import block

    dims, dI, dII = {}, {}, {}
    for p in a.window.degrees():
        for q in b.window.degrees():
            dims[(p, q)] = a.dim(p) * b.dim(q)

    def kron(x, y):
        ent = []
        for i, j, v in x.entries():
            for k, l, w in y.entries():
                ent.append((i * y.nrows + k, j * y.ncols + l, v * w))
        return SparseMatrix.from_entries(x.nrows * y.nrows, x.ncols * y.ncols, ent, QQ)

    for p in a.window.degrees():
        for q in b.window.degrees():
            if p - 1 >= a.window.lo:
                dI[(p, q)] = kron(a.diff(p), SparseMatrix.identity(b.dim(q)))
            if q - 1 >= b.window.lo:
                m = kron(SparseMatrix.identity(a.dim(p)), b.diff(q))
                dII[(p, q)] = m.scale(-1) if p % 2 else m
    return Bicomplex((a.window.lo, a.window.hi), (b.window.lo, b.window.hi), dims, dI, dII, QQ)


@given(complexes(max_len=3, max_part=2), complexes(max_len=3, max_part=2))
def test_kunneth_for_total_complex(ca, cb):
    a, ha = ca
    b, hb = cb
    bc = _tensor_bicomplex(a, b)
    assert bc.violations() == []
    for tot in (bc.total_sum(), bc.total_prod()):
        for n in tot.window.degrees():
            want = sum(ha[p] * hb[n - p] for p in ha if n - p in hb)
            assert tot.homology(n)[0] == want


def test_inverse_limit_of_surjective_tower():
    base, _ = split_complex(0, [(1, 0), (0, 1), (1, 0)], seed=3)
    w = base.window
    zero = ChainComplex.zero(w)
    ident = ChainMap.identity(base)
    to_zero = ChainMap(base, zero, {})
    tower = InverseSystem([zero, base, base], {1: to_zero, 2: ident})
    assert tower.violations() == []
    lim = inverse_limit(tower)
    assert {n: lim.homology(n)[0] for n in w.degrees()} == {0: 1, 1: 0, 2: 1}


def test_chain_map_check_detects_noncommuting_square():
    a, _ = split_complex(0, [(0, 0), (0, 1)], seed=1)
    f = ChainMap(a, a, {0: SparseMatrix.identity(a.dim(0)), 1: SparseMatrix.zeros(a.dim(1), a.dim(1))})
    assert f.check() != []
