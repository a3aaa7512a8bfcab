"""Mixed complexes and the cyclic variants computed from them.

A mixed complex is a chain complex ``(M, d)`` with a degree ``+1`` map ``B``
such that ``d² = B² = dB + Bd = 0``.  The cyclic variants use the explicit
resolution ``P_k = ⊕_i Λ[2i]`` of ``k`` over ``Λ = k[ε]/ε²``:

* ``hc``: ``(M ⊗_Λ P_k)_n = ⊕_{0<=i<=T} M_{n-2i}``, ``D(m)_i = d m_i + B m_{i+1}``
* ``hc_minus``: ``Hom_Λ(P_k, M)_n = ∏_{0<=i<=T} M_{n+2i}``, ``D(m)_i = d m_i + B m_{i-1}``
* ``hc_per``: the same product indexed by all ``i <= T`` with ``M_{n+2i}`` nonzero

Truncating at ``i <= T`` gives a subcomplex (``hc``) or a quotient complex
(the product models); stability flags record whether raising ``T`` and the
window changes an answer.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from typing import Callable, Union

from .chain import ChainComplex, ChainMap, DegreeWindow, HomologyEntry, HomologyTable, _trust, cone
from .hochschild import (DEFAULT_MAX_BASIS, GradedOperators, HochschildModel, graded_operators,
                         induced_level_maps, regrade)
from .linalg import QQ, Field, SparseMatrix, block, compose, hstack, kernel_matrix, rank, rank_profile, solve
from .presentations import (CategoryPresentation, LocalizationPairPresentation, PresentationError,
                            inclusion_functor, require_valid)


@dataclass
class MixedComplex:
    """``complex`` carries ``d``; ``B[n] : M_n -> M_{n+1}``.

    ``exact = (lo, hi)``: ``M`` is genuinely zero below ``lo`` and the stored
    ``M_k``, ``d_k``, ``B_{k-1}`` agree with the untruncated object for
    ``k <= hi`` (``hi`` may be ``math.inf``).  ``None`` means no degree is
    known to be exact.
    """

    complex: ChainComplex
    B: dict[int, SparseMatrix]
    exact: tuple[int, float] | None = None
    name: str = ""

    @property
    def field(self) -> Field:
        return self.complex.field

    @property
    def lo(self) -> int:
        return self.complex.window.lo

    @property
    def hi(self) -> int:
        return self.complex.window.hi

    def dim(self, n: int) -> int:
        return self.complex.dim(n)

    def d(self, n: int) -> SparseMatrix:
        return self.complex.diff(n)

    def b(self, n: int) -> SparseMatrix:
        """``B_n : M_n -> M_{n+1}`` (zero outside the stored range)."""
        m = self.B.get(n)
        if m is None:
            return SparseMatrix.zeros(self.dim(n + 1), self.dim(n), self.field)
        return m

    def exact_hi(self) -> float:
        return -math.inf if self.exact is None else self.exact[1]

    def violations(self) -> list[str]:
        out = []
        # only degrees where every map involved is stored (B leaves the window at the top)
        for n in range(self.lo, self.hi + 1):
            if self.dim(n - 1) and not compose(self.d(n - 1), self.d(n)).is_zero():
                out.append(f"d^2 != 0 on M_{n}")
            if n + 2 <= self.hi and not compose(self.b(n + 1), self.b(n)).is_zero():
                out.append(f"B^2 != 0 on M_{n}")
            if n + 1 <= self.hi:
                s = compose(self.d(n + 1), self.b(n)) + compose(self.b(n - 1), self.d(n))
                if not s.is_zero():
                    out.append(f"dB + Bd != 0 on M_{n}")
        return out

    def check(self) -> "MixedComplex":
        bad = self.violations()
        if bad:
            raise PresentationError(bad)
        return self

    def homology_table(self) -> HomologyTable:
        return self.complex.homology_table(f"H(M) {self.name}".strip())


def trivial_mixed(field: Field = QQ) -> MixedComplex:
    """``(k, 0, 0)``: one copy of the ground field in degree 0."""
    cx = ChainComplex(DegreeWindow(0, 0), {0: 1}, {}, field)
    return MixedComplex(cx, {}, (0, math.inf), "k")


def direct_sum(a: MixedComplex, b: MixedComplex) -> MixedComplex:
    lo, hi = min(a.lo, b.lo), max(a.hi, b.hi)
    fld = a.field
    dims = {n: a.dim(n) + b.dim(n) for n in range(lo, hi + 1)}
    d = {n: block([[a.d(n), None], [None, b.d(n)]], [a.dim(n - 1), b.dim(n - 1)], [a.dim(n), b.dim(n)], fld)
         for n in range(lo + 1, hi + 1)}
    B = {n: block([[a.b(n), None], [None, b.b(n)]], [a.dim(n + 1), b.dim(n + 1)], [a.dim(n), b.dim(n)], fld)
         for n in range(lo, hi)}
    ta, tb = a.complex.window, b.complex.window
    cx = ChainComplex(_trust(lo, hi, max(ta.trust_lo, tb.trust_lo), min(ta.trust_hi, tb.trust_hi)), dims, d, fld)
    ex = None
    if a.exact is not None and b.exact is not None:
        ex = (min(a.exact[0], b.exact[0]), min(a.exact[1], b.exact[1]))
    return MixedComplex(cx, B, ex, f"{a.name}+{b.name}")


# ----------------------------------------------------------------------
# M(-) of algebras and (dg) categories


def mixed_from_operators(g: GradedOperators, name: str = "") -> MixedComplex:
    """``M = Cone(1 - t : (C, b') -> (C, b))`` with ``B(y, x) = (0, N y)``.

    ``M_n = C_n ⊕ C_{n-1}``; with ``d(y, x) = (b y + (1-t) x, -b' x)`` this is
    exactly the total complex of the first two columns of the cyclic bicomplex.
    """
    fld = g.field
    lo, hi = g.lo, g.hi
    y = _graded_complex(g, g.d)
    x = _graded_complex(g, g.dprime)
    one_t = {m: SparseMatrix.identity(g.dims.get(m, 0), fld) - g.t[m] for m in range(lo, hi + 1)}
    f = ChainMap(x, y, one_t)
    cn = cone(f)
    B = {}
    for m in range(lo, hi):
        B[m] = block([[None, None], [g.N[m], None]],
                     [g.dims.get(m + 1, 0), g.dims.get(m, 0)], [g.dims.get(m, 0), g.dims.get(m - 1, 0)], fld)
    # M_k = C_k ⊕ C_{k-1} is exact as long as C_k is
    exact = None if g.trust is None else (lo, g.trust[1] + 1)
    return MixedComplex(cn, B, exact, name)


def _graded_complex(g: GradedOperators, mats) -> ChainComplex:
    if g.trust is None:
        w = _trust(g.lo, g.hi, g.lo, g.lo - 1)
    else:
        w = _trust(g.lo, g.hi, g.trust[0], g.trust[1])
    return ChainComplex(w, g.dims, {m: mats[m] for m in range(g.lo + 1, g.hi + 1)}, g.field)


def mixed_of_category(c: CategoryPresentation, hi: int, max_basis: int = DEFAULT_MAX_BASIS,
                      lo: int | None = None, top_degree: int | None = None) -> MixedComplex:
    """``M(c)`` with chains up to simplicial degree ``hi + 1``; ``H_n`` trusted for ``n <= hi``
    (for dg categories only when every morphism has degree ``>= 0``)."""
    require_valid(c)
    model = HochschildModel(c, hi + 1, max_basis=max_basis, validate=False)
    g = graded_operators(model, lo=lo, hi=top_degree)
    return mixed_from_operators(g, c.name)


mixed_of_algebra = mixed_of_category
mixed_of_dg_category = mixed_of_category


def category_builder(c: CategoryPresentation, max_basis: int = DEFAULT_MAX_BASIS) -> Callable[[int], MixedComplex]:
    """``exact_hi -> M(c)`` exact at least up to that degree (plain categories)."""
    def build(exact_hi: int) -> MixedComplex:
        return mixed_of_category(c, max(exact_hi - 1, 0), max_basis)
    return build


def mixed_map_of_functor(F, hi: int, max_basis: int = DEFAULT_MAX_BASIS):
    """``(M(source), M(target), components)`` for the map induced by ``F`` on
    ``M = C ⊕ C[-1]`` (``F`` on both summands); both built on a common window."""
    sm = HochschildModel(F.source, hi + 1, max_basis=max_basis)
    tm = HochschildModel(F.target, hi + 1, max_basis=max_basis)
    s_pos, s_dims = sm.layout()
    t_pos, t_dims = tm.layout()
    lo = min([0] + list(s_dims) + list(t_dims))
    top = max([0] + list(s_dims) + list(t_dims))
    sg = graded_operators(sm, lo=lo, hi=top)
    tg = graded_operators(tm, lo=lo, hi=top)
    ms = mixed_from_operators(sg, F.source.name)
    mt = mixed_from_operators(tg, F.target.name)
    ent = regrade(sm, induced_level_maps(F, sm, tm), 0, 0, s_pos, t_pos)
    fc = {m: SparseMatrix.from_entries(tg.dims.get(m, 0), sg.dims.get(m, 0), ent.get(m, []), sm.field)
          for m in range(lo - 1, top + 1)}
    comps = {}
    for m in range(lo, top + 1):
        comps[m] = block([[fc[m], None], [None, fc[m - 1]]],
                         [tg.dims.get(m, 0), tg.dims.get(m - 1, 0)], [sg.dims.get(m, 0), sg.dims.get(m - 1, 0)],
                         sm.field)
    return ms, mt, ChainMap(ms.complex, mt.complex, comps)


def mixed_cone(ms: MixedComplex, mt: MixedComplex, f: ChainMap, name: str = "") -> MixedComplex:
    """Cone of a map of mixed complexes; ``B(y, x) = (B y, -B x)`` so that
    ``dB + Bd = 0`` holds with the cone differential ``d(y, x) = (dy + f x, -dx)``."""
    cn = cone(f)
    fld = ms.field
    B = {}
    w = cn.window
    for n in range(w.lo, w.hi):
        B[n] = block([[mt.b(n), None], [None, ms.b(n - 1).scale(-1)]],
                     [mt.dim(n + 1), ms.dim(n)], [mt.dim(n), ms.dim(n - 1)], fld)
    ex = None
    if ms.exact is not None and mt.exact is not None:
        ex = (min(ms.exact[0] + 1, mt.exact[0]), min(mt.exact[1], ms.exact[1] + 1))
    return MixedComplex(cn, B, ex, name)


def mixed_of_pair(p: LocalizationPairPresentation, hi: int, max_basis: int = DEFAULT_MAX_BASIS) -> MixedComplex:
    """Cone of ``M(C_0) -> M(C_1)`` for the full subcategory inclusion."""
    bad = p.violations()
    if bad:
        raise PresentationError(bad)
    sub = p.sub()
    F = inclusion_functor(sub, p.ambient)
    ms, mt, f = mixed_map_of_functor(F, hi, max_basis)
    return mixed_cone(ms, mt, f, f"({','.join(p.sub_objects)} ⊂ {p.ambient.name})")


# ----------------------------------------------------------------------
# P_k models


@dataclass(frozen=True)
class PkResolution:
    """The truncation ``⊕_{0<=i<=T} Λ[2i]`` of ``P_k``: generator ``1_i`` in degree
    ``2i``, ``d(1_i) = ε·1_{i-1}``; periodicity ``1_i ↦ 1_{i-1}``, ``1_0 ↦ 0``."""

    columns: int

    def basis(self) -> list[tuple[int, int]]:
        """``(i, e)`` for ``ε^e·1_i``, degree ``2i + e``."""
        return [(i, e) for i in range(self.columns + 1) for e in (0, 1)]

    def degree(self, g: tuple[int, int]) -> int:
        return 2 * g[0] + g[1]

    def differential(self) -> dict[tuple[int, int], dict[tuple[int, int], int]]:
        return {(i, 0): ({(i - 1, 1): 1} if i >= 1 else {}) for i in range(self.columns + 1)} | \
               {(i, 1): {} for i in range(self.columns + 1)}

    def act_eps(self, g: tuple[int, int]) -> dict[tuple[int, int], int]:
        return {(g[0], 1): 1} if g[1] == 0 else {}

    def violations(self) -> list[str]:
        out = []
        d = self.differential()
        for g in self.basis():
            for h in d[g]:
                if d[h]:
                    out.append(f"d^2 != 0 on {g}")
            # d is Λ-linear: d(ε g) = -ε d(g) (ε has degree 1)
            lhs = {}
            for h, c in self.act_eps(g).items():
                for k, v in d[h].items():
                    lhs[k] = lhs.get(k, 0) + c * v
            rhs = {}
            for h, c in d[g].items():
                for k, v in self.act_eps(h).items():
                    rhs[k] = rhs.get(k, 0) - c * v
            if {k: v for k, v in lhs.items() if v} != {k: v for k, v in rhs.items() if v}:
                out.append(f"d not Λ-linear on {g}")
        return out

    def periodicity(self, g: tuple[int, int]) -> dict[tuple[int, int], int]:
        return {(g[0] - 1, g[1]): 1} if g[0] >= 1 else {}


def default_columns(hi: int) -> int:
    return math.ceil(max(hi, 0) / 2) + 2


class ColumnTotal:
    """Total complex of columns ``j`` with column ``j`` of degree ``n`` equal to
    ``M_{n + 2 s j}``; ``D = d`` on columns plus ``B`` from column ``j`` to ``j + s``.

    ``s = -1`` is the ``⊗_Λ P_k`` model, ``s = +1`` the ``Hom_Λ(P_k, -)`` model.
    ``jrange(n)`` gives the columns present in degree ``n``.
    """

    def __init__(self, m: MixedComplex, s: int, jrange: Callable[[int], range], lo: int, hi: int):
        self.m, self.s, self.lo, self.hi = m, s, lo, hi
        self.jrange = jrange
        self.layout: dict[int, dict[int, tuple[int, int]]] = {}
        dims = {}
        for n in range(lo - 1, hi + 1):
            off = 0
            lay = {}
            for j in jrange(n):
                dm = m.dim(n + 2 * s * j)
                if dm:
                    lay[j] = (off, dm)
                    off += dm
            self.layout[n] = lay
            dims[n] = off
        self.dims = dims
        d = {n: self._diff(n) for n in range(lo + 1, hi + 1)}
        self.complex = ChainComplex(DegreeWindow(lo, hi), {n: dims[n] for n in range(lo, hi + 1)}, d, m.field)

    def _diff(self, n: int) -> SparseMatrix:
        m, s = self.m, self.s
        src, tgt = self.layout[n], self.layout[n - 1]
        ent = []
        for j, (off, dm) in src.items():
            k = n + 2 * s * j
            if j in tgt:
                toff = tgt[j][0]
                ent += [(toff + r, off + c, v) for r, c, v in m.d(k).entries()]
            if j + s in tgt:
                toff = tgt[j + s][0]
                ent += [(toff + r, off + c, v) for r, c, v in m.b(k).entries()]
        return SparseMatrix.from_entries(self.dims[n - 1], self.dims[n], ent, m.field)

    def max_m_degree(self, n: int) -> int:
        js = [j for j in self.jrange(n)]
        if not js:
            return -10**9
        return max(n + 2 * self.s * j for j in js)

    def column_matrix(self, n: int, j: int, to_column: bool) -> SparseMatrix:
        """Inclusion ``M_{n+2sj} -> Tot_n`` (or the projection when ``to_column``)."""
        dm = self.m.dim(n + 2 * self.s * j)
        fld = self.m.field
        if j not in self.layout[n]:
            shape = (dm, self.dims[n]) if to_column else (self.dims[n], dm)
            return SparseMatrix.zeros(*shape, fld)
        off = self.layout[n][j][0]
        ent = [(off + i, i, 1) for i in range(dm)]
        if to_column:
            ent = [(c, r, v) for r, c, v in ent]
            return SparseMatrix.from_entries(dm, self.dims[n], ent, fld)
        return SparseMatrix.from_entries(self.dims[n], dm, ent, fld)


def hc_total(m: MixedComplex, hi: int, T: int) -> tuple[ChainComplex, ColumnTotal]:
    """``M ⊗_Λ P_k`` truncated to columns ``0..T``, degrees ``m.lo..hi+1``, with trust flags."""
    lo = m.lo
    tot = ColumnTotal(m, -1, lambda n: range(0, T + 1), lo, hi + 1)
    ehi = m.exact_hi()
    tlo, thi = lo, lo - 1
    if m.exact is not None:
        # H_n needs M exact through degree n+1 and no column beyond T reaching degree n+1
        thi = int(min(ehi - 1, hi, 2 * T + lo))
    w = _trust(lo, hi + 1, tlo, thi)
    return tot.complex.with_window(w), tot


def hc(m: MixedComplex, hi: int, T: int | None = None) -> HomologyTable:
    T = default_columns(hi) if T is None else T
    cx, _ = hc_total(m, hi, T)
    tab = cx.homology_table(f"HC {m.name}".strip())
    tab.entries = {n: e for n, e in tab.entries.items() if n <= hi}
    return tab


MixedSource = Union[MixedComplex, Callable[[int], MixedComplex]]


def _resolve(src: MixedSource, exact_hi: int) -> MixedComplex:
    if isinstance(src, MixedComplex):
        return src
    return src(exact_hi)


def _product_homology(m: MixedComplex, lo: int, hi: int, T: int, jmin: Callable[[int], int]) -> dict[int, tuple[int, bool]]:
    """``{n: (dim, trusted)}`` for the product model with columns ``jmin(n)..T``."""
    tot = ColumnTotal(m, +1, lambda n: range(jmin(n), T + 1), lo, hi + 1)
    cx = tot.complex
    out = {}
    ehi = m.exact_hi()
    for n in range(lo, hi + 1):
        dim = cx.dim(n) - rank(cx.diff(n)) - rank(cx.diff(n + 1))
        # the top column must reach two degrees above the bottom of M, otherwise
        # a class living in a dropped column is invisible to both T and T + 1
        trusted = m.exact is not None and n + 1 + 2 * T <= ehi and n + 2 * T >= m.lo + 2
        out[n] = (dim, trusted)
    return out


def hc_minus(src: MixedSource, hi: int, T: int | None = None, lo: int | None = None) -> HomologyTable:
    """Homology of ``∏_{0<=i<=T} M_{n+2i}``; ``stable`` when the dimension is the
    same for ``T + 1`` and for ``M`` rebuilt two degrees higher."""
    T = default_columns(hi) if T is None else T
    base = _resolve(src, hi + 2 + 2 * T)
    mlo = base.lo
    lo = mlo - 2 * T if lo is None else lo
    a = _product_homology(base, lo, hi, T, lambda n: 0)
    bT = _resolve(src, hi + 4 + 2 * T)
    b = _product_homology(bT, lo, hi, T + 1, lambda n: 0)
    c = _product_homology(_resolve(src, hi + 4 + 2 * T), lo, hi, T, lambda n: 0)
    entries = {}
    for n in range(lo, hi + 1):
        dim, tr = a[n]
        stable = tr and b[n] == (dim, True) and c[n] == (dim, True)
        entries[n] = HomologyEntry(dim, tr, stable)
    return HomologyTable(entries, base.field, f"HC- {base.name}".strip())


def hc_per(src: MixedSource, hi: int, T: int | None = None, lo: int | None = None) -> HomologyTable:
    """Stabilized periodic model: columns ``i <= T`` with ``M_{n+2i}`` in the support;
    an entry is ``stable`` when it agrees at ``T`` and ``T + 1``."""
    T = default_columns(hi) if T is None else T
    lo = -hi if lo is None else lo
    base = _resolve(src, hi + 4 + 2 * T)
    mlo = base.lo

    def jmin(n):
        return math.ceil((mlo - n) / 2)

    a = _product_homology(base, lo, hi, T, jmin)
    b = _product_homology(base, lo, hi, T + 1, jmin)
    entries = {}
    for n in range(lo, hi + 1):
        dim, tr = a[n]
        stable = tr and b[n] == (dim, True)
        entries[n] = HomologyEntry(dim, tr, stable)
    return HomologyTable(entries, base.field, f"HP {base.name}".strip())


# ----------------------------------------------------------------------
# homology bases and the SBI sequence


def homology_basis(cx: ChainComplex, n: int) -> tuple[SparseMatrix, SparseMatrix, SparseMatrix]:
    """``(Z, Bd, R)``: cycle basis, boundaries and representatives of a basis of
    ``H_n``, picked as the first cycles independent modulo boundaries."""
    z = cx.cycles(n)
    bd = cx.boundaries(n)
    keep = rank_profile(hstack([bd, z], nrows=cx.dim(n), field=cx.field))
    sel = [k - bd.ncols for k in keep if k >= bd.ncols]
    cols = z.columns()
    r = SparseMatrix.from_columns(cx.dim(n), [cols[k] for k in sel], cx.field)
    return z, bd, r


def map_on_homology(f: SparseMatrix, src: ChainComplex, n: int, tgt: ChainComplex, k: int) -> SparseMatrix:
    """Matrix of the map ``H_n(src) -> H_k(tgt)`` induced by the chain-level ``f``
    in the bases of :func:`homology_basis`."""
    _, _, rs = homology_basis(src, n)
    _, bt, rt = homology_basis(tgt, k)
    big = hstack([rt, bt], nrows=tgt.dim(k), field=tgt.field)
    cols = []
    for v in compose(f, rs).columns():
        x = solve(big, v)
        if x is None:
            raise ValueError("image is not a cycle")
        cols.append({i: c for i, c in x.items() if i < rt.ncols})
    return SparseMatrix.from_columns(rt.ncols, cols, tgt.field)


def _span_equal(a: SparseMatrix, b: SparseMatrix) -> tuple[bool, int, int]:
    ra, rb = rank(a), rank(b)
    rab = rank(hstack([a, b], nrows=a.nrows, field=a.field))
    return ra == rb == rab, ra, rb


def exact_at(f: SparseMatrix, x: ChainComplex, nx: int, y: ChainComplex, ny: int,
             g: SparseMatrix, w: ChainComplex, nw: int) -> tuple[bool, int, int]:
    """Exactness of ``H(x) -f-> H(y) -g-> H(w)`` at ``H(y)``, compared as subspaces
    of ``Z(y)`` containing ``B(y)``: returns ``(equal, dim image, dim kernel)``
    (dimensions taken modulo boundaries)."""
    fld = y.field
    zx = x.cycles(nx)
    zy = y.cycles(ny)
    by = y.boundaries(ny)
    bw = w.boundaries(nw)
    img = hstack([compose(f, zx), by], nrows=y.dim(ny), field=fld)
    gz = compose(g, zy)
    kk = kernel_matrix(hstack([gz, bw], nrows=w.dim(nw), field=fld))
    coeff = kk.submatrix(range(zy.ncols), range(kk.ncols))
    ker = hstack([compose(zy, coeff), by], nrows=y.dim(ny), field=fld)
    eq, ri, rk = _span_equal(img, ker)
    rb = rank(by)
    return eq, ri - rb, rk - rb


@dataclass
class SbiNode:
    group: str
    degree: int
    exact: bool
    image_dim: int
    kernel_dim: int
    trusted: bool


@dataclass
class SbiSequence:
    """``HH_n -I-> HC_n -S-> HC_{n-2} -B-> HH_{n-1}`` per degree ``n``."""

    hh: dict[int, int]
    hc: dict[int, int]
    hc_shift: dict[int, int]
    I: dict[int, SparseMatrix]
    S: dict[int, SparseMatrix]
    B: dict[int, SparseMatrix]
    nodes: list[SbiNode] = dc_field(default_factory=list)

    def exact(self, trusted_only: bool = True) -> bool:
        return all(nd.exact for nd in self.nodes if nd.trusted or not trusted_only)


def sbi(m: MixedComplex, hi: int, T: int | None = None) -> SbiSequence:
    """SBI sequence from ``0 -> M -> Tot^{<=T} -> Tot^{<=T-1}[2] -> 0``.

    ``I`` includes ``M`` as column 0, ``S`` drops column 0 and renumbers the
    rest, and the connecting map lifts a class of the quotient to ``Tot``,
    applies ``D`` and reads off column 0.
    """
    T = default_columns(hi) + 1 if T is None else T
    fld = m.field
    tot_cx, tot = hc_total(m, hi + 1, T)
    q_cx, q = hc_total(m, hi - 1, T - 1)
    mc = m.complex
    lo = m.lo

    def I(n):
        return tot.column_matrix(n, 0, False)

    def S(n):
        # Tot_n -> Q_{n-2}: column j >= 1 to column j-1
        ent = []
        for j, (off, dm) in tot.layout[n].items():
            if j == 0 or (j - 1) not in q.layout.get(n - 2, {}):
                continue
            qoff = q.layout[n - 2][j - 1][0]
            ent += [(qoff + i, off + i, 1) for i in range(dm)]
        return SparseMatrix.from_entries(q_cx.dim(n - 2), tot_cx.dim(n), ent, fld)

    def lift(n):
        # Q_{n-2} -> Tot_n, the transpose of S
        return S(n).transpose()

    def conn(n):
        # Q_{n-2} -> M_{n-1}
        return compose(tot.column_matrix(n - 1, 0, True), compose(tot_cx.diff(n), lift(n)))

    seq = SbiSequence({}, {}, {}, {}, {}, {})
    degs = range(lo, hi + 1)
    for n in degs:
        seq.hh[n] = mc.homology(n)[0]
        seq.hc[n] = tot_cx.homology(n)[0]
        seq.hc_shift[n] = q_cx.homology(n - 2)[0] if n - 2 >= q_cx.window.lo else 0
        seq.I[n] = map_on_homology(I(n), mc, n, tot_cx, n)
        if n - 2 >= q_cx.window.lo:
            seq.S[n] = map_on_homology(S(n), tot_cx, n, q_cx, n - 2)
            if n - 1 >= lo:
                seq.B[n] = map_on_homology(conn(n), q_cx, n - 2, mc, n - 1)
    for n in degs:
        tr = mc.window.trusted(n) and tot_cx.window.trusted(n)
        # at HH_n: Q_{n-1} -> M_n -> Tot_n
        if n - 1 >= q_cx.window.lo and n + 1 <= tot_cx.window.hi:
            e, a, b = exact_at(conn(n + 1), q_cx, n - 1, mc, n, I(n), tot_cx, n)
        else:
            e, a, b = exact_at(SparseMatrix.zeros(mc.dim(n), 0, fld), _empty(fld), 0, mc, n, I(n), tot_cx, n)
        seq.nodes.append(SbiNode("HH", n, e, a, b, tr))
        # at HC_n: M_n -> Tot_n -> Q_{n-2}
        g = S(n) if n - 2 >= q_cx.window.lo else SparseMatrix.zeros(0, tot_cx.dim(n), fld)
        w = q_cx if n - 2 >= q_cx.window.lo else _empty(fld)
        e, a, b = exact_at(I(n), mc, n, tot_cx, n, g, w, n - 2 if n - 2 >= q_cx.window.lo else 0)
        seq.nodes.append(SbiNode("HC", n, e, a, b, tr))
        # at HC_{n-2}: Tot_n -> Q_{n-2} -> M_{n-1}
        if n - 2 >= q_cx.window.lo:
            tr2 = tr and q_cx.window.trusted(n - 2) and mc.window.trusted(n - 1)
            g = conn(n) if n - 1 >= lo else SparseMatrix.zeros(0, q_cx.dim(n - 2), fld)
            w = mc if n - 1 >= lo else _empty(fld)
            e, a, b = exact_at(S(n), tot_cx, n, q_cx, n - 2, g, w, n - 1 if n - 1 >= lo else 0)
            seq.nodes.append(SbiNode("HC[2]", n, e, a, b, tr2))
    return seq


def _empty(fld: Field) -> ChainComplex:
    return ChainComplex(DegreeWindow(0, 0), {0: 0}, {}, fld)


# ----------------------------------------------------------------------
# maps of mixed complexes


def b_commutation_failures(ms: MixedComplex, mt: MixedComplex, f: ChainMap) -> list[int]:
    """Degrees ``n`` (with ``B_n`` stored on both sides) where ``f B != B f``."""
    bad = []
    for n in f.degrees():
        if n + 1 > min(ms.hi, mt.hi):
            continue
        if compose(f[n + 1], ms.b(n)) != compose(mt.b(n), f[n]):
            bad.append(n)
    return bad


@dataclass
class InducedMap:
    source: HomologyTable
    target: HomologyTable
    ranks: dict[int, int]

    def isomorphism_degrees(self) -> list[int]:
        return [n for n, r in sorted(self.ranks.items())
                if r == self.source[n].dim == self.target[n].dim]


def hc_induced(ms: MixedComplex, mt: MixedComplex, f: ChainMap, hi: int, T: int | None = None) -> InducedMap:
    """Map ``hc(ms) -> hc(mt)`` induced columnwise by ``f``, with ranks on homology."""
    T = default_columns(hi) if T is None else T
    s_cx, s_tot = hc_total(ms, hi, T)
    t_cx, t_tot = hc_total(mt, hi, T)
    comps = {}
    for n in s_cx.window.degrees():
        ent = []
        for j, (off, dm) in s_tot.layout[n].items():
            if j not in t_tot.layout[n]:
                continue
            toff = t_tot.layout[n][j][0]
            ent += [(toff + r, off + c, v) for r, c, v in f[n - 2 * j].entries()]
        comps[n] = SparseMatrix.from_entries(t_cx.dim(n), s_cx.dim(n), ent, ms.field)
    F = ChainMap(s_cx, t_cx, comps)
    if F.check():
        raise ValueError(f"induced map is not a chain map in degrees {F.check()}")
    st = s_cx.homology_table(f"HC {ms.name}")
    tt = t_cx.homology_table(f"HC {mt.name}")
    ranks = {n: F.homology_rank(n) for n in range(s_cx.window.lo, hi + 1)}
    st.entries = {n: e for n, e in st.entries.items() if n <= hi}
    tt.entries = {n: e for n, e in tt.entries.items() if n <= hi}
    return InducedMap(st, tt, ranks)
