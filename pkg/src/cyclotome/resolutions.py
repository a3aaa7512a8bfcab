"""Injective and Cartan–Eilenberg resolutions of bounded complexes of modules.

Modules are finite-dimensional left modules over a basic algebra with vertex
idempotents (semisimple, ``k[x]/(x^m)``, path algebras of acyclic quivers).
The indecomposable injectives are ``I(v) = D(e_v A)``; injective envelopes
are built from the socle, so resolutions are minimal.

Complexes are cochain complexes ``K^p -> K^{p+1}``.  A CE resolution stores
``I^{p,q}`` (``q >= 0``) with ``d_I`` of bidegree ``(1, 0)``, ``d_II`` of
bidegree ``(0, 1)`` and ``d_I d_II + d_II d_I = 0``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field as dc_field
from typing import Mapping, Sequence

from .chain import (Bicomplex, ChainComplex, ChainMap, DegreeWindow, InverseSystem, _coords_in_basis,
                    _trust, inverse_limit, quotient_map)
from .linalg import (Field, SparseMatrix, block, compose, hstack, kernel_matrix, rank, rank_profile, solve)
from .presentations import AlgebraPresentation, PresentationError, semisimple_quotient


class UnsupportedAlgebra(PresentationError):
    pass


@dataclass
class ModuleOverAlgebra:
    """``action[i]`` is the matrix of the ``i``-th basis element of ``base``."""

    base: AlgebraPresentation
    dim: int
    action: list[SparseMatrix]
    name: str = ""

    @property
    def field(self) -> Field:
        return self.base.field

    def act(self, vec: Mapping[int, object]) -> SparseMatrix:
        """Matrix of an algebra element given as a vector."""
        out = SparseMatrix.zeros(self.dim, self.dim, self.field)
        for i, c in vec.items():
            out = out + self.action[i].scale(c)
        return out

    def violations(self) -> list[str]:
        A = self.base
        out = []
        if len(self.action) != A.dim:
            return [f"{len(self.action)} action matrices for an algebra of dimension {A.dim}"]
        for i, m in enumerate(self.action):
            if m.shape != (self.dim, self.dim):
                out.append(f"action of {A.basis_name(i)} has shape {m.shape}")
        if out:
            return out
        if self.act(A.unit) != SparseMatrix.identity(self.dim, self.field):
            out.append("unit does not act as the identity")
        for g in range(A.dim):
            for f in range(A.dim):
                lhs = compose(self.action[g], self.action[f])
                rhs = self.act(dict(A.compose(g, f)))
                if lhs != rhs:
                    out.append(f"action of {A.basis_name(g)}·{A.basis_name(f)} is not the product")
        return out

    def check(self) -> "ModuleOverAlgebra":
        bad = self.violations()
        if bad:
            raise PresentationError(bad)
        return self

    @classmethod
    def zero(cls, A: AlgebraPresentation) -> "ModuleOverAlgebra":
        return cls(A, 0, [SparseMatrix.zeros(0, 0, A.field) for _ in range(A.dim)], "0")

    def direct_sum(self, other: "ModuleOverAlgebra") -> "ModuleOverAlgebra":
        fld = self.field
        acts = [block([[a, None], [None, b]], [self.dim, other.dim], [self.dim, other.dim], fld)
                for a, b in zip(self.action, other.action)]
        return ModuleOverAlgebra(self.base, self.dim + other.dim, acts, f"{self.name}+{other.name}")

    def submodule(self, basis: SparseMatrix) -> "ModuleOverAlgebra":
        """Module structure on the span of the columns of ``basis`` (must be invariant)."""
        acts = [_coords_in_basis(basis, compose(a, basis)) if basis.ncols else
                SparseMatrix.zeros(0, 0, self.field) for a in self.action]
        return ModuleOverAlgebra(self.base, basis.ncols, acts, f"sub({self.name})")

    def quotient(self, sub: SparseMatrix) -> tuple["ModuleOverAlgebra", SparseMatrix, SparseMatrix]:
        """``(M/S, projection, section)`` with the section a linear (not module) splitting."""
        q, keep = quotient_map(sub)
        s = SparseMatrix.from_entries(self.dim, len(keep), [(j, k, 1) for k, j in enumerate(keep)], self.field)
        acts = [compose(q, compose(a, s)) for a in self.action]
        return ModuleOverAlgebra(self.base, len(keep), acts, f"{self.name}/sub"), q, s


def is_module_map(f: SparseMatrix, src: ModuleOverAlgebra, tgt: ModuleOverAlgebra) -> bool:
    if f.shape != (tgt.dim, src.dim):
        return False
    return all(compose(f, a) == compose(b, f) for a, b in zip(src.action, tgt.action))


def regular_module(A: AlgebraPresentation) -> ModuleOverAlgebra:
    """``A`` acting on itself by left multiplication."""
    fld = A.field
    acts = []
    for g in range(A.dim):
        ent = [(h, f, v) for f in range(A.dim) for h, v in A.compose(g, f)]
        acts.append(SparseMatrix.from_entries(A.dim, A.dim, ent, fld))
    return ModuleOverAlgebra(A, A.dim, acts, "A")


def simple_module(A: AlgebraPresentation, vertex: str) -> ModuleOverAlgebra:
    """One-dimensional simple at ``vertex``: the vertex acts by 1, everything else by 0."""
    fld = A.field
    i = A.index[vertex]
    acts = [SparseMatrix.from_entries(1, 1, [(0, 0, 1)] if g == i else [], fld) for g in range(A.dim)]
    return ModuleOverAlgebra(A, 1, acts, f"S({vertex})")


# ----------------------------------------------------------------------
# supported algebras and injectives


@dataclass
class AlgebraData:
    algebra: AlgebraPresentation
    vertices: list[str]
    radical: list[int]
    kind: str
    injectives: dict[str, ModuleOverAlgebra]


def classify(A: AlgebraPresentation) -> str:
    """``semisimple`` | ``self-injective`` | ``quiver``; raises for unsupported input.

    Any split basic algebra with recorded vertex idempotents is accepted:
    socle-based envelopes only need the vertices and the radical.  Resolutions
    over self-injective or non-hereditary algebras may be infinite and are
    truncated (and reported) at the row bound.
    """
    if A.is_dg:
        raise UnsupportedAlgebra("dg algebras are not supported")
    if not A.meta.get("vertices"):
        raise UnsupportedAlgebra(f"{A.name}: no quiver structure recorded")
    semisimple_quotient(A)
    verts = A.meta["vertices"]
    if all(A.basis_name(i) in verts for i in range(A.dim)):
        return "semisimple"
    return "quiver"


def indecomposable_injective(A: AlgebraPresentation, vertex: str) -> ModuleOverAlgebra:
    """``D(e_v A)`` with ``(a·φ)(w) = φ(w a)``."""
    fld = A.field
    e = A.index[vertex]
    spans = [A.compose_vec({e: 1}, {b: 1}) for b in range(A.dim)]
    cols = SparseMatrix.from_columns(A.dim, spans, fld)
    keep = rank_profile(cols)
    W = SparseMatrix.from_columns(A.dim, [spans[k] for k in keep], fld)
    acts = []
    for a in range(A.dim):
        # right multiplication w -> w a, in the basis W
        imgs = [A.compose_vec(dict(col), {a: 1}) for col in W.columns()]
        R = _coords_in_basis(W, SparseMatrix.from_columns(A.dim, imgs, fld))
        acts.append(R.transpose())
    return ModuleOverAlgebra(A, W.ncols, acts, f"I({vertex})")


_DATA_CACHE: dict[int, AlgebraData] = {}


def algebra_data(A: AlgebraPresentation) -> AlgebraData:
    key = id(A)
    if key not in _DATA_CACHE:
        kind = classify(A)
        verts = list(A.meta["vertices"])
        rad = [i for i in range(A.dim) if A.basis_name(i) not in verts]
        inj = {v: indecomposable_injective(A, v) for v in verts}
        data = AlgebraData(A, verts, rad, kind, inj)
        if kind == "quiver" and is_injective(regular_module(A), data):
            data.kind = "self-injective"
        _DATA_CACHE[key] = data
    return _DATA_CACHE[key]


@dataclass
class InjectiveModule:
    """A direct sum of indecomposable injectives, with its summand labels."""

    module: ModuleOverAlgebra
    summands: list[str]

    @classmethod
    def of(cls, data: AlgebraData, summands: Sequence[str]) -> "InjectiveModule":
        m = ModuleOverAlgebra.zero(data.algebra)
        for v in summands:
            m = m.direct_sum(data.injectives[v])
        m.name = "+".join(f"I({v})" for v in summands) or "0"
        return cls(m, list(summands))

    def direct_sum(self, other: "InjectiveModule") -> "InjectiveModule":
        return InjectiveModule(self.module.direct_sum(other.module), self.summands + other.summands)


def socle(m: ModuleOverAlgebra, data: AlgebraData) -> SparseMatrix:
    """Basis (columns) of ``{x : r x = 0}`` for the radical ``r``."""
    fld = m.field
    if not data.radical or m.dim == 0:
        return SparseMatrix.identity(m.dim, fld)
    stacked = block([[m.action[r]] for r in data.radical], [m.dim] * len(data.radical), [m.dim], fld)
    return kernel_matrix(stacked)


def injective_envelope(m: ModuleOverAlgebra, data: AlgebraData | None = None) -> tuple[InjectiveModule, SparseMatrix]:
    """Minimal ``m ↪ I``: one copy of ``I(v)`` per dimension of ``e_v soc(m)``."""
    data = data or algebra_data(m.base)
    A = m.base
    fld = m.field
    soc = socle(m, data)
    summands: list[str] = []
    rows: list[SparseMatrix] = []
    for v in data.vertices:
        ev = m.action[A.index[v]]
        part = compose(ev, soc)
        keep = rank_profile(part)
        if not keep:
            continue
        S = SparseMatrix.from_columns(m.dim, [part.columns()[k] for k in keep], fld)
        # functionals φ_j on M with φ_j(s_i) = δ_ij, supported on independent rows of S
        rsel = rank_profile(S.transpose())
        Ssq = S.submatrix(rsel, range(S.ncols))
        Inj = data.injectives[v]
        W = _injective_words(A, v)
        for j in range(S.ncols):
            # row vector φ with φ[rsel] = (Ssq^{-1})_{j,:}
            x = solve(Ssq.transpose(), {j: 1})
            phi = {rsel[i]: c for i, c in x.items()}
            # f(m)_i = φ(w_i · m)
            ent = []
            for i, w in enumerate(W):
                row = _row_times(phi, m.act(w), fld)
                ent += [(i, c, v_) for c, v_ in row.items()]
            rows.append(SparseMatrix.from_entries(Inj.dim, m.dim, ent, fld))
            summands.append(v)
    inj = InjectiveModule.of(data, summands)
    emb = block([[r] for r in rows], [r.nrows for r in rows], [m.dim], fld) if rows else \
        SparseMatrix.zeros(0, m.dim, fld)
    return inj, emb


def _injective_words(A: AlgebraPresentation, vertex: str) -> list[dict]:
    """The basis ``w_i`` of ``e_v A`` used by :func:`indecomposable_injective`."""
    fld = A.field
    e = A.index[vertex]
    spans = [A.compose_vec({e: 1}, {b: 1}) for b in range(A.dim)]
    keep = rank_profile(SparseMatrix.from_columns(A.dim, spans, fld))
    return [spans[k] for k in keep]


def _row_times(phi: Mapping[int, object], m: SparseMatrix, fld: Field) -> dict[int, object]:
    out: dict = {}
    for r, row in m.row_items():
        a = phi.get(r)
        if a is None:
            continue
        for c, v in row.items():
            w = fld.normalize(out.get(c, 0) + a * v)
            if w == 0:
                out.pop(c, None)
            else:
                out[c] = w
    return out


def is_injective(m: ModuleOverAlgebra, data: AlgebraData | None = None) -> bool:
    """``m`` is injective iff it has the dimension of the envelope of its socle."""
    inj, _ = injective_envelope(m, data)
    return inj.module.dim == m.dim


@dataclass
class InjectiveResolution:
    """``0 -> M -ε-> I^0 -d^0-> I^1 -> ... -> I^L``; ``complete`` when the last
    cokernel vanished (so ``I^{L+1} = 0`` is correct)."""

    module: ModuleOverAlgebra
    terms: list[InjectiveModule]
    eps: SparseMatrix
    d: list[SparseMatrix]
    complete: bool

    def length(self) -> int:
        return len(self.terms) - 1


def injective_resolution(m: ModuleOverAlgebra, length_bound: int = 6) -> InjectiveResolution:
    """Minimal injective resolution via envelopes of successive cokernels."""
    data = algebra_data(m.base)
    fld = m.field
    terms, ds = [], []
    inj, eps = injective_envelope(m, data)
    terms.append(inj)
    cur_map = eps
    complete = False
    for q in range(length_bound + 1):
        C, proj, _ = terms[-1].module.quotient(cur_map)
        if C.dim == 0:
            complete = True
            break
        if q == length_bound:
            break
        nxt, e2 = injective_envelope(C, data)
        ds.append(compose(e2, proj))
        terms.append(nxt)
        cur_map = ds[-1]
    return InjectiveResolution(m, terms, eps, ds, complete)


# ----------------------------------------------------------------------
# extensions into injectives and the horseshoe lemma


def extend_to(f: SparseMatrix, inc: SparseMatrix, src: ModuleOverAlgebra, tgt: ModuleOverAlgebra) -> SparseMatrix:
    """A module map ``g: src -> tgt`` with ``g ∘ inc = f`` (``tgt`` injective)."""
    fld = src.field
    nI, nM = tgt.dim, src.dim
    if nI == 0 or nM == 0:
        return SparseMatrix.zeros(nI, nM, fld)

    def var(i, j):
        return i * nM + j

    ent, rhs = [], {}
    eq = 0
    # g inc = f
    inc_cols = inc.columns()
    for k, col in enumerate(inc_cols):
        for i in range(nI):
            for j, v in col.items():
                ent.append((eq, var(i, j), v))
            fv = f[i, k]
            if fv:
                rhs[eq] = fv
            eq += 1
    # g a_M = a_I g
    for aM, aI in zip(src.action, tgt.action):
        aMc = aM.columns()
        for i in range(nI):
            for j in range(nM):
                for l, v in aMc[j].items():
                    ent.append((eq, var(i, l), v))
                eq += 1
        for i, row in aI.row_items():
            for l, v in row.items():
                for j in range(nM):
                    ent.append((eq - nI * nM + i * nM + j, var(l, j), -v))
    sysm = SparseMatrix.from_entries(eq, nI * nM, ent, fld)
    x = solve(sysm, rhs)
    if x is None:
        raise PresentationError("extension problem has no solution (target not injective?)")
    return SparseMatrix.from_entries(nI, nM, [(k // nM, k % nM, v) for k, v in x.items()], fld)


@dataclass
class Resolution:
    """Augmented complex ``0 -> M -ε-> I^0 -> ... -> I^L`` with summand labels per term."""

    module: ModuleOverAlgebra
    terms: list[InjectiveModule]
    eps: SparseMatrix
    d: list[SparseMatrix]
    complete: bool

    @classmethod
    def from_injective(cls, r: InjectiveResolution) -> "Resolution":
        return cls(r.module, r.terms, r.eps, r.d, r.complete)

    def term(self, q: int) -> InjectiveModule:
        if q < len(self.terms):
            return self.terms[q]
        return InjectiveModule.of(algebra_data(self.module.base), [])

    def diff(self, q: int) -> SparseMatrix:
        if q < len(self.d):
            return self.d[q]
        return SparseMatrix.zeros(self.term(q + 1).module.dim, self.term(q).module.dim, self.module.field)


def horseshoe(sub: Resolution, quo: Resolution, inc: SparseMatrix, proj: SparseMatrix,
              middle: ModuleOverAlgebra, rows: int) -> Resolution:
    """Resolution of ``middle`` in ``0 -> sub -inc-> middle -proj-> quo -> 0`` with
    terms ``I'^q ⊕ I''^q`` and upper triangular differentials."""
    fld = middle.field
    L = rows
    terms = [sub.term(q).direct_sum(quo.term(q)) for q in range(L + 1)]
    # step 0
    e0 = extend_to(sub.eps, inc, middle, sub.term(0).module)
    eps = block([[e0], [compose(quo.eps, proj)]], [sub.term(0).module.dim, quo.term(0).module.dim],
                [middle.dim], fld)
    ds = []
    prev_map = eps                    # map into terms[q]
    # cokernels along the way: C' = coker(sub side), C = coker(prev_map), C'' = coker(quo side)
    sub_prev = sub.eps
    quo_prev = quo.eps
    for q in range(L):
        Iq = terms[q].module
        C, pC, sC = Iq.quotient(prev_map)
        Cs, pCs, sCs = sub.term(q).module.quotient(sub_prev)
        a = sub.term(q).module.dim
        # C' -> C induced by the inclusion of the first summand
        incl = block([[SparseMatrix.identity(a, fld)], [None]], [a, quo.term(q).module.dim], [a], fld)
        c_in = compose(pC, compose(incl, sCs))
        # C -> C'' induced by the projection to the second summand
        Cq, pCq, sCq = quo.term(q).module.quotient(quo_prev)
        prj = block([[None, SparseMatrix.identity(quo.term(q).module.dim, fld)]],
                    [quo.term(q).module.dim], [a, quo.term(q).module.dim], fld)
        c_out = compose(pCq, compose(prj, sC))
        # ε for the cokernel sequence: C' -> I'^{q+1} is induced by d'^q, C'' -> I''^{q+1} by d''^q
        es = compose(sub.diff(q), sCs)
        eq_ = compose(quo.diff(q), sCq)
        ext = extend_to(es, c_in, C, sub.term(q + 1).module)
        epsC = block([[ext], [compose(eq_, c_out)]], [sub.term(q + 1).module.dim, quo.term(q + 1).module.dim],
                     [C.dim], fld)
        dq = compose(epsC, pC)
        ds.append(dq)
        prev_map = dq
        sub_prev = sub.diff(q)
        quo_prev = quo.diff(q)
    complete = sub.complete and quo.complete and L >= max(len(sub.terms), len(quo.terms)) - 1
    return Resolution(middle, terms, eps, ds, complete)


def _trim(r: Resolution, rows: int) -> Resolution:
    terms = [r.term(q) for q in range(rows + 1)]
    ds = [r.diff(q) for q in range(rows)]
    complete = r.complete and len(r.terms) <= rows + 1
    return Resolution(r.module, terms, r.eps, ds, complete)


# ----------------------------------------------------------------------
# complexes of modules and CE resolutions


@dataclass
class ModuleComplex:
    """Bounded cochain complex ``K^p`` (``p`` in ``modules``) with ``d[p]: K^p -> K^{p+1}``."""

    modules: dict[int, ModuleOverAlgebra]
    d: dict[int, SparseMatrix] = dc_field(default_factory=dict)
    name: str = "K"

    @property
    def base(self) -> AlgebraPresentation:
        return next(iter(self.modules.values())).base

    def degrees(self) -> range:
        return range(min(self.modules), max(self.modules) + 1)

    def module(self, p: int) -> ModuleOverAlgebra:
        return self.modules.get(p) or ModuleOverAlgebra.zero(self.base)

    def diff(self, p: int) -> SparseMatrix:
        m = self.d.get(p)
        if m is None:
            return SparseMatrix.zeros(self.module(p + 1).dim, self.module(p).dim, self.base.field)
        return m

    def violations(self) -> list[str]:
        out = []
        for p, m in self.modules.items():
            out += [f"K^{p}: {v}" for v in m.violations()]
        for p in self.degrees():
            if not is_module_map(self.diff(p), self.module(p), self.module(p + 1)):
                out.append(f"d^{p} is not a module map")
            if not compose(self.diff(p + 1), self.diff(p)).is_zero():
                out.append(f"d^{p + 1} d^{p} != 0")
        return out

    def as_chain_complex(self, lo: int | None = None, hi: int | None = None) -> ChainComplex:
        """Homological storage ``C_{-p} = K^p``."""
        lo = min(self.modules) if lo is None else lo
        hi = max(self.modules) if hi is None else hi
        dims = {-p: self.module(p).dim for p in range(lo, hi + 1)}
        d = {-p: self.diff(p) for p in range(lo, hi)}
        return ChainComplex(DegreeWindow(-hi, lo * -1), dims, d, self.base.field, grading="cohomological")


def _sub_basis(m: SparseMatrix) -> SparseMatrix:
    keep = rank_profile(m)
    cols = m.columns()
    return SparseMatrix.from_columns(m.nrows, [cols[k] for k in keep], m.field)


@dataclass
class CEResolution:
    source: ModuleComplex
    p_range: tuple[int, int]
    rows: int
    I: dict[tuple[int, int], InjectiveModule]
    d_I: dict[tuple[int, int], SparseMatrix]
    d_II: dict[tuple[int, int], SparseMatrix]
    eps: dict[int, SparseMatrix]
    complete: bool
    pieces: dict = dc_field(default_factory=dict)

    @property
    def field(self) -> Field:
        return self.source.base.field

    def dim(self, p: int, q: int) -> int:
        m = self.I.get((p, q))
        return m.module.dim if m is not None else 0

    def dI(self, p: int, q: int) -> SparseMatrix:
        m = self.d_I.get((p, q))
        return m if m is not None else SparseMatrix.zeros(self.dim(p + 1, q), self.dim(p, q), self.field)

    def dII(self, p: int, q: int) -> SparseMatrix:
        m = self.d_II.get((p, q))
        return m if m is not None else SparseMatrix.zeros(self.dim(p, q + 1), self.dim(p, q), self.field)

    def epsilon(self, p: int) -> SparseMatrix:
        m = self.eps.get(p)
        return m if m is not None else SparseMatrix.zeros(self.dim(p, 0), self.source.module(p).dim, self.field)


def ce_resolution(K: ModuleComplex, row_bound: int = 6) -> CEResolution:
    """CE resolution from horseshoes: ``I^{p,•} = I_B^p ⊕ I_H^p ⊕ I_B^{p+1}``.

    ``I_B^p ⊕ I_H^p`` resolves ``Z^p`` (horseshoe on ``B^p -> Z^p -> H^p``) and
    ``I^{p,•}`` resolves ``K^p`` (horseshoe on ``Z^p -> K^p -> B^{p+1}``).
    ``d_I`` is the projection onto ``I_B^{p+1}`` followed by its inclusion into
    ``I^{p+1,•}``; ``d_II`` on column ``p`` carries the sign ``(-1)^p``.
    """
    bad = K.violations()
    if bad:
        raise PresentationError(bad)
    A = K.base
    algebra_data(A)
    fld = A.field
    R = row_bound
    plo, phi = min(K.modules), max(K.modules)
    Z, B, Hq = {}, {}, {}
    res_B: dict[int, Resolution] = {}
    for p in range(plo, phi + 2):
        Kp = K.module(p)
        zb = kernel_matrix(K.diff(p)) if Kp.dim else SparseMatrix.zeros(0, 0, fld)
        bb = _sub_basis(K.diff(p - 1)) if Kp.dim else SparseMatrix.zeros(0, 0, fld)
        Z[p], B[p] = zb, bb
    for p in range(plo, phi + 2):
        Bm = K.module(p).submodule(B[p]) if B[p].ncols else ModuleOverAlgebra.zero(A)
        res_B[p] = _trim(Resolution.from_injective(injective_resolution(Bm, R)), R)
    I, dI, dII, eps = {}, {}, {}, {}
    complete = True
    pieces = {}
    res_K: dict[int, Resolution] = {}
    for p in range(plo, phi + 1):
        Kp = K.module(p)
        Zm = Kp.submodule(Z[p]) if Z[p].ncols else ModuleOverAlgebra.zero(A)
        # B^p inside Z^p, H^p = Z^p / B^p
        b_in_z = _coords_in_basis(Z[p], B[p]) if B[p].ncols else SparseMatrix.zeros(Z[p].ncols, 0, fld)
        Hm, h_proj, _ = Zm.quotient(b_in_z)
        Hq[p] = (Hm, h_proj)
        res_H = _trim(Resolution.from_injective(injective_resolution(Hm, R)), R)
        res_Z = horseshoe(res_B[p], res_H, b_in_z, h_proj, Zm, R)
        # Z^p -> K^p -> B^{p+1}
        to_B = _coords_in_basis(B[p + 1], K.diff(p)) if B[p + 1].ncols else SparseMatrix.zeros(0, Kp.dim, fld)
        rK = horseshoe(res_Z, res_B[p + 1], Z[p], to_B, Kp, R)
        res_K[p] = rK
        complete = complete and res_B[p].complete and res_H.complete and res_B[p + 1].complete
        pieces[p] = {"B": res_B[p], "H": res_H, "Bnext": res_B[p + 1], "Z": res_Z}
        s = -1 if p % 2 else 1
        for q in range(R + 1):
            I[(p, q)] = rK.term(q)
            if q < R:
                dII[(p, q)] = rK.diff(q).scale(s) if s == -1 else rK.diff(q)
        eps[p] = rK.eps
    for p in range(plo, phi):
        for q in range(R + 1):
            b0 = res_B[p].term(q).module.dim
            h0 = pieces[p]["H"].term(q).module.dim
            bn = res_B[p + 1].term(q).module.dim
            h1 = pieces[p + 1]["H"].term(q).module.dim
            b2 = res_B[p + 2].term(q).module.dim
            # I^{p,q} = (B^p ⊕ H^p) ⊕ B^{p+1}  ->  I^{p+1,q} = (B^{p+1} ⊕ H^{p+1}) ⊕ B^{p+2}
            ent = [(k, b0 + h0 + k, 1) for k in range(bn)]
            dI[(p, q)] = SparseMatrix.from_entries(bn + h1 + b2, b0 + h0 + bn, ent, fld)
    return CEResolution(K, (plo, phi), R, I, dI, dII, eps, complete, pieces)


class RowBoundTooSmall(PresentationError):
    pass


class HypothesisFailed(PresentationError):
    def __init__(self, witness):
        super().__init__([f"R^{i}F(H^{p}K) != 0" for i, p in witness])
        self.witness = list(witness)


def ce_resolution_strict(K: ModuleComplex, row_bound: int = 6) -> CEResolution:
    """Like :func:`ce_resolution` but raises when some column needs more rows."""
    ce = ce_resolution(K, row_bound)
    if not ce.complete:
        raise RowBoundTooSmall([f"resolutions of {K.name} do not terminate within {row_bound} rows"])
    return ce


# ----------------------------------------------------------------------
# verification of conditions a)-c) and the derived B/Z conditions


def _augmented_exactness(aug: SparseMatrix, maps: Sequence[SparseMatrix], dims: Sequence[int],
                         upto: int) -> list[int]:
    """Positions of ``0 -> X -aug-> Y_0 -> Y_1 -> ...`` that fail to be exact.

    Position ``-1`` is injectivity of ``aug``; position ``q`` is exactness at
    ``Y_q`` for ``q <= upto``.
    """
    bad = []
    if rank(aug) != aug.ncols:
        bad.append(-1)
    prev = rank(aug)
    for q in range(upto + 1):
        r = rank(maps[q]) if q < len(maps) else 0
        if dims[q] - r != prev:
            bad.append(q)
        prev = r
    return bad


def _restrict(S_src: SparseMatrix, f: SparseMatrix, S_tgt: SparseMatrix) -> SparseMatrix:
    """``f`` restricted to column spans, in those bases."""
    if S_src.ncols == 0 or S_tgt.ncols == 0:
        return SparseMatrix.zeros(S_tgt.ncols, S_src.ncols, f.field)
    return _coords_in_basis(S_tgt, compose(f, S_src))


@dataclass
class CEVerification:
    violations: list[str]
    truncated_columns: list[int]
    rows: int

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_json(self) -> dict:
        return {"ok": self.ok, "violations": self.violations, "truncated_columns": self.truncated_columns,
                "rows": self.rows}


def verify_ce(ce: CEResolution) -> CEVerification:
    """Mechanical check of a)-c), the B^p/Z^p conditions and the row shapes."""
    K = ce.source
    fld = ce.field
    plo, phi = ce.p_range
    R = ce.rows
    data = algebra_data(K.base)
    out: list[str] = []
    truncated = [p for p in range(plo, phi + 1)
                 if not all(r.complete for r in (ce.pieces[p]["B"], ce.pieces[p]["H"], ce.pieces[p]["Bnext"]))]
    # a) anticommuting pair; maps are module maps
    for p in range(plo - 1, phi + 1):
        for q in range(-1, R + 1):
            if not compose(ce.dI(p + 1, q), ce.dI(p, q)).is_zero():
                out.append(f"a) d_I^2 != 0 at {(p, q)}")
            if not compose(ce.dII(p, q + 1), ce.dII(p, q)).is_zero():
                out.append(f"a) d_II^2 != 0 at {(p, q)}")
            s = compose(ce.dI(p, q + 1), ce.dII(p, q)) + compose(ce.dII(p + 1, q), ce.dI(p, q))
            if not s.is_zero():
                out.append(f"a) d_I d_II + d_II d_I != 0 at {(p, q)}")
    for (p, q), m in ce.d_I.items():
        if not is_module_map(m, ce.I[(p, q)].module, ce.I[(p + 1, q)].module):
            out.append(f"a) d_I at {(p, q)} is not a module map")
    for (p, q), m in ce.d_II.items():
        if not is_module_map(m, ce.I[(p, q)].module, ce.I[(p, q + 1)].module):
            out.append(f"a) d_II at {(p, q)} is not a module map")
    # b) nothing stored below row 0
    if any(q < 0 for (_, q) in ce.I):
        out.append("b) terms stored in negative rows")
    # augmentation is a chain map K -> I^{•,0} killed by d_II
    for p in range(plo, phi + 1):
        if not is_module_map(ce.epsilon(p), K.module(p), ce.I[(p, 0)].module):
            out.append(f"c) ε^{p} is not a module map")
        if not compose(ce.dII(p, 0), ce.epsilon(p)).is_zero():
            out.append(f"c) d_II ε != 0 in column {p}")
        if compose(ce.dI(p, 0), ce.epsilon(p)) != compose(ce.epsilon(p + 1), K.diff(p)):
            out.append(f"c) ε does not commute with d at {p}")
    # c) columns, and H/B/Z of the rows, are injective resolutions
    for p in range(plo, phi + 1):
        complete_p = p not in truncated
        upto = R if complete_p else R - 1
        dims = [ce.dim(p, q) for q in range(R + 1)]
        bad = _augmented_exactness(ce.epsilon(p), [ce.dII(p, q) for q in range(R)], dims, upto)
        if bad:
            out.append(f"c) column {p} is not exact at {bad}")
        for q in range(R + 1):
            if not _is_generated(ce.I[(p, q)], data):
                out.append(f"c) I^{p},{q} is not in the generated-injectives list")
        Kp = K.module(p)
        zK = kernel_matrix(K.diff(p)) if Kp.dim else SparseMatrix.zeros(0, 0, fld)
        bK = _sub_basis(K.diff(p - 1)) if Kp.dim else SparseMatrix.zeros(0, 0, fld)
        Zs = [kernel_matrix(ce.dI(p, q)) if ce.dim(p, q) else SparseMatrix.zeros(0, 0, fld) for q in range(R + 1)]
        Bs = [_sub_basis(ce.dI(p - 1, q)) if ce.dim(p, q) else SparseMatrix.zeros(0, 0, fld)
              for q in range(R + 1)]
        for label, Ks, Ss in (("B", bK, Bs), ("Z", zK, Zs)):
            maps = [_restrict(Ss[q], ce.dII(p, q), Ss[q + 1]) for q in range(R)]
            aug = _restrict(Ks, ce.epsilon(p), Ss[0]) if Ks.ncols else SparseMatrix.zeros(Ss[0].ncols, 0, fld)
            bad = _augmented_exactness(aug, maps, [s.ncols for s in Ss], upto)
            if bad:
                out.append(f"c) {label}^{p} K -> {label}^{p}_I I is not exact at {bad}")
            for q in range(R + 1):
                if Ss[q].ncols and not is_injective(ce.I[(p, q)].module.submodule(Ss[q]), data):
                    out.append(f"c) {label}^{p}_I I^{q} is not injective")
        # H: quotients Z/B
        Hs, projs, secs = [], [], []
        for q in range(R + 1):
            Zm = ce.I[(p, q)].module.submodule(Zs[q]) if Zs[q].ncols else ModuleOverAlgebra.zero(K.base)
            b_in_z = _coords_in_basis(Zs[q], Bs[q]) if Bs[q].ncols else SparseMatrix.zeros(Zs[q].ncols, 0, fld)
            Hm, pr, se = Zm.quotient(b_in_z)
            Hs.append(Hm)
            projs.append(pr)
            secs.append(se)
        hmaps = [compose(projs[q + 1], compose(_restrict(Zs[q], ce.dII(p, q), Zs[q + 1]), secs[q]))
                 for q in range(R)]
        b_in_zK = _coords_in_basis(zK, bK) if bK.ncols else SparseMatrix.zeros(zK.ncols, 0, fld)
        HK = Kp.submodule(zK) if zK.ncols else ModuleOverAlgebra.zero(K.base)
        HKm, _, sK = HK.quotient(b_in_zK)
        aug_z = _restrict(zK, ce.epsilon(p), Zs[0]) if zK.ncols else SparseMatrix.zeros(Zs[0].ncols, 0, fld)
        aug_h = compose(projs[0], compose(aug_z, sK))
        bad = _augmented_exactness(aug_h, hmaps, [h.dim for h in Hs], upto)
        if bad:
            out.append(f"c) H^{p} K -> H^{p}_I I is not exact at {bad}")
        for q in range(R + 1):
            if Hs[q].dim and not is_injective(Hs[q], data):
                out.append(f"c) H^{p}_I I^{q} is not injective")
    out += row_shape_violations(ce)
    return CEVerification(out, truncated, R)


def _is_generated(inj: InjectiveModule, data: AlgebraData) -> bool:
    ref = InjectiveModule.of(data, inj.summands).module
    return ref.dim == inj.module.dim and all(a == b for a, b in zip(ref.action, inj.module.action))


def row_shape_violations(ce: CEResolution) -> list[str]:
    """Each row splits as ``0 -> I_H^p -> 0`` pieces plus ``I_B^{p+1} -1-> I_B^{p+1}`` pieces.

    Checked on the summand decomposition ``I^{p,q} = I_B^p ⊕ I_H^p ⊕ I_B^{p+1}``:
    ``d_I`` vanishes on the first two summands and is the identity from the
    third onto the first summand of the next column.
    """
    out = []
    plo, phi = ce.p_range
    for p in range(plo, phi):
        for q in range(ce.rows + 1):
            b0 = ce.pieces[p]["B"].term(q).module.dim
            h0 = ce.pieces[p]["H"].term(q).module.dim
            bn = ce.pieces[p]["Bnext"].term(q).module.dim
            m = ce.dI(p, q)
            src_ok = m.submatrix(range(m.nrows), range(b0 + h0)).is_zero()
            blk = m.submatrix(range(bn), range(b0 + h0, b0 + h0 + bn))
            rest = m.submatrix(range(bn, m.nrows), range(b0 + h0, b0 + h0 + bn))
            if not (src_ok and blk == SparseMatrix.identity(bn, ce.field) and rest.is_zero()):
                out.append(f"row {q} does not split at column {p}")
    return out


# ----------------------------------------------------------------------
# product total complex and augmentation


def ce_bicomplex(ce: CEResolution, maps=None) -> Bicomplex:
    """``I`` in homological storage: cohomological ``(p, q)`` sits at ``(-p, -q)``.

    ``maps`` optionally replaces the terms and differentials by their image
    under an additive functor: ``maps(kind, p, q)`` returns the dimension or
    the transformed matrix.
    """
    plo, phi = ce.p_range
    R = ce.rows
    dims, dI, dII = {}, {}, {}
    for p in range(plo, phi + 1):
        for q in range(R + 1):
            dims[(-p, -q)] = maps("dim", p, q) if maps else ce.dim(p, q)
    for p in range(plo, phi + 1):
        for q in range(R + 1):
            if p < phi:
                dI[(-p, -q)] = maps("dI", p, q) if maps else ce.dI(p, q)
            if q < R:
                dII[(-p, -q)] = maps("dII", p, q) if maps else ce.dII(p, q)
    return Bicomplex((-phi, -plo), (-R, 0), dims, dI, dII, ce.field, (True, True, ce.complete, True))


def _layout_offset(b: Bicomplex, n: int, key: tuple[int, int]) -> int:
    (p0, p1), (q0, q1) = b.p_range, b.q_range
    off = 0
    for p in range(p0, p1 + 1):
        if (p, n - p) == key:
            return off
        if q0 <= n - p <= q1:
            off += b.dim(p, n - p)
    raise KeyError(key)


def total_and_augment(ce: CEResolution) -> tuple[ChainComplex, ChainMap]:
    """``J = Tot^Π I`` and ``η: K -> J`` induced by ``ε`` (homological storage)."""
    bic = ce_bicomplex(ce)
    J = bic.total_prod()
    J.grading = "cohomological"
    plo, phi = ce.p_range
    Kc = ce.source.as_chain_complex(plo, phi)
    comps = {}
    for p in range(plo, phi + 1):
        n = -p
        off = _layout_offset(bic, n, (-p, 0))
        e = ce.epsilon(p)
        comps[n] = SparseMatrix.from_entries(J.dim(n), e.ncols, [(off + i, j, v) for i, j, v in e.entries()],
                                             ce.field)
    eta = ChainMap(Kc, J, comps)
    return J, eta


def quasi_isomorphism_failures(eta: ChainMap) -> list[int]:
    """Trusted degrees where ``η`` is not an isomorphism on homology."""
    bad = []
    J = eta.target
    for n in eta.degrees():
        if not J.window.trusted(n):
            continue
        hk, hj = eta.source.homology(n)[0], J.homology(n)[0]
        if not (hk == hj == eta.homology_rank(n)):
            bad.append(n)
    return bad


# ----------------------------------------------------------------------
# Hom functors and the acyclic-image lemma


def hom_space(M: ModuleOverAlgebra, N: ModuleOverAlgebra) -> SparseMatrix:
    """Columns: ``Hom_A(M, N)`` as flattened ``N.dim x M.dim`` matrices (row major)."""
    fld = M.field
    nN, nM = N.dim, M.dim
    nv = nN * nM
    if nv == 0:
        return SparseMatrix.zeros(0, 0, fld)
    ent = []
    eq = 0
    for aM, aN in zip(M.action, N.action):
        aMc = aM.columns()
        base = eq
        for i in range(nN):
            for j in range(nM):
                for l, v in aMc[j].items():
                    ent.append((base + i * nM + j, i * nM + l, v))
        for i, row in aN.row_items():
            for l, v in row.items():
                for j in range(nM):
                    ent.append((base + i * nM + j, l * nM + j, -v))
        eq += nv
    return kernel_matrix(SparseMatrix.from_entries(eq, nv, ent, fld))


def _unflatten(vec: Mapping[int, object], nrows: int, ncols: int, fld: Field) -> SparseMatrix:
    return SparseMatrix.from_entries(nrows, ncols, [(k // ncols, k % ncols, v) for k, v in vec.items()], fld)


def _flatten(m: SparseMatrix) -> dict[int, object]:
    return {i * m.ncols + j: v for i, j, v in m.entries()}


class HomFunctor:
    """``F = Hom_A(M0, -)`` on modules and module maps, with cached bases."""

    def __init__(self, M0: ModuleOverAlgebra):
        self.M0 = M0.check()
        self._cache: dict[int, tuple[ModuleOverAlgebra, SparseMatrix]] = {}

    def basis(self, N: ModuleOverAlgebra) -> SparseMatrix:
        key = id(N)
        if key not in self._cache:
            self._cache[key] = (N, hom_space(self.M0, N))
        return self._cache[key][1]

    def dim(self, N: ModuleOverAlgebra) -> int:
        return self.basis(N).ncols

    def on_map(self, g: SparseMatrix, N: ModuleOverAlgebra, N2: ModuleOverAlgebra) -> SparseMatrix:
        H, H2 = self.basis(N), self.basis(N2)
        fld = g.field
        if H.ncols == 0 or H2.ncols == 0:
            return SparseMatrix.zeros(H2.ncols, H.ncols, fld)
        imgs = [_flatten(compose(g, _unflatten(col, N.dim, self.M0.dim, fld))) for col in H.columns()]
        return _coords_in_basis(H2, SparseMatrix.from_columns(H2.nrows, imgs, fld))


def apply_functor(ce: CEResolution, F: HomFunctor) -> ChainComplex:
    """``Tot^Π F(I)`` (``F`` commutes with finite products)."""

    def maps(kind, p, q):
        src = ce.I[(p, q)].module
        if kind == "dim":
            return F.dim(src)
        if kind == "dI":
            return F.on_map(ce.dI(p, q), src, ce.I[(p + 1, q)].module)
        return F.on_map(ce.dII(p, q), src, ce.I[(p, q + 1)].module)

    cx = ce_bicomplex(ce, maps).total_prod()
    cx.grading = "cohomological"
    return cx


def derived_functor_dims(res: Resolution, F: HomFunctor) -> dict[int, int]:
    """``dim R^i F(M)`` from an injective resolution; only ``i`` below the
    last stored term are reported when the resolution was truncated."""
    terms = [res.term(q).module for q in range(len(res.terms))]
    L = len(terms)
    fmaps = [F.on_map(res.diff(q), terms[q], terms[q + 1]) for q in range(L - 1)]
    out = {}
    top = L if res.complete else L - 1
    for i in range(top):
        dimF = F.dim(terms[i])
        r_out = rank(fmaps[i]) if i < len(fmaps) else 0
        r_in = rank(fmaps[i - 1]) if i >= 1 else 0
        out[i] = dimF - r_out - r_in
    return out


@dataclass
class AcyclicImageRecord:
    n: int
    hypothesis: dict[int, dict[int, int]]
    conclusion: dict[int, int]
    trusted: list[int]
    failures: list[int]
    truncated: bool

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_json(self) -> dict:
        return {"n": self.n, "ok": self.ok, "failures": self.failures, "truncated": self.truncated,
                "hypothesis": {str(p): {str(i): v for i, v in d.items()} for p, d in sorted(self.hypothesis.items())},
                "conclusion": {str(p): v for p, v in sorted(self.conclusion.items())},
                "trusted": self.trusted}


def acyclic_image_check(K: ModuleComplex, M0: ModuleOverAlgebra, n: int, row_bound: int = 6) -> AcyclicImageRecord:
    """With ``F = Hom_A(M0, -)`` and ``R^iF(H^pK) = 0`` for ``i >= n``: check
    ``H^p F Tot^Π J = 0`` for trusted ``p >= n`` (cohomological degrees)."""
    if any(p > 0 and m.dim for p, m in K.modules.items()):
        raise PresentationError("acyclic image check needs K^p = 0 for p > 0")
    ce = ce_resolution(K, row_bound)
    F = HomFunctor(M0)
    hyp, witness = {}, []
    for p in range(ce.p_range[0], ce.p_range[1] + 1):
        dims = derived_functor_dims(ce.pieces[p]["H"], F)
        hyp[p] = dims
        witness += [(i, p) for i, v in dims.items() if i >= n and v]
    if witness:
        raise HypothesisFailed(witness)
    FJ = apply_functor(ce, F)
    conclusion, trusted, failures = {}, [], []
    for h in FJ.window.degrees():
        m = -h
        if m < n:
            continue
        conclusion[m] = FJ.homology(h)[0]
        if FJ.window.trusted(h):
            trusted.append(m)
            if conclusion[m]:
                failures.append(m)
    return AcyclicImageRecord(n, hyp, conclusion, sorted(trusted), sorted(failures), not ce.complete)


# ----------------------------------------------------------------------
# towers


def ce_truncation_tower(ce: CEResolution) -> InverseSystem:
    """Product totals of ``τ^{≥p} J`` for ``p = phi+1, ..., plo`` (the bottom stage is zero).

    ``τ^{≥p} J`` keeps columns ``> p`` and replaces column ``p`` by its
    quotient by the ``I_B^p`` summand; the maps drop column ``p`` and
    project column ``p+1``, which is split epi in each bidegree.
    """
    plo, phi = ce.p_range
    R = ce.rows
    stages, offs = [], []
    for cut in range(phi + 1, plo - 1, -1):
        def drop(p, q, cut=cut):
            if p < cut:
                return None
            return ce.pieces[p]["B"].term(q).module.dim if p == cut else 0
        dims, dI, dII = {}, {}, {}
        for p in range(plo, phi + 1):
            for q in range(R + 1):
                k = drop(p, q)
                if k is None:
                    continue
                dims[(-p, -q)] = ce.dim(p, q) - k
        for p in range(plo, phi + 1):
            for q in range(R + 1):
                k = drop(p, q)
                if k is None:
                    continue
                if p < phi:
                    m = ce.dI(p, q)
                    k2 = drop(p + 1, q)
                    dI[(-p, -q)] = m.submatrix(range(k2, m.nrows), range(k, m.ncols))
                if q < R:
                    m = ce.dII(p, q)
                    k2 = drop(p, q + 1)
                    dII[(-p, -q)] = m.submatrix(range(k2, m.nrows), range(k, m.ncols))
        bic = Bicomplex((-phi, -plo), (-R, 0), dims, dI, dII, ce.field, (True, True, ce.complete, True))
        stages.append((bic, bic.total_prod(), drop))
    tower = [s[1] for s in stages]
    maps = {}
    for i in range(1, len(stages)):
        (bs, cs, drop_s), (bt, ct, drop_t) = stages[i], stages[i - 1]
        comps = {}
        for h in cs.window.degrees():
            ent = []
            for p in range(plo, phi + 1):
                q = -h - p
                if not 0 <= q <= R or drop_t(p, q) is None:
                    continue
                ks, kt = drop_s(p, q), drop_t(p, q)
                so = _layout_offset(bs, h, (-p, -q))
                to = _layout_offset(bt, h, (-p, -q))
                for r in range(ce.dim(p, q) - kt):
                    ent.append((to + r, so + (kt - ks) + r, 1))
            comps[h] = SparseMatrix.from_entries(ct.dim(h), cs.dim(h), ent, ce.field)
        maps[i] = ChainMap(cs, ct, comps)
    return InverseSystem(tower, maps)


def _random_matrix(rows: int, cols: int, rng: random.Random, fld: Field, density: float = 0.6) -> SparseMatrix:
    ent = [(i, j, rng.randint(-2, 2)) for i in range(rows) for j in range(cols) if rng.random() < density]
    return SparseMatrix.from_entries(rows, cols, ent, fld)


def _random_invertible(n: int, rng: random.Random, fld: Field) -> SparseMatrix:
    while True:
        m = _random_matrix(n, n, rng, fld, 0.7) + SparseMatrix.identity(n, fld)
        if rank(m) == n:
            return m


def random_complex_acyclic_above(n: int, lo: int, hi: int, rng: random.Random, fld: Field) -> ChainComplex:
    """Cohomological complex on ``[lo, hi]`` with ``H^i = 0`` for ``i >= n``.

    A random complex concentrated in degrees ``< n``, plus contractible pairs
    ``k -1-> k`` anywhere, conjugated by random changes of basis.
    """
    dims = {i: 0 for i in range(lo, hi + 1)}
    pieces: list[tuple[int, int, int]] = []        # (degree, index, kind)
    d_ent: dict[int, list] = {i: [] for i in range(lo, hi)}
    # low part: arbitrary complex on [lo, min(n, hi+1) - 1]
    top = min(n - 1, hi)
    low_dims = {i: rng.randint(0, 2) for i in range(lo, top + 1)}
    for i in range(lo, top + 1):
        dims[i] += low_dims[i]
    prev = None
    for i in range(lo, top):
        a, b = low_dims[i], low_dims[i + 1]
        m = _random_matrix(b, a, rng, fld)
        if prev is not None and not compose(m, prev).is_zero():
            # force d d = 0 by restricting to the kernel of the previous image
            m = SparseMatrix.zeros(b, a, fld)
        d_ent[i] += [(r, c, v) for r, c, v in m.entries()]
        prev = m
    # contractible pairs
    for _ in range(rng.randint(1, 4)):
        i = rng.randint(lo, hi - 1)
        r0, c0 = dims[i + 1], dims[i]
        dims[i] += 1
        dims[i + 1] += 1
        d_ent[i].append((r0, c0, 1))
    del pieces
    # assemble homological storage with random change of basis
    P = {i: _random_invertible(dims[i], rng, fld) if dims[i] else SparseMatrix.zeros(0, 0, fld)
         for i in range(lo, hi + 1)}
    Pinv = {i: _inverse(P[i]) for i in P}
    d = {}
    for i in range(lo, hi):
        raw = SparseMatrix.from_entries(dims[i + 1], dims[i], d_ent[i], fld)
        d[-i] = compose(P[i + 1], compose(raw, Pinv[i]))
    return ChainComplex(DegreeWindow(-hi, -lo), {-i: dims[i] for i in dims}, d, fld, "cohomological")


def _inverse(m: SparseMatrix) -> SparseMatrix:
    n = m.nrows
    if n == 0:
        return m
    return _coords_in_basis(m, SparseMatrix.identity(n, m.field))


def random_ml_tower(seed: int, n: int = 0, stages: int = 4, lo: int = -3, hi: int = 3,
                    fld: Field | None = None) -> InverseSystem:
    """``K_p = L_p ⊕ K_{p-1}`` as graded spaces, ``L_p`` a subcomplex acyclic in
    degrees ``>= n``, glued by ``h = d_L g - g d_K`` for a random ``g``."""
    from .linalg import QQ
    fld = fld or QQ
    rng = random.Random(seed)
    tower = [random_complex_acyclic_above(n, lo, hi, rng, fld)]
    maps = {}
    for p in range(1, stages + 1):
        Kp = tower[-1]
        L = random_complex_acyclic_above(n, lo, hi, rng, fld)
        g = {h: _random_matrix(L.dim(h), Kp.dim(h), rng, fld, 0.4) for h in L.window.degrees()}
        dims = {h: L.dim(h) + Kp.dim(h) for h in L.window.degrees()}
        d, comps = {}, {}
        for h in range(L.window.lo + 1, L.window.hi + 1):
            glue = compose(L.diff(h), g[h]) - compose(g[h - 1], Kp.diff(h))
            d[h] = block([[L.diff(h), glue], [None, Kp.diff(h)]], [L.dim(h - 1), Kp.dim(h - 1)],
                         [L.dim(h), Kp.dim(h)], fld)
        new = ChainComplex(L.window, dims, d, fld, "cohomological")
        for h in L.window.degrees():
            comps[h] = block([[None, SparseMatrix.identity(Kp.dim(h), fld)]], [Kp.dim(h)],
                             [L.dim(h), Kp.dim(h)], fld)
        maps[p] = ChainMap(new, Kp, comps)
        tower.append(new)
    return InverseSystem(tower, maps)


@dataclass
class MLRecord:
    n: int
    hypothesis_ok: bool
    limit_cohomology: dict[int, int]
    failures: list[int]

    @property
    def ok(self) -> bool:
        return self.hypothesis_ok and not self.failures


def ml_check(s: InverseSystem, n: int) -> MLRecord:
    """Check the hypotheses (surjective maps, kernels acyclic in degrees ``>= n``)
    and the conclusion ``H^i lim = 0`` for ``i >= n`` on trusted degrees."""
    hyp = not s.violations()
    kernels = [s.tower[0]]
    for p in range(1, len(s.tower)):
        f = s.maps[p]
        src = f.source
        bases = {h: kernel_matrix(f[h]) for h in src.window.degrees()}
        d = {h: _coords_in_basis(bases[h - 1], compose(src.diff(h), bases[h])) if bases[h].ncols and bases[h - 1].ncols
             else SparseMatrix.zeros(bases[h - 1].ncols, bases[h].ncols, src.field)
             for h in range(src.window.lo + 1, src.window.hi + 1)}
        kernels.append(ChainComplex(src.window, {h: b.ncols for h, b in bases.items()}, d, src.field))
    for k in kernels:
        for h in k.window.degrees():
            if -h >= n and k.window.trusted(h) and k.homology(h)[0]:
                hyp = False
    lim = inverse_limit(s)
    coh = {-h: lim.homology(h)[0] for h in lim.window.degrees() if lim.window.trusted(h)}
    failures = sorted(i for i, v in coh.items() if i >= n and v)
    return MLRecord(n, hyp, dict(sorted(coh.items())), failures)


# ----------------------------------------------------------------------
# random bounded complexes of modules


def projective_module(A: AlgebraPresentation, vertex: str) -> ModuleOverAlgebra:
    """``P(v) = A e_v`` as a submodule of the regular module."""
    reg = regular_module(A)
    e = A.index[vertex]
    spans = [A.compose_vec({b: 1}, {e: 1}) for b in range(A.dim)]
    basis = _sub_basis(SparseMatrix.from_columns(A.dim, spans, A.field))
    m = reg.submodule(basis)
    m.name = f"P({vertex})"
    return m


def standard_modules(A: AlgebraPresentation) -> list[ModuleOverAlgebra]:
    data = algebra_data(A)
    out = []
    for v in data.vertices:
        out += [simple_module(A, v), projective_module(A, v), data.injectives[v]]
    return out


def random_module_map(M: ModuleOverAlgebra, N: ModuleOverAlgebra, rng: random.Random) -> SparseMatrix:
    H = hom_space(M, N)
    fld = M.field
    vec: dict = {}
    for col in H.columns():
        c = rng.randint(-2, 2)
        if c:
            for k, v in col.items():
                vec[k] = fld.normalize(vec.get(k, 0) + c * v)
    vec = {k: v for k, v in vec.items() if v != 0}
    return _unflatten(vec, N.dim, M.dim, fld)


def random_module_complex(A: AlgebraPresentation, seed: int, length: int = 3, top: int = 0) -> ModuleComplex:
    """Bounded complex on ``[top-length+1, top]`` of sums of simples, projectives
    and injectives, with random module maps (each ``d^{p-1}`` lands in ``ker d^p``)."""
    rng = random.Random(seed)
    pool = standard_modules(A)
    degs = list(range(top - length + 1, top + 1))
    mods = {}
    for p in degs:
        m = ModuleOverAlgebra.zero(A)
        for _ in range(rng.randint(1, 2)):
            m = m.direct_sum(rng.choice(pool))
        mods[p] = m
    d = {}
    for p in reversed(degs[:-1]):
        tgt = mods[p + 1]
        if p + 1 in d:
            Z = kernel_matrix(d[p + 1])
            if Z.ncols == 0:
                d[p] = SparseMatrix.zeros(tgt.dim, mods[p].dim, A.field)
                continue
            Zm = tgt.submodule(Z)
            d[p] = compose(Z, random_module_map(mods[p], Zm, rng))
        else:
            d[p] = random_module_map(mods[p], tgt, rng)
    return ModuleComplex(mods, d, f"random({A.name}, {seed})")
