"""Hochschild chains of (dg) categories and the cyclic operators on them.

A chain of simplicial degree ``n`` is a tuple ``(a_0, ..., a_n)`` of basis
morphisms forming a cyclically composable loop: ``a_j∘a_{j+1}`` is defined for
``j < n`` and so is ``a_n∘a_0``.  In the notation ``(f_n, ..., f_0)`` with
``f_i: X_i -> X_{i+1}`` this is ``a_j = f_{n-j}``.

Signs (``|a|`` is the internal degree, ``S = |a_0| + ... + |a_{n-1}|``):

* ``b``  = ``Σ_{i<n} (-1)^i (.., a_i∘a_{i+1}, ..)`` ``+ (-1)^{n + |a_n| S} (a_n∘a_0, a_1, .., a_{n-1})``
* ``b'`` = the same sum without the wrap-around term
* ``t``  = ``(-1)^{n + |a_n| S} (a_n, a_0, .., a_{n-1})`` and ``N = Σ_i t^i``
* ``δ``  = ``Σ_j (-1)^{|a_0| + .. + |a_{j-1}|} (.., d a_j, ..)``; it commutes
  with all of the above, and the total differential on simplicial degree
  ``n`` is ``b + (-1)^n δ``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

from .chain import Bicomplex, ChainComplex, ChainMap, DegreeWindow, _trust
from .linalg import Field, SparseMatrix, compose, rank
from .presentations import (AlgebraPresentation, CategoryPresentation, Functor, PresentationError,
                            require_valid)

DEFAULT_MAX_BASIS = 2_000_000


class ResourceCapExceeded(RuntimeError):
    pass


def count_chains(c: CategoryPresentation, top: int) -> list[int]:
    """Number of chains in each simplicial degree ``0..top`` (transfer-matrix count)."""
    objs = c.objects
    pos = {x: i for i, x in enumerate(objs)}
    k = len(objs)
    # T[x][y] = number of basis morphisms y -> x   (a_j: Y_{j+1} -> Y_j)
    T = [[0] * k for _ in range(k)]
    for b in c.basis:
        T[pos[b.tgt]][pos[b.src]] += 1
    counts = []
    P = [[int(i == j) for j in range(k)] for i in range(k)]
    for n in range(top + 1):
        P = [[sum(P[i][l] * T[l][j] for l in range(k)) for j in range(k)] for i in range(k)]
        counts.append(sum(P[i][i] for i in range(k)))
    return counts


class HochschildModel:
    """Chain bases in simplicial degrees ``0..top`` with operator matrices.

    ``normalized=True`` drops chains with an identity morphism in a position
    ``j >= 1`` (requires identities to be basis elements; see
    :func:`with_unit_basis`).
    """

    def __init__(self, c: CategoryPresentation, top: int, normalized: bool = False,
                 max_basis: int = DEFAULT_MAX_BASIS, validate: bool = True):
        if validate:
            require_valid(c)
        if top < 0:
            raise ValueError("top must be >= 0")
        self.cat = c
        self.top = top
        self.field = c.field
        self.normalized = normalized
        total = sum(count_chains(c, top))
        if total > max_basis:
            raise ResourceCapExceeded(f"{total} chain basis elements exceed the cap {max_basis}")
        self._id_ids: set[int] = set()
        if normalized:
            for x in c.objects:
                u = c.units[x]
                if len(u) != 1 or list(u.values())[0] != 1:
                    raise PresentationError(f"identity of {x} is not a basis element; use with_unit_basis")
                self._id_ids.update(u)
        self.chains: list[list[tuple[int, ...]]] = []
        self.index: list[dict[tuple[int, ...], int]] = []
        self.weights: list[list[int]] = []
        for n in range(top + 1):
            ch = self._enumerate(n)
            self.chains.append(ch)
            self.index.append({t: i for i, t in enumerate(ch)})
            self.weights.append([sum(c.basis[a].degree for a in t) for t in ch])
        self._cache: dict = {}

    # enumeration -------------------------------------------------------------
    def _enumerate(self, n: int) -> list[tuple[int, ...]]:
        c = self.cat
        by_tgt: dict[str, list[int]] = {x: [] for x in c.objects}
        for i, b in enumerate(c.basis):
            by_tgt[b.tgt].append(i)
        skip = self._id_ids
        out = []

        def extend(prefix, need_tgt, first_tgt):
            j = len(prefix)
            for a in by_tgt[need_tgt]:
                if j >= 1 and a in skip:
                    continue
                b = c.basis[a]
                if j == n:
                    if b.src == first_tgt:
                        out.append(prefix + (a,))
                else:
                    extend(prefix + (a,), b.src, first_tgt)

        for a0 in range(c.dim):
            b0 = c.basis[a0]
            if n == 0:
                if b0.src == b0.tgt:
                    out.append((a0,))
            else:
                extend((a0,), b0.src, b0.tgt)

        def key(t):
            objs = tuple(c.objects.index(c.basis[a].src) for a in reversed(t))
            return (objs, t)

        out.sort(key=key)
        return out

    def dim(self, n: int) -> int:
        return len(self.chains[n]) if 0 <= n <= self.top else 0

    def dims(self) -> list[int]:
        return [len(ch) for ch in self.chains]

    # sign helpers -------------------------------------------------------------
    def _wrap_sign(self, t: Sequence[int]) -> int:
        n = len(t) - 1
        deg = self.cat.basis
        an = deg[t[-1]].degree
        s = n
        if an % 2:
            s += sum(deg[a].degree for a in t[:-1])
        return -1 if s % 2 else 1

    # operators (as {column: {row: value}} accumulated into matrices) -----------
    def _matrix(self, rows_n: int, cols_n: int, entries) -> SparseMatrix:
        return SparseMatrix.from_entries(self.dim(rows_n), self.dim(cols_n), entries, self.field)

    def _faces(self, n: int, include_wrap: bool) -> SparseMatrix:
        c = self.cat
        idx = self.index[n - 1]
        ent = []
        for col, t in enumerate(self.chains[n]):
            for i in range(n):
                sign = -1 if i % 2 else 1
                for h, v in c.compose(t[i], t[i + 1]):
                    nt = t[:i] + (h,) + t[i + 2:]
                    r = idx.get(nt)
                    if r is not None:
                        ent.append((r, col, sign * v))
            if include_wrap:
                sign = self._wrap_sign(t)
                for h, v in c.compose(t[n], t[0]):
                    nt = (h,) + t[1:n]
                    r = idx.get(nt)
                    if r is not None:
                        ent.append((r, col, sign * v))
        return self._matrix(n - 1, n, ent)

    def b(self, n: int) -> SparseMatrix:
        """Hochschild boundary ``C_n -> C_{n-1}`` (zero map for ``n = 0``)."""
        if n <= 0:
            return SparseMatrix.zeros(0, self.dim(0), self.field)
        key = ("b", n)
        if key not in self._cache:
            self._cache[key] = self._faces(n, True)
        return self._cache[key]

    def bprime(self, n: int) -> SparseMatrix:
        if n <= 0:
            return SparseMatrix.zeros(0, self.dim(0), self.field)
        key = ("b'", n)
        if key not in self._cache:
            self._cache[key] = self._faces(n, False)
        return self._cache[key]

    def t(self, n: int) -> SparseMatrix:
        """Signed cyclic rotation on ``C_n``."""
        if self.normalized:
            raise PresentationError("cyclic operators are only built on the unnormalized model")
        key = ("t", n)
        if key not in self._cache:
            idx = self.index[n]
            ent = []
            for col, t in enumerate(self.chains[n]):
                nt = (t[-1],) + t[:-1]
                ent.append((idx[nt], col, self._wrap_sign(t)))
            self._cache[key] = self._matrix(n, n, ent)
        return self._cache[key]

    def norm(self, n: int) -> SparseMatrix:
        """``N = 1 + t + ... + t^n`` on ``C_n``."""
        key = ("N", n)
        if key not in self._cache:
            if self.normalized:
                raise PresentationError("cyclic operators are only built on the unnormalized model")
            idx = self.index[n]
            ent = []
            for col, t in enumerate(self.chains[n]):
                cur, sign = t, 1
                for _ in range(n + 1):
                    ent.append((idx[cur], col, sign))
                    sign *= self._wrap_sign(cur)
                    cur = (cur[-1],) + cur[:-1]
            self._cache[key] = self._matrix(n, n, ent)
        return self._cache[key]

    def one_minus_t(self, n: int) -> SparseMatrix:
        return SparseMatrix.identity(self.dim(n), self.field) - self.t(n)

    def delta(self, n: int) -> SparseMatrix:
        """Internal differential ``δ`` on ``C_n`` (no simplicial sign)."""
        key = ("delta", n)
        if key not in self._cache:
            c = self.cat
            idx = self.index[n]
            ent = []
            for col, t in enumerate(self.chains[n]):
                pre = 0
                for j, a in enumerate(t):
                    sign = -1 if pre % 2 else 1
                    for h, v in c.diff.get(a, ()):
                        nt = t[:j] + (h,) + t[j + 1:]
                        r = idx.get(nt)
                        if r is not None:
                            ent.append((r, col, sign * v))
                    pre += c.basis[a].degree
            self._cache[key] = self._matrix(n, n, ent)
        return self._cache[key]

    def delta_signed(self, n: int) -> SparseMatrix:
        d = self.delta(n)
        return d.scale(-1) if n % 2 else d

    def contraction(self, n: int) -> SparseMatrix:
        """Extra degeneracy ``s(a_0, ..) = (1, a_0, ..)``: ``C_n -> C_{n+1}`` (algebras)."""
        c = self.cat
        if len(c.objects) != 1:
            raise PresentationError("contraction is defined for algebras")
        if c.is_dg:
            raise PresentationError("contraction implemented for ungraded algebras")
        unit = c.units[c.objects[0]]
        idx = self.index[n + 1]
        ent = []
        for col, t in enumerate(self.chains[n]):
            for u, v in unit.items():
                ent.append((idx[(u,) + t], col, v))
        return self._matrix(n + 1, n, ent)

    # grading -------------------------------------------------------------------
    def total_degree_range(self) -> tuple[int, int]:
        lo = min((n + w for n in range(self.top + 1) for w in self.weights[n]), default=0)
        hi = max((n + w for n in range(self.top + 1) for w in self.weights[n]), default=0)
        return lo, hi

    def layout(self):
        """``pos[n][i] = (m, k)``: chain ``i`` of level ``n`` is basis vector ``k``
        of total degree ``m``; plus the dimension per total degree."""
        dims: dict[int, int] = {}
        pos = []
        for n in range(self.top + 1):
            row = []
            for w in self.weights[n]:
                m = n + w
                row.append((m, dims.get(m, 0)))
                dims[m] = dims.get(m, 0) + 1
            pos.append(row)
        return pos, dims

    def trust_range(self) -> tuple[int, int] | None:
        """Total degrees whose homology the level truncation ``n <= top`` computes exactly."""
        mins = [b.degree for b in self.cat.basis]
        if not mins or min(mins) >= 0:
            lo, _ = self.total_degree_range()
            return (min(lo, 0), self.top - 1)
        return None


def regrade(model: HochschildModel, ops: Mapping[int, SparseMatrix], level_shift: int,
            degree_shift: int, src_pos=None, tgt_pos=None) -> dict[int, list[tuple[int, int, object]]]:
    """Turn level operators ``ops[n] : level n -> level n + level_shift`` into
    entry lists keyed by source total degree."""
    if src_pos is None:
        src_pos, _ = model.layout()
    tgt_pos = tgt_pos or src_pos
    out: dict[int, list] = {}
    for n, m in ops.items():
        sp = src_pos[n]
        tp = tgt_pos[n + level_shift]
        for r, c, v in m.entries():
            ms, ks = sp[c]
            mt, kt = tp[r]
            if mt != ms + degree_shift:
                raise AssertionError("operator does not have the declared degree")
            out.setdefault(ms, []).append((kt, ks, v))
    return out


@dataclass
class GradedOperators:
    """Total-degree matrices of the Hochschild model: ``d`` (``b + ±δ``),
    ``dprime`` (``b' + ±δ``), ``t``, ``N`` and dims per total degree."""

    dims: dict[int, int]
    d: dict[int, SparseMatrix]
    dprime: dict[int, SparseMatrix]
    t: dict[int, SparseMatrix]
    N: dict[int, SparseMatrix]
    lo: int
    hi: int
    trust: tuple[int, int] | None
    field: Field


def graded_operators(model: HochschildModel, cyclic: bool = True, lo: int | None = None,
                     hi: int | None = None) -> GradedOperators:
    """Operators in total degrees; ``lo``/``hi`` widen the stored range."""
    pos, dims = model.layout()
    lo = min(min(dims, default=0), 0, lo if lo is not None else 0)
    # degrees up to the top level are always listed, even when their chain spaces are empty
    hi = max(max(dims, default=0), model.top, hi if hi is not None else 0)
    fld = model.field
    top = model.top

    def collect(ops, level_shift, degree_shift):
        ent = regrade(model, ops, level_shift, degree_shift, pos)
        mats = {}
        for m in range(lo, hi + 1):
            mats[m] = SparseMatrix.from_entries(dims.get(m + degree_shift, 0), dims.get(m, 0),
                                                ent.get(m, []), fld)
        return mats

    d_ops = {n: model.b(n) for n in range(1, top + 1)}
    dp_ops = {n: model.bprime(n) for n in range(1, top + 1)}
    d = collect(d_ops, -1, -1)
    dp = collect(dp_ops, -1, -1)
    if model.cat.diff:
        dl = collect({n: model.delta_signed(n) for n in range(top + 1)}, 0, -1)
        d = {m: d[m] + dl[m] for m in d}
        dp = {m: dp[m] + dl[m] for m in dp}
    t = N = {}
    if cyclic:
        t = collect({n: model.t(n) for n in range(top + 1)}, 0, 0)
        N = collect({n: model.norm(n) for n in range(top + 1)}, 0, 0)
    return GradedOperators(dims, d, dp, t, N, lo, hi, model.trust_range(), fld)


def _complex(g: GradedOperators, which: str) -> ChainComplex:
    mats = g.d if which == "b" else g.dprime
    w = DegreeWindow(g.lo, g.hi)
    if g.trust is None:
        w = _trust(g.lo, g.hi, g.lo, g.lo - 1)
    else:
        w = _trust(g.lo, g.hi, g.trust[0], g.trust[1])
    return ChainComplex(w, g.dims, {m: mats[m] for m in range(g.lo + 1, g.hi + 1)}, g.field)


def hochschild_complex(c: CategoryPresentation, hi: int, normalized: bool = False,
                       max_basis: int = DEFAULT_MAX_BASIS) -> tuple[ChainComplex, HochschildModel]:
    """``C(c)`` with chains built to simplicial degree ``hi + 1``.

    For plain categories total degree = simplicial degree and homology is
    trusted on ``0..hi``.  For dg categories this is the sum-total complex of
    the level truncation; trust flags say where the truncation is exact.
    """
    model = HochschildModel(c, hi + 1, normalized, max_basis)
    g = graded_operators(model, cyclic=False)
    return _complex(g, "b"), model


def hochschild_homology(c: CategoryPresentation, hi: int, **kw):
    cx, _ = hochschild_complex(c, hi, **kw)
    tab = cx.homology_table(f"HH({c.name})")
    tab.entries = {n: e for n, e in tab.entries.items() if n <= hi}
    return tab


@dataclass
class CyclicOperators:
    b: dict[int, SparseMatrix]
    bprime: dict[int, SparseMatrix]
    t: dict[int, SparseMatrix]
    N: dict[int, SparseMatrix]

    def violations(self) -> list[str]:
        out = []
        for n in sorted(self.t):
            dim = self.t[n].nrows
            one_t = SparseMatrix.identity(dim, self.t[n].field) - self.t[n]
            if not compose(one_t, self.N[n]).is_zero():
                out.append(f"(1-t)N != 0 in degree {n}")
            if not compose(self.N[n], one_t).is_zero():
                out.append(f"N(1-t) != 0 in degree {n}")
            if n >= 1 and n in self.b and n - 1 in self.t:
                one_t1 = SparseMatrix.identity(self.t[n - 1].nrows, self.t[n].field) - self.t[n - 1]
                if compose(one_t1, self.bprime[n]) != compose(self.b[n], one_t):
                    out.append(f"(1-t)b' != b(1-t) in degree {n}")
                if compose(self.N[n - 1], self.b[n]) != compose(self.bprime[n], self.N[n]):
                    out.append(f"Nb != b'N in degree {n}")
            if n >= 2 and n in self.b and n - 1 in self.b:
                if not compose(self.b[n - 1], self.b[n]).is_zero():
                    out.append(f"b^2 != 0 in degree {n}")
                if not compose(self.bprime[n - 1], self.bprime[n]).is_zero():
                    out.append(f"b'^2 != 0 in degree {n}")
        return out


def cyclic_operators(c: CategoryPresentation, hi: int, max_basis: int = DEFAULT_MAX_BASIS) -> CyclicOperators:
    """Cyclic operators in total degrees (equal to simplicial degrees for plain categories)."""
    model = HochschildModel(c, hi, max_basis=max_basis)
    g = graded_operators(model)
    return CyclicOperators({m: g.d[m] for m in g.d if m > g.lo}, {m: g.dprime[m] for m in g.dprime if m > g.lo},
                           g.t, g.N)


def cyclic_bicomplex(c: CategoryPresentation, hi: int, columns: int | None = None,
                     max_basis: int = DEFAULT_MAX_BASIS) -> Bicomplex:
    """Loday's ``CC``: column ``p`` is ``(C, b)`` for even ``p`` and ``(C, -b')``
    for odd ``p``; horizontal maps ``1-t`` (odd to even) and ``N`` (even to odd).

    Rows are built to ``hi + 1`` and columns to ``columns`` (default ``hi + 1``),
    so the total complex is trusted on ``0..hi``.
    """
    if c.is_dg:
        raise PresentationError("cyclic_bicomplex is built for plain categories")
    Q = hi + 1
    W = Q if columns is None else columns
    model = HochschildModel(c, Q, max_basis=max_basis)
    dims, dI, dII = {}, {}, {}
    for p in range(W + 1):
        for q in range(Q + 1):
            dims[(p, q)] = model.dim(q)
            if q >= 1:
                dII[(p, q)] = model.b(q) if p % 2 == 0 else model.bprime(q).scale(-1)
            if p >= 1:
                dI[(p, q)] = model.one_minus_t(q) if p % 2 == 1 else model.norm(q)
    return Bicomplex((0, W), (0, Q), dims, dI, dII, c.field, closed=(True, False, True, False))


def bprime_contraction(a: AlgebraPresentation, hi: int) -> tuple[dict[int, SparseMatrix], list[str]]:
    """The maps ``s_n`` and the degrees where ``b's + sb' = id`` fails (``n >= 1``)."""
    model = HochschildModel(a, hi + 1)
    s = {n: model.contraction(n) for n in range(hi + 1)}
    bad = []
    for n in range(1, hi + 1):
        lhs = compose(model.bprime(n + 1), s[n]) + compose(s[n - 1], model.bprime(n))
        if lhs != SparseMatrix.identity(model.dim(n), a.field):
            bad.append(f"b's + sb' != id in degree {n}")
    return s, bad


def induced_level_maps(F: Functor, source: HochschildModel, target: HochschildModel) -> dict[int, SparseMatrix]:
    """``(a_0, .., a_n) ↦ (F a_0, .., F a_n)`` per simplicial degree."""
    bad = F.violations()
    if bad:
        raise PresentationError(bad)
    images = {i: F.image(i) for i in range(F.source.dim)}
    out = {}
    fld = target.field
    for n in range(min(source.top, target.top) + 1):
        idx = target.index[n]
        ent = []
        for col, t in enumerate(source.chains[n]):
            terms = [((), 1)]
            for a in t:
                terms = [(pre + (h,), c * v) for pre, c in terms for h, v in images[a].items()]
            for nt, v in terms:
                r = idx.get(nt)
                if r is not None:
                    ent.append((r, col, v))
        out[n] = SparseMatrix.from_entries(target.dim(n), source.dim(n), ent, fld)
    return out


def induced_chain_map(F: Functor, hi: int, max_basis: int = DEFAULT_MAX_BASIS) -> tuple[ChainMap, dict]:
    """Chain map ``C(source) -> C(target)``; also returns the graded ``t``-commutation
    check results (list of failing degrees under key ``"t"``)."""
    sm = HochschildModel(F.source, hi + 1, max_basis=max_basis)
    tm = HochschildModel(F.target, hi + 1, max_basis=max_basis)
    lv = induced_level_maps(F, sm, tm)
    sg, tg = graded_operators(sm), graded_operators(tm)
    spos, _ = sm.layout()
    tpos, _ = tm.layout()
    ent = regrade(sm, lv, 0, 0, spos, tpos)
    lo = min(sg.lo, tg.lo)
    hi_ = max(sg.hi, tg.hi)
    comps = {m: SparseMatrix.from_entries(tg.dims.get(m, 0), sg.dims.get(m, 0), ent.get(m, []), sm.field)
             for m in range(lo, hi_ + 1)}
    src, tgt = _complex(sg, "b"), _complex(tg, "b")
    f = ChainMap(src, tgt, comps)
    t_bad = [m for m in f.degrees() if compose(tg.t[m], f[m]) != compose(f[m], sg.t[m])]
    return f, {"chain": f.check(), "t": t_bad, "source_ops": sg, "target_ops": tg}


def with_unit_basis(c: CategoryPresentation) -> CategoryPresentation:
    """Same category in a basis where each identity is a basis element.

    For each object whose identity is a combination, the last basis element in
    its support is replaced by the identity.
    """
    fld = c.field
    repl: dict[int, tuple[str, dict]] = {}
    for x in c.objects:
        u = c.units[x]
        if len(u) == 1 and list(u.values())[0] == 1:
            continue
        r = max(u)
        repl[r] = (x, u)
    if not repl:
        return c
    # old basis vector e_r = (unit - Σ_{j≠r} c_j e_j) / c_r  in the new basis (new r = unit)
    def old_to_new(i):
        if i not in repl:
            return {i: 1}
        _, u = repl[i]
        inv = fld.inv(u[i])
        v = {i: inv}
        for j, cj in u.items():
            if j != i:
                v[j] = fld.normalize(-cj * inv)
        return v

    def new_to_old(i):
        if i not in repl:
            return {i: 1}
        return dict(repl[i][1])

    def convert(vec_old):
        out = {}
        for i, v in vec_old.items():
            for j, w in old_to_new(i).items():
                out[j] = fld.normalize(out.get(j, 0) + v * w)
        return {k: v for k, v in out.items() if v != 0}

    from .presentations import BasisMorphism
    basis = [BasisMorphism(("1_" + repl[i][0]) if i in repl else b.name, b.src, b.tgt, b.degree)
             for i, b in enumerate(c.basis)]
    mult = {}
    for f in range(c.dim):
        for g in c.out_of[c.basis[f].tgt]:
            res = convert(c.compose_vec(new_to_old(g), new_to_old(f)))
            if res:
                mult[(g, f)] = list(res.items())
    units = {x: convert(c.units[x]) for x in c.objects}
    diff = {}
    for i in range(c.dim):
        res = convert(c.d_vec(new_to_old(i)))
        if res:
            diff[i] = list(res.items())
    cls = type(c)
    return cls(c.objects, basis, mult, units, diff, fld, c.name, c.meta)
