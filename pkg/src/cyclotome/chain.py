"""Windowed chain complexes, maps, bicomplexes and towers.

Everything is stored homologically: ``d[n]`` maps ``C_n -> C_{n-1}``.  A
cohomological complex ``K`` is stored with ``C_n = K^{-n}``; the
``grading`` attribute only affects display.

Windows are finite.  A :class:`DegreeWindow` records the degree range that is
actually stored (``lo..hi``) and the sub-range ``trust_lo..trust_hi`` where
the computed homology equals the homology of the (possibly unbounded) object
the complex stands in for.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Callable, Mapping, Sequence

from .linalg import (QQ, Field, SparseMatrix, block, compose, hstack, kernel_matrix, rank,
                     _rref_pivots)


class ComplexError(ValueError):
    pass


class WindowError(ComplexError):
    pass


@dataclass(frozen=True)
class DegreeWindow:
    lo: int
    hi: int
    trust_lo: int | None = None
    trust_hi: int | None = None

    def __post_init__(self):
        if self.trust_lo is None:
            object.__setattr__(self, "trust_lo", self.lo)
        if self.trust_hi is None:
            object.__setattr__(self, "trust_hi", self.hi)
        if self.lo > self.hi + 1:
            raise WindowError(f"empty window {self.lo}..{self.hi}")
        # an empty trust range is encoded as trust_lo = trust_hi + 1
        if not (self.trust_lo >= self.lo and self.trust_hi <= self.hi and self.trust_lo <= self.trust_hi + 1):
            raise WindowError(f"bad trust range {self.trust_lo}..{self.trust_hi} in {self.lo}..{self.hi}")

    def degrees(self) -> range:
        return range(self.lo, self.hi + 1)

    def trusted(self, n: int) -> bool:
        return self.trust_lo <= n <= self.trust_hi

    def with_trust(self, lo: int, hi: int) -> "DegreeWindow":
        lo = max(lo, self.lo)
        hi = min(hi, self.hi)
        if lo > hi:
            lo, hi = self.lo, self.lo - 1
        return DegreeWindow(self.lo, self.hi, lo, hi)

    def shifted(self, k: int) -> "DegreeWindow":
        return DegreeWindow(self.lo + k, self.hi + k, self.trust_lo + k, self.trust_hi + k)


def _trust(lo, hi, tlo, thi) -> DegreeWindow:
    tlo = max(tlo, lo)
    thi = min(thi, hi)
    if tlo > thi:
        return DegreeWindow(lo, hi, lo, lo - 1)
    return DegreeWindow(lo, hi, tlo, thi)


@dataclass(frozen=True)
class HomologyEntry:
    dim: int
    trusted: bool
    stable: bool | None = None


@dataclass
class HomologyTable:
    entries: dict[int, HomologyEntry]
    field: Field = QQ
    provenance: str = ""

    def dims(self, trusted_only: bool = False) -> dict[int, int]:
        return {n: e.dim for n, e in sorted(self.entries.items()) if e.trusted or not trusted_only}

    def __getitem__(self, n: int) -> HomologyEntry:
        return self.entries[n]

    def trusted_degrees(self) -> list[int]:
        return [n for n, e in sorted(self.entries.items()) if e.trusted]

    def to_json(self):
        out = []
        for n, e in sorted(self.entries.items()):
            row = {"degree": n, "dimension": e.dim, "trusted": e.trusted}
            if e.stable is not None:
                row["stable"] = e.stable
            out.append(row)
        return {"field": self.field.name, "provenance": self.provenance, "entries": out}


class ChainComplex:
    """A finite window of a chain complex with exact differentials.

    ``dims[n]`` for ``n`` in the window; ``d[n]`` (``C_n -> C_{n-1}``) for
    ``lo < n <= hi``.  Maps out of the window are zero.  The constructor
    checks shapes and ``d∘d = 0``.
    """

    def __init__(self, window: DegreeWindow, dims: Mapping[int, int], d: Mapping[int, SparseMatrix],
                 field: Field = QQ, grading: str = "homological", check: bool = True):
        self.window = window
        self.field = field
        self.grading = grading
        self.dims = {n: int(dims.get(n, 0)) for n in window.degrees()}
        self.d: dict[int, SparseMatrix] = {}
        for n in range(window.lo + 1, window.hi + 1):
            m = d.get(n)
            shape = (self.dims[n - 1], self.dims[n])
            if m is None:
                m = SparseMatrix.zeros(*shape, field)
            if m.shape != shape:
                raise ComplexError(f"d_{n} has shape {m.shape}, expected {shape}")
            if m.field != field:
                raise ComplexError(f"d_{n} over {m.field}, complex over {field}")
            self.d[n] = m
        if check:
            self.check()

    def check(self):
        for n in range(self.window.lo + 2, self.window.hi + 1):
            if not compose(self.d[n - 1], self.d[n]).is_zero():
                raise ComplexError(f"d_{n - 1} d_{n} != 0")

    @classmethod
    def zero(cls, window: DegreeWindow, field: Field = QQ):
        return cls(window, {}, {}, field)

    def dim(self, n: int) -> int:
        return self.dims.get(n, 0)

    def diff(self, n: int) -> SparseMatrix:
        """``d_n : C_n -> C_{n-1}``, zero outside the window."""
        if n in self.d:
            return self.d[n]
        return SparseMatrix.zeros(self.dim(n - 1), self.dim(n), self.field)

    def with_window(self, window: DegreeWindow) -> "ChainComplex":
        return ChainComplex(window, self.dims, self.d, self.field, self.grading, check=False)

    def with_trust(self, lo: int, hi: int) -> "ChainComplex":
        w = self.window
        return self.with_window(_trust(w.lo, w.hi, lo, hi))

    def homology(self, n: int) -> tuple[int, bool]:
        return homology(self, n)

    def homology_table(self, provenance: str = "") -> HomologyTable:
        return HomologyTable({n: HomologyEntry(*homology(self, n)) for n in self.window.degrees()},
                             self.field, provenance)

    def cycles(self, n: int) -> SparseMatrix:
        return kernel_matrix(self.diff(n))

    def boundaries(self, n: int) -> SparseMatrix:
        return self.diff(n + 1)

    def total_dim(self) -> int:
        return sum(self.dims.values())

    def __repr__(self):
        w = self.window
        return f"ChainComplex({w.lo}..{w.hi}, trust {w.trust_lo}..{w.trust_hi}, dims={self.dims})"


def homology(c: ChainComplex, n: int) -> tuple[int, bool]:
    """``(dim H_n, trusted)``."""
    if not c.window.lo <= n <= c.window.hi:
        raise WindowError(f"degree {n} outside window {c.window.lo}..{c.window.hi}")
    dn = c.diff(n)
    dim = c.dim(n) - rank(dn) - rank(c.diff(n + 1))
    return dim, c.window.trusted(n)


@dataclass
class ChainMap:
    source: ChainComplex
    target: ChainComplex
    components: dict[int, SparseMatrix]

    def __post_init__(self):
        for n in self.degrees():
            m = self.components.get(n)
            shape = (self.target.dim(n), self.source.dim(n))
            if m is None:
                self.components[n] = SparseMatrix.zeros(*shape, self.source.field)
            elif m.shape != shape:
                raise ComplexError(f"f_{n} has shape {m.shape}, expected {shape}")

    def degrees(self) -> range:
        lo = max(self.source.window.lo, self.target.window.lo)
        hi = min(self.source.window.hi, self.target.window.hi)
        return range(lo, hi + 1)

    def __getitem__(self, n) -> SparseMatrix:
        if n in self.components:
            return self.components[n]
        return SparseMatrix.zeros(self.target.dim(n), self.source.dim(n), self.source.field)

    def check(self) -> list[int]:
        """Degrees where ``d f != f d`` (empty when it is a chain map)."""
        bad = []
        degs = self.degrees()
        for n in degs:
            if n - 1 < degs.start:
                continue
            lhs = compose(self.target.diff(n), self[n])
            rhs = compose(self[n - 1], self.source.diff(n))
            if lhs != rhs:
                bad.append(n)
        return bad

    def then(self, other: "ChainMap") -> "ChainMap":
        """``other ∘ self``."""
        return ChainMap(self.source, other.target,
                        {n: compose(other[n], self[n]) for n in self.degrees() if n in other.degrees()})

    @classmethod
    def identity(cls, c: ChainComplex):
        return cls(c, c, {n: SparseMatrix.identity(c.dim(n), c.field) for n in c.window.degrees()})

    @classmethod
    def zero(cls, source: ChainComplex, target: ChainComplex):
        return cls(source, target, {})

    def homology_rank(self, n: int) -> int:
        """Rank of ``H_n(f)``."""
        z = self.source.cycles(n)
        bt = self.target.boundaries(n)
        return rank(hstack([bt, compose(self[n], z)])) - rank(bt)


def cone(f: ChainMap) -> ChainComplex:
    """``Cone(f)_n = Y_n ⊕ X_{n-1}`` with ``d(y, x) = (dy + f x, -dx)``."""
    x, y = f.source, f.target
    if (x.window.lo, x.window.hi) != (y.window.lo, y.window.hi):
        raise WindowError("cone needs source and target on the same window")
    fld = y.field
    w = y.window
    dims = {n: y.dim(n) + x.dim(n - 1) for n in w.degrees()}
    d = {}
    for n in range(w.lo + 1, w.hi + 1):
        d[n] = block([[y.diff(n), f[n - 1]], [None, x.diff(n - 1).scale(-1)]],
                     [y.dim(n - 1), x.dim(n - 2)], [y.dim(n), x.dim(n - 1)], fld)
    tw = _trust(w.lo, w.hi, max(x.window.trust_lo, y.window.trust_lo),
                min(y.window.trust_hi, x.window.trust_hi + 1, w.hi - 1))
    return ChainComplex(tw, dims, d, fld, y.grading)


def cone_inclusions(f: ChainMap, cn: ChainComplex) -> tuple[ChainMap, ChainMap]:
    """The maps ``Y -> Cone(f)`` and ``Cone(f) -> X[1]`` (as matrices per degree)."""
    x, y = f.source, f.target
    inc = {}
    proj = {}
    for n in cn.window.degrees():
        inc[n] = block([[SparseMatrix.identity(y.dim(n), y.field)], [None]],
                       [y.dim(n), x.dim(n - 1)], [y.dim(n)], y.field)
        proj[n] = block([[None, SparseMatrix.identity(x.dim(n - 1), y.field)]],
                        [x.dim(n - 1)], [y.dim(n), x.dim(n - 1)], y.field)
    return ChainMap(y, cn, inc), proj


def shift(c: ChainComplex, k: int) -> ChainComplex:
    """``shift(c, k)_n = c_{n-k}`` with differential multiplied by ``(-1)^k``."""
    sign = -1 if k % 2 else 1
    dims = {n + k: v for n, v in c.dims.items()}
    d = {n + k: m.scale(sign) if sign == -1 else m for n, m in c.d.items()}
    return ChainComplex(c.window.shifted(k), dims, d, c.field, c.grading, check=False)


def _image_rref(m: SparseMatrix) -> dict[int, dict]:
    """RREF rows of the column space of ``m``: ``{pivot_coord: row}``."""
    t = m.transpose()
    return _rref_pivots({i: r for i, r in t.row_items()}, m.field)


def quotient_map(sub: SparseMatrix) -> tuple[SparseMatrix, list[int]]:
    """For ``sub`` (columns spanning ``S ⊂ k^n``) return the projection
    ``k^n -> k^n / S`` in the basis of non-pivot coordinates, and that list."""
    n = sub.nrows
    piv = _image_rref(sub)
    keep = [j for j in range(n) if j not in piv]
    pos = {j: k for k, j in enumerate(keep)}
    rows: dict[int, dict[int, object]] = {}
    fld = sub.field
    for j in keep:
        rows.setdefault(pos[j], {})[j] = 1
    for c, r in piv.items():
        for j, v in r.items():
            if j != c:
                rows.setdefault(pos[j], {})[c] = fld.neg(v)
    return SparseMatrix(len(keep), n, rows, fld, _trusted=True), keep


def truncate_ge(c: ChainComplex, p: int) -> ChainComplex:
    """Cohomological ``τ^{≥p}``: ``0 -> K^p/B^p -> K^{p+1} -> ...``.

    Homologically this keeps degrees ``<= -p`` and replaces ``C_{-p}`` by
    ``C_{-p} / im d_{-p+1}``.
    """
    top = -p
    w = c.window
    if not w.lo <= top <= w.hi:
        raise WindowError(f"cohomological degree {p} outside window")
    q, _ = quotient_map(c.diff(top + 1))
    dims = {n: c.dim(n) for n in range(w.lo, top)}
    dims[top] = q.nrows
    d = {n: c.d[n] for n in range(w.lo + 1, top)}
    if top > w.lo:
        # d_top factors through the quotient: d_top = d' ∘ q with d' = d_top restricted to kept coords
        _, keep = quotient_map(c.diff(top + 1))
        d[top] = c.diff(top).submatrix(range(c.dim(top - 1)), keep)
    nw = _trust(w.lo, top, w.trust_lo, min(w.trust_hi, top) if top < w.hi else top)
    return ChainComplex(nw, dims, d, c.field, c.grading)


def truncate_lt(c: ChainComplex, p: int) -> ChainComplex:
    """Cohomological ``τ^{<p}``: ``... -> K^{p-2} -> K^{p-1} -> B^p -> 0``.

    Homologically: degrees ``>= -p`` with ``C_{-p}`` replaced by ``im d_{-p+1}``.
    """
    bot = -p
    w = c.window
    if not w.lo <= bot <= w.hi:
        raise WindowError(f"cohomological degree {p} outside window")
    piv = _image_rref(c.diff(bot + 1))
    basis = sorted(piv)
    dims = {n: c.dim(n) for n in range(bot + 1, w.hi + 1)}
    dims[bot] = len(basis)
    d = {n: c.d[n] for n in range(bot + 2, w.hi + 1)}
    if bot + 1 <= w.hi:
        # coordinates of an element of the image in the RREF basis = its pivot entries
        d[bot + 1] = c.diff(bot + 1).submatrix(basis, range(c.dim(bot + 1)))
    nw = _trust(bot, w.hi, bot, w.trust_hi)
    return ChainComplex(nw, dims, d, c.field, c.grading)


# ----------------------------------------------------------------------
# bicomplexes


@dataclass
class Bicomplex:
    """Bigraded space with anticommuting ``d_I`` (bidegree (-1,0)) and ``d_II`` ((0,-1)).

    ``closed`` = (p_lo, p_hi, q_lo, q_hi) says for each window edge whether the
    underlying object is genuinely zero beyond it; it drives trust flags of
    the totalizations.
    """

    p_range: tuple[int, int]
    q_range: tuple[int, int]
    dims: dict[tuple[int, int], int]
    d_I: dict[tuple[int, int], SparseMatrix]
    d_II: dict[tuple[int, int], SparseMatrix]
    field: Field = QQ
    closed: tuple[bool, bool, bool, bool] = (True, True, True, True)

    def __post_init__(self):
        for key in list(self.dims):
            if self.dims[key] == 0:
                del self.dims[key]
        for (p, q), m in self.d_I.items():
            if m.shape != (self.dim(p - 1, q), self.dim(p, q)):
                raise ComplexError(f"d_I at {(p, q)} has shape {m.shape}")
        for (p, q), m in self.d_II.items():
            if m.shape != (self.dim(p, q - 1), self.dim(p, q)):
                raise ComplexError(f"d_II at {(p, q)} has shape {m.shape}")

    def dim(self, p, q) -> int:
        return self.dims.get((p, q), 0)

    def dI(self, p, q) -> SparseMatrix:
        m = self.d_I.get((p, q))
        return m if m is not None else SparseMatrix.zeros(self.dim(p - 1, q), self.dim(p, q), self.field)

    def dII(self, p, q) -> SparseMatrix:
        m = self.d_II.get((p, q))
        return m if m is not None else SparseMatrix.zeros(self.dim(p, q - 1), self.dim(p, q), self.field)

    def bidegrees(self):
        (p0, p1), (q0, q1) = self.p_range, self.q_range
        return [(p, q) for p in range(p0, p1 + 1) for q in range(q0, q1 + 1)]

    def violations(self) -> list[str]:
        out = []
        for p, q in self.bidegrees():
            if not compose(self.dI(p - 1, q), self.dI(p, q)).is_zero():
                out.append(f"d_I^2 != 0 at {(p, q)}")
            if not compose(self.dII(p, q - 1), self.dII(p, q)).is_zero():
                out.append(f"d_II^2 != 0 at {(p, q)}")
            s = compose(self.dI(p, q - 1), self.dII(p, q)) + compose(self.dII(p - 1, q), self.dI(p, q))
            if not s.is_zero():
                out.append(f"d_I d_II + d_II d_I != 0 at {(p, q)}")
        return out

    def _complete(self, n: int) -> bool:
        """Whether every bidegree on the diagonal ``p+q=n`` outside the window
        lies beyond a closed edge."""
        (p0, p1), (q0, q1) = self.p_range, self.q_range
        plo_c, phi_c, qlo_c, qhi_c = self.closed
        if n - q1 <= p0:
            left_ok = plo_c or (n - p0 == q1 and qhi_c)
        else:
            left_ok = qhi_c
        if n - q0 >= p1:
            right_ok = phi_c or (n - p1 == q0 and qlo_c)
        else:
            right_ok = qlo_c
        return left_ok and right_ok

    def _total(self, product: bool) -> ChainComplex:
        (p0, p1), (q0, q1) = self.p_range, self.q_range
        lo, hi = p0 + q0, p1 + q1
        layout: dict[int, list[tuple[int, int]]] = {}
        for n in range(lo, hi + 1):
            layout[n] = [(p, n - p) for p in range(p0, p1 + 1) if q0 <= n - p <= q1]
        dims = {n: sum(self.dim(*b) for b in layout[n]) for n in layout}
        d = {}
        for n in range(lo + 1, hi + 1):
            src, tgt = layout[n], layout[n - 1]
            tpos = {b: k for k, b in enumerate(tgt)}
            blocks = [[None] * len(src) for _ in tgt]
            for k, (p, q) in enumerate(src):
                if (p - 1, q) in tpos:
                    blocks[tpos[(p - 1, q)]][k] = self.dI(p, q)
                if (p, q - 1) in tpos:
                    blocks[tpos[(p, q - 1)]][k] = self.dII(p, q)
            d[n] = block(blocks, [self.dim(*b) for b in tgt], [self.dim(*b) for b in src], self.field)
        trusted = [n for n in range(lo, hi + 1)
                   if all(self._complete(m) for m in (n - 1, n, n + 1))]
        if trusted:
            # keep the longest initial run; trust ranges are intervals
            run = [trusted[0]]
            for n in trusted[1:]:
                if n == run[-1] + 1:
                    run.append(n)
            w = DegreeWindow(lo, hi, run[0], run[-1])
        else:
            w = DegreeWindow(lo, hi, lo, lo - 1)
        return ChainComplex(w, dims, d, self.field)

    def total_sum(self) -> ChainComplex:
        return self._total(product=False)

    def total_prod(self) -> ChainComplex:
        return self._total(product=True)


def total_sum(b: Bicomplex) -> ChainComplex:
    return b.total_sum()


def total_prod(b: Bicomplex) -> ChainComplex:
    return b.total_prod()


# ----------------------------------------------------------------------
# towers


@dataclass
class InverseSystem:
    """Finite tower ``K_P -> ... -> K_0 -> 0``; ``maps[p]`` is ``π_p : K_p -> K_{p-1}`` (p >= 1)."""

    tower: list[ChainComplex]
    maps: dict[int, ChainMap]

    def violations(self) -> list[str]:
        out = []
        for p in range(1, len(self.tower)):
            f = self.maps[p]
            if f.check():
                out.append(f"π_{p} is not a chain map in degrees {f.check()}")
            for n in f.degrees():
                if rank(f[n]) != self.tower[p - 1].dim(n):
                    out.append(f"π_{p} not surjective in degree {n}")
        return out


def inverse_limit(s: InverseSystem) -> ChainComplex:
    """Degreewise limit, computed as the kernel of
    ``Φ: ⊕_p K_p -> ⊕_{q<P} K_q, (x_p) ↦ (x_q - π_{q+1} x_{q+1})``."""
    bad = s.violations()
    if bad:
        raise ComplexError("; ".join(bad))
    tower = s.tower
    P = len(tower) - 1
    w = tower[0].window
    fld = tower[0].field
    for k in tower:
        if (k.window.lo, k.window.hi) != (w.lo, w.hi):
            raise WindowError("tower stages must share a window")
    bases = {}
    dims = {}
    for n in w.degrees():
        ds = [k.dim(n) for k in tower]
        blocks = [[None] * (P + 1) for _ in range(P)]
        for q in range(P):
            blocks[q][q] = SparseMatrix.identity(ds[q], fld)
            blocks[q][q + 1] = s.maps[q + 1][n].scale(-1)
        phi = block(blocks, ds[:P], ds, fld) if P else SparseMatrix.zeros(0, ds[0], fld)
        bases[n] = kernel_matrix(phi)
        dims[n] = bases[n].ncols
    d = {}
    for n in range(w.lo + 1, w.hi + 1):
        tot = block([[k.diff(n) if i == j else None for j, k in enumerate(tower)] for i in range(P + 1)],
                    [k.dim(n - 1) for k in tower], [k.dim(n) for k in tower], fld)
        image = compose(tot, bases[n])
        # express in the kernel basis of degree n-1: its free coordinates are identity rows
        d[n] = _coords_in_basis(bases[n - 1], image)
    tlo = max(k.window.trust_lo for k in tower)
    thi = min(k.window.trust_hi for k in tower)
    return ChainComplex(_trust(w.lo, w.hi, tlo, thi), dims, d, fld, tower[0].grading)


def _coords_in_basis(basis: SparseMatrix, vectors: SparseMatrix) -> SparseMatrix:
    """Coordinates of columns of ``vectors`` (assumed in span) in the column basis ``basis``."""
    from .linalg import solve

    cols = []
    for v in vectors.columns():
        x = solve(basis, v)
        if x is None:
            raise ComplexError("vector not in span of basis")
        cols.append(x)
    return SparseMatrix.from_columns(basis.ncols, cols, basis.field)


def complex_from_callable(window: DegreeWindow, dims: Mapping[int, int],
                          diff: Callable[[int], SparseMatrix], field: Field = QQ) -> ChainComplex:
    return ChainComplex(window, dims, {n: diff(n) for n in range(window.lo + 1, window.hi + 1)}, field)
