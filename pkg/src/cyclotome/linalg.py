"""Exact sparse linear algebra over Q or a prime field F_p.

Matrices act on column vectors: an ``m x n`` matrix maps ``k^n -> k^m``.
Entries are stored row-wise as ``{col: value}`` dictionaries with no zeros.
Over Q the stored values are ``int`` or ``fractions.Fraction`` (ints are kept
as long as possible because they are much cheaper); over F_p they are ints in
``[0, p)``.

Elimination is deterministic: rows are processed sparsest first (ties by
index) and each pivot is the entry of smallest column count, preferring unit
entries, ties broken by lowest column index.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Sequence

DEFAULT_PRIME = 32003


class DimensionMismatch(ValueError):
    pass


@dataclass(frozen=True)
class Field:
    """The rationals (``p is None``) or the prime field F_p."""

    p: int | None = None

    def __post_init__(self):
        if self.p is not None and not _is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")

    @property
    def name(self) -> str:
        return "Q" if self.p is None else f"Fp:{self.p}"

    def __repr__(self):
        return f"Field({self.name})"

    def __call__(self, x) -> int | Fraction:
        """Coerce ``x`` (int, Fraction, or string like ``"3/4"``) into the field."""
        if isinstance(x, str):
            x = Fraction(x)
        if self.p is None:
            x = Fraction(x)
            return x.numerator if x.denominator == 1 else x
        if isinstance(x, Fraction):
            return x.numerator * pow(x.denominator, -1, self.p) % self.p
        return int(x) % self.p

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        if self.p is None:
            if a == 1 or a == -1:
                return a
            r = 1 / Fraction(a)
            return r.numerator if r.denominator == 1 else r
        return pow(a, -1, self.p)

    def neg(self, a):
        return -a if self.p is None else (-a) % self.p

    def normalize(self, a):
        if self.p is None:
            if isinstance(a, Fraction) and a.denominator == 1:
                return a.numerator
            return a
        return a % self.p

    def to_fraction(self, a) -> Fraction:
        return Fraction(a)

    def to_json(self):
        return "Q" if self.p is None else {"Fp": self.p}

    @staticmethod
    def parse(spec) -> "Field":
        """Accept ``"Q"``, ``"Fp:32003"``, ``{"Fp": 32003}`` or a Field."""
        if isinstance(spec, Field):
            return spec
        if spec is None or spec == "Q":
            return QQ
        if isinstance(spec, Mapping) and "Fp" in spec:
            return Field(int(spec["Fp"]))
        if isinstance(spec, str) and spec.startswith("Fp"):
            _, _, p = spec.partition(":")
            return Field(int(p) if p else DEFAULT_PRIME)
        raise ValueError(f"unknown field {spec!r}")


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


QQ = Field(None)


def GF(p: int = DEFAULT_PRIME) -> Field:
    return Field(p)


class SparseMatrix:
    """Immutable sparse matrix. Build with :meth:`from_entries` or :meth:`from_dense`."""

    __slots__ = ("nrows", "ncols", "field", "_rows", "_hash")

    def __init__(self, nrows: int, ncols: int, rows: Mapping[int, Mapping[int, object]] | None = None,
                 field: Field = QQ, *, _trusted: bool = False):
        if nrows < 0 or ncols < 0:
            raise ValueError("negative dimension")
        self.nrows = nrows
        self.ncols = ncols
        self.field = field
        self._hash = None
        if rows is None:
            self._rows = {}
        elif _trusted:
            self._rows = rows
        else:
            clean = {}
            for i, row in rows.items():
                if not 0 <= i < nrows:
                    raise IndexError(f"row {i} out of range")
                r = {}
                for j, v in row.items():
                    if not 0 <= j < ncols:
                        raise IndexError(f"col {j} out of range")
                    v = field(v)
                    if v != 0:
                        r[j] = v
                if r:
                    clean[i] = r
            self._rows = clean

    # construction -----------------------------------------------------
    @classmethod
    def from_entries(cls, nrows, ncols, entries: Iterable[tuple[int, int, object]], field: Field = QQ):
        """Sum duplicate positions; drop zeros."""
        rows: dict[int, dict[int, object]] = {}
        for i, j, v in entries:
            if not (0 <= i < nrows and 0 <= j < ncols):
                raise IndexError(f"entry ({i},{j}) outside {nrows}x{ncols}")
            v = field(v)
            r = rows.setdefault(i, {})
            r[j] = field.normalize(r.get(j, 0) + v)
        for i in list(rows):
            r = {j: v for j, v in rows[i].items() if v != 0}
            if r:
                rows[i] = r
            else:
                del rows[i]
        return cls(nrows, ncols, rows, field, _trusted=True)

    @classmethod
    def from_dense(cls, data: Sequence[Sequence[object]], field: Field = QQ, ncols: int | None = None):
        nrows = len(data)
        if ncols is None:
            ncols = len(data[0]) if nrows else 0
        return cls.from_entries(nrows, ncols, ((i, j, v) for i, row in enumerate(data)
                                                for j, v in enumerate(row) if v != 0), field)

    @classmethod
    def zeros(cls, nrows, ncols, field: Field = QQ):
        return cls(nrows, ncols, None, field, _trusted=True)

    @classmethod
    def identity(cls, n, field: Field = QQ):
        return cls(n, n, {i: {i: 1} for i in range(n)}, field, _trusted=True)

    @classmethod
    def from_columns(cls, nrows: int, columns: Sequence[Mapping[int, object]], field: Field = QQ):
        rows: dict[int, dict[int, object]] = {}
        for j, col in enumerate(columns):
            for i, v in col.items():
                if v != 0:
                    rows.setdefault(i, {})[j] = v
        return cls(nrows, len(columns), rows, field, _trusted=True)

    # access -----------------------------------------------------------
    @property
    def shape(self):
        return (self.nrows, self.ncols)

    def row(self, i) -> dict:
        return dict(self._rows.get(i, {}))

    def row_items(self) -> Iterator[tuple[int, dict]]:
        for i in sorted(self._rows):
            yield i, self._rows[i]

    def __getitem__(self, ij):
        i, j = ij
        return self._rows.get(i, {}).get(j, 0)

    def entries(self) -> list[tuple[int, int, object]]:
        """Canonical (row, col) lexicographic list of nonzero entries."""
        return [(i, j, self._rows[i][j]) for i in sorted(self._rows) for j in sorted(self._rows[i])]

    def nnz(self) -> int:
        return sum(len(r) for r in self._rows.values())

    def columns(self) -> list[dict[int, object]]:
        cols: list[dict[int, object]] = [dict() for _ in range(self.ncols)]
        for i, r in self._rows.items():
            for j, v in r.items():
                cols[j][i] = v
        return cols

    def to_dense(self) -> list[list]:
        out = [[0] * self.ncols for _ in range(self.nrows)]
        for i, r in self._rows.items():
            for j, v in r.items():
                out[i][j] = v
        return out

    def is_zero(self) -> bool:
        return not self._rows

    # algebra ----------------------------------------------------------
    def _check_field(self, other):
        if self.field != other.field:
            raise ValueError(f"field mismatch: {self.field} vs {other.field}")

    def __eq__(self, other):
        if not isinstance(other, SparseMatrix):
            return NotImplemented
        return self.shape == other.shape and self.field == other.field and self._rows == other._rows

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.shape, tuple(self.entries())))
        return self._hash

    def __repr__(self):
        return f"SparseMatrix({self.nrows}x{self.ncols}, nnz={self.nnz()}, {self.field.name})"

    def transpose(self) -> "SparseMatrix":
        rows: dict[int, dict[int, object]] = {}
        for i, r in self._rows.items():
            for j, v in r.items():
                rows.setdefault(j, {})[i] = v
        return SparseMatrix(self.ncols, self.nrows, rows, self.field, _trusted=True)

    T = property(transpose)

    def _combine(self, other, sign):
        self._check_field(other)
        if self.shape != other.shape:
            raise DimensionMismatch(f"{self.shape} vs {other.shape}")
        f = self.field
        rows = {i: dict(r) for i, r in self._rows.items()}
        for i, r in other._rows.items():
            tgt = rows.setdefault(i, {})
            for j, v in r.items():
                w = f.normalize(tgt.get(j, 0) + sign * v)
                if w == 0:
                    tgt.pop(j, None)
                else:
                    tgt[j] = w
            if not tgt:
                del rows[i]
        return SparseMatrix(self.nrows, self.ncols, rows, f, _trusted=True)

    def __add__(self, other):
        return self._combine(other, 1)

    def __sub__(self, other):
        return self._combine(other, -1)

    def __neg__(self):
        return self.scale(-1)

    def scale(self, c) -> "SparseMatrix":
        f = self.field
        c = f(c)
        if c == 0:
            return SparseMatrix.zeros(self.nrows, self.ncols, f)
        rows = {i: {j: f.normalize(c * v) for j, v in r.items()} for i, r in self._rows.items()}
        return SparseMatrix(self.nrows, self.ncols, rows, f, _trusted=True)

    def __matmul__(self, other):
        if isinstance(other, SparseMatrix):
            return compose(self, other)
        return NotImplemented

    def apply(self, v: Mapping[int, object]) -> dict[int, object]:
        """Multiply by a sparse column vector ``{index: value}``."""
        f = self.field
        out = {}
        for i, r in self._rows.items():
            s = 0
            for j, x in r.items():
                y = v.get(j)
                if y is not None:
                    s += x * y
            s = f.normalize(s)
            if s != 0:
                out[i] = s
        return out

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "SparseMatrix":
        cmap = {c: k for k, c in enumerate(cols)}
        out = {}
        for k, i in enumerate(rows):
            r = self._rows.get(i)
            if not r:
                continue
            nr = {cmap[j]: v for j, v in r.items() if j in cmap}
            if nr:
                out[k] = nr
        return SparseMatrix(len(rows), len(cols), out, self.field, _trusted=True)


def compose(a: SparseMatrix, b: SparseMatrix) -> SparseMatrix:
    """Exact product ``a @ b``."""
    a._check_field(b)
    if a.ncols != b.nrows:
        raise DimensionMismatch(f"cannot compose {a.shape} with {b.shape}")
    f = a.field
    brows = b._rows
    rows = {}
    for i, r in a._rows.items():
        acc: dict[int, object] = {}
        for k, x in r.items():
            br = brows.get(k)
            if not br:
                continue
            for j, y in br.items():
                acc[j] = acc.get(j, 0) + x * y
        nr = {}
        for j, v in acc.items():
            v = f.normalize(v)
            if v != 0:
                nr[j] = v
        if nr:
            rows[i] = nr
    return SparseMatrix(a.nrows, b.ncols, rows, f, _trusted=True)


def hstack(mats: Sequence[SparseMatrix], nrows: int | None = None, field: Field | None = None) -> SparseMatrix:
    if not mats:
        return SparseMatrix.zeros(nrows or 0, 0, field or QQ)
    nrows = mats[0].nrows
    rows: dict[int, dict[int, object]] = {}
    off = 0
    for m in mats:
        if m.nrows != nrows:
            raise DimensionMismatch("hstack row mismatch")
        for i, r in m._rows.items():
            tgt = rows.setdefault(i, {})
            for j, v in r.items():
                tgt[j + off] = v
        off += m.ncols
    return SparseMatrix(nrows, off, rows, mats[0].field, _trusted=True)


def block(blocks: Sequence[Sequence[SparseMatrix | None]], row_dims: Sequence[int], col_dims: Sequence[int],
          field: Field = QQ) -> SparseMatrix:
    """Assemble a block matrix; ``None`` blocks are zero."""
    roff = [0]
    for d in row_dims:
        roff.append(roff[-1] + d)
    coff = [0]
    for d in col_dims:
        coff.append(coff[-1] + d)
    rows: dict[int, dict[int, object]] = {}
    for bi, brow in enumerate(blocks):
        for bj, m in enumerate(brow):
            if m is None:
                continue
            if m.shape != (row_dims[bi], col_dims[bj]):
                raise DimensionMismatch(f"block ({bi},{bj}) has shape {m.shape}, "
                                        f"expected {(row_dims[bi], col_dims[bj])}")
            f = field
            for i, r in m._rows.items():
                tgt = rows.setdefault(i + roff[bi], {})
                for j, v in r.items():
                    jj = j + coff[bj]
                    w = f.normalize(tgt.get(jj, 0) + v)
                    if w == 0:
                        tgt.pop(jj, None)
                    else:
                        tgt[jj] = w
    rows = {i: r for i, r in rows.items() if r}
    return SparseMatrix(roff[-1], coff[-1], rows, field, _trusted=True)


# ----------------------------------------------------------------------
# elimination


def _components(rows: Mapping[int, Mapping[int, object]]) -> list[list[int]]:
    """Group row indices into connected components of the row/column graph."""
    parent: dict = {}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for i, r in rows.items():
        ri = ("r", i)
        parent.setdefault(ri, ri)
        for j in r:
            cj = ("c", j)
            if cj not in parent:
                parent[cj] = cj
            a, b = find(ri), find(cj)
            if a != b:
                parent[b] = a
    groups: dict = {}
    for i in rows:
        groups.setdefault(find(("r", i)), []).append(i)
    return sorted((sorted(g) for g in groups.values()), key=lambda g: g[0])


def _eliminate(rows: Mapping[int, Mapping[int, object]], field: Field, avoid: int | None = None):
    """Sparse forward elimination.

    Returns ``(pivots, order)`` where ``pivots[col] = reduced row`` and
    ``order`` lists pivot columns in creation order.  A pivot row contains no
    pivot column created before it.  Column ``avoid`` (an augmented right-hand
    side) becomes a pivot only for rows with no other entry.
    """
    p = field.p
    colcount: dict[int, int] = {}
    for r in rows.values():
        for j in r:
            colcount[j] = colcount.get(j, 0) + 1
    pivots: dict[int, dict] = {}
    rank_of: dict[int, int] = {}
    order: list[int] = []
    for i in sorted(rows, key=lambda i: (len(rows[i]), i)):
        r = dict(rows[i])
        heap = [rank_of[j] for j in r if j in rank_of]
        heapq.heapify(heap)
        while heap:
            k = heapq.heappop(heap)
            c = order[k]
            a = r.get(c)
            if a is None:
                continue
            prow = pivots[c]
            pv = prow[c]
            if p is None:
                if pv == 1:
                    factor = a
                elif pv == -1:
                    factor = -a
                else:
                    factor = a / Fraction(pv)
                    if factor.denominator == 1:
                        factor = factor.numerator
                for j, v in prow.items():
                    w = r.get(j, 0) - factor * v
                    if w == 0:
                        r.pop(j, None)
                    else:
                        if isinstance(w, Fraction) and w.denominator == 1:
                            w = w.numerator
                        if j not in r and j in rank_of:
                            heapq.heappush(heap, rank_of[j])
                        r[j] = w
            else:
                factor = a * pow(pv, -1, p) % p
                for j, v in prow.items():
                    w = (r.get(j, 0) - factor * v) % p
                    if w == 0:
                        r.pop(j, None)
                    else:
                        if j not in r and j in rank_of:
                            heapq.heappush(heap, rank_of[j])
                        r[j] = w
        if not r:
            continue
        if p is None:
            c = min(r, key=lambda j: (j == avoid, colcount.get(j, 0), r[j] not in (1, -1), j))
        else:
            c = min(r, key=lambda j: (j == avoid, colcount.get(j, 0), j))
        rank_of[c] = len(order)
        order.append(c)
        pivots[c] = r
    return pivots, order


def rank(m: SparseMatrix) -> int:
    """Rank over ``m.field``."""
    rows = m._rows
    if not rows:
        return 0
    total = 0
    for comp in _components(rows):
        if len(comp) == 1:
            total += 1
            continue
        pivots, _ = _eliminate({i: rows[i] for i in comp}, m.field)
        total += len(pivots)
    return total


def _rref_pivots(rows: Mapping[int, Mapping[int, object]], field: Field, avoid: int | None = None):
    """Fully reduced echelon form: returns ``{pivot_col: row}`` with pivot entry 1
    and every other pivot column absent from every row."""
    pivots, order = _eliminate(rows, field, avoid)
    p = field.p
    # back-substitute in reverse creation order: later pivot rows never contain
    # earlier pivot columns, so clearing them from earlier rows terminates.
    for k in range(len(order) - 1, -1, -1):
        c = order[k]
        r = pivots[c]
        inv = field.inv(r[c])
        if inv != 1:
            r = {j: field.normalize(v * inv) for j, v in r.items()}
        pivots[c] = r
        for k2 in range(k):
            c2 = order[k2]
            r2 = pivots[c2]
            a = r2.get(c)
            if a is None:
                continue
            for j, v in r.items():
                w = r2.get(j, 0) - a * v
                w = w % p if p is not None else field.normalize(w)
                if w == 0:
                    r2.pop(j, None)
                else:
                    r2[j] = w
    return pivots


def kernel_matrix(m: SparseMatrix) -> SparseMatrix:
    """Matrix whose columns are a basis of ``ker m``.

    The basis is the standard one from the reduced echelon form: one vector
    per free column ``j`` (in increasing order) with a 1 in position ``j``.
    """
    f = m.field
    rows = m._rows
    pivots: dict[int, dict] = {}
    for comp in _components(rows):
        pivots.update(_rref_pivots({i: rows[i] for i in comp}, f))
    # free columns in order; for each pivot row r (pivot c): x_c = -sum_{free j} r[j] x_j
    by_free: dict[int, dict[int, object]] = {}
    for c, r in pivots.items():
        for j, v in r.items():
            if j != c:
                by_free.setdefault(j, {})[c] = f.neg(v)
    cols = []
    for j in range(m.ncols):
        if j in pivots:
            continue
        col = {j: 1}
        col.update(by_free.get(j, {}))
        cols.append(col)
    return SparseMatrix.from_columns(m.ncols, cols, f)


def kernel_basis(m: SparseMatrix) -> list[tuple]:
    """Kernel basis as dense tuples (``m.cols - rank(m)`` of them)."""
    k = kernel_matrix(m)
    return [tuple(col.get(i, 0) for i in range(m.ncols)) for col in k.columns()]


def image_rank_mod(vectors: SparseMatrix, subspace: SparseMatrix) -> int:
    """``dim (span(vectors) + span(subspace)) - dim span(subspace)``."""
    return rank(hstack([subspace, vectors])) - rank(subspace)


def in_span(vectors: SparseMatrix, subspace: SparseMatrix) -> bool:
    return image_rank_mod(vectors, subspace) == 0


def solve(a: SparseMatrix, b: Mapping[int, object]) -> dict[int, object] | None:
    """Some ``x`` with ``a x = b`` (sparse dict), or ``None`` if inconsistent."""
    f = a.field
    aug = {i: dict(r) for i, r in a._rows.items()}
    n = a.ncols
    for i, v in b.items():
        v = f(v)
        if v != 0:
            aug.setdefault(i, {})[n] = v
    pivots = _rref_pivots(aug, f, avoid=n)
    if n in pivots:
        return None
    return {c: r[n] for c, r in pivots.items() if n in r}


def rank_profile(vectors: SparseMatrix) -> list[int]:
    """Indices of the first maximal independent subset of columns, in order."""
    f = vectors.field
    cols = vectors.columns()
    pivots: dict[int, dict] = {}
    order: list[int] = []
    keep = []
    for idx, col in enumerate(cols):
        r = dict(col)
        for c in order:
            a = r.get(c)
            if a is None:
                continue
            prow = pivots[c]
            factor = f.normalize(a * f.inv(prow[c]))
            for j, v in prow.items():
                w = f.normalize(r.get(j, 0) - factor * v)
                if w == 0:
                    r.pop(j, None)
                else:
                    r[j] = w
        if r:
            c = min(r)
            pivots[c] = r
            order.append(c)
            keep.append(idx)
    return keep
