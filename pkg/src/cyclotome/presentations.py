"""Finite presentations of k-algebras, k-linear categories and dg categories.

A presentation is a list of named basis morphisms, each with a source and
target object and an integer (homological) degree, together with structure
constants for composition ``g∘f`` and, for dg categories, a differential of
degree -1.  An algebra is the one-object case; its product ``a·b`` is the
composition ``a∘b``.
"""

from __future__ import annotations

import itertools
import json
import random
from dataclasses import dataclass, field as dc_field
from math import comb
from typing import Iterable, Mapping, Sequence

from .linalg import QQ, Field, SparseMatrix, rank

ALGEBRA_OBJECT = "*"


class PresentationError(ValueError):
    def __init__(self, violations):
        if isinstance(violations, str):
            violations = [violations]
        self.violations = list(violations)
        super().__init__("; ".join(self.violations[:5]) + (" ..." if len(self.violations) > 5 else ""))


@dataclass(frozen=True)
class BasisMorphism:
    name: str
    src: str
    tgt: str
    degree: int = 0


Vector = dict  # {basis id: coefficient}


class CategoryPresentation:
    """Finite k-linear (dg) category given by structure constants.

    ``mult[(g, f)]`` is the list of ``(h, c)`` with ``g∘f = Σ c·h`` for basis
    ids ``f: X -> Y`` and ``g: Y -> Z``; missing pairs compose to zero.
    ``units[X]`` is the identity of ``X`` as a vector over ``Hom(X, X)``.
    ``diff[f]`` (optional) is the differential of ``f``.
    """

    def __init__(self, objects: Sequence[str], basis: Sequence[BasisMorphism],
                 mult: Mapping[tuple[int, int], Iterable[tuple[int, object]]],
                 units: Mapping[str, Mapping[int, object]],
                 diff: Mapping[int, Iterable[tuple[int, object]]] | None = None,
                 field: Field = QQ, name: str = "", meta: Mapping | None = None):
        self.field = field
        self.objects = tuple(objects)
        self.basis = tuple(basis)
        self.name = name
        self.meta = dict(meta or {})
        self.index = {b.name: i for i, b in enumerate(self.basis)}
        if len(self.index) != len(self.basis):
            raise PresentationError("duplicate basis names")
        objset = set(self.objects)
        for b in self.basis:
            if b.src not in objset or b.tgt not in objset:
                raise PresentationError(f"basis element {b.name} has unknown endpoint")
        self.hom: dict[tuple[str, str], tuple[int, ...]] = {}
        for i, b in enumerate(self.basis):
            self.hom.setdefault((b.src, b.tgt), ())
            self.hom[(b.src, b.tgt)] += (i,)
        self.mult: dict[tuple[int, int], tuple[tuple[int, object], ...]] = {}
        for key, terms in mult.items():
            t = tuple((h, field(c)) for h, c in terms if field(c) != 0)
            if t:
                self.mult[key] = t
        self.units = {x: {i: field(c) for i, c in units.get(x, {}).items() if field(c) != 0} for x in self.objects}
        self.diff: dict[int, tuple[tuple[int, object], ...]] = {}
        for key, terms in (diff or {}).items():
            t = tuple((h, field(c)) for h, c in terms if field(c) != 0)
            if t:
                self.diff[key] = t
        # composable partners, used by chain enumeration
        self.out_of: dict[str, tuple[int, ...]] = {x: () for x in self.objects}
        for i, b in enumerate(self.basis):
            self.out_of[b.src] += (i,)

    # basic access --------------------------------------------------------
    @property
    def is_dg(self) -> bool:
        return bool(self.diff) or any(b.degree for b in self.basis)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def hom_basis(self, x: str, y: str) -> tuple[int, ...]:
        return self.hom.get((x, y), ())

    def degree(self, i: int) -> int:
        return self.basis[i].degree

    def compose(self, g: int, f: int) -> tuple[tuple[int, object], ...]:
        """``g∘f`` as ``((h, c), ...)``."""
        return self.mult.get((g, f), ())

    def compose_vec(self, g: Mapping[int, object], f: Mapping[int, object]) -> Vector:
        out: Vector = {}
        fld = self.field
        for gi, gc in g.items():
            for fi, fc in f.items():
                for h, c in self.mult.get((gi, fi), ()):
                    out[h] = fld.normalize(out.get(h, 0) + gc * fc * c)
        return {k: v for k, v in out.items() if v != 0}

    def d_vec(self, v: Mapping[int, object]) -> Vector:
        out: Vector = {}
        fld = self.field
        for i, c in v.items():
            for h, e in self.diff.get(i, ()):
                out[h] = fld.normalize(out.get(h, 0) + c * e)
        return {k: w for k, w in out.items() if w != 0}

    def unit_of(self, x: str) -> Vector:
        return dict(self.units[x])

    def basis_name(self, i: int) -> str:
        return self.basis[i].name

    def __repr__(self):
        kind = "dg category" if self.is_dg else "category"
        return f"<{kind} {self.name or ''} objects={len(self.objects)} dim={self.dim} over {self.field.name}>"

    # conversions ---------------------------------------------------------
    def with_field(self, field: Field) -> "CategoryPresentation":
        cls = type(self)
        return cls(self.objects, self.basis, self.mult, self.units, self.diff, field, self.name, self.meta)

    def full_subcategory(self, objects: Sequence[str]) -> "CategoryPresentation":
        keep = [o for o in self.objects if o in set(objects)]
        ids = [i for i, b in enumerate(self.basis) if b.src in keep and b.tgt in keep]
        pos = {i: k for k, i in enumerate(ids)}
        mult = {(pos[g], pos[f]): [(pos[h], c) for h, c in t]
                for (g, f), t in self.mult.items() if g in pos and f in pos}
        units = {x: {pos[i]: c for i, c in self.units[x].items()} for x in keep}
        diff = {pos[i]: [(pos[h], c) for h, c in t] for i, t in self.diff.items() if i in pos}
        return CategoryPresentation(keep, [self.basis[i] for i in ids], mult, units, diff, self.field,
                                    f"{self.name}|{','.join(keep)}", {})

    def hom_differential(self, x: str, y: str) -> SparseMatrix:
        ids = self.hom_basis(x, y)
        pos = {i: k for k, i in enumerate(ids)}
        ent = [(pos[h], pos[i], c) for i in ids for h, c in self.diff.get(i, ())]
        return SparseMatrix.from_entries(len(ids), len(ids), ent, self.field)

    # serialization -------------------------------------------------------
    def to_json(self) -> dict:
        """JSON document with objects and basis names in lexicographic order."""
        name = self.basis_name

        def vec(terms):
            return sorted([[_num(c), name(h)] for h, c in terms], key=lambda t: t[1])

        doc = {
            "field": self.field.to_json(),
            "objects": sorted(self.objects),
            "homs": [{"src": x, "dst": y, "basis": sorted(name(i) for i in ids)}
                     for (x, y), ids in sorted(self.hom.items())],
            "compositions": sorted(({"g": name(g), "f": name(f), "result": vec(t)}
                                    for (g, f), t in self.mult.items()), key=lambda r: (r["g"], r["f"])),
            "identities": {x: vec(self.units[x].items()) for x in sorted(self.objects)},
        }
        if any(b.degree for b in self.basis):
            doc["degrees"] = {b.name: b.degree for b in sorted(self.basis, key=lambda b: b.name)}
        if self.diff:
            doc["differentials"] = {name(i): vec(t) for i, t in sorted(self.diff.items(), key=lambda kv: name(kv[0]))}
        if self.name:
            doc["name"] = self.name
        return doc

    @classmethod
    def from_json(cls, doc: Mapping) -> "CategoryPresentation":
        field = Field.parse(doc.get("field", "Q"))
        objects = list(doc["objects"])
        degrees = doc.get("degrees", {}) or {}
        basis = []
        for h in doc.get("homs", []):
            for nm in h["basis"]:
                basis.append(BasisMorphism(nm, h["src"], h["dst"], int(degrees.get(nm, 0))))
        index = {b.name: i for i, b in enumerate(basis)}

        def lookup(nm):
            if nm not in index:
                raise PresentationError(f"unknown basis name {nm!r}")
            return index[nm]

        def terms(lst):
            return [(lookup(nm), field(c)) for c, nm in lst]

        mult = {}
        for r in doc.get("compositions", []):
            key = (lookup(r["g"]), lookup(r["f"]))
            mult[key] = mult.get(key, []) + terms(r["result"])
        units = {x: dict(terms(v)) for x, v in (doc.get("identities") or {}).items()}
        diff = {lookup(nm): terms(v) for nm, v in (doc.get("differentials") or {}).items()}
        out = cls(objects, basis, mult, units, diff, field, doc.get("name", ""), doc.get("meta", {}))
        if len(objects) == 1 and cls is CategoryPresentation:
            return AlgebraPresentation.from_category(out)
        return out

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, sort_keys=True)


def _num(c):
    from fractions import Fraction
    c = Fraction(c)
    return c.numerator if c.denominator == 1 else str(c)


DgCategoryPresentation = CategoryPresentation


class AlgebraPresentation(CategoryPresentation):
    """One-object presentation; ``mult[(a, b)]`` is the product ``a·b``."""

    def __init__(self, *args, **kw):
        super().__init__(*args, **kw)
        if len(self.objects) != 1:
            raise PresentationError("an algebra has exactly one object")

    @property
    def obj(self) -> str:
        return self.objects[0]

    @property
    def unit(self) -> Vector:
        return self.unit_of(self.obj)

    @classmethod
    def from_category(cls, c: CategoryPresentation) -> "AlgebraPresentation":
        return cls(c.objects, c.basis, c.mult, c.units, c.diff, c.field, c.name, c.meta)

    @classmethod
    def from_table(cls, names: Sequence[str], table: Mapping[tuple[str, str], Mapping[str, object]],
                   unit: Mapping[str, object], field: Field = QQ, name: str = "",
                   degrees: Mapping[str, int] | None = None,
                   diff: Mapping[str, Mapping[str, object]] | None = None, meta=None):
        """Build from ``table[(a, b)] = {c: coeff}`` meaning ``a·b = Σ coeff·c``."""
        degrees = degrees or {}
        basis = [BasisMorphism(n, ALGEBRA_OBJECT, ALGEBRA_OBJECT, degrees.get(n, 0)) for n in names]
        idx = {n: i for i, n in enumerate(names)}
        mult = {(idx[a], idx[b]): [(idx[c], v) for c, v in res.items()] for (a, b), res in table.items()}
        units = {ALGEBRA_OBJECT: {idx[n]: v for n, v in unit.items()}}
        d = {idx[a]: [(idx[c], v) for c, v in res.items()] for a, res in (diff or {}).items()}
        return cls([ALGEBRA_OBJECT], basis, mult, units, d, field, name, meta)


# ----------------------------------------------------------------------
# validation


def validate(p: CategoryPresentation) -> list[str]:
    """All violated axioms, each naming the failing pair or triple."""
    out: list[str] = []
    fld = p.field
    nm = p.basis_name
    B = range(p.dim)
    for (g, f), terms in p.mult.items():
        bg, bf = p.basis[g], p.basis[f]
        if bf.tgt != bg.src:
            out.append(f"composition of non-composable pair ({nm(g)}, {nm(f)})")
            continue
        for h, _ in terms:
            bh = p.basis[h]
            if (bh.src, bh.tgt) != (bf.src, bg.tgt):
                out.append(f"{nm(g)}∘{nm(f)} has a term {nm(h)} in the wrong hom space")
            if bh.degree != bg.degree + bf.degree:
                out.append(f"{nm(g)}∘{nm(f)} does not preserve degree (term {nm(h)})")
    for x in p.objects:
        for i in p.units[x]:
            b = p.basis[i]
            if (b.src, b.tgt) != (x, x) or b.degree != 0:
                out.append(f"identity of {x} has a term {nm(i)} outside Hom({x},{x})_0")
    # unit laws
    for f in B:
        bf = p.basis[f]
        left = p.compose_vec(p.units[bf.tgt], {f: 1})
        right = p.compose_vec({f: 1}, p.units[bf.src])
        if left != {f: 1}:
            out.append(f"unit law fails: id_{bf.tgt}∘{nm(f)} != {nm(f)}")
        if right != {f: 1}:
            out.append(f"unit law fails: {nm(f)}∘id_{bf.src} != {nm(f)}")
    # associativity on all composable basis triples
    for f in B:
        bf = p.basis[f]
        for g in p.out_of[bf.tgt]:
            gf = p.compose_vec({g: 1}, {f: 1})
            for h in p.out_of[p.basis[g].tgt]:
                lhs = p.compose_vec(p.compose_vec({h: 1}, {g: 1}), {f: 1})
                rhs = p.compose_vec({h: 1}, gf)
                if lhs != rhs:
                    out.append(f"associativity fails on ({nm(h)}, {nm(g)}, {nm(f)})")
    # dg axioms
    if p.diff:
        for i, terms in p.diff.items():
            bi = p.basis[i]
            for h, _ in terms:
                bh = p.basis[h]
                if (bh.src, bh.tgt) != (bi.src, bi.tgt) or bh.degree != bi.degree - 1:
                    out.append(f"d({nm(i)}) has term {nm(h)} of wrong hom space or degree")
        for i in B:
            if p.d_vec(p.d_vec({i: 1})):
                out.append(f"d^2 != 0 on {nm(i)}")
        for x in p.objects:
            if p.d_vec(p.units[x]):
                out.append(f"identity of {x} is not a cycle")
        for f in B:
            bf = p.basis[f]
            for g in p.out_of[bf.tgt]:
                lhs = p.d_vec(p.compose_vec({g: 1}, {f: 1}))
                a = p.compose_vec(p.d_vec({g: 1}), {f: 1})
                s = -1 if p.basis[g].degree % 2 else 1
                b = p.compose_vec({g: 1}, p.d_vec({f: 1}))
                rhs = dict(a)
                for k, v in b.items():
                    rhs[k] = fld.normalize(rhs.get(k, 0) + s * v)
                rhs = {k: v for k, v in rhs.items() if v != 0}
                if lhs != rhs:
                    out.append(f"Leibniz rule fails on ({nm(g)}, {nm(f)})")
    return out


def require_valid(p: CategoryPresentation) -> CategoryPresentation:
    bad = validate(p)
    if bad:
        raise PresentationError(bad)
    return p


# ----------------------------------------------------------------------
# constructions


def algebra_as_category(a: AlgebraPresentation) -> CategoryPresentation:
    require_valid(a)
    return CategoryPresentation(a.objects, a.basis, a.mult, a.units, a.diff, a.field, a.name, a.meta)


def matrix_subcategory(a: AlgebraPresentation, sizes: Sequence[int]) -> CategoryPresentation:
    """Full subcategory ``{A^{n_1}, ..., A^{n_m}}`` of free modules.

    ``Hom(A^m, A^n)`` is ``n x m`` matrices over ``A`` with basis
    ``(row, col, algebra basis)``; composition is the matrix product.
    """
    if not sizes:
        raise PresentationError("sizes must be nonempty")
    if any(s < 1 for s in sizes):
        raise PresentationError("sizes must be positive")
    objs = [f"F{i}:{s}" for i, s in enumerate(sizes)]
    basis = []
    idx = {}
    for xi, m in zip(objs, sizes):
        for yi, n in zip(objs, sizes):
            for r in range(n):
                for c in range(m):
                    for ai, b in enumerate(a.basis):
                        idx[(xi, yi, r, c, ai)] = len(basis)
                        basis.append(BasisMorphism(f"{xi}>{yi}[{r},{c}]{b.name}", xi, yi, b.degree))
    mult = {}
    size = dict(zip(objs, sizes))
    for x in objs:
        for y in objs:
            for z in objs:
                for r in range(size[z]):
                    for k in range(size[y]):
                        for c in range(size[x]):
                            for (ga, fa), terms in a.mult.items():
                                g = idx[(y, z, r, k, ga)]
                                f = idx[(x, y, k, c, fa)]
                                mult[(g, f)] = [(idx[(x, z, r, c, h)], v) for h, v in terms]
    units = {x: {idx[(x, x, r, r, i)]: v for r in range(size[x]) for i, v in a.unit.items()} for x in objs}
    diff = {}
    for (x, y, r, c, ai), i in idx.items():
        if ai in a.diff:
            diff[i] = [(idx[(x, y, r, c, h)], v) for h, v in a.diff[ai]]
    return CategoryPresentation(objs, basis, mult, units, diff, a.field,
                                f"{a.name}^{list(sizes)}", {})


# ----------------------------------------------------------------------
# zoo


def _path_algebra(vertices: Sequence[str], paths: Sequence[tuple[str, str, str]], product, field: Field,
                  name: str, extra_meta=None) -> AlgebraPresentation:
    """``paths`` = (name, src_vertex, tgt_vertex) including trivial paths named by
    their vertex; ``product(q, p)`` returns the name of ``q∘p`` (or None)."""
    names = [p[0] for p in paths]
    ends = {p[0]: (p[1], p[2]) for p in paths}
    table = {}
    for q in names:
        for p in names:
            if ends[p][1] != ends[q][0]:
                continue
            r = product(q, p)
            if r is not None:
                table[(q, p)] = {r: 1}
    meta = {"vertices": list(vertices), "endpoints": {n: list(e) for n, e in ends.items()}}
    meta.update(extra_meta or {})
    return AlgebraPresentation.from_table(names, table, {v: 1 for v in vertices}, field, name, meta=meta)


def zoo_field(field: Field = QQ) -> AlgebraPresentation:
    return AlgebraPresentation.from_table(["1"], {("1", "1"): {"1": 1}}, {"1": 1}, field, "k",
                                          meta={"vertices": ["1"], "endpoints": {"1": ["1", "1"]}})


def zoo_product(n: int = 2, field: Field = QQ) -> AlgebraPresentation:
    if n < 1:
        raise PresentationError("product needs n >= 1")
    vs = [f"e{i + 1}" for i in range(n)]
    return _path_algebra(vs, [(v, v, v) for v in vs], lambda q, p: q if q == p else None, field, f"k^{n}")


def zoo_truncated_poly(m: int = 2, field: Field = QQ) -> AlgebraPresentation:
    """``k[x]/(x^m)`` with basis ``1, x, ..., x^{m-1}``."""
    if m < 1:
        raise PresentationError("truncated polynomial needs m >= 1")
    names = ["1"] + [f"x{i}" if i > 1 else "x" for i in range(1, m)]
    table = {}
    for i in range(m):
        for j in range(m):
            if i + j < m:
                table[(names[i], names[j])] = {names[i + j]: 1}
    meta = {"vertices": ["1"], "endpoints": {n: ["1", "1"] for n in names}}
    return AlgebraPresentation.from_table(names, table, {"1": 1}, field,
                                          "dual_numbers" if m == 2 else f"k[x]/(x^{m})", meta=meta)


def zoo_dual_numbers(field: Field = QQ) -> AlgebraPresentation:
    return zoo_truncated_poly(2, field)


def zoo_upper_triangular(n: int = 2, field: Field = QQ) -> AlgebraPresentation:
    """``T_n(k)`` as the path algebra of the linear quiver ``1 -> 2 -> ... -> n``.

    The path from ``i`` to ``j`` is the matrix unit ``E_ji``; composition of
    paths is the matrix product, so this is the lower triangular matrix
    algebra, isomorphic to the upper triangular one via transpose.
    """
    if n < 1:
        raise PresentationError("T_n needs n >= 1")
    vs = [f"e{i}" for i in range(1, n + 1)]
    paths = [(f"e{i}", f"e{i}", f"e{i}") for i in range(1, n + 1)]
    paths += [(f"p{i}{j}", f"e{i}", f"e{j}") for i in range(1, n + 1) for j in range(i + 1, n + 1)]
    ends = {p[0]: (int(p[1][1:]), int(p[2][1:])) for p in paths}
    rev = {v: k for k, v in ends.items()}

    def product(q, p):
        (i, _), (_, l) = ends[p], ends[q]
        return rev.get((i, l))

    return _path_algebra(vs, paths, product, field, f"T_{n}", {"quiver": "A_n"})


def zoo_kronecker(field: Field = QQ) -> AlgebraPresentation:
    """Kronecker quiver ``1 ⇉ 2`` (arrows ``a``, ``b``); dim 4."""
    paths = [("e1", "e1", "e1"), ("e2", "e2", "e2"), ("a", "e1", "e2"), ("b", "e1", "e2")]
    ends = {p[0]: (p[1], p[2]) for p in paths}

    def product(q, p):
        if ends[q][0] == ends[q][1]:
            return p
        if ends[p][0] == ends[p][1]:
            return q
        return None

    return _path_algebra(["e1", "e2"], paths, product, field, "kronecker", {"quiver": "kronecker"})


def _monomials(nvars: int, deg: int):
    return [e for e in itertools.product(range(deg + 1), repeat=nvars) if sum(e) == deg][::-1]


def zoo_beilinson(d: int = 1, field: Field = QQ, allow_large: bool = False) -> AlgebraPresentation:
    """Endomorphism algebra of ``O ⊕ O(1) ⊕ ... ⊕ O(d)`` on ``P^d``.

    ``Hom(i, j)`` for ``i <= j`` is the space of degree ``j - i`` monomials in
    ``d + 1`` variables; composition multiplies monomials.
    """
    if d < 1:
        raise PresentationError("Beilinson algebra needs d >= 1")
    if d > 2 and not allow_large:
        raise PresentationError("Beilinson algebra limited to d <= 2 (pass allow_large)")
    vs = [f"e{i}" for i in range(d + 1)]
    paths = []
    key = {}
    for i in range(d + 1):
        for j in range(i, d + 1):
            for mono in _monomials(d + 1, j - i):
                nm = f"e{i}" if i == j else f"m{i}{j}_" + "".join(map(str, mono))
                paths.append((nm, f"e{i}", f"e{j}"))
                key[nm] = (i, j, mono)
    rev = {v: k for k, v in key.items()}

    def product(q, p):
        (i, _, m1), (_, l, m2) = key[p], key[q]
        return rev.get((i, l, tuple(x + y for x, y in zip(m1, m2))))

    a = _path_algebra(vs, paths, product, field, f"beilinson_P{d}", {"quiver": "beilinson"})
    assert a.dim == sum(comb(j - i + d, d) for i in range(d + 1) for j in range(i, d + 1))
    return a


def zoo_quiver(vertices: Sequence[str], arrows: Sequence[tuple[str, str, str]],
               relations: Sequence[Sequence[str]] = (), field: Field = QQ, name: str = "quiver",
               max_length: int = 8) -> AlgebraPresentation:
    """Path algebra of an acyclic quiver modulo monomial relations.

    ``arrows`` are ``(name, src, tgt)``; a relation is a path given as the
    list of arrow names in traversal order.
    """
    vset = list(vertices)
    amap = {a: (s, t) for a, s, t in arrows}
    for a, (s, t) in amap.items():
        if s not in vset or t not in vset:
            raise PresentationError(f"arrow {a} has unknown endpoint")
    rels = [tuple(r) for r in relations]
    for r in rels:
        for a in r:
            if a not in amap:
                raise PresentationError(f"relation uses unknown arrow {a}")

    def killed(path):
        for r in rels:
            n = len(r)
            for s in range(len(path) - n + 1):
                if tuple(path[s:s + n]) == r:
                    return True
        return False

    paths = [(v, v, v) for v in vset]
    seqs = {v: () for v in vset}
    frontier = [(a,) for a in amap]
    length = 1
    while frontier:
        if length > max_length:
            raise PresentationError("quiver has a cycle or paths longer than max_length")
        nxt = []
        for p in frontier:
            if killed(p):
                continue
            nm = ".".join(p)
            paths.append((nm, amap[p[0]][0], amap[p[-1]][1]))
            seqs[nm] = p
            for a, (s, _) in amap.items():
                if s == amap[p[-1]][1]:
                    nxt.append(p + (a,))
        frontier = nxt
        length += 1
    rev = {v: k for k, v in seqs.items() if v}

    def product(q, p):
        if seqs[p] == ():
            return q
        if seqs[q] == ():
            return p
        return rev.get(seqs[p] + seqs[q])

    return _path_algebra(vset, paths, product, field, name, {"quiver": "user"})


ZOO = {
    "k": lambda field=QQ, **kw: zoo_field(field),
    "product": lambda field=QQ, n=2, **kw: zoo_product(int(n), field),
    "dual_numbers": lambda field=QQ, **kw: zoo_dual_numbers(field),
    "truncated_poly": lambda field=QQ, m=3, **kw: zoo_truncated_poly(int(m), field),
    "upper_triangular": lambda field=QQ, n=2, **kw: zoo_upper_triangular(int(n), field),
    "kronecker": lambda field=QQ, **kw: zoo_kronecker(field),
    "beilinson": lambda field=QQ, d=1, **kw: zoo_beilinson(int(d), field),
}

ZOO_ALIASES = {"T2": ("upper_triangular", {"n": 2}), "T3": ("upper_triangular", {"n": 3}),
               "k2": ("product", {"n": 2}), "k3": ("product", {"n": 3}),
               "P1": ("beilinson", {"d": 1}), "P2": ("beilinson", {"d": 2})}


def zoo(name: str, field: Field = QQ, **params) -> AlgebraPresentation:
    """Validated zoo algebra by name (see ``ZOO`` and ``ZOO_ALIASES``)."""
    if name in ZOO_ALIASES:
        base, extra = ZOO_ALIASES[name]
        params = {**extra, **params}
        name = base
    if name == "quiver":
        a = zoo_quiver(field=field, **params)
    elif name in ZOO:
        try:
            a = ZOO[name](field=field, **params)
        except (TypeError, ValueError) as e:
            if isinstance(e, PresentationError):
                raise
            raise PresentationError(f"invalid parameters for {name}: {e}") from e
    else:
        raise PresentationError(f"unknown zoo algebra {name!r}")
    return require_valid(a)


# the algebras of dimension <= 4 used by the property suites
SMALL_ZOO = [("k", {}), ("product", {"n": 2}), ("product", {"n": 3}), ("dual_numbers", {}),
             ("truncated_poly", {"m": 3}), ("upper_triangular", {"n": 2}), ("kronecker", {}),
             ("truncated_poly", {"m": 4})]


def small_zoo(field: Field = QQ, max_dim: int = 4) -> list[AlgebraPresentation]:
    return [a for a in (zoo(n, field, **p) for n, p in SMALL_ZOO) if a.dim <= max_dim]


# ----------------------------------------------------------------------
# semisimple quotient


def semisimple_quotient(a: AlgebraPresentation) -> tuple[AlgebraPresentation, SparseMatrix]:
    """``E = span`` of the vertex idempotents and the inclusion ``E -> A``.

    Requires the quiver metadata recorded by the zoo builders and checks that
    the complement of the vertices spans a nilpotent two-sided ideal
    (the radical), so that ``E ≅ A/r``.
    """
    verts = a.meta.get("vertices")
    if not verts:
        raise PresentationError(f"{a.name or 'algebra'} is not of quiver type")
    vids = [a.index[v] for v in verts]
    vset = set(vids)
    rad = [i for i in range(a.dim) if i not in vset]
    # idempotents: orthogonal, summing to 1
    for i in vids:
        for j in vids:
            want = {i: 1} if i == j else {}
            if a.compose_vec({i: 1}, {j: 1}) != want:
                raise PresentationError("vertex elements are not orthogonal idempotents")
    if a.unit != {i: 1 for i in vids}:
        raise PresentationError("vertex idempotents do not sum to the unit")
    # radical: two-sided ideal and nilpotent
    radset = set(rad)
    for r in rad:
        for x in range(a.dim):
            for v in (a.compose_vec({r: 1}, {x: 1}), a.compose_vec({x: 1}, {r: 1})):
                if set(v) - radset:
                    raise PresentationError("arrow span is not an ideal")
    power = {r: 1 for r in rad}
    layer = [{r: 1} for r in rad]
    for _ in range(a.dim + 1):
        if not layer:
            break
        nxt = []
        for v in layer:
            for r in rad:
                w = a.compose_vec(v, {r: 1})
                if w:
                    nxt.append(w)
        layer = nxt
    if layer:
        raise PresentationError("radical is not nilpotent")
    del power
    names = [a.basis_name(i) for i in vids]
    e = AlgebraPresentation.from_table(names, {(n, n): {n: 1} for n in names}, {n: 1 for n in names},
                                       a.field, f"{a.name}/r",
                                       meta={"vertices": names, "endpoints": {n: [n, n] for n in names}})
    inc = SparseMatrix.from_entries(a.dim, len(vids), [(i, k, 1) for k, i in enumerate(vids)], a.field)
    return require_valid(e), inc


def vertex_category(a: AlgebraPresentation) -> CategoryPresentation:
    """The quiver algebra ``a`` as a category with one object per vertex.

    ``Hom(i, j)`` is spanned by the paths from ``i`` to ``j``.  The algebra is
    the sum of all hom spaces of this category, so the two are Morita
    equivalent and have the same Hochschild and cyclic invariants; chains of
    the category only run over composable loops, which keeps acyclic quivers
    cheap.
    """
    verts = a.meta.get("vertices")
    ends = a.meta.get("endpoints")
    if not verts or not ends:
        raise PresentationError(f"{a.name or 'algebra'} is not of quiver type")
    basis = [BasisMorphism(b.name, ends[b.name][0], ends[b.name][1], b.degree) for b in a.basis]
    units = {v: {a.index[v]: 1} for v in verts}
    c = CategoryPresentation(verts, basis, dict(a.mult), units, dict(a.diff), a.field,
                             f"{a.name} (vertices)", dict(a.meta))
    return require_valid(c)


def split_idempotents(c: CategoryPresentation) -> CategoryPresentation:
    """Split each identity along the basis idempotents it is the sum of.

    Requires ``id_X = e_1 + ... + e_r`` with each ``e_i`` a basis element,
    the ``e_i`` orthogonal idempotents, and every basis morphism ``b`` lying in
    a single ``e' Hom(X, Y) e``.  The result has one object per ``(X, e_i)``
    and the same basis and structure constants; it is Morita equivalent to
    ``c`` (its additive idempotent completion is the same), and its chains
    only run over composable loops of the finer objects.
    """
    idem: dict[str, list[int]] = {}
    for x in c.objects:
        u = c.units[x]
        if any(v != 1 for v in u.values()):
            raise PresentationError(f"identity of {x} is not a sum of basis elements")
        ids = sorted(u)
        for i in ids:
            for j in ids:
                want = {i: 1} if i == j else {}
                if c.compose_vec({i: 1}, {j: 1}) != want:
                    raise PresentationError(f"identity of {x} is not a sum of orthogonal idempotents")
        idem[x] = ids
    label = {i: f"{x}#{c.basis_name(i)}" for x, ids in idem.items() for i in ids}
    basis = []
    for k, b in enumerate(c.basis):
        src = [e for e in idem[b.src] if c.compose_vec({k: 1}, {e: 1}) == {k: 1}]
        tgt = [e for e in idem[b.tgt] if c.compose_vec({e: 1}, {k: 1}) == {k: 1}]
        if len(src) != 1 or len(tgt) != 1:
            raise PresentationError(f"basis element {b.name} is not homogeneous for the idempotents")
        basis.append(BasisMorphism(b.name, label[src[0]], label[tgt[0]], b.degree))
    objects = [label[i] for x in c.objects for i in idem[x]]
    units = {label[i]: {i: 1} for x in c.objects for i in idem[x]}
    out = CategoryPresentation(objects, basis, dict(c.mult), units, dict(c.diff), c.field,
                               f"{c.name} (split)", dict(c.meta))
    return require_valid(out)


# ----------------------------------------------------------------------
# functors


@dataclass
class Functor:
    """Object map plus matrices ``homs[(X, Y)]`` from ``Hom(X,Y)`` to ``Hom(FX,FY)``
    in the presentations' basis orders."""

    source: CategoryPresentation
    target: CategoryPresentation
    objects: dict[str, str]
    homs: dict[tuple[str, str], SparseMatrix]

    def image(self, i: int) -> Vector:
        b = self.source.basis[i]
        m = self.homs.get((b.src, b.tgt))
        k = self.source.hom_basis(b.src, b.tgt).index(i)
        tgt_ids = self.target.hom_basis(self.objects[b.src], self.objects[b.tgt])
        if m is None:
            return {}
        return {tgt_ids[r]: v for r, v in m.columns()[k].items()}

    def violations(self) -> list[str]:
        s, t = self.source, self.target
        out = []
        for x in s.objects:
            if x not in self.objects or self.objects[x] not in t.objects:
                out.append(f"object {x} has no image")
        if out:
            return out
        for (x, y), ids in s.hom.items():
            m = self.homs.get((x, y))
            shape = (len(t.hom_basis(self.objects[x], self.objects[y])), len(ids))
            if m is not None and m.shape != shape:
                out.append(f"hom matrix for {(x, y)} has shape {m.shape}, expected {shape}")
        if out:
            return out

        def img(v):
            o = {}
            for i, c in v.items():
                for h, e in self.image(i).items():
                    o[h] = t.field.normalize(o.get(h, 0) + c * e)
            return {k: w for k, w in o.items() if w != 0}

        for x in s.objects:
            if img(s.units[x]) != t.units[self.objects[x]]:
                out.append(f"F(id_{x}) != id_F({x})")
        for f in range(s.dim):
            for g in s.out_of[s.basis[f].tgt]:
                if img(s.compose_vec({g: 1}, {f: 1})) != t.compose_vec(img({g: 1}), img({f: 1})):
                    out.append(f"F does not preserve {s.basis_name(g)}∘{s.basis_name(f)}")
        for f in range(s.dim):
            for h in self.image(f):
                if t.basis[h].degree != s.basis[f].degree:
                    out.append(f"F does not preserve the degree of {s.basis_name(f)}")
            if img(s.d_vec({f: 1})) != t.d_vec(img({f: 1})):
                out.append(f"F does not commute with d on {s.basis_name(f)}")
        return out

    @classmethod
    def identity(cls, c: CategoryPresentation):
        return cls(c, c, {x: x for x in c.objects},
                   {k: SparseMatrix.identity(len(v), c.field) for k, v in c.hom.items()})

    @classmethod
    def from_algebra_map(cls, source: AlgebraPresentation, target: AlgebraPresentation, m: SparseMatrix):
        return cls(source, target, {source.obj: target.obj}, {(source.obj, source.obj): m})

    def then(self, other: "Functor") -> "Functor":
        """``other ∘ self``."""
        from .linalg import compose
        homs = {}
        for (x, y), m in self.homs.items():
            fx, fy = self.objects[x], self.objects[y]
            if (fx, fy) in other.homs:
                homs[(x, y)] = compose(other.homs[(fx, fy)], m)
        return Functor(self.source, other.target, {x: other.objects[self.objects[x]] for x in self.objects}, homs)


def inclusion_functor(sub: CategoryPresentation, ambient: CategoryPresentation) -> Functor:
    """Inclusion of a full subcategory built by :meth:`full_subcategory` (basis names shared)."""
    homs = {}
    for (x, y), ids in sub.hom.items():
        tids = ambient.hom_basis(x, y)
        pos = {ambient.basis_name(i): k for k, i in enumerate(tids)}
        homs[(x, y)] = SparseMatrix.from_entries(len(tids), len(ids),
                                                 [(pos[sub.basis_name(i)], k, 1) for k, i in enumerate(ids)],
                                                 ambient.field)
    return Functor(sub, ambient, {x: x for x in sub.objects}, homs)


# ----------------------------------------------------------------------
# localization pairs


@dataclass
class LocalizationPairPresentation:
    ambient: CategoryPresentation
    sub_objects: tuple[str, ...]

    def violations(self) -> list[str]:
        out = [f"ambient: {v}" for v in validate(self.ambient)]
        for x in self.sub_objects:
            if x not in self.ambient.objects:
                out.append(f"sub-object {x} not in ambient category")
        return out

    def sub(self) -> CategoryPresentation:
        return self.ambient.full_subcategory(self.sub_objects)


# ----------------------------------------------------------------------
# random dg categories


def random_dg_category(seed: int, max_objects: int = 3, max_hom: int = 3, degree_bound: int = 2,
                       field: Field = QQ) -> CategoryPresentation:
    """Seeded random dg category with radical cube zero.

    Non-identity morphisms split into length-one generators ``N1`` (random
    graded spaces with a random square-zero differential) and length-two
    products ``N2``, defined as the tensor complex ``N1 ⊗ N1`` modulo a random
    subcomplex.  All triple products vanish, so associativity holds, and the
    differential on ``N2`` is induced from the tensor differential, so the
    Leibniz rule holds.  Degrees lie in ``[-degree_bound, degree_bound]`` and
    every hom space has dimension at most ``max_hom``.
    """
    rng = random.Random(seed)
    nobj = rng.randint(1, max_objects)
    objs = [f"X{i}" for i in range(nobj)]
    # generators in N1(X, Y)
    gens: list[tuple[str, str, int]] = []
    room = {(x, y): max_hom - (1 if x == y else 0) for x in objs for y in objs}
    for x in objs:
        for y in objs:
            k = rng.randint(0, min(2, room[(x, y)]))
            for _ in range(k):
                gens.append((x, y, rng.randint(-degree_bound, degree_bound)))
            room[(x, y)] -= k
    ng = len(gens)
    # square-zero differential on each N1(X,Y): pair up generators of adjacent degrees
    d1: dict[int, list[tuple[int, object]]] = {}
    for x in objs:
        for y in objs:
            ids = [i for i, g in enumerate(gens) if g[0] == x and g[1] == y]
            used = set()
            for i in ids:
                for j in ids:
                    if i in used or j in used or i == j:
                        continue
                    if gens[j][2] == gens[i][2] - 1 and rng.random() < 0.7:
                        d1[i] = [(j, rng.choice([1, -1, 2]))]
                        used.update((i, j))
    # tensor complex N1(Y,Z) ⊗ N1(X,Y) for each (X, Z)
    tensors: dict[tuple[str, str], list[tuple[int, int]]] = {}
    for g in range(ng):
        for f in range(ng):
            if gens[f][1] == gens[g][0]:
                tensors.setdefault((gens[f][0], gens[g][1]), []).append((g, f))
    basis: list[BasisMorphism] = []
    for x in objs:
        basis.append(BasisMorphism(f"id_{x}", x, x, 0))
    gen_id = {}
    for i, (x, y, deg) in enumerate(gens):
        gen_id[i] = len(basis)
        basis.append(BasisMorphism(f"g{i}", x, y, deg))
    mult: dict[tuple[int, int], list[tuple[int, object]]] = {}
    diff: dict[int, list[tuple[int, object]]] = {gen_id[i]: [(gen_id[j], c) for j, c in t] for i, t in d1.items()}

    def dgen(i):
        return {j: c for j, c in d1.get(i, [])}

    for (x, z), pairs in sorted(tensors.items()):
        budget = room[(x, z)]
        pos = {p: k for k, p in enumerate(pairs)}
        deg = [gens[g][2] + gens[f][2] for g, f in pairs]
        # tensor differential D(g⊗f) = dg⊗f + (-1)^{|g|} g⊗df
        D: dict[int, dict[int, object]] = {}
        for k, (g, f) in enumerate(pairs):
            col = {}
            for g2, c in dgen(g).items():
                col[pos[(g2, f)]] = col.get(pos[(g2, f)], 0) + c
            s = -1 if gens[g][2] % 2 else 1
            for f2, c in dgen(f).items():
                col[pos[(g, f2)]] = col.get(pos[(g, f2)], 0) + s * c
            D[k] = {r: v for r, v in col.items() if v != 0}
        # choose kept tensors: a D-closed complement is awkward, so instead pick a
        # subcomplex K to kill: out-of-range degrees, then random extra closure
        n = len(pairs)
        kill: set[int] = {k for k in range(n) if not -degree_bound <= deg[k] <= degree_bound}
        # K must be D-closed: add D of anything killed, and kill sources landing
        # outside the degree range (they'd map into killed pieces anyway)
        for k in range(n):
            if deg[k] > degree_bound:
                kill.update(D[k])
        order = list(range(n))
        rng.shuffle(order)
        for k in order:
            if n - len(kill) <= budget:
                break
            if k in kill:
                continue
            kill.add(k)
            kill.update(D[k])
        # K spanned by basis tensors in `kill` is D-closed when D maps each killed
        # tensor to killed tensors; enforce by closure
        changed = True
        while changed:
            changed = False
            for k in list(kill):
                for r in D[k]:
                    if r not in kill:
                        kill.add(r)
                        changed = True
        keep = [k for k in range(n) if k not in kill]
        if len(keep) > budget:
            keep = []
        # a random scalar per kept tensor keeps the structure constants from being all 1
        new_ids = {}
        for k in keep:
            g, f = pairs[k]
            new_ids[k] = len(basis)
            basis.append(BasisMorphism(f"g{g}g{f}", x, z, deg[k]))
            mult[(gen_id[g], gen_id[f])] = [(new_ids[k], 1)]
        for k in keep:
            t = [(new_ids[r], v) for r, v in D[k].items() if r in new_ids]
            if t:
                diff[new_ids[k]] = t
    units = {x: {i: 1} for i, x in enumerate(objs)}
    for i, b in enumerate(basis):
        if i < nobj:
            continue
        ux = objs.index(b.src)
        uy = objs.index(b.tgt)
        mult[(i, ux)] = [(i, 1)]
        mult[(uy, i)] = [(i, 1)]
    for x_i in range(nobj):
        mult[(x_i, x_i)] = [(x_i, 1)]
    return CategoryPresentation(objs, basis, mult, units, diff, field, f"random_dg[{seed}]")
