import json

import pytest
from hypothesis import given, strategies as st

from cyclotome.linalg import GF, QQ, SparseMatrix
from cyclotome.presentations import (AlgebraPresentation, CategoryPresentation, Functor,
                                     LocalizationPairPresentation, PresentationError, inclusion_functor,
                                     matrix_subcategory, random_dg_category, semisimple_quotient,
                                     small_zoo, split_idempotents, validate, vertex_category, zoo)

ZOO_DIMS = {"k": 1, "k2": 2, "k3": 3, "dual_numbers": 2, "T2": 3, "T3": 6, "kronecker": 4, "P1": 4, "P2": 15}


@pytest.mark.parametrize("name,dim", sorted(ZOO_DIMS.items()))
def test_zoo_algebras_validate_with_expected_dimension(name, dim):
    a = zoo(name)
    assert validate(a) == []
    assert a.dim == dim


def test_truncated_poly_parameter():
    assert zoo("truncated_poly", m=4).dim == 4
    with pytest.raises(PresentationError):
        zoo("no_such_algebra")


@pytest.mark.parametrize("a", small_zoo(), ids=lambda a: a.name)
def test_json_round_trip_is_stable(a):
    doc = a.to_json()
    b = CategoryPresentation.from_json(json.loads(json.dumps(doc)))
    assert isinstance(b, AlgebraPresentation)
    assert b.to_json() == doc
    assert b.dumps() == a.dumps()


@given(st.integers(0, 500))
def test_random_dg_categories_are_valid_and_bounded(seed):
    c = random_dg_category(seed)
    assert validate(c) == []
    assert 1 <= len(c.objects) <= 3
    assert all(len(ids) <= 3 for ids in c.hom.values())
    assert all(-2 <= b.degree <= 2 for b in c.basis)
    again = CategoryPresentation.from_json(json.loads(c.dumps()))
    assert again.dumps() == c.dumps()


def test_random_dg_category_is_seed_determined():
    assert random_dg_category(7).dumps() == random_dg_category(7).dumps()


def _broken_dual_numbers():
    doc = zoo("dual_numbers").to_json()
    for r in doc["compositions"]:
        if r["g"] == "x" and r["f"] == "1":
            r["result"] = [[2, "x"]]
    return CategoryPresentation.from_json(doc)


def test_validate_reports_unit_and_associativity_failures():
    bad = validate(_broken_dual_numbers())
    assert any("unit" in v for v in bad)
    assert any("associativity" in v for v in bad)


def test_validate_reports_leibniz_failure():
    # k[x]/x^2 with |x| = -1 and d(1) = x breaks d(1) = d(1·1) = 2 d(1)
    a = AlgebraPresentation.from_table(["1", "x"], {("1", "1"): {"1": 1}, ("1", "x"): {"x": 1},
                                                    ("x", "1"): {"x": 1}},
                                       {"1": 1}, degrees={"x": -1}, diff={"1": {"x": 1}})
    assert validate(a) != []


def test_field_change_keeps_structure():
    a = zoo("kronecker")
    b = a.with_field(GF(7))
    assert b.field == GF(7)
    assert validate(b) == []
    assert b.dim == a.dim


def test_semisimple_quotient_of_quiver_algebras():
    for name, nverts in (("kronecker", 2), ("T2", 2), ("P2", 3)):
        a = zoo(name)
        e, inc = semisimple_quotient(a)
        assert e.dim == nverts
        assert inc.shape == (a.dim, nverts)
        f = Functor.from_algebra_map(e, a, inc)
        assert f.violations() == []
    assert semisimple_quotient(zoo("dual_numbers"))[0].dim == 1
    bare = AlgebraPresentation.from_table(["1"], {("1", "1"): {"1": 1}}, {"1": 1})
    with pytest.raises(PresentationError):
        semisimple_quotient(bare)


def test_vertex_category_has_one_object_per_vertex():
    c = vertex_category(zoo("kronecker"))
    assert len(c.objects) == 2
    assert sum(len(ids) for ids in c.hom.values()) == 4


@pytest.mark.parametrize("name", ["k", "dual_numbers", "T2"])
def test_matrix_subcategory_sizes(name):
    a = zoo(name)
    m = matrix_subcategory(a, [1, 2])
    assert validate(m) == []
    assert len(m.objects) == 2
    # Hom(A^i, A^j) = M_{j x i}(A)
    assert m.dim == a.dim * (1 + 2 + 2 + 4)
    s = split_idempotents(m)
    assert len(s.objects) == 3 * len(a.meta["vertices"])
    assert s.dim == m.dim


def test_identity_functor_and_inclusion():
    a = zoo("T2")
    assert Functor.identity(a).violations() == []
    c = vertex_category(a)
    sub = c.full_subcategory([c.objects[0]])
    assert inclusion_functor(sub, c).violations() == []


def test_broken_functor_is_reported():
    a = zoo("dual_numbers")
    # sends x to 1: not multiplicative
    m = SparseMatrix.from_dense([[1, 1], [0, 0]], QQ)
    f = Functor.from_algebra_map(a, a, m)
    assert f.violations() != []


def test_localization_pair_checks_objects():
    c = vertex_category(zoo("kronecker"))
    assert LocalizationPairPresentation(c, (c.objects[0],)).violations() == []
    assert LocalizationPairPresentation(c, ("nowhere",)).violations() != []
