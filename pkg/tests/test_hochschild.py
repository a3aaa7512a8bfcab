import pytest
from hypothesis import given, settings, strategies as st

from cyclotome.hochschild import (HochschildModel, ResourceCapExceeded, count_chains, cyclic_bicomplex,
                                  cyclic_operators, hochschild_complex, hochschild_homology,
                                  with_unit_basis)
from cyclotome.linalg import GF
from cyclotome.presentations import (matrix_subcategory, random_dg_category, small_zoo, split_idempotents,
                                     vertex_category, zoo)


def trusted(table, hi):
    return {n: e.dim for n, e in table.entries.items() if e.trusted and 0 <= n <= hi}


def test_ground_field():
    assert trusted(hochschild_homology(zoo("k"), 4), 4) == {0: 1, 1: 0, 2: 0, 3: 0, 4: 0}


@pytest.mark.parametrize("m", [2, 3, 4])
def test_truncated_polynomials_over_q(m):
    # HH_0 = A, and HH_n has dimension m - 1 for n >= 1 in characteristic 0
    got = trusted(hochschild_homology(zoo("truncated_poly", m=m), 3), 3)
    assert got == {0: m, 1: m - 1, 2: m - 1, 3: m - 1}


def test_dual_numbers_in_characteristic_two():
    # every Hochschild differential is a multiple of 2x
    got = trusted(hochschild_homology(zoo("dual_numbers", GF(2)), 3), 3)
    assert got == {0: 2, 1: 2, 2: 2, 3: 2}


@pytest.mark.parametrize("name,verts", [("k2", 2), ("k3", 3), ("T2", 2), ("kronecker", 2), ("T3", 3)])
def test_acyclic_quivers_have_only_hh0(name, verts):
    hi = 2 if name == "T3" else 3
    got = trusted(hochschild_homology(zoo(name), hi), hi)
    assert got == {n: verts if n == 0 else 0 for n in range(hi + 1)}


def test_vertex_category_is_morita_equivalent():
    a = zoo("kronecker")
    assert trusted(hochschild_homology(a, 3), 3) == trusted(hochschild_homology(vertex_category(a), 3), 3)


@pytest.mark.parametrize("name", ["k", "dual_numbers", "T2"])
def test_matrix_subcategory_agrees(name):
    a = zoo(name)
    s = split_idempotents(matrix_subcategory(a, [1, 2]))
    assert trusted(hochschild_homology(s, 2, normalized=True), 2) == trusted(hochschild_homology(a, 2), 2)


@pytest.mark.parametrize("a", small_zoo(), ids=lambda a: a.name)
def test_normalized_complex_has_same_homology(a):
    u = with_unit_basis(a)
    assert trusted(hochschild_homology(u, 3, normalized=True), 3) == trusted(hochschild_homology(a, 3), 3)


@pytest.mark.parametrize("a", small_zoo(), ids=lambda a: a.name)
def test_cyclic_identities(a):
    assert cyclic_operators(a, 4).violations() == []


@given(st.integers(0, 300))
@settings(max_examples=25)
def test_random_dg_differential_squares_to_zero(seed):
    c = random_dg_category(seed)
    top = 1 if sum(count_chains(c, 3)) > 3000 else 2
    # the constructor raises if d∘d != 0
    cx, model = hochschild_complex(c, top)
    assert cx.total_dim() == sum(model.dims())


def test_chain_count_matches_enumeration():
    c = vertex_category(zoo("kronecker"))
    m = HochschildModel(c, 4)
    assert count_chains(c, 4) == [m.dim(n) for n in range(5)]


def test_resource_cap_refuses_before_building():
    with pytest.raises(ResourceCapExceeded):
        hochschild_homology(zoo("kronecker"), 6, max_basis=500)


def test_connes_bicomplex_is_a_bicomplex():
    bc = cyclic_bicomplex(zoo("dual_numbers"), 4)
    assert bc.violations() == []
    t = bc.total_sum().homology_table()
    # HC of k[x]/x^2 in characteristic 0: 2 in even degrees, 0 in odd ones
    assert trusted(t, 4) == {0: 2, 1: 0, 2: 2, 3: 0, 4: 2}
