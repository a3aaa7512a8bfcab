import json
import random

import pytest
from hypothesis import given, settings, strategies as st

from cyclotome.charclasses import (PerfectComplexPresentation, chern_character, end_dg_algebra, euler_class,
                                   free_module, graded_vector_space, hh0_comparison, hh0_coordinates,
                                   supertrace_failures)
from cyclotome.presentations import PresentationError, small_zoo, zoo
from cyclotome.suites import random_perfect_complex

ZOO = small_zoo()


def unit_class(A, scale=1):
    return hh0_coordinates(A, {i: scale * v for i, v in A.unit.items()})


@st.composite
def perfect_complexes(draw):
    a = ZOO[draw(st.integers(0, len(ZOO) - 1))]
    return random_perfect_complex(a, random.Random(draw(st.integers(0, 10_000))))


@given(perfect_complexes())
def test_euler_class_of_free_complex_is_chi_times_unit(p):
    assert euler_class(p) == unit_class(p.base, p.euler_characteristic())


@given(perfect_complexes(), st.integers(0, 10_000))
def test_euler_class_additive_and_shift_odd(p, seed):
    q = random_perfect_complex(p.base, random.Random(seed))
    ep, eq = euler_class(p), euler_class(q)
    assert euler_class(p.direct_sum(q)) == tuple(x + y for x, y in zip(ep, eq))
    assert euler_class(p.shift(1)) == tuple(-x for x in ep)
    assert euler_class(p.shift(2)) == ep


@given(perfect_complexes())
def test_cone_of_identity_has_zero_class(p):
    c = p.cone_of_identity()
    assert c.violations() == []
    assert not any(euler_class(c))


@given(perfect_complexes())
@settings(max_examples=20)
def test_hh0_comparison_holds(p):
    assert hh0_comparison(p)["holds"]


def test_projective_summands_split_the_unit_class():
    a = zoo("T2")
    e1, e2 = (a.index[v] for v in a.meta["vertices"])
    p1 = PerfectComplexPresentation(a, {0: 1}, {}, {0: [[{e1: 1}]]}, "e1A").check()
    p2 = PerfectComplexPresentation(a, {0: 1}, {}, {0: [[{e2: 1}]]}, "e2A").check()
    c1, c2 = euler_class(p1), euler_class(p2)
    assert c1 != c2 and any(c1) and any(c2)
    assert tuple(x + y for x, y in zip(c1, c2)) == unit_class(a)


def test_bad_idempotent_is_rejected():
    a = zoo("dual_numbers")
    x = a.index["x"]
    with pytest.raises(PresentationError):
        PerfectComplexPresentation(a, {0: 1}, {}, {0: [[{x: 1}]]}).check()


def test_nonzero_square_is_rejected():
    a = zoo("k")
    d0 = [[{0: 1}]]
    with pytest.raises(PresentationError):
        PerfectComplexPresentation(a, {0: 1, 1: 1, 2: 1}, {0: d0, 1: d0}).check()


def test_perfect_complex_json_round_trip():
    p = random_perfect_complex(zoo("kronecker"), random.Random(4))
    q = PerfectComplexPresentation.from_json(json.loads(p.dumps()))
    assert q.dumps() == p.dumps()
    assert euler_class(q) == euler_class(p)


@pytest.mark.parametrize("a", [zoo("k"), zoo("dual_numbers")], ids=lambda a: a.name)
def test_supertrace_is_a_chain_map(a):
    p = free_module(a, 2).direct_sum(free_module(a, 1, degree=1))
    assert supertrace_failures(end_dg_algebra(p), 2) == []


@pytest.mark.parametrize("ranks", [{0: 1}, {0: 2, 1: 1}, {0: 1, 1: 3}, {1: 2}])
def test_chern_character_over_ground_field(ranks):
    p = graded_vector_space(ranks)
    ch = chern_character(p)
    assert ch.trace_check == []
    mult = ch.multiples()
    assert mult and all(v == p.euler_characteristic() for v in mult.values())
