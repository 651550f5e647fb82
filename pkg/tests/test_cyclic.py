import itertools
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from multinorm.cyclic import (
    ambient,
    diagonal_group,
    from_group,
    g_group,
    locally_diagonal_at,
    omega_cover_check,
    sha_cyclic,
    to_group,
)
from multinorm.scenario import CyclicScenario, PlaceDatum, parse_cyclic

BOTH = PlaceDatum("v", 1, (1, 1))
SPLIT = (PlaceDatum("v", 1, (1, 0)), PlaceDatum("w", 1, (0, 1)))


def test_locally_diagonal_examples():
    cs = CyclicScenario(2, 1, (1, 1))
    assert locally_diagonal_at((1, 1), BOTH, cs)
    assert not locally_diagonal_at((1, 0), BOTH, cs)
    unramified = PlaceDatum("u", 0, (0, 0))
    assert all(locally_diagonal_at(a, unramified, cs) for a in itertools.product(range(2), repeat=2))


def test_omega_matches_the_examples():
    cs = CyclicScenario(2, 1, (1, 1), (BOTH,))
    assert omega_cover_check((1, 1), cs) and not omega_cover_check((1, 0), cs)
    assert omega_cover_check((), CyclicScenario(3, 2, ()))


def test_dimension_mismatch():
    cs = CyclicScenario(2, 1, (1, 1))
    with pytest.raises(ValueError):
        locally_diagonal_at((1,), BOTH, cs)
    with pytest.raises(ValueError):
        omega_cover_check((1, 0, 0), cs)


def test_diagonal_group_examples():
    D = diagonal_group(CyclicScenario(2, 1, (1, 1)))
    assert sorted(from_group(CyclicScenario(2, 1, (1, 1)), v) for v in D.elements()) == [(0, 0), (1, 1)]
    assert diagonal_group(CyclicScenario(2, 1, ())).order == 1
    cs = CyclicScenario(2, 2, (2, 1))
    D = diagonal_group(cs)
    assert D.order == 4
    assert D == ambient(cs).subgroup([to_group(cs, (1, 1))])


def test_g_group_examples():
    assert g_group(CyclicScenario(2, 1, (1, 1), (BOTH,))).order == 2
    assert g_group(CyclicScenario(2, 1, (1, 1), SPLIT)).order == 4
    assert g_group(CyclicScenario(3, 2, (2, 1))).order == 27


def test_sha_cyclic_examples():
    assert sha_cyclic(CyclicScenario(2, 1, (1, 1), (BOTH,))).sha == ()
    assert sha_cyclic(CyclicScenario(2, 1, (1, 1), SPLIT)).sha == (2,)
    hasse = sha_cyclic(CyclicScenario(3, 2, (), (PlaceDatum("v", 2, ()),)))
    assert hasse.sha == () and hasse.is_exact


def test_fixtures_agree_with_constructed_scenarios(fixture):
    assert sha_cyclic(parse_cyclic(fixture("cyclic_diagonal.json").read_text())).sha == ()
    assert sha_cyclic(parse_cyclic(fixture("cyclic_split.json").read_text())).sha == (2,)


@st.composite
def cyclic_scenarios(draw, max_e=3, max_m=3, max_places=4):
    p = draw(st.sampled_from([2, 3]))
    e = draw(st.integers(1, max_e))
    m = draw(st.integers(0, max_m))
    e_list = tuple(sorted((draw(st.integers(0, e)) for _ in range(m)), reverse=True))
    places = []
    for k in range(draw(st.integers(0, max_places))):
        e_v = draw(st.integers(0, e))
        places.append(PlaceDatum(f"v{k}", e_v, tuple(draw(st.integers(0, min(e_v, ei))) for ei in e_list)))
    return CyclicScenario(p, e, e_list, tuple(places))


@settings(max_examples=150, deadline=None)
@given(cyclic_scenarios())
def test_diagonal_lies_in_g_group(cs):
    assert diagonal_group(cs) <= g_group(cs)


@settings(max_examples=100, deadline=None)
@given(cyclic_scenarios(max_places=3), st.data())
def test_g_group_is_antitone_in_places(cs, data):
    e_v = data.draw(st.integers(0, cs.e))
    extra = PlaceDatum("new", e_v, tuple(data.draw(st.integers(0, min(e_v, ei))) for ei in cs.e_list))
    bigger = CyclicScenario(cs.p, cs.e, cs.e_list, cs.places + (extra,))
    assert g_group(bigger) <= g_group(cs)


@settings(max_examples=100, deadline=None)
@given(cyclic_scenarios(max_places=3))
def test_full_local_datum_forces_diagonal(cs):
    full = PlaceDatum("full", cs.e, cs.e_list)
    forced = CyclicScenario(cs.p, cs.e, cs.e_list, cs.places + (full,))
    assert g_group(forced) == diagonal_group(forced)
    assert sha_cyclic(forced).sha == ()


@settings(max_examples=150, deadline=None)
@given(cyclic_scenarios())
def test_sha_order_is_a_bounded_prime_power(cs):
    order = math.prod(sha_cyclic(cs).sha)
    if cs.m:
        bound = cs.p ** (sum(cs.e_list) - cs.e_list[0])
        assert bound % order == 0
    else:
        assert order == 1


@settings(max_examples=150, deadline=None)
@given(cyclic_scenarios())
def test_omega_cover_matches_locally_diagonal(cs):
    g = g_group(cs, method="enumerate")
    for v in ambient(cs).elements():
        a = from_group(cs, v)
        assert omega_cover_check(a, cs) == all(locally_diagonal_at(a, d, cs) for d in cs.places)
        assert (v in g) == all(locally_diagonal_at(a, d, cs) for d in cs.places)


@settings(max_examples=80, deadline=None)
@given(cyclic_scenarios(max_e=2))
def test_congruence_and_enumeration_routes_agree(cs):
    assert g_group(cs, method="congruence") == g_group(cs, method="enumerate")


@settings(max_examples=40, deadline=None)
@given(cyclic_scenarios(max_e=2))
def test_paranoid_mode_agrees(cs):
    assert sha_cyclic(cs, paranoid=True).sha == sha_cyclic(cs).sha


def test_images_of_integers_always_pass_omega():
    cs = CyclicScenario(3, 2, (2, 1, 1), (PlaceDatum("v", 2, (2, 1, 0)), PlaceDatum("w", 1, (1, 1, 1))))
    for n in range(9):
        assert omega_cover_check(tuple(n % 3**e for e in cs.e_list), cs)
