import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from multinorm.abgroup import FinAbGroup, all_subgroups
from multinorm.corpus import abelian_groups
from multinorm.groups import FiniteGroup
from multinorm.scenario import (
    CyclicScenario,
    Factor,
    GaloisScenario,
    LocalProfile,
    PlaceDatum,
    ScenarioError,
    base_change_to_F,
    chebotarev_profile,
    derive_cyclic,
    f_ab_index,
    faithful_quotient,
    local_degrees,
    normalize_redundant_factors,
    p_part,
    parse_cyclic,
    parse_scenario,
    scenario_to_document,
)

V4 = FinAbGroup((2, 2))


def abelian(G, k, kprime=(), extra=()):
    return GaloisScenario(
        G,
        tuple(Factor(f"K{i}", H) for i, H in enumerate(k)),
        tuple(Factor(f"K{len(k) + i}", H) for i, H in enumerate(kprime)),
        LocalProfile(True, tuple(extra)),
    )


def test_parse_biquadratic(fixture):
    s = parse_scenario(fixture("biquadratic.json").read_text())
    assert s.group == V4
    assert [f.subgroup.is_trivial for f in s.factors] == [True]
    assert s.local_profile.chebotarev


def test_out_of_range_coordinate_names_the_field(fixture):
    with pytest.raises(ScenarioError, match=r"K\[0\]\.gens\[0\]\[1\].*out of range"):
        parse_scenario(fixture("bad_coordinate.json").read_text())


def test_malformed_json_reports_position():
    with pytest.raises(ScenarioError, match="line 2"):
        parse_scenario('{"group":\n  [}')


def test_faithfulness_violation_names_the_element():
    doc = {
        "group": {"invariant_factors": [4]},
        "K": [{"name": "a", "gens": [[2]]}],
        "Kprime": [{"name": "b", "gens": [[2]]}],
    }
    with pytest.raises(ScenarioError, match=r"faithfulness: element \[2\]"):
        parse_scenario(doc)


def test_duplicate_names_rejected():
    doc = {"group": {"invariant_factors": [2]}, "K": [{"name": "a", "gens": []}], "Kprime": [{"name": "a", "gens": []}]}
    with pytest.raises(ScenarioError, match="a"):
        parse_scenario(doc)


def test_table_groups_are_capped():
    G = FiniteGroup.cyclic(25)
    table = [[G.mul(a, b) for b in G.elements] for a in G.elements]
    with pytest.raises(ScenarioError, match="24"):
        parse_scenario({"group": {"table": table}, "K": [{"name": "K", "gens": []}]})


def test_table_scenario(fixture):
    s = parse_scenario(fixture("s3_cubic.json").read_text())
    assert not s.is_abelian
    assert len(s.k_factors[0].subgroup) == 2


def test_chebotarev_profiles():
    assert {S.basis for S in chebotarev_profile(V4)} == {
        V4.trivial().basis,
        V4.subgroup([(1, 0)]).basis,
        V4.subgroup([(0, 1)]).basis,
        V4.subgroup([(1, 1)]).basis,
    }
    Z4 = FinAbGroup((4,))
    assert sorted(S.order for S in chebotarev_profile(Z4)) == [1, 2, 4]
    assert [S.order for S in chebotarev_profile(FinAbGroup())] == [1]


def test_chebotarev_profile_closed_under_subgroups():
    for G in abelian_groups(12):
        prof = set(chebotarev_profile(G))
        for S in prof:
            for T in all_subgroups(G):
                if T <= S:
                    assert T in prof


def _split_v4():
    return abelian(V4, [V4.subgroup([(0, 1)])], [V4.subgroup([(1, 0)])])


@pytest.mark.parametrize(
    "gens, expected",
    [([(1, 1)], (1, [0])), ([], (0, [0])), ([(1, 0), (0, 1)], (1, [1]))],
)
def test_local_degrees(gens, expected):
    s = _split_v4()
    assert local_degrees(s, V4.subgroup(gens), "K0") == expected


def test_local_degree_bounds_hold_everywhere():
    for G in abelian_groups(8):
        subs = all_subgroups(G)
        for HK in subs:
            for H1 in subs:
                s = abelian(G, [HK], [H1])
                try:
                    cs = derive_cyclic(s, "K0")
                except ScenarioError:
                    continue
                for d in cs.places:
                    assert all(t <= min(d.e_v, e) for t, e in zip(d.e_i_v, cs.e_list))


def test_derive_cyclic_of_split_biquadratic():
    cs = derive_cyclic(_split_v4(), "K0")
    assert (cs.p, cs.e, cs.e_list) == (2, 1, (1,))
    assert sorted((d.e_v, d.e_i_v) for d in cs.places) == [(0, (0,)), (1, (0,)), (1, (1,))]


def test_derive_cyclic_without_kprime():
    cs = derive_cyclic(abelian(FinAbGroup((4,)), [FinAbGroup((4,)).trivial()]), "K0")
    assert cs.m == 0 and all(d.e_i_v == () for d in cs.places)


def test_derive_cyclic_needs_prime_power():
    G = FinAbGroup((6,))
    with pytest.raises(ScenarioError, match="prime-power"):
        derive_cyclic(abelian(G, [G.trivial()]), "K0")


def test_cyclic_document_validation(fixture):
    with pytest.raises(ScenarioError, match=r"e_i_v\[1\]"):
        parse_cyclic(fixture("bad_place.json").read_text())
    cs = parse_cyclic({"p": 2, "e": 2, "e_i": [1, 2], "places": []})
    assert cs.e_list == (2, 1)
    with pytest.raises(ScenarioError):
        parse_cyclic({"p": 4, "e": 1, "e_i": [1], "places": []})


def test_base_change_examples():
    s = _split_v4()
    assert base_change_to_F(s) == s
    H = V4.subgroup([(1, 0)])
    s2 = abelian(V4, [H], [H])
    assert base_change_to_F(s2).group.order == 2
    single = abelian(V4, [H])
    assert base_change_to_F(single).group.order == 2


def test_base_change_is_idempotent():
    for G in abelian_groups(8):
        subs = all_subgroups(G)
        for HK in subs:
            for H1 in subs:
                s = faithful_quotient(abelian(G, [HK], [H1]))
                try:
                    once = base_change_to_F(s, "K0")
                except ScenarioError:
                    continue
                assert base_change_to_F(once, "K0") == once


def test_p_part_examples():
    Z6 = FinAbGroup((6,))
    s = abelian(Z6, [Z6.trivial()])
    two = p_part(s, 2)
    assert two.k_factors[0].subgroup.order == 3
    assert all(f.subgroup.order == 6 for f in p_part(s, 5).factors)
    Z8 = FinAbGroup((8,))
    s8 = abelian(Z8, [Z8.subgroup([(4,)])])
    assert p_part(s8, 2) == s8
    with pytest.raises(ScenarioError):
        p_part(s, 4)


def test_p_parts_multiply_field_indices():
    for G in abelian_groups(12):
        subs = all_subgroups(G)
        for H in subs:
            for H1 in subs[::2]:
                s = abelian(G, [H], [H1])
                product = 1
                for p in (2, 3, 5, 7, 11):
                    if G.order % p == 0:
                        product *= f_ab_index(p_part(s, p))
                assert product == f_ab_index(s)


def test_f_ab_index_examples():
    assert f_ab_index(abelian(V4, [V4.subgroup([(1, 0)])], [V4.subgroup([(0, 1)])])) == 1
    for n in range(1, 9):
        G = FinAbGroup.from_orders([n]) if n > 1 else FinAbGroup()
        assert f_ab_index(abelian(G, [G.trivial()])) == n
    assert f_ab_index(abelian(V4, [V4.whole()])) == 1


def test_f_ab_index_nonabelian(fixture):
    s = parse_scenario(fixture("s3_cubic.json").read_text())
    # a non-Galois cubic field contains no abelian subextension
    assert f_ab_index(s) == 1


def test_redundant_factor_with_the_base_field_keeps_the_smaller_field():
    # K2 = k lies in K1; the larger field K1 is the one removed, so the
    # quasi-trivial structure from the k factor is preserved
    s = abelian(V4, [V4.subgroup([(1, 0)])], [V4.whole()])
    reduced, log = normalize_redundant_factors(s)
    assert [f.subgroup for f in reduced.factors] == [V4.whole()]
    assert log


def test_duplicates_collapse_to_one_copy():
    H = V4.subgroup([(1, 0)])
    reduced, log = normalize_redundant_factors(abelian(V4, [H], [H, H]))
    assert [f.name for f in reduced.factors] == ["K0"]
    assert len(log) == 2


def test_no_containment_leaves_scenario():
    s = _split_v4()
    assert normalize_redundant_factors(s) == (s, [])


subgroup_pick = st.integers(0, 10**6)


@settings(max_examples=80, deadline=None)
@given(st.sampled_from(abelian_groups(12)), st.lists(subgroup_pick, min_size=1, max_size=3), st.booleans())
def test_document_round_trip(G, picks, chebotarev):
    subs = all_subgroups(G)
    chosen = [subs[i % len(subs)] for i in picks]
    s = faithful_quotient(
        GaloisScenario(
            G,
            (Factor("A", chosen[0]),),
            tuple(Factor(f"B{i}", H) for i, H in enumerate(chosen[1:])),
            LocalProfile(chebotarev, (subs[picks[0] % len(subs)],)),
        )
    )
    doc = scenario_to_document(s)
    again = parse_scenario(json.dumps(doc))
    assert scenario_to_document(again) == doc


def test_place_datum_bounds():
    with pytest.raises(ScenarioError):
        CyclicScenario(2, 1, (1,), (PlaceDatum("v", 2, (0,)),))
    with pytest.raises(ScenarioError):
        CyclicScenario(2, 1, (2,), ())
