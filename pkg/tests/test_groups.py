import pytest

from multinorm.abgroup import FinAbGroup
from multinorm.groups import FiniteGroup


def test_rejects_non_group_tables():
    with pytest.raises(ValueError):
        FiniteGroup([[0, 1], [1, 1]])
    with pytest.raises(ValueError):
        FiniteGroup([[1, 0], [0, 1]])


def test_symmetric_group_basics():
    S3 = FiniteGroup.symmetric(3)
    assert S3.order == 6
    assert not S3.is_abelian
    assert len(S3.commutator_subgroup()) == 3
    assert sorted(S3.element_order(g) for g in S3.elements) == [1, 2, 2, 2, 3, 3]


def test_cyclic_subgroups_up_to_conjugacy():
    S3 = FiniteGroup.symmetric(3)
    assert len(S3.cyclic_subgroups()) == 5
    assert sorted(len(H) for H in S3.cyclic_subgroups_up_to_conjugacy()) == [1, 2, 3]


def test_dihedral_group_of_the_square():
    D4 = FiniteGroup.dihedral(4)
    assert D4.order == 8 and not D4.is_abelian
    assert len(D4.commutator_subgroup()) == 2


def test_core_and_normal_closure():
    S3 = FiniteGroup.symmetric(3)
    t = next(g for g in S3.elements if S3.element_order(g) == 2)
    H = S3.generate([t])
    assert S3.core(H) == frozenset({0})
    assert S3.normal_closure(H) == S3.whole()
    assert not S3.is_normal(H)


def test_from_abelian_matches_orders():
    G, labels = FiniteGroup.from_abelian(FinAbGroup((2, 4)))
    assert G.order == 8 and G.is_abelian
    assert labels[0] == (0, 0)
    assert max(G.element_order(g) for g in G.elements) == 4


def test_left_cosets_partition():
    G = FiniteGroup.cyclic(6)
    H = G.generate([2])
    cosets = G.left_cosets(H)
    assert len(cosets) == 2
    assert frozenset().union(*cosets) == G.whole()
