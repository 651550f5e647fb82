import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from multinorm.abgroup import (
    AbHom,
    FinAbGroup,
    all_subgroups,
    cokernel,
    cyclic_subgroups,
    direct_sum,
    dual_group,
    hnf_rows,
    integer_kernel,
    quotient,
    snf,
    subgroup_intersect,
    subgroup_join,
    subquotient,
    unimodular_inverse,
    wedge_square,
)

matrices = st.integers(1, 6).flatmap(
    lambda m: st.integers(1, 6).flatmap(
        lambda n: st.lists(st.lists(st.integers(-20, 20), min_size=n, max_size=n), min_size=m, max_size=m)
    )
)

chains = st.lists(st.sampled_from([1, 2, 3, 4, 6, 8, 12]), min_size=0, max_size=3).map(
    lambda xs: FinAbGroup.from_orders(xs)
)


def group_with_vectors(count):
    return chains.flatmap(
        lambda A: st.tuples(
            st.just(A),
            st.lists(
                st.tuples(*[st.integers(0, d - 1) for d in A.invariant_factors]),
                min_size=0,
                max_size=count,
            ),
        )
    )


@given(matrices)
def test_snf_is_a_certified_diagonalization(M):
    U, D, V = snf(M)
    assert np.array_equal(U.dot(np.array(M, dtype=object)).dot(V), D)
    diag = [D[i, i] for i in range(min(D.shape))]
    nonzero = [d for d in diag if d]
    assert diag[: len(nonzero)] == nonzero
    assert all(b % a == 0 for a, b in zip(nonzero, nonzero[1:]))
    assert np.count_nonzero(D) == len(nonzero)


@given(matrices)
def test_unimodular_inverse_inverts(M):
    U, _, V = snf(M)
    for W in (U, V):
        n = W.shape[0]
        assert np.array_equal(unimodular_inverse(W).dot(W), np.eye(n, dtype=int).astype(object))


def test_unimodular_inverse_of_a_non_permutation():
    U = np.array([[2, 1], [1, 1]], dtype=object)
    assert unimodular_inverse(U).tolist() == [[1, -1], [-1, 2]]


def test_unimodular_inverse_rejects_singular():
    with pytest.raises(ValueError):
        unimodular_inverse(np.array([[2, 0], [0, 1]], dtype=object))


@given(matrices)
def test_integer_kernel_is_annihilated(M):
    for v in integer_kernel(M):
        assert all(sum(a * b for a, b in zip(row, v)) == 0 for row in M)


def test_hnf_is_canonical():
    a = hnf_rows([[2, 4], [0, 6]], 2)
    b = hnf_rows([[2, -2], [2, 4], [0, 6]], 2)
    assert a == b


def test_cokernel_splits_torsion_and_free():
    C = cokernel([[2, 0], [0, 0]])
    assert C.group.invariant_factors == (2,)
    assert C.free_rank == 1


def test_invariant_factor_validation():
    with pytest.raises(ValueError):
        FinAbGroup((2, 3))
    with pytest.raises(ValueError):
        FinAbGroup((1, 2))
    assert FinAbGroup.from_orders([2, 3]) == FinAbGroup((6,))
    assert FinAbGroup.from_orders([4, 2, 1]) == FinAbGroup((2, 4))


def test_elementary_divisors_and_primary_parts():
    A = FinAbGroup((2, 12))
    assert sorted(A.elementary_divisors()) == [2, 3, 4]
    assert A.primary_part(2) == FinAbGroup((2, 4))
    assert A.primary_part(3) == FinAbGroup((3,))
    assert A.primary_part(5).is_trivial


# Subgroup counts of small abelian groups are classical.
@pytest.mark.parametrize(
    "factors, count",
    [((), 1), ((2,), 2), ((4,), 3), ((2, 2), 5), ((2, 4), 8), ((2, 2, 2), 16), ((8,), 4), ((3, 3), 6)],
)
def test_subgroup_counts(factors, count):
    assert len(all_subgroups(FinAbGroup(factors))) == count


def test_cyclic_subgroups_of_klein_four():
    V = FinAbGroup((2, 2))
    assert sorted(S.order for S in cyclic_subgroups(V)) == [1, 2, 2, 2]


@settings(max_examples=60)
@given(group_with_vectors(3))
def test_coordinates_agree_with_generators(data):
    A, gens = data
    S = A.subgroup(gens)
    mins = S.minimal_generators()
    for v in S.elements():
        c = S.coordinates(v)
        rebuilt = [0] * A.rank
        for k, g in zip(c, mins):
            rebuilt = [x + k * y for x, y in zip(rebuilt, g)]
        assert A.reduce(rebuilt) == tuple(v)
    assert len(S.elements()) == S.order


@settings(max_examples=60)
@given(group_with_vectors(2), st.data())
def test_join_meet_order_formula(data, more):
    A, gens = data
    S = A.subgroup(gens)
    other = more.draw(st.lists(st.tuples(*[st.integers(0, d - 1) for d in A.invariant_factors]), max_size=2))
    T = A.subgroup(other)
    assert subgroup_join(S, T).order * subgroup_intersect(S, T).order == S.order * T.order
    assert subgroup_intersect(S, T) <= S <= subgroup_join(S, T)


@settings(max_examples=60)
@given(group_with_vectors(2))
def test_quotient_order(data):
    A, gens = data
    S = A.subgroup(gens)
    Q, proj = quotient(A, S)
    assert Q.order * S.order == A.order
    assert proj.kernel() == S
    assert proj.is_surjective()


@settings(max_examples=60)
@given(chains, chains, st.data())
def test_kernel_image_orders(A, B, data):
    mat = [[data.draw(st.integers(0, 30)) for _ in range(A.rank)] for _ in range(B.rank)]
    # only well-defined maps: scale columns so that d_j * column lands in 0
    for j, d in enumerate(A.invariant_factors):
        for i, b in enumerate(B.invariant_factors):
            mat[i][j] *= b // math.gcd(b, d)
    f = AbHom(A, B, mat)
    assert f.kernel().order * f.image().order == A.order


def test_ill_defined_hom_is_rejected():
    with pytest.raises(ValueError):
        AbHom(FinAbGroup((2,)), FinAbGroup((3,)), [[1]])


def test_dual_of_inclusion_is_restriction():
    A = FinAbGroup((4,))
    S = A.subgroup([(2,)])
    res = S.inclusion.dual()
    assert res.source == A and res.target == S.group
    assert res.is_surjective()
    assert res.kernel().order == 2


def test_dual_group_pairing_is_perfect():
    A = FinAbGroup((2, 4))
    D, pairing = dual_group(A)
    assert D == A
    for chi in D.elements():
        if any(chi):
            assert any(pairing(chi, a) != 0 for a in A.elements())


def test_direct_sum_injections_and_projections():
    S, inj, proj = direct_sum([FinAbGroup((2,)), FinAbGroup((3,))])
    assert S == FinAbGroup((6,))
    for i, j in itertools.product(range(2), repeat=2):
        comp = proj[i].compose(inj[j])
        if i == j:
            assert all(comp(g) == g for g in inj[j].source.elements())
        else:
            assert comp.image().is_trivial


@pytest.mark.parametrize(
    "factors, wedge",
    [((), ()), ((5,), ()), ((2, 2), (2,)), ((2, 4), (2,)), ((2, 2, 2), (2, 2, 2)), ((4, 4), (4,)), ((2, 6), (2,))],
)
def test_wedge_square(factors, wedge):
    W, w = wedge_square(FinAbGroup(factors))
    assert W.invariant_factors == wedge


def test_wedge_is_alternating():
    A = FinAbGroup((2, 4, 4))
    _, w = wedge_square(A)
    elems = list(A.elements())
    zero = w(elems[0], elems[0])
    for a in elems[::5]:
        assert w(a, a) == zero
        for b in elems[::7]:
            ab, ba = w(a, b), w(b, a)
            assert w.group.add(ab, ba) == zero


def test_subquotient():
    A = FinAbGroup((8,))
    assert subquotient(A.subgroup([(2,)]), A.subgroup([(4,)])) == FinAbGroup((2,))
    with pytest.raises(ValueError):
        subquotient(A.subgroup([(4,)]), A.subgroup([(2,)]))
