import pytest
from hypothesis import given, settings, strategies as st

from floerobs import knot_invariants as ki
from floerobs.knot_invariants import SymmetricLaurent
from floerobs.thin_cfk import (BifilteredComplex, ModelError, ThinModelSpec, box_counts,
                               euler_by_alexander, hfk_ranks, staircase_model, thin_model)


def L(d):
    return SymmetricLaurent.from_dict(d)


FIG8 = L({1: -1, 0: 3, -1: -1})
TREFOIL = L({1: 1, 0: -1, -1: 1})


def test_figure_eight_model():
    C = thin_model(ThinModelSpec(FIG8, 0))
    assert C.rank == 5
    assert box_counts(FIG8, 0) == {0: 1}
    assert hfk_ranks(C) == {1: {1: 1}, 0: {0: 3}, -1: {-1: 1}}


def test_trefoil_as_thin_is_a_staircase():
    C = thin_model(ThinModelSpec(TREFOIL, -2))
    assert C.rank == 3
    assert box_counts(TREFOIL, -2) == {}
    assert hfk_ranks(C) == {1: {0: 1}, 0: {-1: 1}, -1: {-2: 1}}


def test_unknot_model():
    C = thin_model(ThinModelSpec(L({0: 1}), 0))
    assert C.gens == ((0, 0),) and C.arrows == ()
    assert hfk_ranks(C) == {0: {0: 1}}
    assert staircase_model(L({0: 1})).rank == 1


def test_staircases():
    C = staircase_model(TREFOIL)
    assert C.rank == 3 and len(C.arrows) == 2
    T34 = ki.alexander(ki.torus(3, 4))
    C = staircase_model(T34)
    assert C.gens == ((0, 3), (-1, 2), (-2, 0), (-5, -2), (-6, -3))
    steps = sorted((di, dj) for _, _, _, di, dj in C.arrows)
    assert steps == [(0, 1), (0, 2), (1, 0), (2, 0)]
    with pytest.raises(ModelError):
        staircase_model(FIG8)


def test_two_bridge_boxes():
    for p, boxes in ((19, {2: 1, 0: 1, -2: 1}), (29, {4: 1, 2: 1, 0: 1, -2: 1, -4: 1})):
        K = ki.two_bridge(p, 3)
        D, tau = ki.alexander(K), ki.signature(K)
        assert box_counts(D, tau) == boxes
        C = thin_model(ThinModelSpec(D, tau))
        assert C.rank == p
        assert euler_by_alexander(C) == D.as_dict()


def test_rejects_unrealizable():
    with pytest.raises(ModelError):  # odd tau
        box_counts(FIG8, 1)
    with pytest.raises(ModelError):  # excess not divisible by 4
        thin_model(ThinModelSpec(L({1: -1, 0: 1, -1: -1}), 0))
    with pytest.raises(ModelError):  # signs inconsistent with the diagonal
        thin_model(ThinModelSpec(FIG8, -2))


def test_validation_errors():
    with pytest.raises(ModelError):  # wrong Maslov drop
        BifilteredComplex([(0, 0), (0, 0)], [(0, 1, 1, 0, 0)], [(0, 1), (1, 1)])
    with pytest.raises(ModelError):  # flip misses gradings
        BifilteredComplex([(0, 1), (0, -1)], [], [(0, 1), (1, 1)])
    with pytest.raises(ModelError):  # d^2 != 0
        BifilteredComplex([(1, 0), (0, 0), (-1, 0)], [(0, 1, 1, 0, 0), (1, 2, 1, 0, 0)],
                          [(0, 1), (1, 1), (2, 1)])
    with pytest.raises(ModelError):  # flip not a chain map
        BifilteredComplex([(0, 0), (-1, 0)], [(0, 1, 1, 0, 0)], [(0, 1), (1, -1)])


def test_json_round_trip_and_dual():
    C = thin_model(ThinModelSpec(ki.alexander(ki.two_bridge(19, 3)), 6))
    assert BifilteredComplex.from_json(C.to_json()) == C
    D = C.dual()
    assert D.tau == -6
    assert D.dual() == C
    assert euler_by_alexander(D) == euler_by_alexander(C)


def thin_inputs():
    # two-bridge knots are alternating, so sigma-thin
    from math import gcd
    pairs = [(p, q) for p in range(3, 40, 2) for q in range(1, p) if gcd(p, q) == 1]
    return st.sampled_from(pairs)


@settings(max_examples=40, deadline=None)
@given(thin_inputs())
def test_thin_model_invariants(pq):
    K = ki.two_bridge(*pq)
    D, tau = ki.alexander(K), ki.signature(K)
    C = thin_model(ThinModelSpec(D, tau))
    assert C.rank == sum(abs(a) for _, a in D.coeffs)
    assert euler_by_alexander(C) == D.as_dict()
    ranks = hfk_ranks(C)
    for a, row in ranks.items():
        assert set(row) == {a + tau // 2}
        assert row[a + tau // 2] == abs(D[a])
    # flip squares to the identity and exchanges the filtrations
    for x, (y, s) in enumerate(C.flip):
        assert C.flip[y] == (x, s)
