from math import gcd

import pytest
from hypothesis import given, settings, strategies as st

from floerobs import knot_invariants as ki
from floerobs.knot_invariants import SymmetricLaurent


def L(d):
    return SymmetricLaurent.from_dict(d)


def test_alexander_examples():
    assert ki.alexander(ki.figure_eight()) == L({1: -1, 0: 3, -1: -1})
    assert ki.alexander(ki.torus(2, 3)) == L({1: 1, 0: -1, -1: 1})
    assert ki.alexander(ki.unknot()) == L({0: 1})
    assert ki.alexander(ki.two_bridge(1, 1)) == L({0: 1})
    assert ki.alexander(ki.torus(3, 4)) == L({3: 1, 2: -1, 0: 1, -2: -1, -3: 1})


def test_signature_examples():
    assert ki.signature(ki.figure_eight()) == 0
    assert ki.signature(ki.torus(2, 3)) == -2
    assert ki.signature(ki.torus(2, 5)) == -4
    assert ki.signature(ki.torus(3, 7)) == -8


def test_two_bridge_family():
    # values frozen under the fixed diagram convention
    table = {19: (6, 1), 29: (8, 1), 43: (14, 1), 53: (16, 1), 67: (22, 1), 77: (24, 1)}
    for p, (sig, arf) in table.items():
        K = ki.two_bridge(p, 3)
        assert ki.signature(K) == sig
        assert ki.arf(K) == arf
        assert ki.determinant(K) == p
    assert ki.alexander(ki.two_bridge(19, 3)) == L({3: 2, 2: -3, 1: 3, 0: -3, -1: 3, -2: -3, -3: 2})


def test_determinant_and_arf_examples():
    assert ki.determinant(ki.figure_eight()) == 5
    assert ki.determinant(ki.two_bridge(19, 3)) == 19
    assert ki.determinant(ki.torus(2, 3)) == 3
    assert ki.arf(ki.figure_eight()) == 1
    assert ki.arf(ki.torus(2, 3)) == 1
    assert ki.arf(ki.unknot()) == 0


def test_rohlin_surgery():
    assert ki.rohlin_surgery(ki.figure_eight(), 1) == 1
    assert ki.rohlin_surgery(ki.figure_eight(), 2) == 0
    K = ki.torus(3, 7)
    assert ki.rohlin_surgery(K, 3) == ki.arf(K) == 0
    with pytest.raises(ValueError):
        ki.rohlin_surgery(K, 0)


def test_parse_and_errors():
    assert ki.parse_knot("torus:2,3") == ki.torus(2, 3)
    assert ki.parse_knot("mirror:twobridge:19,3") == ki.two_bridge(19, 3).mirror()
    assert ki.parse_knot("seifert:[[1,1],[0,-1]]") == ki.explicit([[1, 1], [0, -1]])
    for bad in ("torus:3,3", "torus:2,4", "twobridge:8,3", "twobridge:9,3", "knot:1"):
        with pytest.raises(ki.InvalidKnot):
            ki.parse_knot(bad)
    with pytest.raises(ki.InvalidKnot):
        ki.explicit([[1, 0], [0, 1]])


def test_explicit_matrix_matches_figure_eight():
    K = ki.explicit([[1, 1], [0, -1]])
    assert ki.alexander(K) == ki.alexander(ki.figure_eight())
    assert ki.signature(K) == 0


def test_lspace_form():
    assert ki.is_lspace_form(ki.alexander(ki.torus(3, 4)))
    assert not ki.is_lspace_form(ki.alexander(ki.figure_eight()))


def admissible(pmax=49):
    return [(p, q) for p in range(3, pmax + 1, 2) for q in range(1, p) if gcd(p, q) == 1]


def test_determinant_equals_p_up_to_99():
    for p, q in admissible(99):
        assert ki.determinant(ki.two_bridge(p, q)) == p


@settings(deadline=None)
@given(st.sampled_from(admissible()))
def test_seifert_matrix_matches_closed_formula(pq):
    p, q = pq
    assert ki.alexander(ki.two_bridge(p, q)) == ki.two_bridge_alexander_formula(p, q)


@settings(deadline=None)
@given(st.sampled_from(admissible()))
def test_normalization_and_symmetry(pq):
    D = ki.alexander(ki.two_bridge(*pq))
    assert D(1) == 1
    assert all(D[j] == D[-j] for j in range(-D.degree, D.degree + 1))
    assert ki.signature(ki.two_bridge(*pq)) % 2 == 0


@settings(deadline=None)
@given(st.integers(2, 9), st.integers(3, 13))
def test_torus_count_matches_seifert_matrix(p, q):
    if p >= q or gcd(p, q) != 1 or (p - 1) * (q - 1) > 40:
        return
    K = ki.torus(p, q)
    V = ki.seifert_matrix(K)
    S = [[V[i][j] + V[j][i] for j in range(len(V))] for i in range(len(V))]
    from floerobs._linalg import symmetric_signature
    assert symmetric_signature(S) == ki.signature(K)
    assert ki.signature(K.mirror()) == -ki.signature(K)
    Vm = ki.seifert_matrix(K.mirror())
    Sm = [[Vm[i][j] + Vm[j][i] for j in range(len(Vm))] for i in range(len(Vm))]
    assert symmetric_signature(Sm) == -ki.signature(K)
    assert ki.alexander_from_seifert(V) == ki.torus_alexander(p, q)


def test_two_bridge_det_matches_alexander():
    for p, q in [(19, 3), (29, 3), (21, 8), (35, 11)]:
        K = ki.two_bridge(p, q)
        assert abs(ki.alexander(K)(-1)) == ki.determinant(K)


@settings(deadline=None)
@given(st.sampled_from(admissible()))
def test_arf_depends_on_det_mod_8(pq):
    K = ki.two_bridge(*pq)
    r = ki.determinant(K) % 8
    assert ki.arf(K) == (0 if r in (1, 7) else 1)
    assert ki.signature(K.mirror()) == -ki.signature(K)
