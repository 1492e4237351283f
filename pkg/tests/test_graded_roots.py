from math import gcd

import pytest
from hypothesis import given, settings, strategies as st

from floerobs import knot_invariants as ki
from floerobs.floer_space import (FloerPlus, h_invariant, is_h_negative, is_h_positive,
                                  orientation_reverse)
from floerobs.graded_roots import (SeifertData, UnsupportedFamily, brieskorn_from_surgery,
                                   brieskorn_invariants, casson, d_invariant, delta_function,
                                   delta_semigroup, hf_plus, k_squared_plus_s, load_fixture,
                                   milnor_signature, parse_brieskorn, root_towers,
                                   seifert_invariants, tau_sequence, _frobenius_bound)
from floerobs.lefschetz import product_case_casson
from floerobs.qu_modules import FiniteTower as T, towers_from_ranks
from floerobs.surgery_formula import surgery_for_knot


def triples(limit=40):
    out = []
    for a in range(2, 8):
        for b in range(a + 1, 14):
            for c in range(b + 1, limit):
                if gcd(a, b) == gcd(a, c) == gcd(b, c) == 1 and a * b * c <= 2000:
                    out.append((a, b, c))
    return out


def test_known_packages():
    table = {
        (2, 3, 5): (FloerPlus(2), -1),
        (2, 3, 7): (FloerPlus(0, (T(-1, 1),)), -1),
        (2, 3, 11): (FloerPlus(2, (T(1, 1),)), -2),
        (2, 3, 13): (FloerPlus(0, (T(-1, 1), T(-1, 1))), -2),
    }
    for a, (M, lam) in table.items():
        S = SeifertData(*a)
        assert hf_plus(S) == M
        assert casson(S) == lam
    assert d_invariant(SeifertData(2, 7, 13)) == 4 and casson(SeifertData(2, 7, 13)) == -6
    assert d_invariant(SeifertData(3, 5, 7)) == 2 and casson(SeifertData(3, 5, 7)) == -4


def test_tau_examples():
    # one stem for the Poincare sphere, one extra leaf for Sigma(2,3,7)
    assert root_towers(tau_sequence(SeifertData(2, 3, 5)).values) == []
    assert len(root_towers(tau_sequence(SeifertData(2, 3, 7)).values)) == 1
    tau = tau_sequence(SeifertData(2, 3, 11))
    assert tau.values[0] == 0 and len(root_towers(tau.values)) >= 1


def test_orientation_and_casson_signs():
    S = SeifertData(2, 3, 7)
    R = hf_plus(S.reversed())
    assert R == FloerPlus(0, (T(0, 1),)) and is_h_positive(R)
    assert casson(SeifertData(2, 3, 5, -1)) == 1
    assert milnor_signature(SeifertData(2, 3, 5)) == -8


def test_parse():
    assert parse_brieskorn("brieskorn:2,3,7") == SeifertData(2, 3, 7)
    assert parse_brieskorn("7,2,3,-") == SeifertData(2, 3, 7, -1)
    assert parse_brieskorn("brieskorn:2,3,7,-").label() == "-Sigma(2,3,7)"
    for bad in ("2,4,7", "1,2,3", "2,3"):
        with pytest.raises(ValueError):
            parse_brieskorn(bad)


def test_overflow_guard():
    with pytest.raises(OverflowError):
        tau_sequence(SeifertData(2, 3, 10007))
    with pytest.raises(OverflowError):
        milnor_signature(SeifertData(2, 3, 10007))


def test_unsupported_surgeries():
    with pytest.raises(UnsupportedFamily):
        brieskorn_from_surgery(ki.two_bridge(19, 3), 1)
    with pytest.raises(UnsupportedFamily):
        brieskorn_from_surgery(ki.figure_eight(), 2)
    with pytest.raises(UnsupportedFamily):
        brieskorn_from_surgery(ki.torus(2, 3), 0)


def test_fixture_rows_match_cone():
    fixture = load_fixture()
    for row in fixture["families"]:
        K = ki.parse_knot(row["knot"])
        ns = [row["only_abs_n"]] if row.get("only_abs_n") else [1, 2, 3]
        for n in ns:
            n = n * row["n_sign"]
            assert surgery_for_knot(K, n) == hf_plus(brieskorn_from_surgery(K, n, fixture)), (K, n)


def test_brieskorn_invariants():
    A = brieskorn_invariants(SeifertData(2, 3, 7))
    assert A.rohlin == 1 and A.extra["casson"] == -1 and h_invariant(A.floer) == 0
    assert brieskorn_invariants(SeifertData(2, 3, 5)).rohlin == 1


def test_k_squared_plus_s():
    assert k_squared_plus_s(SeifertData(2, 3, 5)) == 8
    assert k_squared_plus_s(SeifertData(2, 3, 7)) == 0


@settings(max_examples=50, deadline=None)
@given(st.sampled_from(triples()))
def test_delta_matches_semigroup(a):
    S = SeifertData(*a)
    N0 = _frobenius_bound(S)
    vals = delta_function(S, max(N0, 0) + 1)
    for n in range(0, N0 + 1):
        assert vals[n] == delta_semigroup(S, n)


@settings(max_examples=30, deadline=None)
@given(st.sampled_from(triples()))
def test_numba_and_numpy_agree(a):
    S = SeifertData(*a)
    assert (delta_function(S, 500, use_numba=True) == delta_function(S, 500, use_numba=False)).all()
    assert milnor_signature(S, use_numba=True) == milnor_signature(S, use_numba=False)


def _sublevel_ranks(tau):
    """Rank of U^r from level k to k - r, by scanning components of {tau <= level}."""
    def comps(level):
        out, cur = [], []
        for n, v in enumerate(tau):
            if v <= level:
                cur.append(n)
            elif cur:
                out.append(cur)
                cur = []
        if cur:
            out.append(cur)
        return out

    def rank(t, b):
        low = set(n for n, v in enumerate(tau) if v <= b)
        return sum(1 for c in comps(t) if low.intersection(c))
    return rank


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(triples()))
def test_root_towers_against_rank_decomposition(a):
    tau = tau_sequence(SeifertData(*a)).values
    top = max(tau) + 1  # every component has merged by here
    rank = _sublevel_ranks(tau)
    levels = list(range(min(tau), top + 1))
    # towers in "level" units: degree 2k
    found = towers_from_ranks(lambda t, b: rank(t // 2, b // 2), [2 * k for k in levels], hi=2 * top)
    finite = sorted((t.top // 2 - t.length + 1, t.top // 2 + 1) for t in found if t.top < 2 * top)
    assert finite == root_towers(tau)


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(triples()))
def test_positive_orientation_is_h_negative(a):
    M = hf_plus(SeifertData(*a))
    assert is_h_negative(M)


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(triples()))
def test_casson_equals_h_plus_euler(a):
    for o in (1, -1):
        S = SeifertData(*a, orientation=o)
        assert product_case_casson(hf_plus(S)) == casson(S)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(triples()))
def test_reversal_commutes(a):
    S = SeifertData(*a)
    assert orientation_reverse(hf_plus(S)) == hf_plus(S.reversed())
    assert d_invariant(S.reversed()) == -d_invariant(S) == -hf_plus(S).d


@settings(max_examples=30, deadline=None)
@given(st.sampled_from(triples()))
def test_seifert_invariants_normalized(a):
    S = SeifertData(*a)
    e0, ws = seifert_invariants(S)
    A = S.a1 * S.a2 * S.a3
    assert all(0 < w < al for w, al in zip(ws, S.alphas))
    assert e0 * A + sum(w * A // al for w, al in zip(ws, S.alphas)) == -1
    tau = tau_sequence(S)
    assert tau.values[0] == 0
