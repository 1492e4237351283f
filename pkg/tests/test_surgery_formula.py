import pytest

from floerobs import knot_invariants as ki
from floerobs.floer_space import FloerPlus, h_invariant, is_h_negative, is_h_positive
from floerobs.lefschetz import product_case_casson
from floerobs.qu_modules import FiniteTower as T, GradedModule, InfiniteTower, shift
from floerobs.surgery_formula import (MappingConeSpec, SubquotientSpec, SurgeryError, a_plus,
                                      e_normalization, model_for, surgered_manifold_invariants,
                                      surgery_for_knot, surgery_hf_plus)
from floerobs.thin_cfk import ThinModelSpec, thin_model

FIG8 = model_for(ki.figure_eight())
UNKNOT = model_for(ki.unknot())
# the tau = 2 thin model: mirror trefoil
TAU2 = thin_model(ThinModelSpec(ki.alexander(ki.torus(2, 3)), 2))


def closed_form_d(tau):
    # 2 min(0, -ceil(-tau/4))
    return 2 * min(0, tau // 4)


def test_a_plus_unknot():
    for s in (-2, 0, 3):
        for c in ("max", "i", "min", "j"):
            M = a_plus(SubquotientSpec(UNKNOT, c, s))
            assert M.finite == ()
    assert a_plus(SubquotientSpec(UNKNOT, "i", 0)) == GradedModule((), InfiniteTower("+", 0))


def test_a_plus_vertical_quotient_is_shifted_tower():
    for C in (FIG8, TAU2, model_for(ki.two_bridge(19, 3))):
        for s in (-1, 0, 2):
            M = a_plus(SubquotientSpec(C, "j", s))
            assert M == GradedModule((), InfiniteTower("+", 2 * s))


def test_a_plus_figure_eight():
    M = a_plus(SubquotientSpec(FIG8, "max", 0))
    assert M == GradedModule((T(-1, 1),), InfiniteTower("+", 0))


def test_e_normalization():
    assert e_normalization(SubquotientSpec(TAU2, "max", 0)) == 0
    assert e_normalization(SubquotientSpec(TAU2, "max", 1)) == 0
    assert e_normalization(SubquotientSpec(UNKNOT, "max", 0)) == 0


def _relative(M):
    return shift(M, M.infinite.anchor)


def test_conjugation_symmetry():
    # isomorphic as relatively graded modules; absolute gradings differ by 2s
    for C in (FIG8, TAU2, model_for(ki.torus(3, 4)), model_for(ki.two_bridge(19, 3))):
        for s in range(0, 4):
            Mp = a_plus(SubquotientSpec(C, "max", s))
            Mm = a_plus(SubquotientSpec(C, "max", -s))
            assert _relative(Mp) == _relative(Mm)
            assert Mm.infinite.anchor == Mp.infinite.anchor - 2 * s


def test_tau_positive_a_plus_above_tower_bottom():
    C = model_for(ki.two_bridge(19, 3))
    for s in range(-3, 4):
        M = a_plus(SubquotientSpec(C, "max", s))
        assert all(g >= M.infinite.anchor for t in M.finite for g in t.support())


def test_unknot_surgeries_give_s3():
    for n in (1, 2, 5):
        assert surgery_hf_plus(MappingConeSpec(UNKNOT, n)) == FloerPlus(0)


def test_figure_eight_surgeries():
    for n in (1, 2):
        M = surgery_for_knot(ki.figure_eight(), n)
        assert M == FloerPlus(0, (T(-1, 1),) * n)
        assert is_h_negative(M)
    M = surgery_for_knot(ki.figure_eight(), -1)
    assert M == FloerPlus(0, (T(0, 1),))
    assert is_h_positive(M)


def test_trefoil_surgeries():
    assert surgery_for_knot(ki.torus(2, 3), 1) == FloerPlus(-2)
    assert surgery_for_knot(ki.torus(2, 3), -1) == FloerPlus(0, (T(-1, 1),))
    M = surgery_for_knot(ki.torus(2, 3).mirror(), 1)
    assert M == FloerPlus(0, (T(0, 1),))
    assert M.d == closed_form_d(2)


def test_closed_form_and_n_independence():
    for K in (ki.figure_eight(), ki.torus(2, 3), ki.torus(2, 3).mirror()):
        tau = ki.signature(K)
        ds = {surgery_for_knot(K, n).d for n in (1, 2)}
        assert ds == {closed_form_d(tau)}


def test_independent_of_range_and_truncation():
    K = ki.figure_eight()
    base = surgery_for_knot(K, 2)
    assert surgery_for_knot(K, 2, s_range=4, trunc=8) == base
    assert surgery_for_knot(K, 2, s_range=5, trunc=10) == base
    K = ki.two_bridge(19, 3)
    base = surgery_for_knot(K, 1)
    assert surgery_for_knot(K, 1, s_range=6, trunc=8) == base


def test_h_positive_for_thin_tau_positive_and_lspace():
    for K, n in ((ki.two_bridge(19, 3), 1), (ki.torus(2, 3).mirror(), 2), (ki.torus(3, 4), 1),
                 (ki.torus(2, 5), 2)):
        assert is_h_positive(surgery_for_knot(K, n))


def test_casson_cross_check():
    # lambda = h + chi(HF_red) must equal n Delta''(1)/2
    for K, n in ((ki.figure_eight(), 1), (ki.figure_eight(), 3), (ki.torus(2, 3), 1),
                 (ki.torus(2, 3).mirror(), 2), (ki.torus(3, 4), 1), (ki.two_bridge(19, 3), 1)):
        M = surgery_for_knot(K, n)
        assert product_case_casson(M) == ki.casson_surgery(K, n), (K, n)


def test_surgered_manifold_invariants():
    A = surgered_manifold_invariants(ki.figure_eight(), 1)
    assert A.floer.d == 0 and is_h_negative(A.floer) and A.rohlin == 1
    A = surgered_manifold_invariants(ki.unknot(), 5)
    assert A.floer == FloerPlus(0) and A.rohlin == 0
    A = surgered_manifold_invariants(ki.two_bridge(19, 3), 1)
    assert A.floer.d == closed_form_d(6) and A.rohlin == ki.arf(ki.two_bridge(19, 3)) == 1
    assert h_invariant(A.floer) == 0


def test_errors():
    with pytest.raises(ValueError):
        surgery_for_knot(ki.figure_eight(), 0)
    with pytest.raises(ValueError):
        surgery_hf_plus(MappingConeSpec(FIG8, 0))
    with pytest.raises(ValueError):
        surgery_hf_plus(MappingConeSpec(model_for(ki.two_bridge(19, 3)), 1, s_range=1))
    with pytest.raises(SurgeryError):
        surgery_for_knot(ki.explicit([[1, 1], [0, -1]]), 1)
    with pytest.raises(ValueError):
        a_plus(SubquotientSpec(FIG8, "sum", 0))
