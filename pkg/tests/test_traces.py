import math

import numpy as np
import pytest
from hypothesis import given, settings

from conftest import coefficients
from sinespec import (
    Coefficient,
    CoefficientSet,
    DisputeVariant,
    FormulaId,
    KIND_FOURTH_ORDER,
    OperatorSpec,
    PreconditionError,
    ZERO,
    asym_residuals,
    dispute,
    localization,
    partial_sums,
    rhs,
    spectra_for,
    spectrum,
    summand,
    tail_accelerate,
    verify,
)

PI = math.pi
COS1 = Coefficient.harmonic_cos(1)
COS2 = Coefficient.harmonic_cos(2)
SIN2 = Coefficient.harmonic_sin(2)


# -- summand -------------------------------------------------------------------


def test_trf3_summand_vanishes_for_constant_p():
    cs = CoefficientSet(p=Coefficient.constant(1.5))
    sp = spectra_for(FormulaId.TRF3, cs, 32)
    for n in (1, 2, 5, 10):
        assert abs(summand(FormulaId.TRF3, n, sp, cs)) < 1e-7


def test_glf_summand_vanishes_for_constant_p():
    cs = CoefficientSet(p=Coefficient.constant(-0.75))
    sp = spectra_for(FormulaId.GLF, cs, 32)
    for n in (1, 3, 8):
        assert abs(summand(FormulaId.GLF, n, sp, cs)) < 1e-10


def test_trf3_summand_leading_term_cos_2pi():
    # first summand approaches -c_2(V) = -pi^2; frozen from refined runs
    cs = CoefficientSet(p=COS2)
    sp = spectra_for(FormulaId.TRF3, cs, 256)
    s1 = summand(FormulaId.TRF3, 1, sp, cs)
    assert s1 == pytest.approx(-9.7319656720, abs=1e-6)
    assert abs(s1 + PI**2) < 0.2


def test_summand_rejects_untrusted_index():
    cs = CoefficientSet(p=COS2)
    sp = spectra_for(FormulaId.TRF3, cs, 32)
    with pytest.raises(PreconditionError):
        summand(FormulaId.TRF3, 33, sp, cs)


def test_summand_rejects_nonzero_mean_q():
    cs = CoefficientSet(p=COS2, q=Coefficient.constant(0.3))
    with pytest.raises(PreconditionError):
        rhs(FormulaId.TRF3, cs)


# -- right sides -----------------------------------------------------------------


def test_rhs_trf3_cos_2pi():
    val = rhs(FormulaId.TRF3, CoefficientSet(p=COS2))
    assert val == pytest.approx(-0.125 - PI**2, rel=1e-14)


def test_rhs_s01_cos_pi():
    assert rhs(FormulaId.S01, CoefficientSet(p=COS1)) == pytest.approx(-0.375, rel=1e-14)


def test_rhs_s01_cos_2pi():
    assert rhs(FormulaId.S01, CoefficientSet(p=COS2)) == pytest.approx(PI**2 - 0.375, rel=1e-14)


def test_rhs_glf_two_cosines():
    val = rhs(FormulaId.GLF, CoefficientSet(p=COS1 + COS2))
    assert val == pytest.approx(0.5, rel=1e-14)


def test_rhs_tr3_cos_2pi():
    assert rhs(FormulaId.TR3, CoefficientSet(Q=COS2)) == pytest.approx(-0.5, rel=1e-14)


def test_rhs_trf3_equals_trq0_when_q_zero():
    for p in (COS1, COS2, COS1 + COS2, Coefficient(u=(0.0, 0.5, -1.0, 0.25))):
        a = rhs(FormulaId.TRF3, CoefficientSet(p=p))
        b = rhs(FormulaId.TRQ0, CoefficientSet(p=p))
        assert a == pytest.approx(b, rel=1e-12)


@given(coefficients(max_degree=5))
@settings(max_examples=20)
def test_rhs_trf3_trq0_identity_random(p):
    a = rhs(FormulaId.TRF3, CoefficientSet(p=p))
    b = rhs(FormulaId.TRQ0, CoefficientSet(p=p))
    assert a == pytest.approx(b, rel=1e-12, abs=1e-12)


def test_rhs_trs_reduces_trf3_for_constant_p():
    q = COS2
    p = Coefficient.constant(2.0)
    assert rhs(FormulaId.TRS, CoefficientSet(p=p, q=q)) == rhs(
        FormulaId.TRF3, CoefficientSet(p=p, q=q)
    )


def test_rhs_ipr1_uses_shift_point():
    cs = CoefficientSet(p=COS2)
    # V = 2 pi^2 cos(2 pi tau); V(1/4) = 0
    assert rhs(FormulaId.IPR1, cs, tau=0.25) == pytest.approx(-0.125, rel=1e-12)


# -- tail acceleration --------------------------------------------------------------


def test_accelerated_sum_zero_for_constant_coefficients():
    cs = CoefficientSet(p=Coefficient.constant(1.0))
    sp = spectra_for(FormulaId.TRF3, cs, 64)
    parts = partial_sums(FormulaId.TRF3, sp, cs, 16)
    for mode in ("fourier", "richardson", "none"):
        assert abs(tail_accelerate(FormulaId.TRF3, parts, cs, 16, mode)) < 1e-6


def test_fourier_tail_consistent_across_truncations():
    # p = 0, q = cos 2 pi x: the accelerated value is already settled at
    # K = 16 (raw sums at very large K are no oracle here: each summand
    # subtracts (pi n)^4 ~ 4e11 whose ulp is ~3e-5, so hundreds of terms
    # accumulate more rounding than the tail model leaves behind)
    cs = CoefficientSet(q=COS2)
    sp = spectra_for(FormulaId.TRS, cs, 256)
    parts = partial_sums(FormulaId.TRS, sp, cs, 64)
    acc_16 = tail_accelerate(FormulaId.TRS, parts, cs, 16, "fourier")
    acc_64 = tail_accelerate(FormulaId.TRS, parts, cs, 64, "fourier")
    assert acc_16 == pytest.approx(-0.5, abs=1e-3)
    assert acc_16 == pytest.approx(acc_64, abs=1e-3)


def test_glf_fourier_acceleration_cos_2pi():
    cs = CoefficientSet(p=COS2)
    sp = spectra_for(FormulaId.GLF, cs, 256)
    parts = partial_sums(FormulaId.GLF, sp, cs, 64)
    acc = tail_accelerate(FormulaId.GLF, parts, cs, 64, "fourier")
    assert acc == pytest.approx(0.5, abs=1e-3)


def test_richardson_formula():
    parts = np.array([1.0 - 1.0 / k for k in range(1, 33)])
    acc = tail_accelerate(FormulaId.TRQ0, parts, CoefficientSet(), 32, "richardson")
    assert acc == pytest.approx(1.0, abs=1e-12)


def test_fourier_mode_rejected_for_trq0():
    parts = np.zeros(16)
    with pytest.raises(ValueError):
        tail_accelerate(FormulaId.TRQ0, parts, CoefficientSet(), 16, "fourier")


def test_small_k_rejected():
    with pytest.raises(PreconditionError):
        tail_accelerate(FormulaId.GLF, np.zeros(8), CoefficientSet(), 4)


# -- verify ---------------------------------------------------------------------------


def test_verify_trf3_constant_p_gap_is_solver_noise():
    rep = verify(FormulaId.TRF3, CoefficientSet(p=Coefficient.constant(1.0)), n=64, k=16)
    assert abs(rep.gap) < 1e-7


def test_verify_cor1_cos_2pi():
    rep = verify(FormulaId.COR1, CoefficientSet(p=COS2, Q=COS2), n=128, k=48)
    assert rep.rhs == pytest.approx(-0.5, rel=1e-14)
    assert abs(rep.gap) < 1e-2


def test_verify_reports_rate_exponent_for_slow_tails():
    # q with odd frequencies leaves a genuinely 1/K partial-sum tail
    q = Coefficient.harmonic_sin(1) - Coefficient.constant(2.0 / PI)
    rep = verify(FormulaId.TRF3, CoefficientSet(q=q), n=128, k=48)
    assert rep.rate_exponent <= -0.8


def test_verify_center_q_records_shift():
    q = COS2 + Coefficient.constant(0.7)
    with pytest.raises(PreconditionError):
        verify(FormulaId.TRS, CoefficientSet(q=q), n=64, k=16)
    rep = verify(FormulaId.TRS, CoefficientSet(q=q), n=64, k=16, center_q=True)
    assert rep.q0_shift == pytest.approx(0.7, rel=1e-12)
    assert rep.rhs == pytest.approx(-0.5 + 0.0, abs=1e-12)  # -(q(0)+q(1))/4 after centering


def test_verify_rejects_k_beyond_trust():
    with pytest.raises(PreconditionError):
        verify(FormulaId.GLF, CoefficientSet(p=COS2), n=16, k=17)


def test_cross_formula_consistency_through_squared_operator():
    # verify(TRF3) - verify(S01) must match the function-perturbation sum
    # sum(mu_n + P - alpha_n^2) for the same p, q = 0
    cs = CoefficientSet(p=COS2)
    n, k = 256, 64
    rep3 = verify(FormulaId.TRF3, cs, n=n, k=k)
    rep0 = verify(FormulaId.S01, cs, n=n, k=k)
    mu = spectra_for(FormulaId.TRF3, cs, n)["mu"]
    alpha = spectra_for(FormulaId.S01, cs, n)["alpha"]
    Q = ZERO - COS2.derivative(2) - COS2 * COS2
    P = 0.5
    terms = mu.vals[:k] + P - alpha.vals[:k] ** 2
    parts = np.cumsum(terms)
    bridge_cs = CoefficientSet(p=COS2, Q=Q)
    acc = tail_accelerate(FormulaId.COR1, parts, bridge_cs, k, "fourier")
    assert rep3.accelerated - rep0.accelerated == pytest.approx(acc, abs=2.1e-2)
    # and the bridge sum itself matches its closed form -(Q(0)+Q(1)+2P)/4
    # within the combined unmodeled-tail budget of the three sums
    fQ = Q.functionals()
    assert acc == pytest.approx(-(fQ.end0 + fQ.end1 + 2 * P) / 4.0, abs=2.1e-2)


def test_trace_report_serialization_round_trip():
    rep = verify(FormulaId.GLF, CoefficientSet(p=COS1), n=64, k=16)
    d = rep.to_dict()
    assert d["formula"] == "GLF"
    assert len(d["partial"]) == 16
    rows = list(rep.csv_rows())
    assert rows[0][0] == 1 and rows[-1][0] == 16
    assert rows[3][2] == rep.accelerated


# -- eigenvalue expansion residuals ----------------------------------------------------


def test_asym_residuals_vanish_for_constant_p():
    rep = asym_residuals(OperatorSpec(KIND_FOURTH_ORDER, p=Coefficient.constant(2.0)), n=64, k=16)
    assert np.max(np.abs(rep.residuals)) < 1e-7


def test_asym_residuals_cos_2pi_bounded():
    rep = asym_residuals(OperatorSpec(KIND_FOURTH_ORDER, p=COS2), n=256, k=64)
    assert np.isfinite(rep.fitted_c)
    assert rep.fitted_c < 2.0
    ns = np.arange(8, 65)
    assert np.max(ns**2 * np.abs(rep.residuals[7:])) < 2.0


def test_asym_residuals_pure_q_bounded():
    rep = asym_residuals(OperatorSpec(KIND_FOURTH_ORDER, q=SIN2), n=256, k=64)
    assert np.isfinite(rep.fitted_c)
    assert rep.fitted_c < 1.0


def test_asym_rejects_second_order_spec():
    from sinespec import KIND_SECOND_ORDER

    with pytest.raises(PreconditionError):
        asym_residuals(OperatorSpec(KIND_SECOND_ORDER, p=COS2), n=64, k=16)


def test_trf3_summand_plus_vhat_decays_quadratically():
    cs = CoefficientSet(p=COS2)
    sp = spectra_for(FormulaId.TRF3, cs, 256)
    k = 64
    terms = np.array([summand(FormulaId.TRF3, n, sp, cs) for n in range(1, k + 1)])
    vhat = np.zeros(k)
    vhat[0] = PI**2  # c_2 of V = 2 pi^2 cos(2 pi x)
    ns = np.arange(1, k + 1)
    assert np.max((ns**2 * np.abs(terms + vhat))[7:]) < 2.0


# -- localization -----------------------------------------------------------------------


def test_localization_zero_operator():
    rep = localization(spectrum(OperatorSpec(KIND_FOURTH_ORDER), 64))
    assert rep.n0 == 0
    assert rep.violations == ()


def test_localization_constant_p():
    rep = localization(spectrum(OperatorSpec(KIND_FOURTH_ORDER, p=Coefficient.constant(1.0)), 64))
    assert rep.n0 == 0
    assert rep.violations == ()


def test_localization_cos_2pi():
    rep = localization(spectrum(OperatorSpec(KIND_FOURTH_ORDER, p=COS2), 128))
    assert rep.violations == ()
    assert rep.n0 <= 2


def test_localization_rejects_second_order():
    from sinespec import KIND_SECOND_ORDER

    with pytest.raises(PreconditionError):
        localization(spectrum(OperatorSpec(KIND_SECOND_ORDER, p=COS2), 32))


# -- disputes ------------------------------------------------------------------------------


def test_dikii_variant_disagreement_magnitude():
    rep = dispute(DisputeVariant.DIKII_TRFD1, COS2, n=256, k=64)
    assert rep.disagreement == pytest.approx(2 * PI**2, abs=1e-12)
    assert rep.verdict == "reference"
    # computed sum misses the disputed side by the full 2 pi^2
    assert abs(rep.computed_lhs - rep.variant_rhs) == pytest.approx(2 * PI**2, abs=0.1)


def test_dikii_consistent_variant_matches():
    rep = dispute(DisputeVariant.DIKII_D2, COS2, n=256, k=64)
    assert rep.verdict == "indistinguishable"
    assert abs(rep.computed_lhs - rep.variant_rhs) < 1e-2


def test_dikii_degenerate_endpoint_curvature():
    # p = cos(pi x): p''(0) + p''(1) = 0, the two variants coincide
    rep = dispute(DisputeVariant.DIKII_TRFD1, COS1, n=128, k=48)
    assert rep.disagreement == pytest.approx(0.0, abs=1e-12)
    assert rep.verdict == "indistinguishable"


def test_dikii_rejects_sine_component():
    with pytest.raises(PreconditionError):
        dispute(DisputeVariant.DIKII_D2, SIN2, n=64, k=16)


def test_sadovnichii_third_term():
    q = COS2.derivative(2) + COS2 * COS2
    rep = dispute(DisputeVariant.SADOVNICHII_TRS, COS2, q=q, n=256, k=64)
    assert rep.reference_rhs == pytest.approx(0.25, rel=1e-12)
    assert rep.variant_rhs == pytest.approx(0.5, rel=1e-12)
    assert rep.verdict == "reference"
    assert rep.computed_lhs == pytest.approx(0.25, abs=1e-2)
    # discrimination at >= 10x tolerance
    assert abs(rep.computed_lhs - rep.variant_rhs) >= 10 * abs(rep.computed_lhs - rep.reference_rhs)


def test_sadovnichii_requires_perfect_square():
    with pytest.raises(PreconditionError):
        dispute(DisputeVariant.SADOVNICHII_TRS, COS2, q=SIN2, n=64, k=16)
    with pytest.raises(PreconditionError):
        dispute(DisputeVariant.SADOVNICHII_TRS, COS2, q=None, n=64, k=16)
