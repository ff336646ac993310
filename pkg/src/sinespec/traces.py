"""Regularized trace identities over the sine-basis spectra.

Each formula id names one identity between a regularized eigenvalue sum
and a closed-form functional of the coefficients (p0 = int p,
P = (p'(1) - p'(0)) + int p^2, V = q - p''/2; alpha = second-order
eigenvalues, mu = fourth-order, lambda = fourth-order plus Q,
nu = squared-second-order plus Q):

    GLF   sum(alpha_n - (pi n)^2 + p0)                  = (p(0)+p(1))/4 - p0/2
    S01   sum(alpha_n^2 - ((pi n)^2-p0)^2 - (P-p0^2)/2) = (P+p0^2)/4
                                     - (p(0)^2+p(1)^2)/4 - (p''(0)+p''(1))/8
    TRF3  sum(mu_n - ((pi n)^2-p0)^2 + (P+p0^2)/2)      = -(P-p0^2+V(0)+V(1))/4
    TRS   TRF3 with constant p                          = -(q(0)+q(1))/4
    TRQ0  TRF3 with q = 0                               = -(P-p0^2)/4 + (p''(0)+p''(1))/8
    TR3   sum(lambda_n - mu_n - Q0)                     = -(Q(0)+Q(1)-2 Q0)/4
    COR1  sum(nu_n - Q0 - alpha_n^2)                    = -(Q(0)+Q(1)-2 Q0)/4
    IPR1  TRF3 for the tau-shifted family               = -(P-p0^2+2 V(tau))/4
    IP2   sum(nu_n(tau) - alpha_n(tau)^2)               = -Q(tau)/2

Counterterms are evaluated in the expanded form
mu_n - (pi n)^4 + 2 p0 (pi n)^2 - p0^2 to limit cancellation, and the
partial sums are accumulated with compensated summation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from enum import Enum

import numpy as np

from .coeffs import ZERO, Coefficient, big_P, build_V
from .errors import PreconditionError
from .linalg import compensated_cumsum
from .operators import (
    KIND_FOURTH_ORDER,
    KIND_SECOND_ORDER,
    KIND_SQUARE_PLUS_Q,
    OperatorSpec,
)
from .eigensolve import Spectrum, spectrum

__all__ = [
    "FormulaId",
    "CoefficientSet",
    "TraceReport",
    "DisputeVariant",
    "DisputeReport",
    "AsymptoticsReport",
    "LocalizationReport",
    "DEFAULT_TOLERANCES",
    "MEAN_TOL",
    "check_preconditions",
    "spectra_for",
    "summand",
    "partial_sums",
    "rhs",
    "tail_accelerate",
    "verify",
    "asym_residuals",
    "localization",
    "dispute",
]

MEAN_TOL = 1e-10


class FormulaId(str, Enum):
    GLF = "GLF"
    S01 = "S01"
    TRF3 = "TRF3"
    TRS = "TRS"
    TRQ0 = "TRQ0"
    TR3 = "TR3"
    COR1 = "COR1"
    IPR1 = "IPR1"
    IP2 = "IP2"


# Verification tolerances at the default sizes (N=256, K=64), sized from
# the tail models: 1e-2 where the leftover summand tail is O(1/n^2) with
# an unmodeled constant, 1e-3 for the function-perturbation and
# second-order sums whose leftover decays faster.
DEFAULT_TOLERANCES = {
    FormulaId.GLF: 1e-3,
    FormulaId.TRS: 1e-3,
    FormulaId.TR3: 1e-3,
    FormulaId.COR1: 1e-3,
    FormulaId.IP2: 1e-3,
    FormulaId.S01: 1e-2,
    FormulaId.TRF3: 1e-2,
    FormulaId.TRQ0: 1e-2,
    FormulaId.IPR1: 1e-2,
}

_SECOND_ORDER_FORMULAS = (FormulaId.GLF, FormulaId.S01)
_FOURTH_ORDER_FORMULAS = (FormulaId.TRF3, FormulaId.TRS, FormulaId.TRQ0, FormulaId.IPR1)


@dataclass(frozen=True)
class CoefficientSet:
    """The coefficient functions a formula consumes (unused slots zero)."""

    p: Coefficient = ZERO
    q: Coefficient = ZERO
    Q: Coefficient = ZERO

    def shifted(self, tau: float) -> "CoefficientSet":
        if tau == 0.0:
            return self
        return CoefficientSet(p=self.p.shift(tau), q=self.q.shift(tau), Q=self.Q.shift(tau))

    def digest(self) -> str:
        return f"p:{self.p.short()} q:{self.q.short()} Q:{self.Q.short()}"


def check_preconditions(formula: FormulaId, coeffs: CoefficientSet) -> None:
    """Reject inputs outside the hypothesis class of the chosen identity."""
    formula = FormulaId(formula)
    if formula in (FormulaId.TRF3, FormulaId.TRS, FormulaId.IPR1):
        if abs(coeffs.q.functionals().mean) > MEAN_TOL:
            raise PreconditionError(
                f"{formula.value} requires a zero-mean q (int_0^1 q = 0)"
            )
    if formula == FormulaId.TRS and not coeffs.p.is_constant():
        raise PreconditionError("TRS requires a constant p")
    if formula == FormulaId.TRQ0 and not coeffs.q.is_zero():
        raise PreconditionError("TRQ0 requires q identically zero")
    if formula == FormulaId.IPR1:
        for name, f in (("p", coeffs.p), ("q", coeffs.q)):
            if not f.is_zero() and not f.is_one_periodic():
                raise PreconditionError(f"IPR1 requires 1-periodic {name}")
    if formula == FormulaId.IP2:
        if abs(coeffs.Q.functionals().mean) > MEAN_TOL:
            raise PreconditionError("IP2 requires a zero-mean Q (int_0^1 Q = 0)")
        if not coeffs.Q.is_zero() and not coeffs.Q.is_one_periodic():
            raise PreconditionError("IP2 requires 1-periodic Q")


def spectra_for(formula: FormulaId, coeffs: CoefficientSet, n: int, tau: float = 0.0):
    """Compute the spectra the formula's summand reads, keyed by role."""
    formula = FormulaId(formula)
    if formula in _SECOND_ORDER_FORMULAS:
        return {"alpha": spectrum(OperatorSpec(KIND_SECOND_ORDER, p=coeffs.p, tau=tau), n)}
    if formula in _FOURTH_ORDER_FORMULAS:
        return {
            "mu": spectrum(
                OperatorSpec(KIND_FOURTH_ORDER, p=coeffs.p, q=coeffs.q, tau=tau), n
            )
        }
    if formula == FormulaId.TR3:
        return {
            "mu": spectrum(OperatorSpec(KIND_FOURTH_ORDER, p=coeffs.p, q=coeffs.q, tau=tau), n),
            "lam": spectrum(
                OperatorSpec(KIND_FOURTH_ORDER, p=coeffs.p, q=coeffs.q, Q=coeffs.Q, tau=tau), n
            ),
        }
    # COR1 / IP2: squared second-order operator plus Q, and the bare second-order
    return {
        "nu": spectrum(OperatorSpec(KIND_SQUARE_PLUS_Q, p=coeffs.p, Q=coeffs.Q, tau=tau), n),
        "alpha": spectrum(OperatorSpec(KIND_SECOND_ORDER, p=coeffs.p, tau=tau), n),
    }


def _summand_array(formula: FormulaId, spectra, coeffs: CoefficientSet, k: int) -> np.ndarray:
    ns = np.arange(1, k + 1, dtype=float)
    z2 = (np.pi * ns) ** 2
    z4 = z2 * z2
    fp = coeffs.p.functionals()
    p0 = fp.mean
    if formula == FormulaId.GLF:
        return spectra["alpha"].vals[:k] - z2 + p0
    if formula == FormulaId.S01:
        alpha = spectra["alpha"].vals[:k]
        P = big_P(coeffs.p)
        return alpha * alpha - z4 + 2.0 * p0 * z2 - p0 * p0 - 0.5 * (P - p0 * p0)
    if formula in (FormulaId.TRF3, FormulaId.IPR1):
        mu = spectra["mu"].vals[:k]
        P = big_P(coeffs.p)
        return mu - z4 + 2.0 * p0 * z2 - p0 * p0 + 0.5 * (P + p0 * p0)
    if formula == FormulaId.TRS:
        mu = spectra["mu"].vals[:k]
        return mu - z4 + 2.0 * p0 * z2
    if formula == FormulaId.TRQ0:
        mu = spectra["mu"].vals[:k]
        P = big_P(coeffs.p)
        return mu - z4 + 2.0 * p0 * z2 - p0 * p0 + 0.5 * (P + p0 * p0)
    if formula == FormulaId.TR3:
        Q0 = coeffs.Q.functionals().mean
        return spectra["lam"].vals[:k] - spectra["mu"].vals[:k] - Q0
    if formula == FormulaId.COR1:
        alpha = spectra["alpha"].vals[:k]
        Q0 = coeffs.Q.functionals().mean
        return spectra["nu"].vals[:k] - Q0 - alpha * alpha
    if formula == FormulaId.IP2:
        alpha = spectra["alpha"].vals[:k]
        return spectra["nu"].vals[:k] - alpha * alpha
    raise ValueError(f"unknown formula {formula!r}")


def summand(formula: FormulaId, n: int, spectra, coeffs: CoefficientSet, tau: float = 0.0) -> float:
    """The n-th regularized summand of the chosen formula (1-based n)."""
    formula = FormulaId(formula)
    check_preconditions(formula, coeffs)
    if n < 1:
        raise PreconditionError("summand index must be positive")
    for spec in spectra.values():
        spec.require_trusted(n)
    return float(_summand_array(formula, spectra, coeffs, n)[n - 1])


def partial_sums(formula: FormulaId, spectra, coeffs: CoefficientSet, k: int, tau: float = 0.0) -> np.ndarray:
    """Compensated prefix sums S_1..S_k of the regularized summands."""
    formula = FormulaId(formula)
    check_preconditions(formula, coeffs)
    horizon = min(spec.n_trusted for spec in spectra.values())
    if k > horizon:
        raise PreconditionError(
            f"truncation K={k} exceeds the trust horizon {horizon}"
        )
    return compensated_cumsum(_summand_array(formula, spectra, coeffs, k))


def rhs(formula: FormulaId, coeffs: CoefficientSet, tau: float = 0.0) -> float:
    """Closed-form right side of the chosen identity."""
    formula = FormulaId(formula)
    check_preconditions(formula, coeffs)
    fp = coeffs.p.functionals()
    p0 = fp.mean
    if formula == FormulaId.GLF:
        return (fp.end0 + fp.end1) / 4.0 - p0 / 2.0
    if formula == FormulaId.S01:
        P = big_P(coeffs.p)
        return (
            (P + p0 * p0) / 4.0
            - (fp.end0**2 + fp.end1**2) / 4.0
            - (fp.d2_0 + fp.d2_1) / 8.0
        )
    if formula == FormulaId.TRF3:
        fv = build_V(coeffs.p, coeffs.q).functionals()
        P = big_P(coeffs.p)
        return -0.25 * ((P - p0 * p0) + fv.end0 + fv.end1)
    if formula == FormulaId.TRS:
        fq = coeffs.q.functionals()
        return -0.25 * (fq.end0 + fq.end1)
    if formula == FormulaId.TRQ0:
        P = big_P(coeffs.p)
        return -0.25 * (P - p0 * p0) + 0.125 * (fp.d2_0 + fp.d2_1)
    if formula in (FormulaId.TR3, FormulaId.COR1):
        fQ = coeffs.Q.functionals()
        return -0.25 * (fQ.end0 + fQ.end1 - 2.0 * fQ.mean)
    if formula == FormulaId.IPR1:
        P = big_P(coeffs.p)
        v_at_tau = build_V(coeffs.p, coeffs.q).evaluate(tau - math.floor(tau))
        return -0.25 * ((P - p0 * p0) + 2.0 * v_at_tau)
    if formula == FormulaId.IP2:
        return -0.5 * coeffs.Q.evaluate(tau - math.floor(tau))
    raise ValueError(f"unknown formula {formula!r}")


def _zeta2_tail(k: int) -> float:
    # sum_{n > k} 1/n^2
    return math.pi**2 / 6.0 - sum(1.0 / (n * n) for n in range(1, k + 1))


def _endpoint_tail(g: Coefficient, k: int) -> float:
    """sum_{n > k} c_{2n}(g), closed through the endpoint-jump identity.

    The full series sums to (g(0) + g(1))/4 - g0/2; subtracting the first
    k terms leaves the exact tail of the model.
    """
    fg = g.functionals()
    c = g.cosine_coeffs(2 * k).c
    return ((fg.end0 + fg.end1) / 4.0 - fg.mean / 2.0) - float(c[2::2][:k].sum())


def tail_accelerate(
    formula: FormulaId,
    partial,
    coeffs: CoefficientSet,
    k: int,
    mode: str = "fourier",
    tau: float = 0.0,
) -> float:
    """Accelerated limit of the trace sum from its partial sums.

    ``fourier`` replaces the truncated remainder by the closed-form tail
    of the leading summand model (endpoint-jump series for the V/Q based
    sums, the known 1/(2 pi n)^2 law for GLF, the derivative/square pair
    for S01).  ``richardson`` extrapolates 2 S_{2m} - S_m against a C/K
    tail and needs no model.  ``none`` returns S_k.
    """
    formula = FormulaId(formula)
    partial = np.asarray(partial, dtype=float)
    if k < 8:
        raise PreconditionError("tail acceleration requires K >= 8")
    if partial.size < k:
        raise ValueError("partial sums shorter than K")
    s_k = float(partial[k - 1])
    if mode == "none":
        return s_k
    if mode == "richardson":
        m = k // 2
        return float(2.0 * partial[2 * m - 1] - partial[m - 1])
    if mode != "fourier":
        raise ValueError(f"unknown acceleration mode {mode!r}")
    if formula == FormulaId.TRQ0:
        raise ValueError("fourier tail model is not defined for TRQ0; use richardson")
    cs = coeffs.shifted(tau) if tau != 0.0 else coeffs
    if formula in (FormulaId.TRF3, FormulaId.IPR1, FormulaId.TRS):
        return s_k - _endpoint_tail(build_V(cs.p, cs.q), k)
    if formula in (FormulaId.TR3, FormulaId.COR1, FormulaId.IP2):
        return s_k - _endpoint_tail(cs.Q, k)
    if formula == FormulaId.GLF:
        fp = cs.p.functionals()
        P = big_P(cs.p)
        return s_k + (P - fp.mean**2) / (4.0 * math.pi**2) * _zeta2_tail(k)
    if formula == FormulaId.S01:
        second = cs.p.derivative(2)
        square = cs.p * cs.p
        return s_k - 0.5 * _endpoint_tail(second, k) - _endpoint_tail(square, k)
    raise ValueError(f"unknown formula {formula!r}")


@dataclass(frozen=True)
class TraceReport:
    """Outcome of one trace-identity verification."""

    formula: FormulaId
    k_used: int
    partial: tuple
    accelerated: float
    rhs: float
    gap: float
    rate_exponent: float
    inputs_digest: str
    mode: str = "fourier"
    basis_n: int = 256
    tau: float = 0.0
    q0_shift: float = 0.0

    def to_dict(self) -> dict:
        return {
            "formula": self.formula.value,
            "k_used": self.k_used,
            "partial": list(self.partial),
            "accelerated": self.accelerated,
            "rhs": self.rhs,
            "gap": self.gap,
            "rate_exponent": self.rate_exponent,
            "inputs_digest": self.inputs_digest,
            "mode": self.mode,
            "basis_n": self.basis_n,
            "tau": self.tau,
            "q0_shift": self.q0_shift,
        }

    def csv_rows(self):
        """Rows (K, S_K, accelerated, rhs, gap) for the partial-sum export."""
        for i, s in enumerate(self.partial, start=1):
            yield (i, s, self.accelerated, self.rhs, self.gap)


def _fit_rate(partial: np.ndarray, accelerated: float, k: int) -> float:
    ks = np.arange(1, k + 1, dtype=float)
    resid = np.abs(partial[:k] - accelerated)
    lo = max(4, k // 4)
    mask = (ks >= lo) & (resid > 1e-13 * (1.0 + abs(accelerated)))
    if int(mask.sum()) < 3:
        return float("nan")
    slope = np.polyfit(np.log(ks[mask]), np.log(resid[mask]), 1)[0]
    return float(slope)


def verify(
    formula: FormulaId,
    coeffs: CoefficientSet,
    n: int = 256,
    k: int = 64,
    mode: str = "fourier",
    tau: float = 0.0,
    center_q: bool = False,
) -> TraceReport:
    """Full verification: spectra, partial sums, acceleration, gap, rate.

    ``center_q`` replaces q by q - q0 before checking hypotheses (the
    eigenvalues shift by exactly -q0); the applied shift is recorded.
    By default a nonzero-mean q is rejected where the identity demands a
    zero mean.
    """
    formula = FormulaId(formula)
    q0_shift = 0.0
    if center_q and formula in (FormulaId.TRF3, FormulaId.IPR1, FormulaId.TRS):
        q0 = coeffs.q.functionals().mean
        if q0 != 0.0:
            coeffs = replace(coeffs, q=coeffs.q - Coefficient.constant(q0))
            q0_shift = q0
    check_preconditions(formula, coeffs)
    spectra = spectra_for(formula, coeffs, n, tau)
    parts = partial_sums(formula, spectra, coeffs, k, tau)
    accelerated = tail_accelerate(formula, parts, coeffs, k, mode, tau)
    right = rhs(formula, coeffs, tau)
    digest = coeffs.digest() + f" tau={tau:g}"
    if q0_shift:
        digest += f" q0_shift={q0_shift:.17g}"
    return TraceReport(
        formula=formula,
        k_used=k,
        partial=tuple(float(s) for s in parts),
        accelerated=float(accelerated),
        rhs=float(right),
        gap=float(accelerated - right),
        rate_exponent=_fit_rate(parts, accelerated, k),
        inputs_digest=digest,
        mode=mode,
        basis_n=n,
        tau=tau,
        q0_shift=q0_shift,
    )


# ---------------------------------------------------------------------------
# eigenvalue asymptotics and localization diagnostics


@dataclass(frozen=True)
class AsymptoticsReport:
    """Residuals of the two-term-plus-oscillation eigenvalue expansion."""

    residuals: np.ndarray
    fitted_c: float
    fit_lo: int
    fit_hi: int
    basis_n: int

    def to_dict(self) -> dict:
        return {
            "residuals": [float(r) for r in self.residuals],
            "fitted_c": self.fitted_c,
            "fit_lo": self.fit_lo,
            "fit_hi": self.fit_hi,
            "basis_n": self.basis_n,
        }


def asym_residuals(spec: OperatorSpec, n: int = 256, k: int = 64, fit_lo: int = 8) -> AsymptoticsReport:
    """Residuals r_m = mu_m - [((pi m)^2-p0)^2 - (P+p0^2)/2 + q0 - Vhat_cm].

    Returns r_1..r_k together with the least-squares constant C fitted to
    |r_m| = C / m^2 over m in [fit_lo, k]; the expansion holds when C is
    finite and stable under refinement.
    """
    if spec.kind != KIND_FOURTH_ORDER:
        raise PreconditionError("asymptotic residuals are defined for the fourth-order family")
    s = spectrum(spec, n)
    if k > s.n_trusted:
        raise PreconditionError(f"K={k} exceeds the trust horizon {s.n_trusted}")
    p, q, Q = spec.shifted_coefficients()
    q_eff = q + Q
    fp = p.functionals()
    p0 = fp.mean
    P = big_P(p)
    q0 = q_eff.functionals().mean
    vhat = build_V(p, q_eff).cosine_coeffs(2 * k).c[2::2][:k]
    ns = np.arange(1, k + 1, dtype=float)
    z2 = (np.pi * ns) ** 2
    r = s.vals[:k] - z2 * z2 + 2.0 * p0 * z2 - p0 * p0 + 0.5 * (P + p0 * p0) - q0 + vhat
    lo = max(1, fit_lo)
    window = r[lo - 1 : k]
    ns_fit = ns[lo - 1 : k]
    fitted = float(np.mean(ns_fit**2 * np.abs(window))) if window.size else float("nan")
    return AsymptoticsReport(residuals=r, fitted_c=fitted, fit_lo=lo, fit_hi=k, basis_n=n)


@dataclass(frozen=True)
class LocalizationReport:
    """Counting report for the quartic-root windows and the matching disc.

    ``n0`` is the least threshold such that every trusted index above it
    owns exactly one eigenvalue in {|lambda^(1/4) - pi n| < pi/4} while
    the disc {|lambda| < pi^4 (n0 + 1/2)^4} holds exactly n0 eigenvalues.
    Window miscounts above the returned threshold are listed as
    violations (empty when a valid threshold exists).
    """

    n0: int
    violations: tuple
    disc_count: int
    horizon: int

    def to_dict(self) -> dict:
        return {
            "n0": self.n0,
            "violations": [list(v) for v in self.violations],
            "disc_count": self.disc_count,
            "horizon": self.horizon,
        }


def localization(spec: Spectrum) -> LocalizationReport:
    """Window/disc eigenvalue counting over the trusted range."""
    if spec.kind == KIND_SECOND_ORDER:
        raise PreconditionError("localization applies to fourth-order spectra")
    horizon = spec.n_trusted
    vals = np.asarray(spec.vals[:horizon])
    roots = np.where(vals >= 0.0, np.abs(vals) ** 0.25, np.nan)
    counts = np.zeros(horizon + 1, dtype=int)
    for n in range(1, horizon + 1):
        lo, hi = np.pi * n - np.pi / 4.0, np.pi * n + np.pi / 4.0
        counts[n] = int(np.sum((roots > lo) & (roots < hi)))
    bad = [n for n in range(1, horizon + 1) if counts[n] != 1]
    start = max(bad, default=0)
    for n0 in range(start, horizon + 1):
        disc = int(np.sum(np.abs(vals) < math.pi**4 * (n0 + 0.5) ** 4))
        if disc == n0:
            return LocalizationReport(
                n0=n0,
                violations=tuple((n, int(counts[n])) for n in bad if n > n0),
                disc_count=disc,
                horizon=horizon,
            )
    disc = int(np.sum(np.abs(vals) < math.pi**4 * (horizon + 0.5) ** 4))
    return LocalizationReport(
        n0=horizon,
        violations=tuple((n, int(counts[n])) for n in bad),
        disc_count=disc,
        horizon=horizon,
    )


# ---------------------------------------------------------------------------
# historical-formula adjudication


class DisputeVariant(str, Enum):
    DIKII_TRFD1 = "DikiiTrfD1"
    DIKII_D2 = "DikiiD2"
    SADOVNICHII_TRS = "SadovnichiiTrS"


@dataclass(frozen=True)
class DisputeReport:
    """Numerical adjudication between a historical formula and this package's.

    ``computed_lhs`` is the spectral quantity both sides claim to equal;
    ``variant_rhs`` evaluates the historical variant, ``reference_rhs``
    the identity implemented here.  The verdict names the side matching
    within tolerance, or ``indistinguishable`` when the two sides agree
    to begin with.
    """

    variant: DisputeVariant
    computed_lhs: float
    variant_rhs: float
    reference_rhs: float
    verdict: str
    disagreement: float
    tolerance: float

    def to_dict(self) -> dict:
        return {
            "variant": self.variant.value,
            "computed_lhs": self.computed_lhs,
            "variant_rhs": self.variant_rhs,
            "reference_rhs": self.reference_rhs,
            "verdict": self.verdict,
            "disagreement": self.disagreement,
            "tolerance": self.tolerance,
        }


def _verdict(lhs: float, variant_rhs: float, reference_rhs: float, tol: float) -> str:
    if abs(variant_rhs - reference_rhs) <= 10.0 * tol:
        return "indistinguishable"
    near_variant = abs(lhs - variant_rhs) <= tol
    near_reference = abs(lhs - reference_rhs) <= tol
    if near_reference and not near_variant:
        return "reference"
    if near_variant and not near_reference:
        return "variant"
    return "neither"


def dispute(
    variant: DisputeVariant,
    p: Coefficient,
    q: Coefficient | None = None,
    n: int = 256,
    k: int = 64,
    tol: float = 1e-2,
) -> DisputeReport:
    """Adjudicate one historical trace/asymptotics disagreement numerically."""
    variant = DisputeVariant(variant)
    fp = p.functionals()
    if variant in (DisputeVariant.DIKII_TRFD1, DisputeVariant.DIKII_D2):
        if abs(fp.mean) > MEAN_TOL or any(p.w):
            raise PreconditionError(
                "Dikii comparisons require a zero-mean pure-cosine p "
                "(every odd endpoint derivative vanishes)"
            )
        report = verify(FormulaId.S01, CoefficientSet(p=p), n=n, k=k, mode="fourier")
        lhs = report.accelerated
        l2 = fp.l2sq
        ends_sq = (fp.end0**2 + fp.end1**2) / 4.0
        d2_ends = (fp.d2_0 + fp.d2_1) / 8.0
        if variant == DisputeVariant.DIKII_TRFD1:
            variant_rhs = l2 / 4.0 + d2_ends - ends_sq
        else:
            variant_rhs = l2 / 4.0 - d2_ends - ends_sq
        reference_rhs = rhs(FormulaId.S01, CoefficientSet(p=p))
    else:
        if q is None:
            raise PreconditionError("the Sadovnichii comparison needs q = p'' + p^2")
        expected = p.derivative(2) + p * p
        diff = q - expected
        scale = 1.0 + max((abs(v) for v in (*expected.u, *expected.w)), default=0.0)
        if any(abs(v) > 1e-9 * scale for v in (*diff.u, *diff.w)):
            raise PreconditionError(
                "the Sadovnichii comparison requires q = p'' + p^2 "
                "(the fourth-order operator must be a perfect square)"
            )
        alpha = spectrum(OperatorSpec(KIND_SECOND_ORDER, p=p), n)
        lo = 8
        if k > alpha.n_trusted:
            raise PreconditionError(f"K={k} exceeds the trust horizon {alpha.n_trusted}")
        ns = np.arange(1, k + 1, dtype=float)
        z2 = (np.pi * ns) ** 2
        vhat = build_V(p, q).cosine_coeffs(2 * k).c[2::2][:k]
        # third-term sequence: mu_m - (pi m)^4 + 2 p0 (pi m)^2 with the
        # oscillating part removed; fitted against const + b/m^2
        t = alpha.vals[:k] ** 2 - z2 * z2 + 2.0 * fp.mean * z2 + vhat
        design = np.column_stack([np.ones(k - lo + 1), 1.0 / ns[lo - 1 :] ** 2])
        coef, *_ = np.linalg.lstsq(design, t[lo - 1 :], rcond=None)
        lhs = float(coef[0])
        variant_rhs = q.functionals().mean
        reference_rhs = (fp.l2sq + fp.mean**2) / 2.0
    return DisputeReport(
        variant=variant,
        computed_lhs=float(lhs),
        variant_rhs=float(variant_rhs),
        reference_rhs=float(reference_rhs),
        verdict=_verdict(lhs, variant_rhs, reference_rhs, tol),
        disagreement=float(abs(variant_rhs - reference_rhs)),
        tolerance=tol,
    )
