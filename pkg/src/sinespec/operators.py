"""Galerkin matrices in the orthonormal sine basis s_n = sqrt(2) sin(pi n x).

Every basis element satisfies y = y'' = 0 at both endpoints, so the
boundary conditions of both operator families hold identically and no
boundary penalty enters.  With c_k(f) = int_0^1 f cos(pi k x) dx the
entries are closed forms:

    <f s_m, s_n>           = c_|m-n|(f) - c_{m+n}(f)
    <2 (f y')' s_m, s_n>   = -2 pi^2 m n (c_|m-n|(f) + c_{m+n}(f))

Assembled matrices are exactly symmetric entry-by-entry because each
entry is built from index-symmetric expressions.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .coeffs import ZERO, Coefficient
from .errors import PreconditionError
from .linalg import graded_eigh

__all__ = [
    "KIND_SECOND_ORDER",
    "KIND_FOURTH_ORDER",
    "KIND_SQUARE_PLUS_Q",
    "KINDS",
    "GalerkinMatrix",
    "OperatorSpec",
    "multiplication_matrix",
    "assemble_h",
    "assemble_H",
    "assemble_h2_plus_Q",
    "assemble_spec",
]

KIND_SECOND_ORDER = "second_order"
KIND_FOURTH_ORDER = "fourth_order"
KIND_SQUARE_PLUS_Q = "square_plus_q"
KINDS = (KIND_SECOND_ORDER, KIND_FOURTH_ORDER, KIND_SQUARE_PLUS_Q)


@dataclass(frozen=True, eq=False)
class GalerkinMatrix:
    """Dense symmetric finite section of an operator in the sine basis."""

    a: np.ndarray
    kind: str

    @property
    def n(self) -> int:
        return self.a.shape[0]


def _cosine_table(f: Coefficient, n: int) -> np.ndarray:
    # indices up to m + n = 2n are touched during assembly
    return f.cosine_coeffs(2 * n).c


def multiplication_matrix(f: Coefficient, n: int) -> np.ndarray:
    """Matrix of pointwise multiplication by f in the sine basis."""
    if n < 1:
        raise ValueError("basis size must be at least 1")
    c = _cosine_table(f, n)
    idx = np.arange(1, n + 1)
    return c[np.abs(idx[:, None] - idx[None, :])] - c[idx[:, None] + idx[None, :]]


def assemble_h(p: Coefficient, n: int) -> GalerkinMatrix:
    """Second-order operator -y'' - p y with y(0) = y(1) = 0."""
    if n < 1:
        raise ValueError("basis size must be at least 1")
    a = -multiplication_matrix(p, n)
    idx = np.arange(1, n + 1)
    a[np.diag_indices(n)] += (np.pi * idx) ** 2
    return GalerkinMatrix(a=a, kind=KIND_SECOND_ORDER)


def assemble_H(p: Coefficient, q: Coefficient, n: int) -> GalerkinMatrix:
    """Fourth-order operator y'''' + 2 (p y')' + q y with y = y'' = 0 at 0, 1."""
    if n < 1:
        raise ValueError("basis size must be at least 1")
    cp = _cosine_table(p, n)
    cq = _cosine_table(q, n)
    idx = np.arange(1, n + 1)
    m = idx[:, None]
    k = idx[None, :]
    a = -2.0 * np.pi**2 * (m * k) * (cp[np.abs(m - k)] + cp[m + k])
    a += cq[np.abs(m - k)] - cq[m + k]
    a[np.diag_indices(n)] += (np.pi * idx) ** 4
    return GalerkinMatrix(a=a, kind=KIND_FOURTH_ORDER)


def assemble_h2_plus_Q(p: Coefficient, Q: Coefficient, n: int, n_pad: int) -> GalerkinMatrix:
    """Square of the second-order operator plus multiplication by Q.

    The square is formed in the eigenbasis of the padded second-order
    section rather than by squaring the truncated matrix: the square of a
    truncation differs from the truncation of the square by a tail term,
    and padding n_pad >= 2 n pushes that term below solver noise.
    """
    if n < 1:
        raise ValueError("basis size must be at least 1")
    if n_pad < 2 * n:
        raise ValueError("padding must satisfy n_pad >= 2 n")
    alpha, basis = graded_eigh(assemble_h(p, n_pad).a)
    mq = multiplication_matrix(Q, n_pad)
    lead = basis[:, :n]
    a = np.diag(alpha[:n] ** 2) + lead.T @ mq @ lead
    a = 0.5 * (a + a.T)
    return GalerkinMatrix(a=a, kind=KIND_SQUARE_PLUS_Q)


@dataclass(frozen=True)
class OperatorSpec:
    """One operator of the family: kind, coefficients, and circle shift tau.

    Unused coefficient slots stay at zero.  A nonzero shift requires every
    nonzero coefficient to be 1-periodic.
    """

    kind: str
    p: Coefficient = ZERO
    q: Coefficient = ZERO
    Q: Coefficient = ZERO
    tau: float = 0.0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown operator kind {self.kind!r}")
        if self.tau != 0.0:
            for name in ("p", "q", "Q"):
                f = getattr(self, name)
                if not f.is_zero() and not f.is_one_periodic():
                    raise PreconditionError(
                        f"shifted operator requires 1-periodic {name} "
                        "(all odd-frequency amplitudes must vanish)"
                    )

    def shifted_coefficients(self):
        if self.tau == 0.0:
            return self.p, self.q, self.Q
        return (
            self.p.shift(self.tau),
            self.q.shift(self.tau),
            self.Q.shift(self.tau),
        )


def assemble_spec(spec: OperatorSpec, n: int) -> GalerkinMatrix:
    """Shift the coefficients, then dispatch to the matching assembler."""
    p, q, Q = spec.shifted_coefficients()
    if spec.kind == KIND_SECOND_ORDER:
        return assemble_h(p, n)
    if spec.kind == KIND_FOURTH_ORDER:
        return assemble_H(p, q + Q, n)
    return assemble_h2_plus_Q(p, Q, n, 2 * n)
