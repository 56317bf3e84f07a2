"""Braid and Yang-Baxter matrices, spectral-parameter maps and YBE residuals.

All user-facing verification is parameterized by angles. The spectral layer
(``SpectralPoint``, ``spectral_to_angle``, ``middle_param``) is a separate,
validated map onto those angles.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    NonUnimodularRatio,
    PoleAtDenominatorZero,
    SingularConstraint,
    NoUnimodularSolution,
)
from .tensor import I2, SIGMA_Y, as_matrix, is_normalized, kron

SQRT2 = math.sqrt(2.0)

# Bell transform: (Phi-, Psi+, Psi-, Phi+) = W (uu, ud, du, dd).
W = np.array(
    [[1, 0, 0, 1], [0, 1, -1, 0], [0, 1, 1, 0], [-1, 0, 0, 1]], dtype=complex
) / SQRT2


class Convention(str, enum.Enum):
    """Sign in front of (beta u)^2 inside the spectral ratio."""

    PLUS = "PLUS"
    MINUS = "MINUS"


@dataclass(frozen=True)
class AngleParameters:
    theta1: float
    theta2: float
    theta3: float
    phi: float = 0.0
    epsilon: int = 1
    convention: Convention = Convention.PLUS

    def __post_init__(self):
        if self.epsilon not in (1, -1):
            raise ValueError("epsilon must be +1 or -1")


@dataclass(frozen=True)
class SpectralPoint:
    """A spectral parameter ``u`` together with the scale ``beta``.

    Only the dimensionless product ``beta * u`` enters any formula. It may be
    complex; for imaginary ``beta`` and real ``u`` the spectral
    ratio stops being a phase and ``spectral_to_angle`` rejects it.
    """

    u: complex
    beta: complex = 1.0

    @property
    def w(self) -> complex:
        return complex(self.beta * self.u)


@dataclass(frozen=True)
class YbeResidual:
    lhs: np.ndarray
    rhs: np.ndarray
    frobenius_residual: float
    passed: bool


def braid_b(phi: float) -> np.ndarray:
    """b(q) = (1 + M)/sqrt(2) with q = e^{i phi}; b(q=1) is the Bell transform W."""
    q = np.exp(1j * phi)
    return np.array(
        [[1, 0, 0, q], [0, 1, -1, 0], [0, 1, 1, 0], [-1 / q, 0, 0, 1]], dtype=complex
    ) / SQRT2


def braid_generator_m(phi: float) -> np.ndarray:
    return SQRT2 * braid_b(phi) - np.eye(4)


def _residual(lhs, rhs, tol: float) -> YbeResidual:
    r = float(np.linalg.norm(lhs - rhs))
    return YbeResidual(lhs, rhs, r, r <= tol)


def verify_braid_relation(b, tol: float = 1e-12) -> YbeResidual:
    b = as_matrix(b)
    b12 = kron(b, I2)
    b23 = kron(I2, b)
    return _residual(b12 @ b23 @ b12, b23 @ b12 @ b23, tol)


@dataclass(frozen=True)
class YangBaxterized:
    matrix: np.ndarray
    unitary: bool


def yang_baxterize(b, lambda1: complex, lambda2: complex, x: float) -> YangBaxterized:
    """rho(x) (b + x lambda1 lambda2 b^{-1}) with rho fixed by unitarization.

    rho is the inverse operator norm of the unnormalized sum. If the rescaled
    matrix is still not unitary the raw sum is returned with ``unitary=False``.
    """
    b = as_matrix(b)
    binv = np.linalg.inv(b)
    raw = b + x * lambda1 * lambda2 * binv
    norm = np.linalg.norm(raw, 2)
    if norm == 0:
        return YangBaxterized(raw, False)
    scaled = raw / norm
    if np.linalg.norm(scaled.conj().T @ scaled - np.eye(len(b))) <= 1e-10 * len(b):
        return YangBaxterized(scaled, True)
    return YangBaxterized(raw, False)


def r_matrix_4d(theta: float, phi: float) -> np.ndarray:
    """The 4x4 R(theta, phi) = cos(theta) 1 + sin(theta) M with M^2 = -1."""
    c, s = math.cos(theta), math.sin(theta)
    return np.array(
        [
            [c, 0, 0, np.exp(-1j * phi) * s],
            [0, c, -s, 0],
            [0, s, c, 0],
            [-np.exp(1j * phi) * s, 0, 0, c],
        ],
        dtype=complex,
    )


def r_generator_m(phi: float) -> np.ndarray:
    """M with r_matrix_4d(theta, phi) = cos(theta) 1 + sin(theta) M."""
    return r_matrix_4d(math.pi / 2, phi)


def a_2d(theta: float) -> np.ndarray:
    return np.diag([np.exp(-1j * theta), np.exp(1j * theta)])


def b_2d(theta: float) -> np.ndarray:
    c, s = math.cos(theta), math.sin(theta)
    return np.array([[c, -1j * s], [-1j * s, c]], dtype=complex)


# 2D braid matrices in the (e1, e2) basis of the four-anyon fusion space.
A_BRAID = np.exp(-1j * math.pi / 8) * np.diag([1, 1j])
B_BRAID = np.exp(-1j * math.pi / 8) / 2 * np.array([[1 + 1j, 1 - 1j], [1 - 1j, 1 + 1j]])


def spectral_ratio(p: SpectralPoint, epsilon: int = 1, convention: Convention = Convention.PLUS) -> complex:
    w = p.w
    w2 = w * w if Convention(convention) is Convention.PLUS else -w * w
    num = 1 + w2 + 2j * epsilon * w
    den = 1 + w2 - 2j * epsilon * w
    if abs(den) < 1e-14:
        raise PoleAtDenominatorZero(f"spectral ratio has a pole at beta*u = {w}")
    return num / den


def _principal(theta: float) -> float:
    # fold to (-pi/2, pi/2]
    theta = (theta + math.pi / 2) % math.pi - math.pi / 2
    if theta <= -math.pi / 2 + 1e-15:
        theta += math.pi
    return theta


def spectral_to_angle(
    p: SpectralPoint,
    epsilon: int = 1,
    convention: Convention = Convention.PLUS,
    tol: float = 1e-10,
) -> float:
    """Angle theta with ratio(beta u) = e^{-2 i theta}, principal branch (-pi/2, pi/2]."""
    ratio = spectral_ratio(p, epsilon, convention)
    if abs(abs(ratio) - 1.0) > tol:
        raise NonUnimodularRatio(
            f"|ratio| = {abs(ratio):.6g} for beta*u = {p.w} under {Convention(convention).value}"
        )
    return _principal(-0.5 * math.atan2(ratio.imag, ratio.real))


def angle_to_spectral(theta: float, epsilon: int = 1, convention: Convention = Convention.PLUS) -> complex:
    """A value of beta*u mapping to ``theta``.

    PLUS solves sin(t) w^2 + 2 eps cos(t) w + sin(t) = 0 and keeps the root
    with |w| <= 1; it is real only for |theta| <= pi/4. MINUS gives
    w = -eps tan(theta/2).
    """
    if Convention(convention) is Convention.MINUS:
        return complex(-epsilon * math.tan(theta / 2))
    s, c = math.sin(theta), math.cos(theta)
    if s == 0:
        return 0j
    # the two roots multiply to 1; form the small one without cancellation
    q = -epsilon * (c + np.sqrt(complex(math.cos(2 * theta))))
    return complex(s / q if abs(s) <= abs(q) else q / s)


def a_spectral(p: SpectralPoint, epsilon: int = 1) -> np.ndarray:
    """A(u) written in the spectral parameter, with rho(u) = e^{i theta(u)}."""
    ratio = spectral_ratio(p, epsilon)
    rho = np.exp(1j * spectral_to_angle(p, epsilon))
    return rho * np.diag([ratio, 1.0])


def b_spectral(p: SpectralPoint, epsilon: int = 1) -> np.ndarray:
    w = p.w
    rho = np.exp(1j * spectral_to_angle(p, epsilon))
    diag, off = 1 + w * w, 2j * epsilon * w
    return rho / (1 + w * w - 2j * epsilon * w) * np.array([[diag, off], [off, diag]])


def middle_param(u: SpectralPoint, v: SpectralPoint) -> SpectralPoint:
    """Rapidity addition (u + v)/(1 + beta^2 u v), sharing u's beta."""
    beta = u.beta
    den = 1 + beta * beta * u.u * v.u
    if abs(den) < 1e-14:
        raise PoleAtDenominatorZero("1 + beta^2 u v vanishes")
    return SpectralPoint((u.u + v.u) / den, beta)


def theta2_constraint_residual(theta1: float, theta2: float, theta3: float) -> float:
    lhs = (np.exp(-2j * theta2) + 1) * (1j - math.sin(theta1 + theta3) / math.cos(theta1 - theta3))
    return float(abs(lhs - 2j))


def solve_theta2(theta1: float, theta3: float, tol: float = 1e-12) -> float:
    """Middle angle of the YBE given the outer two.

    (e^{-2i t2} + 1)(i - s) = 2i with s = sin(t1+t3)/cos(t1-t3) gives
    e^{-2i t2} = (i + s)/(i - s), i.e. tan(t2) = s.
    """
    c = math.cos(theta1 - theta3)
    if abs(c) < 1e-12:
        raise SingularConstraint(f"cos(theta1 - theta3) = {c:.3g}")
    s = math.sin(theta1 + theta3) / c
    z = (1j + s) / (1j - s)
    if abs(abs(z) - 1.0) > tol:
        raise NoUnimodularSolution(f"|e^(-2i theta2)| = {abs(z)}")
    return _principal(-0.5 * math.atan2(z.imag, z.real))


def verify_ybe_2d(angles: AngleParameters, tol: float = 1e-10) -> YbeResidual:
    t1, t2, t3 = angles.theta1, angles.theta2, angles.theta3
    lhs = a_2d(t1) @ b_2d(t2) @ a_2d(t3)
    rhs = b_2d(t3) @ a_2d(t2) @ b_2d(t1)
    return _residual(lhs, rhs, tol)


def ybe_4d_sides(r1, r2, r3) -> tuple[np.ndarray, np.ndarray]:
    lhs = kron(r1, I2) @ kron(I2, r2) @ kron(r3, I2)
    rhs = kron(I2, r3) @ kron(r2, I2) @ kron(I2, r1)
    return lhs, rhs


def verify_ybe_4d(angles: AngleParameters, tol: float = 1e-10) -> YbeResidual:
    p = angles.phi
    lhs, rhs = ybe_4d_sides(
        r_matrix_4d(angles.theta1, p), r_matrix_4d(angles.theta2, p), r_matrix_4d(angles.theta3, p)
    )
    return _residual(lhs, rhs, tol)


def concurrence(psi) -> float:
    """Pure-state concurrence |<psi*| sigma_y x sigma_y |psi>|."""
    psi = np.asarray(psi, dtype=complex)
    return float(abs(psi @ kron(SIGMA_Y, SIGMA_Y) @ psi))


def concurrence_after_r(theta: float, phi: float, state) -> float:
    state = np.asarray(state, dtype=complex)
    if state.shape != (4,):
        raise ValueError("input must be a 4-dim state")
    if not is_normalized(state):
        raise ValueError("input state is not normalized")
    return concurrence(r_matrix_4d(theta, phi) @ state)

