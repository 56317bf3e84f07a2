"""Two-CNOT decomposition of R(theta, phi), gamma-invariant CNOT counting, success probability.

The single-qubit factors V1..V6 are the closed forms quoted for the
decomposition (V1 x V2) CNOT2 (V3 x V4) CNOT2 (V5 x V6). Taken literally
("printed" convention) they rebuild the *transposed-middle-block* R-matrix,
i.e. ``r_from_tla(theta, phi, +1) == r_matrix_4d(-theta, phi + pi)``. The
"corrected" convention evaluates the same closed forms at
``(-theta, phi - pi)``, which reproduces ``r_matrix_4d(theta, phi)``.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np

from .algebra import r_matrix_4d
from .errors import ReconstructionMismatch
from .tensor import I2, SIGMA_Y, Tolerance, as_matrix, char_poly_4, is_unitary, kron, phase_residual

log = logging.getLogger(__name__)

CONVENTIONS = ("printed", "corrected")


def cnot2() -> np.ndarray:
    """Swaps |ud> and |dd>: the second qubit controls a flip of the first."""
    return np.array(
        [[1, 0, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0], [0, 1, 0, 0]], dtype=complex
    )


def printed_v_matrices(theta: float, phi: float) -> tuple[np.ndarray, ...]:
    """The quoted single-qubit factors V1..V6, taken literally at (theta, phi)."""
    a = np.exp(-1j * (math.pi + phi) / 4)
    v1 = np.array([[a, a], [-1 / a, 1 / a]]) / math.sqrt(2)
    b = np.exp(-1j * phi / 4)
    v2 = np.array([[b, -b], [1 / b, 1 / b]]) / math.sqrt(2)
    v3 = np.diag([np.exp(-1j * theta), np.exp(1j * theta)])
    return v1, v2, v3, I2.copy(), v1.conj().T, v2.conj().T


def convention_angles(theta: float, phi: float, convention: str) -> tuple[float, float]:
    """The (theta, phi) at which to evaluate the V_i closed forms."""
    if convention == "printed":
        return theta, phi
    if convention == "corrected":
        return -theta, phi - math.pi
    raise ValueError(f"unknown convention {convention!r}; expected one of {CONVENTIONS}")


def reconstruct(vs) -> np.ndarray:
    v1, v2, v3, v4, v5, v6 = vs
    c = cnot2()
    return kron(v1, v2) @ c @ kron(v3, v4) @ c @ kron(v5, v6)


@dataclass(frozen=True)
class TwoQubitDecomposition:
    theta: float
    phi: float
    convention: str
    V: tuple[np.ndarray, ...]
    global_phase: float
    residual: float

    def reconstruct(self) -> np.ndarray:
        return reconstruct(self.V)

    def check(self, tol: float = 1e-10) -> "TwoQubitDecomposition":
        if self.residual > tol:
            raise ReconstructionMismatch(
                f"{self.convention} V_i reproduce R(theta={self.theta}, phi={self.phi}) "
                f"only to residual {self.residual:.3e}",
                self.residual,
            )
        return self


def decompose_r(theta: float, phi: float, convention: str = "printed", target=None) -> TwoQubitDecomposition:
    """Return V1..V6 and the global-phase residual of the reconstruction.

    ``target`` defaults to ``r_matrix_4d(theta, phi)``. A mismatch is logged,
    never hidden; call ``.check()`` to turn it into an exception.
    """
    t, p = convention_angles(theta, phi, convention)
    vs = printed_v_matrices(t, p)
    target = r_matrix_4d(theta, phi) if target is None else as_matrix(target)
    residual, alpha = phase_residual(reconstruct(vs), target)
    if residual > 1e-10:
        log.info(
            "%s V_i decomposition misses R(theta=%.6g, phi=%.6g) by %.3e", convention, theta, phi, residual
        )
    return TwoQubitDecomposition(theta, phi, convention, vs, alpha, residual)


def special_unitarize(u) -> np.ndarray:
    """Divide by the principal fourth root of det(u)."""
    u = as_matrix(u)
    det = np.linalg.det(u)
    return u / det ** (1.0 / u.shape[0])


_YY = kron(SIGMA_Y, SIGMA_Y)


def gamma(u) -> np.ndarray:
    """u (sy x sy) u^T (sy x sy), transpose in the computational basis."""
    u = as_matrix(u)
    return u @ _YY @ u.T @ _YY


@dataclass(frozen=True)
class GammaInvariant:
    char_poly: np.ndarray  # ascending coefficients c_0..c_4
    trace: complex


def gamma_invariant(u4, tol: Tolerance = Tolerance(1e-8, 1e-8)) -> GammaInvariant:
    u4 = as_matrix(u4)
    if u4.shape != (4, 4):
        raise ValueError("gamma_invariant expects a 4x4 matrix")
    if not is_unitary(u4, tol):
        raise ValueError("gamma_invariant expects a unitary matrix")
    g = gamma(special_unitarize(u4))
    return GammaInvariant(char_poly_4(g), complex(np.trace(g)))


# ascending coefficients
_LOCAL_PLUS = np.array([1, 4, 6, 4, 1])  # (x + 1)^4
_LOCAL_MINUS = np.array([1, -4, 6, -4, 1])  # (x - 1)^4
_ONE_CNOT = np.array([1, 0, 2, 0, 1])  # (x + i)^2 (x - i)^2


def classify_cnot_cost(u4, tol: float = 1e-8) -> int:
    """Minimal CNOT count (0-3) from the gamma invariant.

    The fourth-root ambiguity of special-unitarization only flips the sign of
    gamma, which maps (x-1)^4 <-> (x+1)^4 and leaves the other tests alone.
    """
    inv = gamma_invariant(u4)
    cp = inv.char_poly
    if min(np.max(np.abs(cp - _LOCAL_PLUS)), np.max(np.abs(cp - _LOCAL_MINUS))) <= tol:
        return 0
    if np.max(np.abs(cp - _ONE_CNOT)) <= tol:
        return 1
    if abs(inv.trace.imag) <= tol * (1 + abs(inv.trace)):
        return 2
    return 3


def success_probability(n_cnots: int) -> float:
    """(1/3)^(n+1) for an array of n measurement-induced CNOT gates."""
    if n_cnots < 0:
        raise ValueError("number of CNOT gates must be non-negative")
    return (1.0 / 3.0) ** (n_cnots + 1)
