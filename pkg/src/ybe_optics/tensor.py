"""Dense complex kernel shared by every other module.

Matrices and state vectors are plain ``numpy`` complex128 arrays. Site 1 is
the leftmost Kronecker factor and computational basis indices are big-endian
bit strings with spin up = 0 and spin down = 1.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np

from .errors import DimensionError

I2 = np.eye(2, dtype=complex)
I4 = np.eye(4, dtype=complex)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
UP = np.array([1, 0], dtype=complex)
DOWN = np.array([0, 1], dtype=complex)


@dataclass(frozen=True)
class Tolerance:
    abs: float = 1e-10
    rel: float = 1e-10

    def __post_init__(self):
        if self.abs < 0 or self.rel < 0:
            raise ValueError("tolerances must be non-negative")

    def bound(self, scale: float = 0.0) -> float:
        return self.abs + self.rel * scale


DEFAULT_TOL = Tolerance()


def as_matrix(m, square: bool = True) -> np.ndarray:
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2 or a.shape[0] < 1 or a.shape[1] < 1:
        raise DimensionError(f"expected a 2-d matrix, got shape {a.shape}")
    if square and a.shape[0] != a.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix contains NaN or Inf")
    return a


def kron(*ops) -> np.ndarray:
    """Kronecker product of one or more matrices (or vectors), left to right."""
    out = np.asarray(ops[0], dtype=complex)
    for op in ops[1:]:
        out = np.kron(out, np.asarray(op, dtype=complex))
    return out


def ket(bits: str) -> np.ndarray:
    """Computational basis state from a bit string, e.g. ``ket("0110")``."""
    v = np.zeros(2 ** len(bits), dtype=complex)
    v[int(bits, 2)] = 1.0
    return v


@lru_cache(maxsize=None)
def _permutation(order: tuple[int, ...]) -> np.ndarray:
    # P|b_1 ... b_n> = |b_order[0] ... b_order[n-1]>: moves the listed sites to the front.
    n = len(order)
    dim = 2**n
    p = np.zeros((dim, dim))
    for idx in range(dim):
        bits = [(idx >> (n - 1 - k)) & 1 for k in range(n)]
        new = 0
        for k in range(n):
            new = (new << 1) | bits[order[k]]
        p[new, idx] = 1.0
    p.setflags(write=False)
    return p


def site_permutation(front: Sequence[int], n: int) -> np.ndarray:
    """0/1 matrix reordering qubits so that the 1-based ``front`` sites come first."""
    front0 = [s - 1 for s in front]
    order = tuple(front0 + [k for k in range(n) if k not in front0])
    return _permutation(order)


def embed(op, sites: Sequence[int], n: int) -> np.ndarray:
    """Act with a k-site operator on the ordered 1-based ``sites`` of an n-site register.

    ``sites[0]`` receives the operator's leftmost tensor factor, so
    ``embed(U, (4, 1), 4)`` differs from ``embed(U, (1, 4), 4)`` whenever
    ``U`` is not swap-symmetric.
    """
    op = as_matrix(op)
    k = len(sites)
    if op.shape[0] != 2**k:
        raise DimensionError(f"operator of dim {op.shape[0]} cannot act on {k} sites")
    if len(set(sites)) != k or min(sites) < 1 or max(sites) > n:
        raise DimensionError(f"invalid sites {tuple(sites)} for a {n}-site register")
    if list(sites) == list(range(sites[0], sites[0] + k)):
        left = sites[0] - 1
        return kron(np.eye(2**left), op, np.eye(2 ** (n - left - k)))
    p = site_permutation(sites, n)
    return p.T @ kron(op, np.eye(2 ** (n - k))) @ p


def embed_pair(op4, sites: tuple[int, int], n: int) -> np.ndarray:
    """Embed a two-site operator on sites ``(i, j)`` with ``1 <= i < j <= n``."""
    i, j = sites
    if not 1 <= i < j <= n:
        raise DimensionError(f"embed_pair needs 1 <= i < j <= n, got {sites} with n={n}")
    if np.shape(op4) != (4, 4):
        raise DimensionError("embed_pair expects a 4x4 operator")
    return embed(op4, (i, j), n)


def phase_residual(x, y) -> tuple[float, float]:
    """Best global phase ``alpha`` with ``y ~ e^{i alpha} x`` and the Frobenius residual."""
    x, y = as_matrix(x), as_matrix(y)
    if x.shape != y.shape:
        raise DimensionError(f"shape mismatch {x.shape} vs {y.shape}")
    overlap = np.vdot(x, y)
    alpha = float(np.angle(overlap)) if abs(overlap) > 0 else 0.0
    return float(np.linalg.norm(y - np.exp(1j * alpha) * x)), alpha


def equal_up_to_global_phase(x, y, tol: Tolerance = DEFAULT_TOL) -> tuple[bool, float | None]:
    """Return ``(True, alpha)`` when ``y = e^{i alpha} x`` within ``tol.abs * dim``."""
    residual, alpha = phase_residual(x, y)
    if residual <= tol.abs * np.shape(x)[0]:
        return True, alpha
    return False, None


def is_unitary(m, tol: Tolerance = DEFAULT_TOL) -> bool:
    m = as_matrix(m)
    dim = m.shape[0]
    return float(np.linalg.norm(m.conj().T @ m - np.eye(dim))) <= tol.abs * dim


def char_poly(m) -> np.ndarray:
    """Coefficients ``c_0 .. c_n`` of ``det(x I - m)`` (ascending powers, ``c_n = 1``).

    Faddeev-LeVerrier recursion: M_k = A M_{k-1} + c_{n-k+1} I,
    c_{n-k} = -tr(A M_k) / k.
    """
    a = as_matrix(m)
    n = a.shape[0]
    coeffs = np.zeros(n + 1, dtype=complex)
    coeffs[n] = 1.0
    mk = np.zeros_like(a)
    eye = np.eye(n, dtype=complex)
    for k in range(1, n + 1):
        mk = a @ mk + coeffs[n - k + 1] * eye
        coeffs[n - k] = -np.trace(a @ mk) / k
    return coeffs


def char_poly_4(m) -> np.ndarray:
    m = as_matrix(m)
    if m.shape != (4, 4):
        raise DimensionError(f"char_poly_4 expects 4x4, got {m.shape}")
    return char_poly(m)


def normalized(v) -> np.ndarray:
    v = np.asarray(v, dtype=complex)
    return v / np.linalg.norm(v)


def is_normalized(v, tol: float = 1e-10) -> bool:
    return abs(np.linalg.norm(v) - 1.0) <= tol
