"""Temperley-Lieb generator, the four-site basis |e1>, |e2> and the 4D -> 2D reduction.

Two sign families run through this module, selected by ``epsilon``:

* ``epsilon=+1``: the generator whose (2,3) entry is ``+i/sqrt(2)``. Its
  Bell-state projector form uses ``(|ud> - i|du>)/sqrt(2)``.
* ``epsilon=-1``: the transposed middle block. ``r_from_tla(theta, phi, -1)``
  is exactly ``algebra.r_matrix_4d(theta, phi)``.

The basis pair and the R-matrix must come from the same family for the
subspace to stay invariant.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

import numpy as np

from .algebra import SpectralPoint, a_2d, b_2d, middle_param
from .errors import LeakageExceedsTolerance, PoleAtDenominatorZero
from .tensor import DOWN, I2, UP, embed, kron, phase_residual

SQRT2 = math.sqrt(2.0)
LOOP_VALUE = SQRT2


@dataclass(frozen=True)
class TLGenerator:
    phi: float
    epsilon: int
    matrix: np.ndarray
    d: float = LOOP_VALUE


def tl_matrix(phi: float, epsilon: int = 1) -> np.ndarray:
    if epsilon not in (1, -1):
        raise ValueError("epsilon must be +1 or -1")
    q = np.exp(1j * phi)
    e = epsilon
    return np.array(
        [
            [1, 0, 0, 1j / q],
            [0, 1, 1j * e, 0],
            [0, -1j * e, 1, 0],
            [-1j * q, 0, 0, 1],
        ],
        dtype=complex,
    ) / SQRT2


def tl_generator(phi: float, epsilon: int = 1) -> TLGenerator:
    """U = (1 + iM)/sqrt(2): Hermitian, U^2 = sqrt(2) U."""
    return TLGenerator(phi, epsilon, tl_matrix(phi, epsilon))


@dataclass(frozen=True)
class VerificationReport:
    name: str
    residuals: dict[str, float]
    tolerance: float
    passed: bool
    inputs: dict


def verify_tla(u, d: float = LOOP_VALUE, tol: float = 1e-12) -> VerificationReport:
    u = np.asarray(u, dtype=complex)
    u12 = kron(u, I2)
    u23 = kron(I2, u)
    res = {
        "U^2 - dU": float(np.linalg.norm(u @ u - d * u)),
        "U12 U23 U12 - U12": float(np.linalg.norm(u12 @ u23 @ u12 - u12)),
        "U23 U12 U23 - U23": float(np.linalg.norm(u23 @ u12 @ u23 - u23)),
    }
    return VerificationReport("tla", res, tol, all(v <= tol for v in res.values()), {"d": d})


def g_coefficient(p: SpectralPoint, epsilon: int = 1) -> complex:
    """G(u) = 4 i eps beta u / (sqrt(2) (1 + beta^2 u^2 - 2 i eps beta u))."""
    w = p.w
    den = SQRT2 * (1 + w * w - 2j * epsilon * w)
    if abs(den) < 1e-14:
        raise PoleAtDenominatorZero(f"G has a pole at beta*u = {w}")
    return 4j * epsilon * w / den


@dataclass(frozen=True)
class TLACoefficients:
    """a(u) = rho(u), b(u) = rho(u) G(u)."""

    rho: Callable[[SpectralPoint], complex]
    G: Callable[[SpectralPoint], complex]

    def a(self, p: SpectralPoint) -> complex:
        return self.rho(p)

    def b(self, p: SpectralPoint) -> complex:
        return self.rho(p) * self.G(p)


def tla_coefficients(epsilon: int = 1, rho: Callable[[SpectralPoint], complex] | None = None) -> TLACoefficients:
    return TLACoefficients(rho or (lambda p: 1.0), lambda p: g_coefficient(p, epsilon))


def functional_equation_residual(a, b, u: SpectralPoint, v: SpectralPoint, d: float = LOOP_VALUE) -> float:
    """Residual of the YBE condition on R = a + b U for a TL generator U.

    [a(u)b(v) + b(u)a(v) + d b(u)b(v)] a(m) = [a(u)a(v) - b(u)b(v)] b(m),
    m = (u + v)/(1 + beta^2 u v).
    """
    m = middle_param(u, v)
    au, av, am = a(u), a(v), a(m)
    bu, bv, bm = b(u), b(v), b(m)
    lhs = (au * bv + bu * av + d * bu * bv) * am
    rhs = (au * av - bu * bv) * bm
    return float(abs(lhs - rhs))


def functional_equation_residual_as_printed(a, b, u: SpectralPoint, v: SpectralPoint, d: float = LOOP_VALUE) -> float:
    """Same, with the often-quoted right factor a(v)a(u) - b(v)a(u); it does not vanish."""
    m = middle_param(u, v)
    au, av, am = a(u), a(v), a(m)
    bu, bv, bm = b(u), b(v), b(m)
    lhs = (au * bv + bu * av + d * bu * bv) * am
    rhs = (av * au - bv * au) * bm
    return float(abs(lhs - rhs))


def tla_solution_check(u: SpectralPoint, v: SpectralPoint, epsilon: int = 1, tol: float = 1e-10) -> VerificationReport:
    coeffs = tla_coefficients(epsilon)
    r = functional_equation_residual(coeffs.a, coeffs.b, u, v)
    return VerificationReport(
        "tla_solution", {"functional_equation": r}, tol, r <= tol, {"u": u.u, "v": v.u, "beta": u.beta}
    )


def r_from_tla(theta: float, phi: float, epsilon: int = 1) -> np.ndarray:
    """cos(theta) 1 + sin(theta) M with M = -i (sqrt(2) U - 1).

    Equivalently rho (1 + G U) after the angle substitution. Matches
    ``r_matrix_4d`` exactly for ``epsilon=-1``.
    """
    m = -1j * (SQRT2 * tl_matrix(phi, epsilon) - np.eye(4))
    return math.cos(theta) * np.eye(4) + math.sin(theta) * m


def phi_prime(phi: float) -> float:
    return -(phi + 1.5 * math.pi)


@dataclass(frozen=True)
class BellStates:
    psi_plus: np.ndarray
    psi_minus: np.ndarray
    phi_plus: np.ndarray
    phi_minus: np.ndarray

    def as_list(self) -> list[np.ndarray]:
        return [self.psi_plus, self.psi_minus, self.phi_plus, self.phi_minus]


def bell_states(phi_prime: float, epsilon: int = 1) -> BellStates:
    """psi+- = (|uu> +- e^{-i phi'}|dd>)/sqrt(2), phi+- = (|ud> -+ i eps |du>)/sqrt(2)."""
    uu, dd = kron(UP, UP), kron(DOWN, DOWN)
    ud, du = kron(UP, DOWN), kron(DOWN, UP)
    ph = np.exp(-1j * phi_prime)
    return BellStates(
        (uu + ph * dd) / SQRT2,
        (uu - ph * dd) / SQRT2,
        (ud - 1j * epsilon * du) / SQRT2,
        (ud + 1j * epsilon * du) / SQRT2,
    )


def projector_form(phi_prime: float, epsilon: int = 1) -> np.ndarray:
    """sqrt(2) (|psi+><psi+| + |phi+><phi+|), equal to the TL generator."""
    b = bell_states(phi_prime, epsilon)
    return SQRT2 * (np.outer(b.psi_plus, b.psi_plus.conj()) + np.outer(b.phi_plus, b.phi_plus.conj()))


@dataclass(frozen=True)
class BasisPair:
    nu: complex
    phi_prime: float
    e1: np.ndarray
    e2: np.ndarray
    epsilon: int = 1

    @property
    def matrix(self) -> np.ndarray:
        """16x2 isometry with columns e1, e2."""
        return np.stack([self.e1, self.e2], axis=1)


def basis_e(nu: complex, phi_prime: float, epsilon: int = 1) -> BasisPair:
    """The pair spanning the two-dimensional fusion space of four sites.

    e1 = (psi+ psi+ + nu phi+ phi+)/sqrt(1+|nu|^2) and
    e2 = -i eps (nu e^{i phi'} psi- psi- + e^{-i phi'} phi- phi-)/sqrt(1+|nu|^2),
    pairs on sites (1,2) and (3,4). The factor eps is 1 in the printed form.
    """
    b = bell_states(phi_prime, epsilon)
    norm = 1.0 / math.sqrt(1.0 + abs(nu) ** 2)
    e1 = norm * (kron(b.psi_plus, b.psi_plus) + nu * kron(b.phi_plus, b.phi_plus))
    e2 = (
        -1j
        * epsilon
        * norm
        * (nu * np.exp(1j * phi_prime) * kron(b.psi_minus, b.psi_minus) + np.exp(-1j * phi_prime) * kron(b.phi_minus, b.phi_minus))
    )
    return BasisPair(complex(nu), phi_prime, e1, e2, epsilon)


# Site orders for the four generators. U_14 acts on the cyclic neighbours
# (4, 1) with site 4 as its leftmost factor.
TL_SITES = {"12": (1, 2), "23": (2, 3), "34": (3, 4), "14": (4, 1)}


def tl_on_four_sites(phi: float, epsilon: int, which: str) -> np.ndarray:
    return embed(tl_matrix(phi, epsilon), TL_SITES[which], 4)


def basis_relations(basis: BasisPair, phi: float, d: float = LOOP_VALUE) -> dict[str, float]:
    """Residual norms of the eight generator actions on (e1, e2)."""
    e1, e2 = basis.e1, basis.e2
    ops = {k: tl_on_four_sites(phi, basis.epsilon, k) for k in TL_SITES}
    root = math.sqrt(d * d - 1)
    mixed1 = (e1 + root * e2) / d
    mixed2 = root / d * (e1 + root * e2)
    out = {}
    for k in ("12", "34"):
        out[f"U{k} e1 = d e1"] = float(np.linalg.norm(ops[k] @ e1 - d * e1))
        out[f"U{k} e2 = 0"] = float(np.linalg.norm(ops[k] @ e2))
    for k in ("23", "14"):
        out[f"U{k} e1"] = float(np.linalg.norm(ops[k] @ e1 - mixed1))
        out[f"U{k} e2"] = float(np.linalg.norm(ops[k] @ e2 - mixed2))
    return out


def coefficient_relations(basis: BasisPair) -> dict[str, float]:
    """Check a5 = -i e^{i phi'} a4 and a8 = -i e^{-i phi'} a1 on the constructed basis.

    The a_k are overlaps of e1, e2 with the Bell-pair products on (12)(34).
    """
    b = bell_states(basis.phi_prime, basis.epsilon)
    pp = basis.phi_prime
    a1 = np.vdot(kron(b.psi_plus, b.psi_plus), basis.e1)
    a4 = np.vdot(kron(b.phi_plus, b.phi_plus), basis.e1)
    a5 = np.vdot(kron(b.psi_minus, b.psi_minus), basis.e2) * basis.epsilon
    a8 = np.vdot(kron(b.phi_minus, b.phi_minus), basis.e2) * basis.epsilon
    return {
        "a5": float(abs(a5 - (-1j) * np.exp(1j * pp) * a4)),
        "a8": float(abs(a8 - (-1j) * np.exp(-1j * pp) * a1)),
    }


@dataclass(frozen=True)
class Reduction:
    a2: np.ndarray
    b2: np.ndarray
    leakage: float
    a_residual: float
    b_residual: float


def _leakage(op: np.ndarray, basis: np.ndarray) -> float:
    image = op @ basis
    proj = basis @ (basis.conj().T @ image)
    return float(np.max(np.linalg.norm(image - proj, axis=0)))


def reduce_r(theta: float, phi: float, nu: complex = 1.0, epsilon: int = 1, tol: float = 1e-10) -> Reduction:
    """Matrix elements <e_i|R_12|e_j>, <e_i|R_23|e_j> of the TL-built R-matrix.

    Raises ``LeakageExceedsTolerance`` if either operator maps the basis out of
    its span. The residuals against ``a_2d``/``b_2d`` are up to a global phase.
    """
    basis = basis_e(nu, phi_prime(phi), epsilon).matrix
    r = r_from_tla(theta, phi, epsilon)
    r12 = embed(r, (1, 2), 4)
    r23 = embed(r, (2, 3), 4)
    leak = max(_leakage(r12, basis), _leakage(r23, basis))
    if leak > tol:
        raise LeakageExceedsTolerance(f"leakage {leak:.3g} exceeds {tol:.3g}")
    a2 = basis.conj().T @ r12 @ basis
    b2 = basis.conj().T @ r23 @ basis
    return Reduction(a2, b2, leak, phase_residual(a_2d(theta), a2)[0], phase_residual(b_2d(theta), b2)[0])


# Ising / SU(2)_2 fusion rules over labels 0, 1/2, 1.
HALF = Fraction(1, 2)
LABELS = (Fraction(0), HALF, Fraction(1))
FUSION = {
    (Fraction(0), Fraction(0)): (Fraction(0),),
    (Fraction(0), HALF): (HALF,),
    (Fraction(0), Fraction(1)): (Fraction(1),),
    (HALF, HALF): (Fraction(0), Fraction(1)),
    (HALF, Fraction(1)): (HALF,),
    (Fraction(1), Fraction(1)): (Fraction(0),),
}


def fuse(a, b) -> tuple[Fraction, ...]:
    a, b = _label(a), _label(b)
    return FUSION.get((a, b)) or FUSION[(b, a)]


def _label(x) -> Fraction:
    f = Fraction(x).limit_denominator(2)
    if f not in LABELS or abs(float(x) - float(f)) > 1e-12:
        raise ValueError(f"invalid fusion label {x!r}; expected 0, 1/2 or 1")
    return f


def fusion_dim(n_half_anyons: int, total=0) -> int:
    """Number of fusion paths of n spin-1/2 anyons ending in ``total``."""
    if n_half_anyons < 0:
        raise ValueError("n must be non-negative")
    total = _label(total)
    counts = {Fraction(0): 1}
    for _ in range(n_half_anyons):
        nxt: dict[Fraction, int] = {}
        for lab, c in counts.items():
            for out in fuse(lab, HALF):
                nxt[out] = nxt.get(out, 0) + c
        counts = nxt
    return counts.get(total, 0)
