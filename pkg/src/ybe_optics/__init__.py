"""Numerical checks of Yang-Baxter matrices and their linear-optical realizations."""
from .algebra import AngleParameters, Convention, SpectralPoint, r_matrix_4d, solve_theta2
from .decomposition import classify_cnot_cost, decompose_r, success_probability
from .optics import OpticalCircuit, OpticalElement, build_ybe_circuit, circuit_unitary, simulate

__all__ = [
    "AngleParameters",
    "Convention",
    "OpticalCircuit",
    "OpticalElement",
    "SpectralPoint",
    "build_ybe_circuit",
    "circuit_unitary",
    "classify_cnot_cost",
    "decompose_r",
    "r_matrix_4d",
    "simulate",
    "solve_theta2",
    "success_probability",
]
