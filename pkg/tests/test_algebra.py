import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ybe_optics.algebra import (
    A_BRAID,
    B_BRAID,
    W,
    AngleParameters,
    Convention,
    SpectralPoint,
    a_2d,
    a_spectral,
    angle_to_spectral,
    b_2d,
    b_spectral,
    braid_b,
    braid_generator_m,
    concurrence_after_r,
    middle_param,
    r_generator_m,
    r_matrix_4d,
    solve_theta2,
    spectral_ratio,
    spectral_to_angle,
    theta2_constraint_residual,
    verify_braid_relation,
    verify_ybe_2d,
    verify_ybe_4d,
    yang_baxterize,
)
from ybe_optics.decomposition import cnot2
from ybe_optics.errors import NonUnimodularRatio, PoleAtDenominatorZero, SingularConstraint
from ybe_optics.tensor import I2, I4, UP, equal_up_to_global_phase, is_unitary, kron, phase_residual

angle = st.floats(-math.pi / 2 + 1e-3, math.pi / 2 - 1e-3)
flux = st.floats(-math.pi, math.pi)


def test_braid_at_q1_is_bell_transform():
    assert np.array_equal(braid_b(0.0), W)


@pytest.mark.parametrize("phi", [0.0, 0.7, -2.1, math.pi])
def test_braid_generator_squares_to_minus_one(phi):
    m = braid_generator_m(phi)
    assert np.allclose(m @ m, -I4, atol=1e-14)
    assert is_unitary(braid_b(phi))


def test_braid_entries_at_half_pi():
    b = braid_b(math.pi / 2)
    assert b[0, 3] == pytest.approx(1j / math.sqrt(2))
    assert b[3, 0] == pytest.approx(1j / math.sqrt(2))


def test_braid_relation():
    assert verify_braid_relation(braid_b(0.7)).frobenius_residual < 1e-12
    assert verify_braid_relation(I4).frobenius_residual == 0.0
    assert verify_braid_relation(cnot2()).frobenius_residual > 0.1


def test_yang_baxterize_limits():
    b = braid_b(0.4)
    out = yang_baxterize(b, 1.0, 1.0, 0.0)
    assert out.unitary and equal_up_to_global_phase(out.matrix, b)[0]
    ident = yang_baxterize(I4, 1.0, 1.0, 0.6)
    assert ident.unitary and np.allclose(ident.matrix, I4)


@pytest.mark.parametrize("x", [0.2, 1.0, 3.5])
def test_yang_baxterize_matches_entangling_form(x):
    b = braid_b(-1.3)
    lam = np.linalg.eigvals(b)
    # b has the doubly degenerate spectrum e^{+-i pi/4}; one of each
    l1 = lam[np.argmax(lam.imag)]
    l2 = lam[np.argmin(lam.imag)]
    out = yang_baxterize(b, l1, l2, x)
    expected = (b + x * np.linalg.inv(b)) / math.sqrt(1 + x * x)
    assert out.unitary
    assert phase_residual(out.matrix, expected)[0] < 1e-12


def test_yang_baxterize_flags_non_unitary():
    out = yang_baxterize(np.diag([1.0, 2.0]), 1.0, 2.0, 0.5)
    assert not out.unitary


def test_r_matrix_basic():
    assert np.array_equal(r_matrix_4d(0.0, 1.2), I4)
    theta, phi = 0.37, -0.8
    r = r_matrix_4d(theta, phi)
    m = r_generator_m(phi)
    assert np.allclose(m @ m, -I4)
    assert np.allclose(r, math.cos(theta) * I4 + math.sin(theta) * m)
    assert np.linalg.det(r) == pytest.approx(1.0)


@pytest.mark.parametrize("phi", [0.0, 0.5, -1.7])
def test_r_at_quarter_pi_is_braid_with_reversed_flux(phi):
    assert np.allclose(r_matrix_4d(math.pi / 4, phi), braid_b(-phi), atol=1e-15)


def test_two_dim_matrices():
    assert np.array_equal(a_2d(0.0), I2) and np.array_equal(b_2d(0.0), I2)
    assert np.allclose(b_2d(math.pi / 2), [[0, -1j], [-1j, 0]])
    ok_a, pa = equal_up_to_global_phase(a_2d(math.pi / 4), A_BRAID)
    ok_b, pb = equal_up_to_global_phase(b_2d(math.pi / 4), B_BRAID)
    assert ok_a and ok_b
    assert pa == pytest.approx(math.pi / 8) and pb == pytest.approx(math.pi / 8)


@settings(max_examples=60, deadline=None)
@given(angle)
def test_a_and_b_are_special_unitary(theta):
    for m in (a_2d(theta), b_2d(theta)):
        assert is_unitary(m)
        assert np.linalg.det(m) == pytest.approx(1.0)


def test_spectral_to_angle_examples():
    assert spectral_to_angle(SpectralPoint(0.0)) == 0.0
    for eps in (1, -1):
        assert spectral_to_angle(SpectralPoint(1.0), eps) == pytest.approx(-eps * math.pi / 4)
        assert spectral_to_angle(SpectralPoint(2.0, beta=0.5), eps) == pytest.approx(-eps * math.pi / 4)


def test_spectral_rejects_non_unimodular_ratio():
    # both conventions are unimodular for real beta*u and fail for imaginary beta*u
    for conv in Convention:
        with pytest.raises(NonUnimodularRatio):
            spectral_to_angle(SpectralPoint(0.5, beta=1j), convention=conv)


def test_spectral_pole():
    # 1 + w^2 - 2iw vanishes at w = i(1 + sqrt(2))
    with pytest.raises(PoleAtDenominatorZero):
        spectral_ratio(SpectralPoint(1j * (1 + math.sqrt(2))))


@settings(max_examples=100, deadline=None)
@given(angle, st.sampled_from([1, -1]))
def test_spectral_round_trip_plus(theta, eps):
    w = angle_to_spectral(theta, eps)
    # independent inversion: roots of sin(t) w^2 + 2 eps cos(t) w + sin(t)
    if abs(math.sin(theta)) > 1e-12:
        roots = np.roots([math.sin(theta), 2 * eps * math.cos(theta), math.sin(theta)])
        assert min(abs(roots - w)) < 1e-9
    assert spectral_to_angle(SpectralPoint(w), eps) == pytest.approx(theta, abs=1e-10)


@settings(max_examples=100, deadline=None)
@given(angle, st.sampled_from([1, -1]))
def test_spectral_round_trip_minus(theta, eps):
    w = angle_to_spectral(theta, eps, Convention.MINUS)
    assert w.imag == 0.0 and w.real == pytest.approx(-eps * math.tan(theta / 2))
    p = SpectralPoint(w.real)
    assert spectral_to_angle(p, eps, Convention.MINUS) == pytest.approx(theta, abs=1e-10)


def test_quarter_angle_needs_complex_spectral_value():
    w = angle_to_spectral(1.2, 1)
    assert abs(w.imag) > 1e-3
    assert spectral_to_angle(SpectralPoint(w), 1) == pytest.approx(1.2)


def test_spectral_a_b_match_angle_form():
    p = SpectralPoint(0.35)
    theta = spectral_to_angle(p)
    assert phase_residual(a_2d(theta), a_spectral(p))[0] < 1e-12
    assert phase_residual(b_2d(theta), b_spectral(p))[0] < 1e-12


def test_middle_param():
    v = SpectralPoint(0.4)
    assert middle_param(SpectralPoint(0.0), v).u == pytest.approx(0.4)
    u = SpectralPoint(0.3)
    assert middle_param(u, u).u == pytest.approx(0.6 / 1.09)
    with pytest.raises(PoleAtDenominatorZero):
        middle_param(SpectralPoint(1.0), SpectralPoint(-1.0))


@settings(max_examples=100, deadline=None)
@given(st.floats(-0.95, 0.95), st.floats(-0.95, 0.95))
def test_middle_param_matches_solved_theta2(u, v):
    pu, pv = SpectralPoint(u), SpectralPoint(v)
    t1, t3 = spectral_to_angle(pu), spectral_to_angle(pv)
    t2 = spectral_to_angle(middle_param(pu, pv))
    assert theta2_constraint_residual(t1, t2, t3) < 1e-8
    assert t2 == pytest.approx(solve_theta2(t1, t3), abs=1e-8)


def test_solve_theta2_examples():
    assert solve_theta2(0.0, 0.0) == 0.0
    assert solve_theta2(math.pi / 4, math.pi / 4) == pytest.approx(math.pi / 4)
    with pytest.raises(SingularConstraint):
        solve_theta2(math.pi / 4, -math.pi / 4)


@settings(max_examples=200, deadline=None)
@given(angle, angle, flux)
def test_solved_theta2_satisfies_both_ybe(t1, t3, phi):
    if abs(math.cos(t1 - t3)) < 1e-3:
        return
    t2 = solve_theta2(t1, t3)
    assert -math.pi / 2 < t2 <= math.pi / 2
    assert t2 == pytest.approx(solve_theta2(t3, t1), abs=1e-12)
    assert theta2_constraint_residual(t1, t2, t3) < 1e-10
    assert verify_ybe_2d(AngleParameters(t1, t2, t3)).passed
    assert verify_ybe_4d(AngleParameters(t1, t2, t3, phi)).passed


def test_ybe_branch_shift_also_accepted():
    t1, t3 = 0.3, -0.2
    t2 = solve_theta2(t1, t3) + math.pi
    assert verify_ybe_2d(AngleParameters(t1, t2, t3)).frobenius_residual < 1e-10


def test_ybe_examples():
    q = math.pi / 4
    assert verify_ybe_2d(AngleParameters(q, q, q)).frobenius_residual < 1e-12
    assert verify_ybe_2d(AngleParameters(0.3, solve_theta2(0.3, 0.3), 0.3)).passed
    assert verify_ybe_2d(AngleParameters(0.3, 0.3, 0.3)).frobenius_residual > 1e-3
    assert verify_ybe_4d(AngleParameters(q, q, q, 1.9)).frobenius_residual < 1e-12
    t2 = solve_theta2(0.5, -0.4)
    assert verify_ybe_4d(AngleParameters(0.5, t2 + 0.1, -0.4, 0.3)).frobenius_residual > 1e-3


def test_ybe_4d_brute_force_oracle():
    # independent build of both sides with explicit 8x8 products
    t1, t3, phi = 0.41, -0.77, 2.2
    t2 = solve_theta2(t1, t3)
    r = [r_matrix_4d(t, phi) for t in (t1, t2, t3)]
    lhs = np.kron(r[0], np.eye(2)) @ np.kron(np.eye(2), r[1]) @ np.kron(r[2], np.eye(2))
    rhs = np.kron(np.eye(2), r[2]) @ np.kron(r[1], np.eye(2)) @ np.kron(np.eye(2), r[0])
    assert np.linalg.norm(lhs - rhs) < 1e-10


def test_angle_parameters_validate_epsilon():
    with pytest.raises(ValueError):
        AngleParameters(0, 0, 0, epsilon=0)


@pytest.mark.parametrize(
    "theta,expected", [(math.pi / 4, 1.0), (0.0, 0.0), (0.3, abs(math.sin(0.6))), (-1.1, abs(math.sin(-2.2)))]
)
def test_concurrence_after_r(theta, expected):
    for phi in (0.0, 1.3):
        assert concurrence_after_r(theta, phi, kron(UP, UP)) == pytest.approx(expected, abs=1e-12)


def test_concurrence_rejects_unnormalized():
    with pytest.raises(ValueError):
        concurrence_after_r(0.1, 0.0, 2 * kron(UP, UP))
