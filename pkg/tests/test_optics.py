import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.linalg import expm

from ybe_optics.algebra import AngleParameters, a_2d, b_2d, solve_theta2
from ybe_optics.decomposition import cnot2, printed_v_matrices
from ybe_optics.errors import DimensionError
from ybe_optics.optics import (
    Encoding,
    Kind,
    OpticalCircuit,
    OpticalElement,
    adjoint_elements,
    build_ybe_circuit,
    circuit_residual,
    circuit_unitary,
    count_cnots,
    quoted_plate_angles,
    hwp,
    location_gate,
    mach_zehnder,
    mach_zehnder_composed,
    mz_parameters,
    optical_cnot2,
    qwp,
    realize_2d,
    realize_Vi,
    simulate,
    ybe_target,
)
from ybe_optics.tensor import I2, SIGMA_Y, SIGMA_Z, equal_up_to_global_phase, is_unitary, phase_residual

angle = st.floats(-math.pi, math.pi)
ENCODINGS = ["polarization", "location"]


def random_unitary(rng, n):
    z = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / abs(np.diag(r)))


def qwp_oracle(delta):
    return expm(-1j * delta * SIGMA_Y) @ expm(-1j * math.pi / 4 * SIGMA_Z) @ expm(1j * delta * SIGMA_Y)


def test_wave_plate_examples():
    assert np.allclose(qwp(0.0), np.diag([1 - 1j, 1 + 1j]) / math.sqrt(2))
    assert np.allclose(hwp(0.0), -1j * SIGMA_Z)


@settings(max_examples=60, deadline=None)
@given(angle)
def test_wave_plates_against_rotation_oracle(delta):
    assert np.allclose(qwp(delta), qwp_oracle(delta), atol=1e-12)
    assert np.allclose(hwp(delta), qwp(delta) @ qwp(delta), atol=1e-12)
    assert is_unitary(qwp(delta)) and is_unitary(hwp(delta))


def test_location_gates():
    assert np.allclose(location_gate("HADAMARD"), np.array([[1, 1], [1, -1]]) / math.sqrt(2), atol=1e-15)
    ps = location_gate("PS1", -math.pi / 2)
    assert np.allclose(ps @ location_gate("BS") @ ps, location_gate("HADAMARD"), atol=1e-15)
    assert np.array_equal(location_gate("MIRROR"), I2)
    assert np.allclose(location_gate("PS0", 0.3), np.diag([np.exp(0.3j), 1]))
    with pytest.raises(ValueError):
        location_gate("PS0")
    with pytest.raises(ValueError):
        location_gate("QWP")


def test_mach_zehnder_examples():
    assert np.allclose(mach_zehnder(0, 0, 0, 0), I2)
    assert np.allclose(mach_zehnder_composed(0, 0, 0, 0), I2, atol=1e-15)
    theta = 0.83
    a = location_gate("PS0", -theta) @ location_gate("PS1", theta)
    assert np.allclose(mach_zehnder(theta, -theta, 0, 0), a)
    assert np.allclose(a, a_2d(theta))
    assert np.allclose(mach_zehnder(0, 0, -theta, theta), b_2d(theta))


@settings(max_examples=100, deadline=None)
@given(angle, angle, angle, angle)
def test_mach_zehnder_closed_form_matches_composition(p1, p2, v1, v2):
    assert np.linalg.norm(mach_zehnder(p1, p2, v1, v2) - mach_zehnder_composed(p1, p2, v1, v2)) < 1e-12


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_mz_parameters_realize_any_unitary(seed):
    u = random_unitary(np.random.default_rng(seed), 2)
    assert phase_residual(mach_zehnder(*mz_parameters(u)), u)[0] < 1e-12


@pytest.mark.parametrize("u", [I2, np.array([[0, 1], [1, 0]]), np.diag([1j, 1]), b_2d(0.4)])
def test_mz_parameters_edge_cases(u):
    assert phase_residual(mach_zehnder(*mz_parameters(u)), u)[0] < 1e-12


@pytest.mark.parametrize("encoding", ENCODINGS)
@settings(max_examples=100, deadline=None)
@given(theta=st.floats(-math.pi, math.pi))
def test_realize_2d_matches_closed_forms(encoding, theta):
    assert circuit_residual(realize_2d("A", theta, encoding), a_2d(theta)) < 1e-12
    assert circuit_residual(realize_2d("B", theta, encoding), b_2d(theta)) < 1e-12


def test_realize_2d_examples():
    assert equal_up_to_global_phase(circuit_unitary(realize_2d("A", 0.0)), I2)[0]
    assert circuit_residual(realize_2d("B", math.pi / 4), b_2d(math.pi / 4)) < 1e-12
    assert circuit_residual(realize_2d("A", 0.7, "location"), a_2d(0.7)) < 1e-12
    with pytest.raises(ValueError):
        realize_2d("C", 0.1)


def test_realize_vi_examples():
    empty = realize_Vi(4, 0.3, 0.6)
    assert empty.elements == () and np.array_equal(circuit_unitary(empty), I2)
    v3 = realize_Vi(3, 0.0, 0.6)
    assert [e.kind for e in v3.elements] == [Kind.QWP, Kind.HWP, Kind.QWP]
    assert circuit_residual(v3, np.diag([np.exp(-0.6j), np.exp(0.6j)])) < 1e-12
    with pytest.raises(ValueError):
        realize_Vi(7, 0.0)


@pytest.mark.parametrize("encoding", ENCODINGS)
@pytest.mark.parametrize("i", range(1, 7))
def test_realize_vi_matches_v_matrices(encoding, i):
    rng = np.random.default_rng(i)
    for theta, phi in rng.uniform(-math.pi, math.pi, (20, 2)):
        v = printed_v_matrices(theta, phi)[i - 1]
        assert circuit_residual(realize_Vi(i, phi, theta, encoding), v) < 1e-12


def test_adjoint_rule():
    els = realize_Vi(1, 0.4).elements
    u = circuit_unitary(realize_Vi(1, 0.4))
    adj = OpticalCircuit(1, ("polarization",), tuple(adjoint_elements(els)))
    assert phase_residual(circuit_unitary(adj), u.conj().T)[0] < 1e-12
    with pytest.raises(ValueError):
        adjoint_elements([OpticalElement("BS")])


def test_quoted_plate_angles_build_v2_and_its_adjoint():
    phi = 0.9
    g = quoted_plate_angles(phi)
    v2 = printed_v_matrices(0.0, phi)[1]
    seq = lambda *a: OpticalCircuit(  # noqa: E731
        1, ("polarization",), tuple(OpticalElement(k, (x,)) for k, x in zip(("QWP", "HWP", "QWP"), a))
    )
    assert circuit_residual(seq(g["g"], g["h"], g["i"]), v2) < 1e-12
    assert circuit_residual(seq(g["j"], g["k"], g["l"]), v2.conj().T) < 1e-12


def test_optical_cnot2():
    pbs, e1 = optical_cnot2("polarization", "location")
    swap, e2 = optical_cnot2("location", "location")
    assert e1.kind is Kind.PBS_CNOT and e2.kind is Kind.PATH_SWAP
    assert np.array_equal(pbs, cnot2()) and np.array_equal(swap, cnot2())
    assert np.array_equal(cnot2() @ cnot2(), np.eye(4))
    with pytest.raises(ValueError):
        optical_cnot2("location", "polarization")


def test_path_swap_exchanges_01_and_11():
    c = OpticalCircuit(2, ("location", "location"), (OpticalElement("PATH_SWAP", (), (0, 1)),))
    e = np.eye(4)
    assert np.array_equal(simulate(c, e[1]), e[3])
    assert np.array_equal(simulate(c, e[3]), e[1])
    assert np.array_equal(simulate(c, e[2]), e[2])


def test_simulate_basics():
    c = OpticalCircuit(1, ("location",))
    psi = np.array([0.6, 0.8j])
    assert np.array_equal(simulate(c, psi), psi)
    h = OpticalCircuit(1, ("location",), (OpticalElement("HADAMARD"),))
    assert np.allclose(simulate(h, [1, 0]), np.array([1, 1]) / math.sqrt(2))
    with pytest.raises(DimensionError):
        simulate(h, np.ones(4))


def test_simulate_2d_lhs_on_random_input():
    rng = np.random.default_rng(11)
    t1, t3 = 0.2, -0.6
    ang = AngleParameters(t1, solve_theta2(t1, t3), t3)
    psi = rng.normal(size=2) + 1j * rng.normal(size=2)
    psi /= np.linalg.norm(psi)
    out = simulate(build_ybe_circuit("LHS", "2D", ang), psi)
    expected = a_2d(t1) @ b_2d(ang.theta2) @ a_2d(t3) @ psi
    # the wave-plate realization carries a global phase
    assert abs(abs(np.vdot(expected, out)) - 1) < 1e-12
    assert abs(np.linalg.norm(out) - 1) < 1e-12


@pytest.mark.parametrize(
    "element",
    [
        dict(kind="QWP"),
        dict(kind="MZ", params=(1, 2, 3)),
        dict(kind="BS", targets=(0, 1)),
        dict(kind="PATH_SWAP", targets=(1, 1)),
        dict(kind="PS0", params=(0.1,), targets=(-1,)),
    ],
)
def test_element_validation(element):
    with pytest.raises(ValueError):
        OpticalElement(**element)


def test_circuit_validation():
    with pytest.raises(DimensionError):
        OpticalCircuit(1, ("location",), (OpticalElement("BS", (), (1,)),))
    with pytest.raises(ValueError):
        OpticalCircuit(1, ("location",), (OpticalElement("QWP", (0.1,)),))
    with pytest.raises(ValueError):
        OpticalCircuit(2, ("polarization", "location"), (OpticalElement("PBS_CNOT", (), (0, 1)),))
    with pytest.raises(ValueError):
        OpticalCircuit(2, ("location",))
    with pytest.raises(ValueError):
        build_ybe_circuit("LHS", "4D", AngleParameters(0, 0, 0), ["polarization"] * 3)


def test_circuit_json_round_trip():
    ang = AngleParameters(0.3, solve_theta2(0.3, 0.5), 0.5, 1.1)
    c = build_ybe_circuit("LHS", "4D", ang)
    doc = json.loads(c.to_json())
    assert set(doc) == {"width", "encodings", "elements"}
    back = OpticalCircuit.from_json(c.to_json())
    assert back == c
    assert np.array_equal(circuit_unitary(back), circuit_unitary(c))
    with pytest.raises(ValueError):
        OpticalCircuit.from_dict({"width": 1, "encodings": ["location"]})
    with pytest.raises(ValueError):
        OpticalCircuit.from_dict({"width": 1, "encodings": ["location"], "elements": [{"kind": "LASER", "targets": [0]}]})


def test_two_dim_circuit_structure():
    c = build_ybe_circuit("LHS", "2D", AngleParameters(0.1, 0.2, 0.3))
    assert len(c.elements) == 9
    assert {e.kind for e in c.elements} == {Kind.QWP, Kind.HWP}


@pytest.mark.parametrize("encoding", ENCODINGS)
def test_two_dim_ybe_circuits(encoding):
    rng = np.random.default_rng(5)
    for t1, t3 in rng.uniform(-1.2, 1.2, (30, 2)):
        good = AngleParameters(t1, solve_theta2(t1, t3), t3)
        lhs = circuit_unitary(build_ybe_circuit("LHS", "2D", good, [encoding]))
        rhs = circuit_unitary(build_ybe_circuit("RHS", "2D", good, [encoding]))
        assert phase_residual(lhs, rhs)[0] < 1e-10
        bad = AngleParameters(t1, good.theta2 + 0.2, t3)
        lhs = circuit_unitary(build_ybe_circuit("LHS", "2D", bad, [encoding]))
        rhs = circuit_unitary(build_ybe_circuit("RHS", "2D", bad, [encoding]))
        assert phase_residual(lhs, rhs)[0] > 1e-3


@pytest.mark.parametrize("encodings", [None, ["location"] * 3])
def test_four_dim_circuits_match_triple_products(encodings):
    rng = np.random.default_rng(8)
    for t1, t3, phi in rng.uniform(-1.2, 1.2, (10, 3)):
        ang = AngleParameters(t1, solve_theta2(t1, t3), t3, phi)
        lhs_c = build_ybe_circuit("LHS", "4D", ang, encodings)
        rhs_c = build_ybe_circuit("RHS", "4D", ang, encodings)
        assert count_cnots(lhs_c) == count_cnots(rhs_c) == 6
        lhs, rhs = circuit_unitary(lhs_c), circuit_unitary(rhs_c)
        assert is_unitary(lhs)
        assert phase_residual(lhs, ybe_target("LHS", "4D", ang))[0] < 1e-9
        assert phase_residual(rhs, ybe_target("RHS", "4D", ang))[0] < 1e-9
        assert phase_residual(lhs, rhs)[0] < 1e-9


def test_four_dim_default_channels_use_both_cnot_kinds():
    c = build_ybe_circuit("LHS", "4D", AngleParameters(0.1, solve_theta2(0.1, 0.2), 0.2))
    assert c.encodings == (Encoding.LOCATION, Encoding.LOCATION, Encoding.POLARIZATION)
    kinds = [e.kind for e in c.elements if e.kind in (Kind.PBS_CNOT, Kind.PATH_SWAP)]
    assert kinds.count(Kind.PBS_CNOT) == 2 and kinds.count(Kind.PATH_SWAP) == 4


def test_four_dim_lhs_differs_from_rhs_off_constraint():
    ang = AngleParameters(0.4, solve_theta2(0.4, -0.3) + 0.1, -0.3, 0.7)
    lhs = circuit_unitary(build_ybe_circuit("LHS", "4D", ang))
    rhs = circuit_unitary(build_ybe_circuit("RHS", "4D", ang))
    assert phase_residual(lhs, rhs)[0] > 1e-3


@pytest.mark.parametrize("args", [("MID", "2D"), ("LHS", "3D")])
def test_build_rejects_bad_side_or_dims(args):
    with pytest.raises(ValueError):
        build_ybe_circuit(*args, AngleParameters(0, 0, 0))
