"""Linear-optical circuit IR, simulator and YBE circuit builders.

Channels are 0-based. Channel ``k`` is the ``k``-th tensor factor (leftmost
first). Elements are listed in time order, so a circuit ``[e1, e2, e3]`` has
unitary ``U(e3) U(e2) U(e1)``. Two-channel elements act with a 4x4 matrix on
the *ordered* pair ``targets``; for both CNOT2 realizations the second target
is the control.
"""
from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import decomposition as dec
from .algebra import AngleParameters, a_2d, b_2d, r_matrix_4d
from .errors import DimensionError
from .tensor import as_matrix, kron, phase_residual

SQRT2 = math.sqrt(2.0)


class Encoding(str, enum.Enum):
    POLARIZATION = "polarization"
    LOCATION = "location"


class Kind(str, enum.Enum):
    QWP = "QWP"
    HWP = "HWP"
    BS = "BS"
    PS0 = "PS0"
    PS1 = "PS1"
    MIRROR = "MIRROR"
    HADAMARD = "HADAMARD"
    MZ = "MZ"
    PBS_CNOT = "PBS_CNOT"
    PATH_SWAP = "PATH_SWAP"


# kind -> (number of params, allowed encodings for each target)
_POL = (Encoding.POLARIZATION,)
_LOC = (Encoding.LOCATION,)
_SIGNATURE = {
    Kind.QWP: (1, (_POL,)),
    Kind.HWP: (1, (_POL,)),
    Kind.BS: (0, (_LOC,)),
    Kind.PS0: (1, (_LOC,)),
    Kind.PS1: (1, (_LOC,)),
    Kind.MIRROR: (0, (_LOC,)),
    Kind.HADAMARD: (0, (_LOC,)),
    Kind.MZ: (4, (_LOC,)),
    Kind.PBS_CNOT: (0, (_LOC, _POL)),
    Kind.PATH_SWAP: (0, (_LOC, _LOC)),
}


def qwp(delta: float) -> np.ndarray:
    c, s = math.cos(2 * delta), math.sin(2 * delta)
    return np.array([[1 - 1j * c, -1j * s], [-1j * s, 1 + 1j * c]]) / SQRT2


def hwp(delta: float) -> np.ndarray:
    c, s = math.cos(2 * delta), math.sin(2 * delta)
    return -1j * np.array([[c, s], [s, -c]], dtype=complex)


_BS = np.array([[1, 1j], [1j, 1]]) / SQRT2


def location_gate(kind, xi: float | None = None) -> np.ndarray:
    kind = Kind(kind)
    if kind in (Kind.PS0, Kind.PS1):
        if xi is None:
            raise ValueError(f"{kind.value} needs a phase xi")
        return np.diag([np.exp(1j * xi), 1.0]) if kind is Kind.PS0 else np.diag([1.0, np.exp(1j * xi)])
    if kind is Kind.BS:
        return _BS.copy()
    if kind is Kind.MIRROR:
        return np.eye(2, dtype=complex)
    if kind is Kind.HADAMARD:
        ps = location_gate(Kind.PS1, -math.pi / 2)
        return ps @ _BS @ ps
    raise ValueError(f"{kind.value} is not a single-channel location gate")


def mach_zehnder(phi1: float, phi2: float, vphi1: float, vphi2: float) -> np.ndarray:
    """Closed form of PS1(phi1) H MIRROR PS1(vphi2) PS0(vphi1) H PS0(phi2)."""
    total = phi1 + phi2 + vphi1 + vphi2
    lam = vphi2 - vphi1
    c, s = math.cos(lam / 2), math.sin(lam / 2)
    d, m = (phi1 - phi2) / 2, (phi1 + phi2) / 2
    return np.exp(1j * total / 2) * np.array(
        [
            [np.exp(-1j * d) * c, -1j * np.exp(-1j * m) * s],
            [-1j * np.exp(1j * m) * s, np.exp(1j * d) * c],
        ]
    )


def mach_zehnder_as_printed(phi1: float, phi2: float, vphi1: float, vphi2: float) -> np.ndarray:
    """The often-quoted variant with +i e^{+-i(phi1+phi2)/2} off the diagonal.

    Kept only so the tests can show it disagrees with the element composition.
    """
    total = phi1 + phi2 + vphi1 + vphi2
    lam = vphi2 - vphi1
    c, s = math.cos(lam / 2), math.sin(lam / 2)
    d, m = (phi1 - phi2) / 2, (phi1 + phi2) / 2
    return np.exp(1j * total / 2) * np.array(
        [
            [np.exp(-1j * d) * c, 1j * np.exp(1j * m) * s],
            [1j * np.exp(-1j * m) * s, np.exp(1j * d) * c],
        ]
    )


def mz_parameters(u) -> tuple[float, float, float, float]:
    """(phi1, phi2, vphi1, vphi2) with mach_zehnder(...) equal to ``u`` up to a global phase."""
    u = as_matrix(u)
    if u.shape != (2, 2):
        raise DimensionError("mz_parameters expects a 2x2 matrix")
    su = u / np.sqrt(np.linalg.det(u))
    alpha, beta = su[0, 0], su[0, 1]
    half_lam = math.atan2(abs(beta), abs(alpha))
    d = -float(np.angle(alpha)) if abs(alpha) > 1e-15 else 0.0
    m = -float(np.angle(1j * beta)) if abs(beta) > 1e-15 else 0.0
    return m + d, m - d, -half_lam, half_lam


@dataclass(frozen=True)
class OpticalElement:
    kind: Kind
    params: tuple[float, ...] = ()
    targets: tuple[int, ...] = (0,)

    def __post_init__(self):
        object.__setattr__(self, "kind", Kind(self.kind))
        object.__setattr__(self, "params", tuple(float(p) for p in self.params))
        object.__setattr__(self, "targets", tuple(int(t) for t in self.targets))
        n_params, enc = _SIGNATURE[self.kind]
        if len(self.params) != n_params:
            raise ValueError(f"{self.kind.value} takes {n_params} params, got {len(self.params)}")
        if len(self.targets) != len(enc):
            raise ValueError(f"{self.kind.value} acts on {len(enc)} channel(s), got {self.targets}")
        if len(set(self.targets)) != len(self.targets) or min(self.targets) < 0:
            raise ValueError(f"invalid targets {self.targets}")

    def matrix(self) -> np.ndarray:
        k, p = self.kind, self.params
        if k is Kind.QWP:
            return qwp(p[0])
        if k is Kind.HWP:
            return hwp(p[0])
        if k is Kind.MZ:
            return mach_zehnder(*p)
        if k in (Kind.PBS_CNOT, Kind.PATH_SWAP):
            return dec.cnot2()
        return location_gate(k, p[0] if p else None)

    def expand(self) -> list["OpticalElement"]:
        """Primitive elements in time order (BS, PS, MIRROR, wave plates, CNOT2s)."""
        t = self.targets
        if self.kind is Kind.HADAMARD:
            ps = OpticalElement(Kind.PS1, (-math.pi / 2,), t)
            return [ps, OpticalElement(Kind.BS, (), t), ps]
        if self.kind is Kind.MZ:
            phi1, phi2, vphi1, vphi2 = self.params
            h = OpticalElement(Kind.HADAMARD, (), t).expand()
            return [
                OpticalElement(Kind.PS0, (phi2,), t),
                *h,
                OpticalElement(Kind.PS0, (vphi1,), t),
                OpticalElement(Kind.PS1, (vphi2,), t),
                OpticalElement(Kind.MIRROR, (), t),
                *h,
                OpticalElement(Kind.PS1, (phi1,), t),
            ]
        return [self]

    def to_dict(self) -> dict:
        return {"kind": self.kind.value, "params": list(self.params), "targets": list(self.targets)}


def mach_zehnder_composed(phi1: float, phi2: float, vphi1: float, vphi2: float) -> np.ndarray:
    out = np.eye(2, dtype=complex)
    for e in OpticalElement(Kind.MZ, (phi1, phi2, vphi1, vphi2)).expand():
        out = e.matrix() @ out
    return out


@dataclass(frozen=True)
class OpticalCircuit:
    width: int
    encodings: tuple[Encoding, ...]
    elements: tuple[OpticalElement, ...] = field(default_factory=tuple)

    def __post_init__(self):
        encs = tuple(Encoding(e) for e in self.encodings)
        object.__setattr__(self, "encodings", encs)
        object.__setattr__(self, "elements", tuple(self.elements))
        if self.width < 1 or len(encs) != self.width:
            raise ValueError(f"width {self.width} needs exactly {self.width} encodings, got {len(encs)}")
        for e in self.elements:
            allowed = _SIGNATURE[e.kind][1]
            for t, ok in zip(e.targets, allowed):
                if t >= self.width:
                    raise DimensionError(f"target {t} outside a width-{self.width} circuit")
                if encs[t] not in ok:
                    raise ValueError(f"{e.kind.value} cannot act on {encs[t].value} channel {t}")

    @property
    def dim(self) -> int:
        return 2**self.width

    def then(self, *more: "OpticalCircuit") -> "OpticalCircuit":
        els = list(self.elements)
        for c in more:
            if c.encodings != self.encodings:
                raise ValueError("cannot concatenate circuits with different channel encodings")
            els.extend(c.elements)
        return OpticalCircuit(self.width, self.encodings, tuple(els))

    def to_dict(self) -> dict:
        return {
            "width": self.width,
            "encodings": [e.value for e in self.encodings],
            "elements": [e.to_dict() for e in self.elements],
        }

    def to_json(self, indent: int | None = 2) -> str:
        return json.dumps(self.to_dict(), indent=indent, sort_keys=True)

    @classmethod
    def from_dict(cls, doc: dict) -> "OpticalCircuit":
        try:
            elements = tuple(
                OpticalElement(Kind(e["kind"]), tuple(e.get("params", ())), tuple(e["targets"]))
                for e in doc["elements"]
            )
            return cls(int(doc["width"]), tuple(doc["encodings"]), elements)
        except KeyError as exc:
            raise ValueError(f"circuit document is missing field {exc}") from None

    @classmethod
    def from_json(cls, text: str) -> "OpticalCircuit":
        return cls.from_dict(json.loads(text))


def _apply(e: OpticalElement, width: int, psi: np.ndarray) -> np.ndarray:
    # contract the element matrix into the target axes of psi (shape (2,)*width + rest)
    k = len(e.targets)
    op = e.matrix().reshape((2,) * (2 * k))
    out = np.tensordot(op, psi, axes=(list(range(k, 2 * k)), list(e.targets)))
    return np.moveaxis(out, list(range(k)), list(e.targets))


def _run(circuit: OpticalCircuit, psi: np.ndarray) -> np.ndarray:
    rest = psi.shape[1:]
    t = psi.reshape((2,) * circuit.width + rest)
    for e in circuit.elements:
        for p in e.expand():
            t = _apply(p, circuit.width, t)
    return t.reshape((circuit.dim,) + rest)


def circuit_unitary(circuit: OpticalCircuit) -> np.ndarray:
    return _run(circuit, np.eye(circuit.dim, dtype=complex))


def simulate(circuit: OpticalCircuit, state) -> np.ndarray:
    psi = np.asarray(state, dtype=complex)
    if psi.shape != (circuit.dim,):
        raise DimensionError(f"state of shape {psi.shape} does not fit a width-{circuit.width} circuit")
    return _run(circuit, psi)


def count_cnots(circuit: OpticalCircuit) -> int:
    return sum(e.kind in (Kind.PBS_CNOT, Kind.PATH_SWAP) for e in circuit.elements)


def _sandwich(q_first: float, h: float, q_last: float, ch: int = 0) -> list[OpticalElement]:
    # operator U_Q(q_last) U_H(h) U_Q(q_first)
    return [
        OpticalElement(Kind.QWP, (q_first,), (ch,)),
        OpticalElement(Kind.HWP, (h,), (ch,)),
        OpticalElement(Kind.QWP, (q_last,), (ch,)),
    ]


def _single(elements: list[OpticalElement], encoding) -> OpticalCircuit:
    return OpticalCircuit(1, (Encoding(encoding),), tuple(elements))


def realize_2d(gate: str, theta: float, encoding=Encoding.POLARIZATION) -> OpticalCircuit:
    encoding = Encoding(encoding)
    if gate not in ("A", "B"):
        raise ValueError(f"gate must be 'A' or 'B', got {gate!r}")
    if encoding is Encoding.POLARIZATION:
        if gate == "A":
            els = _sandwich(math.pi / 4, -math.pi / 4 + theta / 2, math.pi / 4)
        else:
            els = _sandwich(math.pi / 2, theta / 2, math.pi / 2)
    elif gate == "A":
        els = [OpticalElement(Kind.PS1, (theta,)), OpticalElement(Kind.PS0, (-theta,))]
    else:
        els = [OpticalElement(Kind.MZ, (0.0, 0.0, -theta, theta))]
    return _single(els, encoding)


def adjoint_elements(elements: Sequence[OpticalElement]) -> list[OpticalElement]:
    """Reverse the order; QWP(d) -> QWP(d + pi/2), HWP kept (its adjoint is -HWP)."""
    out = []
    for e in reversed(elements):
        if e.kind is Kind.QWP:
            out.append(OpticalElement(Kind.QWP, (e.params[0] + math.pi / 2,), e.targets))
        elif e.kind is Kind.HWP:
            out.append(e)
        else:
            raise ValueError(f"no adjoint rule for {e.kind.value}")
    return out


def realize_Vi(i: int, phi: float, theta: float = 0.0, encoding=Encoding.POLARIZATION) -> OpticalCircuit:
    """Optical circuit for V_i(theta, phi) of the two-CNOT decomposition."""
    encoding = Encoding(encoding)
    if i not in range(1, 7):
        raise ValueError(f"i must be in 1..6, got {i}")
    if i == 4:
        return _single([], encoding)
    if encoding is Encoding.POLARIZATION:
        v1 = _sandwich(math.pi / 2, phi / 8, math.pi / 4)
        els = {
            1: v1,
            2: _sandwich(math.pi / 2, (math.pi - phi) / 8, -math.pi / 4),
            3: _sandwich(math.pi / 4, (2 * theta - math.pi) / 4, math.pi / 4),
            5: adjoint_elements(v1),
            6: _sandwich(math.pi / 4, (5 * math.pi - phi) / 8, 0.0),
        }[i]
        return _single(els, encoding)
    if i == 3:
        return realize_2d("A", theta, encoding)
    target = dec.printed_v_matrices(theta, phi)[i - 1]
    return _single([OpticalElement(Kind.MZ, mz_parameters(target))], encoding)


def optical_cnot2(control, target) -> tuple[np.ndarray, OpticalElement]:
    """CNOT2 element for a (control, target) encoding pair, targets = (target, control) = (0, 1)."""
    control, target = Encoding(control), Encoding(target)
    if target is not Encoding.LOCATION:
        raise ValueError("optical CNOT2 needs a location-qubit target")
    kind = Kind.PBS_CNOT if control is Encoding.POLARIZATION else Kind.PATH_SWAP
    e = OpticalElement(kind, (), (0, 1))
    return e.matrix(), e


def _retarget(c: OpticalCircuit, channel: int) -> list[OpticalElement]:
    return [OpticalElement(e.kind, e.params, (channel,)) for e in c.elements]


def r_block(theta: float, phi: float, first: int, encodings: Sequence[Encoding], convention: str = "corrected") -> list[OpticalElement]:
    """Elements realizing R(theta, phi) on channels (first, first + 1) in time order."""
    t, p = dec.convention_angles(theta, phi, convention)
    a, b = first, first + 1
    ea, eb = encodings[a], encodings[b]
    if ea is not Encoding.LOCATION:
        raise ValueError(f"CNOT2 target channel {a} must be a location qubit")
    cnot = OpticalElement(Kind.PBS_CNOT if eb is Encoding.POLARIZATION else Kind.PATH_SWAP, (), (a, b))
    vi = lambda i, ch: _retarget(realize_Vi(i, p, t, encodings[ch]), ch)  # noqa: E731
    return [*vi(5, a), *vi(6, b), cnot, *vi(3, a), *vi(4, b), cnot, *vi(1, a), *vi(2, b)]


DEFAULT_4D_ENCODINGS = (Encoding.LOCATION, Encoding.LOCATION, Encoding.POLARIZATION)


def build_ybe_circuit(
    side: str,
    dims: str,
    angles: AngleParameters,
    encodings: Sequence | None = None,
    convention: str = "corrected",
) -> OpticalCircuit:
    side, dims = side.upper(), dims.upper()
    if side not in ("LHS", "RHS"):
        raise ValueError(f"side must be LHS or RHS, got {side!r}")
    t1, t2, t3 = angles.theta1, angles.theta2, angles.theta3
    if dims == "2D":
        encs = tuple(Encoding(e) for e in (encodings or (Encoding.POLARIZATION,)))
        if len(encs) != 1:
            raise ValueError("2D circuits have exactly one channel")
        # operator A(t1) B(t2) A(t3) is applied A(t3) first
        order = [("A", t3), ("B", t2), ("A", t1)] if side == "LHS" else [("B", t1), ("A", t2), ("B", t3)]
        blocks = [realize_2d(g, t, encs[0]) for g, t in order]
        return blocks[0].then(*blocks[1:])
    if dims == "4D":
        encs = tuple(Encoding(e) for e in (encodings or DEFAULT_4D_ENCODINGS))
        if len(encs) != 3:
            raise ValueError("4D circuits have exactly three channels")
        if side == "LHS":
            order = [(t3, 0), (t2, 1), (t1, 0)]
        else:
            order = [(t1, 1), (t2, 0), (t3, 1)]
        els: list[OpticalElement] = []
        for theta, first in order:
            els += r_block(theta, angles.phi, first, encs, convention)
        return OpticalCircuit(3, encs, tuple(els))
    raise ValueError(f"dims must be 2D or 4D, got {dims!r}")


def ybe_target(side: str, dims: str, angles: AngleParameters) -> np.ndarray:
    """Closed-form operator that build_ybe_circuit(side, dims, angles) should realize."""
    t1, t2, t3 = angles.theta1, angles.theta2, angles.theta3
    side, dims = side.upper(), dims.upper()
    if dims == "2D":
        if side == "LHS":
            return a_2d(t1) @ b_2d(t2) @ a_2d(t3)
        return b_2d(t3) @ a_2d(t2) @ b_2d(t1)
    r = [r_matrix_4d(t, angles.phi) for t in (t1, t2, t3)]
    i2 = np.eye(2)
    if side == "LHS":
        return kron(r[0], i2) @ kron(i2, r[1]) @ kron(r[2], i2)
    return kron(i2, r[2]) @ kron(r[1], i2) @ kron(i2, r[0])


def circuit_residual(circuit: OpticalCircuit, target) -> float:
    """Frobenius distance to ``target`` after removing the best global phase."""
    return phase_residual(circuit_unitary(circuit), target)[0]


def quoted_phase_shifts(phi: float) -> dict[str, float]:
    """Quoted PS phases a-f of the full four-dimensional setup."""
    return {
        "a": -(math.pi + phi) / 4,
        "b": (5 * math.pi + phi) / 4,
        "c": math.pi / 2,
        "d": (phi - math.pi) / 4,
        "e": (phi - 3 * math.pi) / 4,
        "f": (math.pi - phi) / 2,
    }


def quoted_plate_angles(phi: float) -> dict[str, float]:
    """Quoted wave-plate angles g-l: g-i form V2, j-l form V2^dagger (both in time order)."""
    return {
        "g": math.pi / 2,
        "h": (math.pi - phi) / 8,
        "i": -math.pi / 4,
        "j": math.pi / 4,
        "k": (5 * math.pi - phi) / 8,
        "l": 0.0,
    }


def quoted_location_mz(i: int, phi: float) -> tuple[float, float, float, float]:
    """MZ phases (phi1, phi2, vphi1, vphi2) quoted for the location-qubit V1 and V2.

    No inner phases are quoted for V1, so they are taken as zero.
    """
    p = quoted_phase_shifts(phi)
    if i == 1:
        return p["a"], p["b"], 0.0, 0.0
    if i == 2:
        return p["c"], p["f"], p["d"], p["e"]
    raise ValueError("only V1 and V2 have quoted MZ phases")
