"""Logical gate library and unitary comparison metrics."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .spin import DIM, ContractViolation, SpinChannel, adjoint, embed, is_unitary

_H = np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2)
_X = np.array([[0, 1], [1, 0]], dtype=complex)
_Z = np.array([[1, 0], [0, -1]], dtype=complex)


class GateKind(enum.Enum):
    RX = "rx"
    RY = "ry"
    RZ = "rz"
    H = "h"
    X = "x"
    Z = "z"
    CZ = "cz"
    CNOT = "cnot"


ROTATIONS = (GateKind.RX, GateKind.RY, GateKind.RZ)
SINGLE_SPIN = ROTATIONS + (GateKind.H, GateKind.X, GateKind.Z)


@dataclass(frozen=True)
class Gate:
    kind: GateKind
    target: Optional[SpinChannel] = None
    angle: Optional[float] = None
    control: Optional[SpinChannel] = None

    def __post_init__(self):
        kind = GateKind(self.kind)
        object.__setattr__(self, "kind", kind)
        if self.target is not None:
            object.__setattr__(self, "target", SpinChannel(self.target))
        if self.control is not None:
            object.__setattr__(self, "control", SpinChannel(self.control))
        if kind in SINGLE_SPIN and self.target is None:
            raise ValueError(f"{kind.value} needs a target spin")
        if kind in ROTATIONS:
            if self.angle is None or not math.isfinite(self.angle):
                raise ValueError(f"{kind.value} needs a finite angle")
        elif self.angle is not None:
            raise ValueError(f"{kind.value} takes no angle")
        if kind is GateKind.CNOT:
            if self.control is None or self.target is None:
                raise ValueError("cnot needs both control and target")
            if self.control is self.target:
                raise ValueError("cnot control and target must differ")
        elif self.control is not None:
            raise ValueError(f"{kind.value} takes no control")
        if kind is GateKind.CZ and self.target is not None:
            raise ValueError("cz is symmetric and takes no target")

    @classmethod
    def rx(cls, target, angle):
        return cls(GateKind.RX, target, float(angle))

    @classmethod
    def ry(cls, target, angle):
        return cls(GateKind.RY, target, float(angle))

    @classmethod
    def rz(cls, target, angle):
        return cls(GateKind.RZ, target, float(angle))

    @classmethod
    def h(cls, target):
        return cls(GateKind.H, target)

    @classmethod
    def x(cls, target):
        return cls(GateKind.X, target)

    @classmethod
    def z(cls, target):
        return cls(GateKind.Z, target)

    @classmethod
    def cz(cls):
        return cls(GateKind.CZ)

    @classmethod
    def cnot(cls, control=SpinChannel.NUCLEAR, target=SpinChannel.ELECTRON):
        return cls(GateKind.CNOT, target=target, control=control)

    def __str__(self):
        if self.kind is GateKind.CZ:
            return "cz"
        if self.kind is GateKind.CNOT:
            return f"cnot({self.control.value}->{self.target.value})"
        if self.angle is not None:
            return f"{self.kind.value}({self.angle!r}) {self.target.value}"
        return f"{self.kind.value} {self.target.value}"


def _rotation_2x2(kind: GateKind, theta: float) -> np.ndarray:
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    if kind is GateKind.RX:
        return np.array([[c, -1j * s], [-1j * s, c]])
    if kind is GateKind.RY:
        return np.array([[c, -s], [s, c]], dtype=complex)
    return np.diag([complex(c, -s), complex(c, s)])


def ideal_unitary(g: Gate) -> np.ndarray:
    if g.kind in ROTATIONS:
        return embed(_rotation_2x2(g.kind, g.angle), g.target)
    if g.kind is GateKind.H:
        return embed(_H, g.target)
    if g.kind is GateKind.X:
        return embed(_X, g.target)
    if g.kind is GateKind.Z:
        return embed(_Z, g.target)
    if g.kind is GateKind.CZ:
        return np.diag([1, 1, 1, -1]).astype(complex)
    # CNOT: permutation flipping the target bit where the control bit is 1.
    u = np.zeros((DIM, DIM), dtype=complex)
    shift_c = 1 if g.control is SpinChannel.ELECTRON else 2
    shift_t = 1 if g.target is SpinChannel.ELECTRON else 2
    for i in range(DIM):
        j = i ^ shift_t if i & shift_c else i
        u[j, i] = 1
    return u


def circuit_unitary(gates) -> np.ndarray:
    """Ideal unitary of gates applied left to right in time."""
    u = np.eye(DIM, dtype=complex)
    for g in gates:
        u = ideal_unitary(g) @ u
    return u


def process_fidelity(u: np.ndarray, v: np.ndarray) -> float:
    """Entanglement fidelity ``|Tr(U^dag V)|^2 / d^2``; blind to global phase."""
    for name, m in (("U", u), ("V", v)):
        if not is_unitary(m, 1e-8):
            raise ContractViolation(f"{name} is not unitary within 1e-8")
    overlap = np.trace(adjoint(u) @ v)
    return float(min(1.0, abs(overlap) ** 2 / DIM**2))


def equal_up_to_global_phase(u: np.ndarray, v: np.ndarray, tol: float = 1e-9) -> bool:
    overlap = np.trace(adjoint(v) @ u)
    if abs(overlap) == 0:
        return False
    phase = overlap / abs(overlap)
    return float(np.linalg.norm(u - phase * v)) <= tol
