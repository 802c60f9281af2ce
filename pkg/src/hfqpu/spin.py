"""
Spin-1/2 algebra on the 4-dimensional nucleus (x) electron Hilbert space.

Basis convention
----------------
Basis index ``i = 2*bit(m_I) + bit(m_S)`` with ``bit(+1/2) = 0`` and
``bit(-1/2) = 1``; the nuclear spin is the left (most significant) tensor
factor. ``m = +1/2`` is logical ``|0>`` and ``m = -1/2`` is logical ``|1>``,
so index 1 is ``|01>`` = nucleus up, electron down.

Operators are plain ``(4, 4)`` complex numpy arrays and states are length-4
complex arrays; nothing here mutates its inputs.
"""

from __future__ import annotations

import enum

import numpy as np

DIM = 4


class ContractViolation(ValueError):
    """A numerical precondition (hermiticity, unitarity, normalization) failed."""


class SpinAxis(enum.Enum):
    X = "x"
    Y = "y"
    Z = "z"


class SpinChannel(enum.Enum):
    ELECTRON = "electron"
    NUCLEAR = "nuclear"

    @property
    def other(self) -> "SpinChannel":
        return SpinChannel.NUCLEAR if self is SpinChannel.ELECTRON else SpinChannel.ELECTRON


_PAULI_HALF = {
    SpinAxis.X: np.array([[0, 0.5], [0.5, 0]], dtype=complex),
    SpinAxis.Y: np.array([[0, -0.5j], [0.5j, 0]], dtype=complex),
    SpinAxis.Z: np.array([[0.5, 0], [0, -0.5]], dtype=complex),
}
_I2 = np.eye(2, dtype=complex)


def spin_operator(channel: SpinChannel, axis: SpinAxis) -> np.ndarray:
    """Return ``S_axis`` (electron) or ``I_axis`` (nuclear) embedded in 4 dimensions."""
    single = _PAULI_HALF[SpinAxis(axis)]
    if SpinChannel(channel) is SpinChannel.ELECTRON:
        return np.kron(_I2, single)
    return np.kron(single, _I2)


def basis_index(m_I: float, m_S: float) -> int:
    bits = []
    for name, m in (("m_I", m_I), ("m_S", m_S)):
        if m == 0.5:
            bits.append(0)
        elif m == -0.5:
            bits.append(1)
        else:
            raise ValueError(f"{name} must be +1/2 or -1/2, got {m!r}")
    return 2 * bits[0] + bits[1]


def basis_state(m_I: float, m_S: float) -> np.ndarray:
    """Computational basis vector ``|m_I, m_S>``."""
    psi = np.zeros(DIM, dtype=complex)
    psi[basis_index(m_I, m_S)] = 1.0
    return psi


def projections(index: int) -> tuple[float, float]:
    """Inverse of :func:`basis_index`: ``(m_I, m_S)`` for a basis index."""
    if index not in range(DIM):
        raise ValueError(f"basis index must be in 0..3, got {index!r}")
    return (0.5 - (index >> 1), 0.5 - (index & 1))


def matmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return np.asarray(a) @ np.asarray(b)


def adjoint(a: np.ndarray) -> np.ndarray:
    return np.asarray(a).conj().T


def frobenius_distance(a: np.ndarray, b: np.ndarray) -> float:
    return float(np.linalg.norm(np.asarray(a) - np.asarray(b)))


def commutator(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return a @ b - b @ a


def is_hermitian(a: np.ndarray, tol: float = 1e-10) -> bool:
    a = np.asarray(a)
    return a.shape == (DIM, DIM) and frobenius_distance(a, adjoint(a)) <= tol


def is_unitary(a: np.ndarray, tol: float = 1e-10) -> bool:
    a = np.asarray(a)
    return a.shape == (DIM, DIM) and frobenius_distance(adjoint(a) @ a, np.eye(DIM)) <= tol


def unitarity_error(a: np.ndarray) -> float:
    return frobenius_distance(adjoint(a) @ a, np.eye(DIM))


def embed(single: np.ndarray, channel: SpinChannel) -> np.ndarray:
    """Lift a 2x2 operator acting on one spin to the full space."""
    if SpinChannel(channel) is SpinChannel.ELECTRON:
        return np.kron(_I2, single)
    return np.kron(single, _I2)


# Frequently used operators. Marked read-only so accidental in-place edits fail loudly.
SX = spin_operator(SpinChannel.ELECTRON, SpinAxis.X)
SY = spin_operator(SpinChannel.ELECTRON, SpinAxis.Y)
SZ = spin_operator(SpinChannel.ELECTRON, SpinAxis.Z)
IX = spin_operator(SpinChannel.NUCLEAR, SpinAxis.X)
IY = spin_operator(SpinChannel.NUCLEAR, SpinAxis.Y)
IZ = spin_operator(SpinChannel.NUCLEAR, SpinAxis.Z)
ZZ = 2 * IZ @ SZ
IDENTITY = np.eye(DIM, dtype=complex)
for _op in (SX, SY, SZ, IX, IY, IZ, ZZ, IDENTITY):
    _op.setflags(write=False)
