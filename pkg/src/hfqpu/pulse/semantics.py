"""
Exact unitary meaning of pulse elements.

Convention: a rotation ``(theta * G)`` means ``exp(-1j*theta*G)`` with theta in
radians, so a 90 degree element is ``theta = pi/2``.

Element unitaries are expressed in the doubly-rotating frame generated by
the Zeeman part ``omega_e*S_z - omega_n*I_z`` of the static Hamiltonian. In
that frame the coupling ``a*S_z*I_z`` keeps acting, so any element with a
duration ``d`` also accrues ``exp(-1j*(a*d/2)*2*I_z*S_z)``.
"""

from __future__ import annotations

import enum
import math

import numpy as np

from ..dynamics import expm_i_hermitian
from ..hamiltonian import SystemParams, Transition, channel_lines
from ..spin import DIM, IX, IY, IZ, SX, SY, SZ, ZZ
from .ir import Delay, FrameTarget, PulseElement, RfPulse, VirtualZ


class Generator(enum.Enum):
    IZ = "Iz"
    SZ = "Sz"
    ZZ = "2IzSz"
    IX = "Ix"
    IY = "Iy"
    SX = "Sx"
    SY = "Sy"

    @property
    def matrix(self) -> np.ndarray:
        return _GENERATORS[self]


_GENERATORS = {
    Generator.IZ: IZ,
    Generator.SZ: SZ,
    Generator.ZZ: ZZ,
    Generator.IX: IX,
    Generator.IY: IY,
    Generator.SX: SX,
    Generator.SY: SY,
}

_FRAME_GENERATOR = {
    FrameTarget.ELECTRON: Generator.SZ,
    FrameTarget.NUCLEAR: Generator.IZ,
    FrameTarget.ZZ: Generator.ZZ,
}

CARRIER_RTOL = 1e-9


def rotation_semantics(generator, theta: float) -> np.ndarray:
    """``exp(-1j*theta*G)``.

    Named generators all square to ``1/4``, so the closed form
    ``cos(theta/2) - 2j*sin(theta/2)*G`` is exact. Any other Hermitian
    matrix goes through the eigendecomposition.
    """
    if isinstance(generator, Generator):
        g = generator.matrix
        return math.cos(theta / 2) * np.eye(DIM) - 2j * math.sin(theta / 2) * g
    return expm_i_hermitian(np.asarray(generator), theta)


def addressed_lines(pulse: RfPulse, p: SystemParams) -> list[Transition]:
    """Lines of the pulse's channel whose frequency equals its carrier."""
    lines = [
        t
        for t in channel_lines(p, pulse.channel)
        if abs(t.angular_frequency - pulse.carrier) <= CARRIER_RTOL * max(1.0, abs(t.angular_frequency))
    ]
    if not lines:
        available = ", ".join(f"{t.angular_frequency:.17g}" for t in channel_lines(p, pulse.channel))
        raise ValueError(
            f"carrier {pulse.carrier!r} does not address a {pulse.channel.value} line (lines: {available})"
        )
    return lines


def selective_generator(lines, phase: float) -> np.ndarray:
    """``(cos(phase)*X + sin(phase)*Y)/2`` restricted to the addressed two-level blocks."""
    g = np.zeros((DIM, DIM), dtype=complex)
    for t in lines:
        g[t.from_index, t.to_index] = 0.5 * np.exp(-1j * phase)
        g[t.to_index, t.from_index] = 0.5 * np.exp(1j * phase)
    return g


def coupling_angle(p: SystemParams, duration: float) -> float:
    """ZZ angle accrued by free coupling evolution over ``duration``."""
    return p.a * duration / 2


def element_unitary(el: PulseElement, p: SystemParams) -> np.ndarray:
    if isinstance(el, VirtualZ):
        return rotation_semantics(_FRAME_GENERATOR[el.target], el.angle)
    free = rotation_semantics(Generator.ZZ, coupling_angle(p, el.duration))
    if isinstance(el, Delay):
        return free
    rotation = rotation_semantics(selective_generator(addressed_lines(el, p), el.phase), el.angle)
    return free @ rotation
