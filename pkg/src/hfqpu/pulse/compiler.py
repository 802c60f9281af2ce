"""
Gate-to-pulse lowering.

The drive is weak compared with the hyperfine splitting (``rabi << a``), so
every RF pulse is transition-selective: it rotates the target spin only in
the block where the other spin has the projection that tunes its line into
resonance. An unconditional rotation is therefore two selective pulses, one
per conditional line.

While a pulse plays, the coupling keeps generating ZZ phase in the
doubly-rotating frame. Each pulse is padded with a delay so that its total
window is a whole number of ``4*pi/|a|`` periods, over which the ZZ phase
winds back to a global sign.

Z rotations are virtual. The entangling ZZ rotation of the controlled-Z
is free evolution under the coupling.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

from ..gates import Gate, GateKind
from ..hamiltonian import DEMO_RABI_E, DEMO_RABI_N, SystemParams, channel_lines
from ..spin import SpinChannel
from .ir import Delay, FrameTarget, PulseSequence, RfPulse, VirtualZ, wrap_phase

SELECTIVITY_RATIO = 5.0
_DEGENERATE_RTOL = 1e-12


class SelectivityWarning(UserWarning):
    """Rabi rate is not small against the hyperfine splitting; pulses will leak onto the other line."""


@dataclass(frozen=True)
class DriveBudget:
    """Rabi rate (rad/s) used for pulses on each spin."""

    rabi_e: float = DEMO_RABI_E
    rabi_n: float = DEMO_RABI_N

    def __post_init__(self):
        if not (self.rabi_e > 0 and self.rabi_n > 0):
            raise ValueError("rabi rates must be > 0")

    def rabi(self, channel: SpinChannel) -> float:
        return self.rabi_e if SpinChannel(channel) is SpinChannel.ELECTRON else self.rabi_n


def paper_cz_sequence() -> PulseSequence:
    """``(pi/2 I_z)(pi/2 S_z)(-pi/2 2I_zS_z)`` as virtual rotations; equals ``exp(-i pi/4) CZ``."""
    return PulseSequence(
        (
            VirtualZ(FrameTarget.NUCLEAR, math.pi / 2),
            VirtualZ(FrameTarget.ELECTRON, math.pi / 2),
            VirtualZ(FrameTarget.ZZ, -math.pi / 2),
        )
    )


def zz_delay(theta: float, p: SystemParams) -> tuple[Delay, float]:
    """Free-evolution delay realizing ``exp(-1j*theta*2*I_z*S_z)``.

    Returns the delay and the global phase the enclosing sequence must add.
    Durations cannot be negative, so an angle of the opposite sign to ``a``
    is reached through its ``2*pi`` complement; each extra ``2*pi`` of ZZ
    angle contributes a factor ``-1`` that the returned phase cancels.
    """
    if p.a == 0:
        raise ValueError("no coupling available: a = 0 cannot generate a ZZ rotation")
    wraps = 0
    if theta * p.a < 0:
        wraps = math.copysign(math.ceil(abs(theta) / (2 * math.pi)), p.a)
    zz_angle = theta + 2 * math.pi * wraps
    duration = 2 * zz_angle / p.a
    return Delay(duration + 0.0), wrap_phase(math.pi * wraps)


def _refocus(duration: float, p: SystemParams) -> tuple[list[Delay], float]:
    """Pad a pulse of ``duration`` to a whole number of ZZ periods."""
    if p.a == 0 or duration == 0:
        return [], 0.0
    period = 4 * math.pi / abs(p.a)
    n = max(1, math.ceil(duration / period - 1e-9))
    pad = n * period - duration
    pads = [Delay(pad)] if pad > 1e-12 * period else []
    return pads, wrap_phase(math.pi * n)


def _selectivity_check(rabi: float, p: SystemParams, found: list) -> None:
    if rabi >= abs(p.a) / SELECTIVITY_RATIO:
        msg = (
            f"rabi rate {rabi:.6g} >= |a|/{SELECTIVITY_RATIO:g} = {abs(p.a) / SELECTIVITY_RATIO:.6g}; "
            "selective pulses will disturb the other line"
        )
        if msg not in found:
            found.append(msg)
            warnings.warn(msg, SelectivityWarning, stacklevel=3)


def _rotation(channel, theta, axis_phase, p, drive, found) -> PulseSequence:
    """Unconditional transverse rotation ``exp(-i*theta*(cos(phi)*S_x + sin(phi)*S_y))`` of one spin."""
    if theta == 0:
        return PulseSequence()
    global_phase = 0.0
    if theta < 0:
        theta, axis_phase = -theta, axis_phase + math.pi
    # R(theta + 2pi) = -R(theta); keep pulses no longer than a pi rotation.
    turns = math.floor(theta / (2 * math.pi))
    theta -= 2 * math.pi * turns
    global_phase += math.pi * turns
    if theta > math.pi:
        theta, axis_phase = 2 * math.pi - theta, axis_phase + math.pi
        global_phase += math.pi
    if theta == 0:
        return PulseSequence((), wrap_phase(global_phase))

    rabi = drive.rabi(channel)
    lines = channel_lines(p, channel)
    f0, f1 = (t.angular_frequency for t in lines)
    if abs(f0 - f1) <= _DEGENERATE_RTOL * max(1.0, f0):
        # One pulse covers both lines, so there is nothing to be selective about.
        lines = lines[:1]
    else:
        _selectivity_check(rabi, p, found)
    elements = []
    duration = theta / rabi
    for line in lines:
        elements.append(RfPulse(channel, line.angular_frequency, rabi, wrap_phase(axis_phase), duration))
        pads, pad_phase = _refocus(duration, p)
        elements.extend(pads)
        global_phase += pad_phase
    return PulseSequence(tuple(elements), wrap_phase(global_phase))


def _virtual(channel: SpinChannel, angle: float, global_phase: float = 0.0) -> PulseSequence:
    return PulseSequence((VirtualZ(FrameTarget(channel.value), angle),), wrap_phase(global_phase))


def _cz(p: SystemParams) -> PulseSequence:
    # exp(-i pi/4) CZ from the virtual-Z sequence; the ZZ part becomes free evolution.
    virtual = paper_cz_sequence().elements[:2]
    delay, phase = zz_delay(paper_cz_sequence().elements[2].angle, p)
    elements = virtual + ((delay,) if delay.duration > 0 else ())
    return PulseSequence(elements, wrap_phase(phase + math.pi / 4))


def compile_gate(g: Gate, p: SystemParams, drive: DriveBudget = DriveBudget()) -> PulseSequence:
    """Lower a logical gate to a pulse sequence whose ideal unitary equals the gate exactly.

    Selectivity problems (``rabi >= |a|/5``) are reported as warnings and
    recorded on the returned sequence's ``warnings``.
    """
    if not isinstance(g, Gate):
        raise TypeError(f"unsupported gate {g!r}")
    found: list = []
    kind = g.kind
    if kind is GateKind.RX:
        seq = _rotation(g.target, g.angle, 0.0, p, drive, found)
    elif kind is GateKind.RY:
        seq = _rotation(g.target, g.angle, math.pi / 2, p, drive, found)
    elif kind is GateKind.RZ:
        seq = _virtual(g.target, g.angle)
    elif kind is GateKind.Z:
        # Z = i * RZ(pi)
        seq = _virtual(g.target, math.pi, math.pi / 2)
    elif kind is GateKind.X:
        # X = i * RX(pi)
        seq = _rotation(g.target, math.pi, 0.0, p, drive, found) + PulseSequence((), math.pi / 2)
    elif kind is GateKind.H:
        # RY(pi/2) RZ(pi) = -i H
        seq = (
            _virtual(g.target, math.pi, math.pi / 2)
            + _rotation(g.target, math.pi / 2, math.pi / 2, p, drive, found)
        )
    elif kind is GateKind.CZ:
        seq = _cz(p)
    elif kind is GateKind.CNOT:
        hadamard = compile_gate(Gate.h(g.target), p, drive)
        seq = hadamard + _cz(p) + hadamard
        found.extend(w for w in hadamard.warnings if w not in found)
    else:
        raise ValueError(f"unsupported gate {g}")
    return PulseSequence(seq.elements, seq.global_phase, tuple(found))


def compile_circuit(gates, p: SystemParams, drive: DriveBudget = DriveBudget()) -> PulseSequence:
    """Concatenate compiled gates, first gate first in time."""
    seq = PulseSequence()
    for g in gates:
        seq = seq + compile_gate(g, p, drive)
    return seq
