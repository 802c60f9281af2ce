"""
Execution backends.

``Backend.IDEAL`` multiplies the exact element unitaries. ``Backend.PHYSICAL``
integrates the lab-frame Schroedinger equation with the full
``H_static + H_x*cos(omega*t + phase)*(gamma_e*S_x - gamma_n*I_x)``, counter-rotating
terms and the shared-coil crosstalk included, and reports the result in the
doubly-rotating frame so the two backends are directly comparable.

Lowering a pulse to a lab waveform
----------------------------------
The pulse's axis phase is referenced to the doubly-rotating frame at the
pulse start ``t0``; the carrier phase absorbs the coupling phase the
addressed levels have accrued since ``t = 0``. With ``stark_compensation``
the backend also predicts the second-order (AC Stark / Bloch-Siegert)
level shifts the drive induces, retunes the carrier to the shifted line
and removes the predicted spectator phases with a virtual frame update.
The integration itself is never altered.

Pulses are played with short ``sin^2`` edges (area preserved). With one coil
for both spins a nuclear pulse also drives the electron far off resonance,
and a hard edge at a nonzero field value kicks it out of its instantaneous
eigenbasis; the smooth edges remove that error.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..dynamics import PropagationSpec, default_dt, expm_i_hermitian, propagate, to_rotating_frame
from ..hamiltonian import (
    PhysicalInput,
    SystemParams,
    drive_operator,
    channel_lines,
    energy_levels,
    rabi_to_amplitude,
    static_hamiltonian,
    zeeman_hamiltonian,
)
from ..spin import DIM
from .ir import Backend, Delay, PulseSequence, RfPulse, VirtualZ
from .semantics import addressed_lines, element_unitary


class CoarseStepWarning(UserWarning):
    """Requested integrator step exceeds the default (fewer than 50 samples per fastest period)."""


def execute_ideal(seq: PulseSequence, p: SystemParams) -> np.ndarray:
    u = np.eye(DIM, dtype=complex)
    for el in seq.elements:
        u = element_unitary(el, p) @ u
    return np.exp(1j * seq.global_phase) * u


def stark_shifts(energies, coupling, omega, resonant_pairs=(), oscillating=False) -> np.ndarray:
    """Second-order level shifts from a drive ``coupling*cos(omega*t + phi)``.

    For each level ``k`` this sums ``|V_km|^2/4 * (1/(E_k - E_m - omega) + 1/(E_k - E_m + omega))``
    over the other levels. For pairs in ``resonant_pairs`` only the
    counter-rotating term is kept; the resonant one is the intended drive.

    With ``oscillating=True`` the result is instead the amplitude of the
    ``cos(2*(omega*t + phi))`` part of the instantaneous shift. Only
    non-resonant pairs have one; it dominates when ``omega`` is small against
    ``E_k - E_m`` and the level follows the drive field adiabatically.
    """
    energies = np.asarray(energies, dtype=float)
    coupling = np.asarray(coupling)
    resonant = {frozenset(pair) for pair in resonant_pairs}
    eps = np.zeros(len(energies))
    for k in range(len(energies)):
        for m in range(len(energies)):
            v2 = abs(coupling[k, m]) ** 2
            if m == k or v2 == 0:
                continue
            dens = [energies[k] - energies[m] - omega, energies[k] - energies[m] + omega]
            if frozenset((k, m)) in resonant:
                if oscillating:
                    continue
                dens = [max(dens, key=abs)]
            for den in dens:
                if abs(den) > 1e-12 * max(1.0, abs(omega)):
                    eps[k] += v2 / 4 / den
    return eps


@dataclass(frozen=True)
class LabWaveform:
    """A pulse lowered to a lab-frame drive ``amplitude*envelope(t)*cos(carrier*t + phase)``.

    The envelope rises and falls over ``ramp`` with ``sin^2`` edges and is
    flat in between; ``amplitude`` is scaled so the pulse area, and hence the
    rotation angle, matches the rectangular pulse it stands for.
    """

    amplitude: float
    carrier: float
    phase: float
    t0: float
    duration: float
    ramp: float
    stark: np.ndarray
    stark_oscillating: np.ndarray

    def envelope(self, ts) -> np.ndarray:
        s = np.clip(np.asarray(ts, dtype=float) - self.t0, 0.0, self.duration)
        if self.ramp == 0:
            return np.ones_like(s)
        edge = np.minimum(np.minimum(s, self.duration - s) / self.ramp, 1.0)
        return np.sin(np.pi / 2 * edge) ** 2

    def field(self, ts) -> np.ndarray:
        ts = np.asarray(ts, dtype=float)
        return self.amplitude * self.envelope(ts) * np.cos(self.carrier * ts + self.phase)

    def frame_correction(self, ts, step: float) -> np.ndarray:
        """Diagonal phases undoing the predicted Stark phase, by quadrature over the step midpoints ``ts``."""
        weight = self.envelope(ts) ** 2
        static = float(np.sum(weight)) * step
        wobble = float(np.sum(weight * np.cos(2 * (self.carrier * ts + self.phase)))) * step
        return np.exp(1j * (self.stark * static + self.stark_oscillating * wobble))


RAMP_PERIODS = 2.0


def ramp_time(pulse: RfPulse, p: SystemParams) -> float:
    """Edge length: a few periods of the slowest line of the other spin, at most a quarter of the pulse.

    The shared coil also drives the other spin off resonance; smooth edges let
    it follow the field adiabatically instead of being kicked at switch-on/off.
    """
    spectator = min(t.angular_frequency for t in channel_lines(p, pulse.channel.other))
    limit = pulse.duration / 4
    if spectator == 0:
        return limit
    return min(limit, RAMP_PERIODS * 2 * math.pi / spectator)


def lower_pulse(
    pulse: RfPulse,
    p: SystemParams,
    phys: PhysicalInput,
    t0: float,
    stark_compensation: bool = True,
    shaped: bool = True,
) -> LabWaveform:
    lines = addressed_lines(pulse, p)
    energies = energy_levels(p)
    # Coupling phase per level; the doubly-rotating frame does not remove it.
    coupling_diag = energies - np.real(np.diag(zeeman_hamiltonian(p)))
    drive = np.real(drive_operator(phys))
    ramp = ramp_time(pulse, p) if shaped else 0.0
    # Area-preserving: sin^2 edges each lose ramp/2 of area.
    amplitude = rabi_to_amplitude(pulse.rabi, phys, pulse.channel) * pulse.duration / (pulse.duration - ramp)
    i, j = lines[0].from_index, lines[0].to_index
    splitting = energies[i] - energies[j]
    if splitting == 0:
        raise ValueError("cannot drive a zero-frequency line")
    orient = math.copysign(1.0, splitting)
    flip = math.pi if drive[i, j] < 0 else 0.0

    pairs = [(t.from_index, t.to_index) for t in lines]
    if stark_compensation:
        eps = stark_shifts(energies, amplitude * drive, pulse.carrier, pairs)
        eps_osc = stark_shifts(energies, amplitude * drive, pulse.carrier, pairs, oscillating=True)
    else:
        eps = eps_osc = np.zeros(DIM)
    carrier = abs(splitting + eps[i] - eps[j])
    phase = orient * (pulse.phase + flip - t0 * (coupling_diag[i] - coupling_diag[j]) - t0 * (eps[i] - eps[j]))
    return LabWaveform(amplitude, carrier, phase, t0, pulse.duration, ramp, eps, eps_osc)


def execute_physical(
    seq: PulseSequence,
    p: SystemParams,
    phys: Optional[PhysicalInput] = None,
    dt: Optional[float] = None,
    stark_compensation: bool = True,
    shaped: bool = True,
) -> np.ndarray:
    phys = phys if phys is not None else PhysicalInput.from_system_params(p)
    h_static = np.real(static_hamiltonian(p))
    drive = np.real(drive_operator(phys))
    carriers = [el.carrier for el in seq.elements if isinstance(el, RfPulse)]
    dt_default = default_dt(p, carriers)
    if dt is None:
        dt = dt_default
    elif dt > dt_default * (1 + 1e-12):
        warnings.warn(
            f"dt = {dt:.6g} is coarser than the default {dt_default:.6g}", CoarseStepWarning, stacklevel=2
        )

    u = np.eye(DIM, dtype=complex)
    t = 0.0
    for el in seq.elements:
        if isinstance(el, VirtualZ):
            # Diagonal, so it commutes with the static Hamiltonian: an exact frame update.
            u = element_unitary(el, p) @ u
        elif isinstance(el, Delay):
            u = expm_i_hermitian(h_static, el.duration) @ u
            t += el.duration
        else:
            wave = lower_pulse(el, p, phys, t, stark_compensation, shaped)

            def hamiltonian(ts, wave=wave):
                return h_static + wave.field(ts)[:, None, None] * drive

            spec = PropagationSpec(t, t + el.duration, dt)
            u = propagate(hamiltonian, spec, vectorized=True) @ u
            if spec.n_steps:
                step = el.duration / spec.n_steps
                mids = t + (np.arange(spec.n_steps) + 0.5) * step
                u = wave.frame_correction(mids, step)[:, None] * u
            t += el.duration
    u = to_rotating_frame(u, zeeman_hamiltonian(p), t)
    return np.exp(1j * seq.global_phase) * u


def execute(
    seq: PulseSequence,
    backend: Backend,
    p: SystemParams,
    phys: Optional[PhysicalInput] = None,
    dt: Optional[float] = None,
    stark_compensation: bool = True,
    shaped: bool = True,
) -> np.ndarray:
    """Unitary realized by ``seq`` on ``backend``, in the doubly-rotating frame."""
    backend = Backend(backend)
    if backend is Backend.IDEAL:
        return execute_ideal(seq, p)
    return execute_physical(seq, p, phys, dt, stark_compensation, shaped)
