"""
Static hyperfine Hamiltonian, transverse drive term and resonance table.

All Hamiltonians are returned in angular-frequency units (hbar = 1, rad/s).
:class:`PhysicalInput` is the only place raw physical constants enter; its
:meth:`PhysicalInput.to_system_params` reduces them to the three frequencies
the rest of the package works with.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import asdict, dataclass

import numpy as np
from scipy import constants

from .spin import IX, IZ, SX, SZ, SpinChannel, projections

REGIME_RATIO = 10.0


class RegimeWarning(UserWarning):
    """Electron Zeeman frequency is not large compared with the hyperfine coupling."""


@dataclass(frozen=True)
class SystemParams:
    """Angular frequencies of the static Hamiltonian.

    ``H/hbar = omega_e*S_z - omega_n*I_z + a*S_z*I_z``
    """

    omega_e: float
    omega_n: float
    a: float

    def __post_init__(self):
        for name in ("omega_e", "omega_n", "a"):
            value = getattr(self, name)
            if not math.isfinite(value):
                raise ValueError(f"{name} must be finite, got {value!r}")

    @property
    def paper_regime_ok(self) -> bool:
        return abs(self.omega_e) >= REGIME_RATIO * abs(self.a)

    def scaled(self, c: float) -> "SystemParams":
        return SystemParams(c * self.omega_e, c * self.omega_n, c * self.a)

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class PhysicalInput:
    """Raw physical inputs. Units: rad/s/T for the ratios, T for ``field_B``, rad/s for the coupling."""

    g_factor: float
    bohr_magneton_over_hbar: float
    field_B: float
    gamma_n: float
    gamma_e: float
    hyperfine_A_over_hbar: float

    def __post_init__(self):
        if self.field_B < 0:
            raise ValueError(f"field_B must be >= 0, got {self.field_B!r}")

    def to_system_params(self) -> SystemParams:
        return SystemParams(
            omega_e=self.g_factor * self.bohr_magneton_over_hbar * self.field_B,
            omega_n=self.gamma_n * self.field_B,
            a=self.hyperfine_A_over_hbar,
        )

    @classmethod
    def from_system_params(cls, p: SystemParams) -> "PhysicalInput":
        """Dimensionless wiring: unit field, ``g = 1`` and ``gamma_e = g*beta/hbar``."""
        return cls(
            g_factor=1.0,
            bohr_magneton_over_hbar=p.omega_e,
            field_B=1.0,
            gamma_n=p.omega_n,
            gamma_e=p.omega_e,
            hyperfine_A_over_hbar=p.a,
        )

    def gamma(self, channel: SpinChannel) -> float:
        return self.gamma_e if SpinChannel(channel) is SpinChannel.ELECTRON else self.gamma_n


@dataclass(frozen=True)
class DriveParams:
    amplitude_Hx: float
    frequency_omega: float
    phase: float = 0.0
    duration: float = 0.0

    def __post_init__(self):
        if self.amplitude_Hx < 0:
            raise ValueError("amplitude_Hx must be >= 0; carry the sign in the phase")
        if self.duration < 0:
            raise ValueError("duration must be >= 0")


@dataclass(frozen=True)
class Transition:
    """One single-spin-flip line.

    ``from_index`` is the basis state where the flipped spin is ``+1/2``
    (logical 0); ``spectator`` is the projection of the other spin that
    selects this line.
    """

    from_index: int
    to_index: int
    channel: SpinChannel
    spectator: float
    angular_frequency: float

    def to_dict(self) -> dict:
        return {
            "from_index": self.from_index,
            "to_index": self.to_index,
            "channel": self.channel.value,
            "spectator": self.spectator,
            "angular_frequency": self.angular_frequency,
        }


# Demo regime: rabi << a << omega_e. Artifact defaults, not measured values.
DEMO_PARAMS = SystemParams(omega_e=1000.0, omega_n=10.0, a=50.0)
DEMO_RABI_E = 1.0
# Kept well below omega_n: the shared coil drives the electron at
# rabi_n * gamma_e / gamma_n during nuclear pulses.
DEMO_RABI_N = 0.25

_HYDROGEN_HYPERFINE_HZ = 1420.405751768e6  # ground-state 21 cm line


def hydrogen_like_1T() -> PhysicalInput:
    """Hydrogen-like atom at 1 T from CODATA constants (illustrative, outside the secular regime)."""
    mu_b = constants.physical_constants["Bohr magneton"][0]
    return PhysicalInput(
        g_factor=-constants.physical_constants["electron g factor"][0],
        bohr_magneton_over_hbar=mu_b / constants.hbar,
        field_B=1.0,
        gamma_n=constants.physical_constants["proton gyromag. ratio"][0],
        gamma_e=-constants.physical_constants["electron g factor"][0] * mu_b / constants.hbar,
        hyperfine_A_over_hbar=2 * math.pi * _HYDROGEN_HYPERFINE_HZ,
    )


def check_regime(p: SystemParams) -> bool:
    """Warn (never raise) when the secular approximation's premise does not hold."""
    if not p.paper_regime_ok:
        warnings.warn(
            f"|omega_e| = {abs(p.omega_e):.6g} is below {REGIME_RATIO:g}*|a| = "
            f"{REGIME_RATIO * abs(p.a):.6g}; the secular Hamiltonian is only approximate here",
            RegimeWarning,
            stacklevel=2,
        )
    return p.paper_regime_ok


def level_energy(p: SystemParams, m_I: float, m_S: float) -> float:
    """Closed form ``E(m_I, m_S) = omega_e*m_S - omega_n*m_I + a*m_I*m_S``."""
    return p.omega_e * m_S - p.omega_n * m_I + p.a * m_I * m_S


def static_hamiltonian(p: SystemParams) -> np.ndarray:
    return p.omega_e * SZ - p.omega_n * IZ + p.a * (SZ @ IZ)


def zeeman_hamiltonian(p: SystemParams) -> np.ndarray:
    """Static Hamiltonian without the coupling; generator of the doubly-rotating frame."""
    return p.omega_e * SZ - p.omega_n * IZ


def energy_levels(p: SystemParams) -> np.ndarray:
    return np.real(np.diag(static_hamiltonian(p))).copy()


_LINES = (
    (0, 1, SpinChannel.ELECTRON),
    (2, 3, SpinChannel.ELECTRON),
    (0, 2, SpinChannel.NUCLEAR),
    (1, 3, SpinChannel.NUCLEAR),
)


def transition_table(p: SystemParams) -> list[Transition]:
    """The four allowed lines: electron at ``|omega_e +- a/2|``, nuclear at ``|omega_n -+ a/2|``."""
    energies = energy_levels(p)
    table = []
    for i, j, channel in _LINES:
        m_I, m_S = projections(i)
        spectator = m_I if channel is SpinChannel.ELECTRON else m_S
        table.append(Transition(i, j, channel, spectator, float(abs(energies[i] - energies[j]))))
    return table


def channel_lines(p: SystemParams, channel: SpinChannel) -> list[Transition]:
    return [t for t in transition_table(p) if t.channel is SpinChannel(channel)]


def drive_operator(phys: PhysicalInput) -> np.ndarray:
    """Coefficient of ``H_x cos(omega t + phase)`` in the drive term."""
    return phys.gamma_e * SX - phys.gamma_n * IX


def drive_hamiltonian(phys: PhysicalInput, d: DriveParams, t: float) -> np.ndarray:
    """``(gamma_e*S_x - gamma_n*I_x) * H_x * cos(omega*t + phase)``; one coil drives both spins."""
    return drive_operator(phys) * (d.amplitude_Hx * math.cos(d.frequency_omega * t + d.phase))


def rabi_to_amplitude(rabi: float, phys: PhysicalInput, channel: SpinChannel) -> float:
    """Drive amplitude giving Rabi rate ``rabi = |gamma|*H_x/2`` on ``channel`` (rotating-wave estimate)."""
    gamma = abs(phys.gamma(channel))
    if gamma == 0:
        raise ValueError(f"gamma for the {SpinChannel(channel).value} channel is zero; it cannot be driven")
    return 2.0 * rabi / gamma


def max_frequency(p: SystemParams) -> float:
    energies = energy_levels(p)
    return float(np.max(np.abs(energies[:, None] - energies[None, :])))
