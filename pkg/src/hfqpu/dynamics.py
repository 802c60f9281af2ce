"""
Time evolution: Hermitian exponentials, midpoint propagation, frame changes.

The propagator is the piecewise-constant exponential midpoint rule
``U <- exp(-i H(t + dt/2) dt) U``. Each step is an exact unitary obtained
from an eigendecomposition, so unitarity holds structurally and the scheme
is second order in ``dt``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .hamiltonian import SystemParams, max_frequency
from .spin import DIM, ContractViolation, unitarity_error

MAX_STEPS = 10**8
SAMPLES_PER_PERIOD = 50
UNITARITY_TOL = 1e-10
# Round-off drift grows about linearly with step count; the tolerance is per this many steps.
UNITARITY_BUDGET_STEPS = 10**4
_CHUNK = 8192


def _check_hermitian(h: np.ndarray, tol: float = 1e-10) -> None:
    # Relative tolerance: lab-frame Hamiltonians carry entries ~1e3 and beyond.
    h = np.asarray(h)
    asym = np.max(np.abs(h - np.swapaxes(h.conj(), -1, -2)), initial=0.0)
    scale = max(1.0, float(np.max(np.abs(h), initial=0.0)))
    if not np.isfinite(asym) or asym > tol * scale:
        raise ContractViolation(f"Hamiltonian is not Hermitian (max |H - H^dag| = {asym:.3e})")


def expm_i_hermitian(h: np.ndarray, t: float) -> np.ndarray:
    """Return ``exp(-i*h*t)`` for Hermitian ``h`` via its eigendecomposition."""
    h = np.asarray(h)
    _check_hermitian(h)
    if t == 0:
        return np.eye(h.shape[-1], dtype=complex)
    evals, evecs = np.linalg.eigh(h)
    return (evecs * np.exp(-1j * evals * t)) @ evecs.conj().T


def _step_unitaries(hs: np.ndarray, h: float) -> np.ndarray:
    evals, evecs = np.linalg.eigh(hs)
    return np.einsum("nij,nj,nkj->nik", evecs, np.exp(-1j * evals * h), evecs.conj())


def _time_ordered_product(steps: np.ndarray) -> np.ndarray:
    """``steps[-1] @ ... @ steps[0]`` by pairwise reduction (fixed order, so deterministic)."""
    while len(steps) > 1:
        if len(steps) % 2:
            steps = np.concatenate([steps, np.eye(DIM, dtype=complex)[None]])
        steps = steps[1::2] @ steps[0::2]
    return steps[0]


@dataclass(frozen=True)
class PropagationSpec:
    t0: float
    t1: float
    dt: float
    method: str = "midpoint"

    def __post_init__(self):
        if self.method != "midpoint":
            raise ValueError(f"unsupported method {self.method!r}; only 'midpoint' is implemented")
        if not (math.isfinite(self.t0) and math.isfinite(self.t1)):
            raise ValueError("t0 and t1 must be finite")
        if self.t1 < self.t0:
            raise ValueError(f"t1 ({self.t1}) must be >= t0 ({self.t0})")
        if not (self.dt > 0 and math.isfinite(self.dt)):
            raise ValueError(f"dt must be a positive finite number, got {self.dt!r}")

    @property
    def n_steps(self) -> int:
        span = self.t1 - self.t0
        if span == 0:
            return 0
        # The relative slack keeps an exact multiple of dt from gaining a sliver step.
        return max(1, math.ceil(span / self.dt * (1 - 1e-12)))


def default_dt(p: SystemParams, carriers=()) -> float:
    """``(2*pi/omega_max)/50`` over level splittings and drive carriers."""
    omega_max = max([max_frequency(p), *[abs(c) for c in carriers]])
    if omega_max == 0:
        return math.inf
    return 2 * math.pi / omega_max / SAMPLES_PER_PERIOD


def propagate(
    hamiltonian_of_t: Callable,
    spec: PropagationSpec,
    vectorized: bool = False,
) -> np.ndarray:
    """Time-ordered propagator from ``spec.t0`` to ``spec.t1``.

    Parameters
    ----------
    hamiltonian_of_t : callable
        ``H(t)`` returning a Hermitian ``(4, 4)`` array. With ``vectorized=True``
        it receives a 1-D array of times and must return ``(n, 4, 4)``.
    spec : PropagationSpec
        Interval and maximum step. The interval is split into
        ``ceil((t1 - t0)/dt)`` equal steps.

    Returns
    -------
    numpy.ndarray
        The total propagator ``U(t1, t0)``.
    """
    n = spec.n_steps
    if n > MAX_STEPS:
        raise ValueError(
            f"refusing to integrate {n} steps (limit {MAX_STEPS}); "
            f"interval {spec.t1 - spec.t0:.6g} with dt {spec.dt:.6g} is too fine"
        )
    total = np.eye(DIM, dtype=complex)
    if n == 0:
        return total
    h = (spec.t1 - spec.t0) / n
    for start in range(0, n, _CHUNK):
        times = spec.t0 + (np.arange(start, min(start + _CHUNK, n)) + 0.5) * h
        if vectorized:
            hs = np.asarray(hamiltonian_of_t(times))
        else:
            hs = np.stack([np.asarray(hamiltonian_of_t(t)) for t in times])
        _check_hermitian(hs)
        total = _time_ordered_product(_step_unitaries(hs, h)) @ total
    err = unitarity_error(total)
    tol = UNITARITY_TOL * max(1.0, n / UNITARITY_BUDGET_STEPS)
    if err > tol:
        raise ContractViolation(f"propagator lost unitarity over {n} steps: ||U^dag U - I||_F = {err:.3e}")
    return total


def to_rotating_frame(u_lab: np.ndarray, h0: np.ndarray, t: float) -> np.ndarray:
    """``exp(+i*h0*t) @ u_lab`` for a diagonal frame generator ``h0``."""
    h0 = np.asarray(h0)
    diag = np.diag(h0)
    if np.max(np.abs(h0 - np.diag(diag)), initial=0.0) > 0:
        raise ContractViolation("frame generator must be diagonal")
    _check_hermitian(h0)
    return np.exp(1j * diag.real * t)[:, None] * np.asarray(u_lab)
