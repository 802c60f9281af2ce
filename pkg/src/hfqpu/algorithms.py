"""
Two-qubit Deutsch-Jozsa and Grover runs with sampled projective measurement.

Wire roles: the nucleus is the query / first search qubit, the electron is
the ancilla / second qubit. Outcome labels are ``"<nucleus><electron>"``, so
label ``"01"`` is basis index 1. Every circuit is a list of
:class:`~hfqpu.gates.Gate` lowered through the pulse compiler, never a
hand-built unitary.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .gates import Gate, circuit_unitary, process_fidelity
from .hamiltonian import DEMO_PARAMS, PhysicalInput, SystemParams
from .pulse import Backend, DriveBudget, compile_circuit, execute
from .spin import DIM, ContractViolation, SpinChannel, basis_state

NUCLEUS = SpinChannel.NUCLEAR
ELECTRON = SpinChannel.ELECTRON
LABELS = ("00", "01", "10", "11")
NORM_TOL = 1e-10


class DJOracle(enum.Enum):
    CONST0 = "const0"
    CONST1 = "const1"
    BALANCED_ID = "balanced_id"
    BALANCED_NOT = "balanced_not"

    def f(self, x: int) -> int:
        return {
            DJOracle.CONST0: 0,
            DJOracle.CONST1: 1,
            DJOracle.BALANCED_ID: x,
            DJOracle.BALANCED_NOT: 1 - x,
        }[self]

    @property
    def is_constant(self) -> bool:
        return self in (DJOracle.CONST0, DJOracle.CONST1)


@dataclass(frozen=True)
class MeasurementCounts:
    counts: dict
    shots: int
    seed: int
    probabilities: np.ndarray = field(compare=False)

    def frequency(self, index: int) -> float:
        return self.counts[index] / self.shots

    def labelled(self) -> dict:
        return {LABELS[i]: int(self.counts[i]) for i in range(DIM)}


def shot_uniforms(seed: int, start: int, stop: int) -> np.ndarray:
    """Uniform deviates for shots ``start..stop-1``.

    Shot ``k`` always receives the ``k``-th double of a Philox stream keyed by
    ``seed``, so any partition of the shots into shards reproduces the
    sequential draw exactly.
    """
    bitgen = np.random.Philox(key=seed)
    # Philox yields four 64-bit words per counter step.
    bitgen.advance(start // 4)
    gen = np.random.Generator(bitgen)
    return gen.random(stop - start + start % 4)[start % 4 :]


def measure(state: np.ndarray, shots: int, seed: int) -> MeasurementCounts:
    """Sample ``shots`` projective measurements in the computational basis."""
    state = np.asarray(state, dtype=complex)
    if shots < 1:
        raise ValueError(f"shots must be >= 1, got {shots!r}")
    if not 0 <= seed < 2**64:
        raise ValueError("seed must be an unsigned 64-bit integer")
    norm = float(np.linalg.norm(state))
    if abs(norm - 1) > NORM_TOL:
        raise ContractViolation(f"state is not normalized (norm = {norm!r})")
    probs = np.abs(state) ** 2
    cdf = np.cumsum(probs)
    cdf /= cdf[-1]
    outcomes = np.searchsorted(cdf, shot_uniforms(seed, 0, shots), side="right")
    tally = np.bincount(np.minimum(outcomes, DIM - 1), minlength=DIM)
    return MeasurementCounts({i: int(tally[i]) for i in range(DIM)}, shots, seed, probs)


def dj_oracle_gates(oracle: DJOracle) -> list:
    """``|x, y> -> |x, y XOR f(x)>`` with x on the nucleus and y on the electron."""
    oracle = DJOracle(oracle)
    if oracle is DJOracle.CONST0:
        return []
    if oracle is DJOracle.CONST1:
        return [Gate.x(ELECTRON)]
    if oracle is DJOracle.BALANCED_ID:
        return [Gate.cnot(NUCLEUS, ELECTRON)]
    return [Gate.cnot(NUCLEUS, ELECTRON), Gate.x(ELECTRON)]


def dj_circuit(oracle: DJOracle) -> list:
    return (
        [Gate.x(ELECTRON), Gate.h(NUCLEUS), Gate.h(ELECTRON)]
        + dj_oracle_gates(oracle)
        + [Gate.h(NUCLEUS)]
    )


def phase_flip_gates(marked: int) -> list:
    """Flip the sign of ``|marked>`` (up to global phase) with CZ and Z corrections.

    ``[x = m]`` expands into products of ``x_n``, ``x_e`` and ``x_n*x_e``; the
    product term is the CZ and the single-bit terms are Z gates on the spin
    whose partner bit of ``m`` is 0.
    """
    if marked not in range(DIM):
        raise ValueError(f"marked must be in 0..3, got {marked!r}")
    bit_n, bit_e = marked >> 1, marked & 1
    gates = []
    if not bit_e:
        gates.append(Gate.z(NUCLEUS))
    if not bit_n:
        gates.append(Gate.z(ELECTRON))
    return gates + [Gate.cz()]


def grover_circuit(marked: int, iterations: int = 1) -> list:
    if iterations < 0:
        raise ValueError("iterations must be >= 0")
    hadamards = [Gate.h(NUCLEUS), Gate.h(ELECTRON)]
    gates = list(hadamards)
    for _ in range(iterations):
        gates += phase_flip_gates(marked) + hadamards + phase_flip_gates(0) + hadamards
    return gates


@dataclass
class RunResult:
    probabilities: np.ndarray
    counts: MeasurementCounts
    backend: Backend
    fidelity_vs_ideal: Optional[float]
    unitary: np.ndarray
    extra: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        doc = {
            "probabilities": [float(x) for x in self.probabilities],
            "counts": self.counts.labelled(),
            "shots": self.counts.shots,
            "seed": self.counts.seed,
            "backend": self.backend.value,
            "fidelity_vs_ideal": self.fidelity_vs_ideal,
        }
        doc.update(self.extra)
        return doc

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), **kwargs)


def run_circuit(
    gates,
    backend: Backend = Backend.IDEAL,
    params: SystemParams = DEMO_PARAMS,
    drive: DriveBudget = DriveBudget(),
    phys: Optional[PhysicalInput] = None,
    dt: Optional[float] = None,
    shots: int = 1024,
    seed: int = 0,
) -> RunResult:
    """Compile, execute from ``|00>`` and measure."""
    backend = Backend(backend)
    seq = compile_circuit(gates, params, drive)
    u = execute(seq, backend, params, phys=phys, dt=dt)
    state = u @ basis_state(0.5, 0.5)
    # Renormalize away integrator round-off before the strict measurement check.
    state = state / np.linalg.norm(state)
    counts = measure(state, shots, seed)
    fidelity = None
    if backend is Backend.PHYSICAL:
        fidelity = process_fidelity(u, circuit_unitary(gates))
    return RunResult(counts.probabilities, counts, backend, fidelity, u, {"duration": seq.duration})


def deutsch_jozsa(oracle: DJOracle, backend: Backend = Backend.IDEAL, **kwargs) -> RunResult:
    """Decide whether the one-bit oracle is constant from the query (nuclear) qubit.

    The verdict is "Constant" when outcome 0 on the query qubit is the
    majority of the sampled shots.
    """
    oracle = DJOracle(oracle)
    result = run_circuit(dj_circuit(oracle), backend, **kwargs)
    c = result.counts.counts
    query_zero = c[0] + c[1]
    probs = result.probabilities
    result.extra.update(
        algorithm="dj",
        oracle=oracle.value,
        verdict="Constant" if 2 * query_zero > result.counts.shots else "Balanced",
        query_probabilities=[float(probs[0] + probs[1]), float(probs[2] + probs[3])],
    )
    return result


def grover(marked: int, backend: Backend = Backend.IDEAL, iterations: int = 1, **kwargs) -> RunResult:
    result = run_circuit(grover_circuit(marked, iterations), backend, **kwargs)
    c = result.counts.counts
    result.extra.update(
        algorithm="grover",
        marked=marked,
        iterations=iterations,
        top_outcome=max(range(DIM), key=lambda i: (c[i], -i)),
    )
    return result
