"""Simulator and pulse compiler for a two-qubit electron-nuclear spin processor."""

from .algorithms import DJOracle, deutsch_jozsa, grover, measure
from .gates import Gate, GateKind, circuit_unitary, ideal_unitary, process_fidelity
from .hamiltonian import (
    DEMO_PARAMS,
    PhysicalInput,
    SystemParams,
    energy_levels,
    static_hamiltonian,
    transition_table,
)
from .pulse import Backend, DriveBudget, PulseSequence, compile_circuit, compile_gate, execute
from .spin import ContractViolation, SpinChannel

__version__ = "0.1.0"

__all__ = [
    "Backend",
    "ContractViolation",
    "DEMO_PARAMS",
    "DJOracle",
    "DriveBudget",
    "Gate",
    "GateKind",
    "PhysicalInput",
    "PulseSequence",
    "SpinChannel",
    "SystemParams",
    "circuit_unitary",
    "compile_circuit",
    "compile_gate",
    "deutsch_jozsa",
    "energy_levels",
    "execute",
    "grover",
    "ideal_unitary",
    "measure",
    "process_fidelity",
    "static_hamiltonian",
    "transition_table",
]
