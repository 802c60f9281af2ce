from .backends import CoarseStepWarning, execute, lower_pulse, stark_shifts
from .compiler import (
    DriveBudget,
    SelectivityWarning,
    compile_circuit,
    compile_gate,
    paper_cz_sequence,
    zz_delay,
)
from .ir import Backend, Delay, FrameTarget, PulseSequence, RfPulse, VirtualZ
from .semantics import Generator, element_unitary, rotation_semantics

__all__ = [
    "Backend",
    "CoarseStepWarning",
    "Delay",
    "DriveBudget",
    "FrameTarget",
    "Generator",
    "PulseSequence",
    "RfPulse",
    "SelectivityWarning",
    "VirtualZ",
    "compile_circuit",
    "compile_gate",
    "element_unitary",
    "execute",
    "lower_pulse",
    "paper_cz_sequence",
    "rotation_semantics",
    "stark_shifts",
    "zz_delay",
]
