"""Pulse-sequence intermediate representation and its JSON form."""

from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass, field
from typing import Union

from ..spin import SpinChannel


class Backend(enum.Enum):
    IDEAL = "ideal"
    PHYSICAL = "physical"


class FrameTarget(enum.Enum):
    """What a virtual Z rotation acts on: one spin's ``Z`` or the ``2*I_z*S_z`` coupling."""

    ELECTRON = "electron"
    NUCLEAR = "nuclear"
    ZZ = "zz"


@dataclass(frozen=True)
class RfPulse:
    """Rectangular resonant pulse.

    ``phase`` is the rotation-axis azimuth in the doubly-rotating frame
    (0 is +x, pi/2 is +y); the backends translate it into a lab carrier phase.
    """

    channel: SpinChannel
    carrier: float
    rabi: float
    phase: float
    duration: float

    def __post_init__(self):
        object.__setattr__(self, "channel", SpinChannel(self.channel))
        if not self.rabi > 0:
            raise ValueError(f"rabi rate must be > 0, got {self.rabi!r}")
        if not self.duration >= 0:
            raise ValueError(f"duration must be >= 0, got {self.duration!r}")
        if not (math.isfinite(self.carrier) and math.isfinite(self.phase)):
            raise ValueError("carrier and phase must be finite")

    @property
    def angle(self) -> float:
        return self.rabi * self.duration


@dataclass(frozen=True)
class Delay:
    duration: float

    def __post_init__(self):
        if not (self.duration >= 0 and math.isfinite(self.duration)):
            raise ValueError(f"duration must be finite and >= 0, got {self.duration!r}")


@dataclass(frozen=True)
class VirtualZ:
    target: FrameTarget
    angle: float

    def __post_init__(self):
        object.__setattr__(self, "target", FrameTarget(getattr(self.target, "value", self.target)))
        if not math.isfinite(self.angle):
            raise ValueError("angle must be finite")

    duration = 0.0


PulseElement = Union[RfPulse, Delay, VirtualZ]


def wrap_phase(phi: float) -> float:
    """Map a phase to (-pi, pi]."""
    wrapped = math.remainder(phi, 2 * math.pi)
    return math.pi if wrapped == -math.pi else wrapped


@dataclass(frozen=True)
class PulseSequence:
    """Elements applied left to right in time, plus a tracked global phase.

    The unitary a sequence stands for is ``exp(1j*global_phase)`` times the
    time-ordered product of its elements.
    """

    elements: tuple = ()
    global_phase: float = 0.0
    warnings: tuple = field(default=(), compare=False)

    def __post_init__(self):
        object.__setattr__(self, "elements", tuple(self.elements))
        object.__setattr__(self, "warnings", tuple(self.warnings))
        if not math.isfinite(self.global_phase):
            raise ValueError("global_phase must be finite")
        for el in self.elements:
            if not isinstance(el, (RfPulse, Delay, VirtualZ)):
                raise TypeError(f"not a pulse element: {el!r}")

    @property
    def duration(self) -> float:
        return math.fsum(el.duration for el in self.elements)

    def __add__(self, other: "PulseSequence") -> "PulseSequence":
        if not isinstance(other, PulseSequence):
            return NotImplemented
        return PulseSequence(
            self.elements + other.elements,
            wrap_phase(self.global_phase + other.global_phase),
            self.warnings + tuple(w for w in other.warnings if w not in self.warnings),
        )

    def __len__(self):
        return len(self.elements)

    def to_dict(self) -> dict:
        return {"elements": [element_to_dict(el) for el in self.elements], "global_phase": self.global_phase}

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), **kwargs)

    @classmethod
    def from_dict(cls, doc: dict) -> "PulseSequence":
        try:
            elements = [element_from_dict(d) for d in doc["elements"]]
            return cls(tuple(elements), float(doc.get("global_phase", 0.0)))
        except KeyError as exc:
            raise ValueError(f"pulse sequence document is missing field {exc.args[0]!r}") from None

    @classmethod
    def from_json(cls, text: str) -> "PulseSequence":
        return cls.from_dict(json.loads(text))


def element_to_dict(el: PulseElement) -> dict:
    if isinstance(el, RfPulse):
        return {
            "type": "rf",
            "channel": el.channel.value,
            "carrier": el.carrier,
            "rabi": el.rabi,
            "phase": el.phase,
            "duration": el.duration,
        }
    if isinstance(el, Delay):
        return {"type": "delay", "duration": el.duration}
    return {"type": "vz", "target": el.target.value, "angle": el.angle}


def element_from_dict(d: dict) -> PulseElement:
    kind = d.get("type")
    if kind == "rf":
        return RfPulse(
            SpinChannel(d["channel"]), float(d["carrier"]), float(d["rabi"]), float(d["phase"]), float(d["duration"])
        )
    if kind == "delay":
        return Delay(float(d["duration"]))
    if kind == "vz":
        return VirtualZ(FrameTarget(d["target"]), float(d["angle"]))
    raise ValueError(f"unknown pulse element type {kind!r}")
