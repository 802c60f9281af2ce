"""
Command-line front end.

Exit codes: 0 success, 2 configuration or usage error, 3 numerical contract
violation. Output goes to ``--out`` or stdout; floats are written with
shortest round-trip precision so every number parses back bit-exactly.
"""

from __future__ import annotations

import argparse
import ast
import csv
import io
import json
import math
import os
import sys
import warnings
from dataclasses import dataclass, replace
from typing import Optional

import numpy as np

from . import algorithms
from .dynamics import PropagationSpec, default_dt, propagate
from .gates import Gate, GateKind, ideal_unitary, process_fidelity
from .hamiltonian import (
    DEMO_PARAMS,
    PhysicalInput,
    SystemParams,
    check_regime,
    channel_lines,
    drive_operator,
    energy_levels,
    rabi_to_amplitude,
    static_hamiltonian,
    transition_table,
)
from .pulse import Backend, DriveBudget, compile_gate, execute
from .spin import ContractViolation, SpinChannel, basis_state

ENV_CONFIG = "HFQPU_DEFAULT_CONFIG"
EXIT_USAGE = 2
EXIT_NUMERICAL = 3

_PHYSICAL_KEYS = {
    "g": "g_factor",
    "beta_over_hbar": "bohr_magneton_over_hbar",
    "B0": "field_B",
    "gamma_n": "gamma_n",
    "gamma_e": "gamma_e",
    "A_over_hbar": "hyperfine_A_over_hbar",
}


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    params: SystemParams = DEMO_PARAMS
    phys: Optional[PhysicalInput] = None
    drive: DriveBudget = DriveBudget()
    dt: Optional[float] = None
    backend: Backend = Backend.IDEAL


def _number(doc: dict, key: str, where: str, positive: bool = False) -> float:
    if key not in doc:
        raise ConfigError(f"{where}.{key} is missing")
    value = doc[key]
    if isinstance(value, bool) or not isinstance(value, (int, float)) or not math.isfinite(value):
        raise ConfigError(f"{where}.{key} must be a finite number, got {value!r}")
    if positive and not value > 0:
        raise ConfigError(f"{where}.{key} must be > 0, got {value!r}")
    return float(value)


def _section(doc: dict, key: str, allowed) -> Optional[dict]:
    if key not in doc:
        return None
    section = doc[key]
    if not isinstance(section, dict):
        raise ConfigError(f"{key} must be an object")
    unknown = sorted(set(section) - set(allowed))
    if unknown:
        raise ConfigError(f"{key}.{unknown[0]} is not a recognised field")
    return section


def parse_config(doc) -> RunConfig:
    """Validate a config document; errors name the offending field."""
    if not isinstance(doc, dict):
        raise ConfigError("config must be a JSON object")
    unknown = sorted(set(doc) - {"system", "physical", "drive", "integrator"})
    if unknown:
        raise ConfigError(f"{unknown[0]} is not a recognised top-level field")
    system = _section(doc, "system", ("omega_e", "omega_n", "a"))
    physical = _section(doc, "physical", _PHYSICAL_KEYS)
    if (system is None) == (physical is None):
        raise ConfigError("exactly one of system or physical must be given")
    phys = None
    if system is not None:
        params = SystemParams(*(_number(system, k, "system") for k in ("omega_e", "omega_n", "a")))
    else:
        values = {field: _number(physical, key, "physical") for key, field in _PHYSICAL_KEYS.items()}
        if values["field_B"] < 0:
            raise ConfigError("physical.B0 must be >= 0")
        phys = PhysicalInput(**values)
        params = phys.to_system_params()
    drive = DriveBudget()
    section = _section(doc, "drive", ("rabi_e", "rabi_n"))
    if section is not None:
        drive = DriveBudget(
            _number(section, "rabi_e", "drive", positive=True) if "rabi_e" in section else drive.rabi_e,
            _number(section, "rabi_n", "drive", positive=True) if "rabi_n" in section else drive.rabi_n,
        )
    dt = None
    section = _section(doc, "integrator", ("dt",))
    if section is not None and "dt" in section:
        dt = _number(section, "dt", "integrator", positive=True)
    return RunConfig(params=params, phys=phys, drive=drive, dt=dt)


def load_config(path: Optional[str]) -> RunConfig:
    path = path or os.environ.get(ENV_CONFIG)
    if not path:
        return RunConfig()
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path!r}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path!r} is not valid JSON: {exc}") from None
    return parse_config(doc)


def parse_angle(text: str) -> float:
    """Evaluate an angle such as ``pi/2``, ``-3*pi/4`` or ``1.25``."""

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)) and not isinstance(node.value, bool):
            return float(node.value)
        if isinstance(node, ast.Name) and node.id == "pi":
            return math.pi
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.UAdd, ast.USub)):
            return ev(node.operand) if isinstance(node.op, ast.UAdd) else -ev(node.operand)
        if isinstance(node, ast.BinOp) and isinstance(node.op, (ast.Add, ast.Sub, ast.Mult, ast.Div)):
            left, right = ev(node.left), ev(node.right)
            if isinstance(node.op, ast.Add):
                return left + right
            if isinstance(node.op, ast.Sub):
                return left - right
            if isinstance(node.op, ast.Mult):
                return left * right
            return left / right
        raise ValueError

    try:
        value = ev(ast.parse(text.strip(), mode="eval"))
    except (SyntaxError, ValueError, ZeroDivisionError):
        raise ConfigError(f"cannot parse angle {text!r}") from None
    if not math.isfinite(value):
        raise ConfigError(f"angle {text!r} is not finite")
    return value


def parse_gate(name: str, target: str, control: Optional[str]) -> Gate:
    text = name.strip().lower()
    angle = None
    if "(" in text:
        if not text.endswith(")"):
            raise ConfigError(f"unsupported gate {name!r}")
        text, arg = text[:-1].split("(", 1)
        angle = parse_angle(arg)
    try:
        kind = GateKind(text)
    except ValueError:
        raise ConfigError(f"unsupported gate {name!r}") from None
    target_ch = SpinChannel(target)
    try:
        if kind is GateKind.CZ:
            return Gate.cz()
        if kind is GateKind.CNOT:
            control_ch = SpinChannel(control) if control else target_ch.other
            return Gate.cnot(control_ch, target_ch)
        return Gate(kind, target_ch, angle)
    except ValueError as exc:
        raise ConfigError(f"gate {name!r}: {exc}") from None


def _complex_matrix(u: np.ndarray) -> list:
    return [[[float(z.real), float(z.imag)] for z in row] for row in u]


def cmd_spectrum(cfg: RunConfig) -> dict:
    p = cfg.params
    return {
        "system": p.to_dict(),
        "paper_regime_ok": p.paper_regime_ok,
        "levels": [float(e) for e in energy_levels(p)],
        "transitions": [t.to_dict() for t in transition_table(p)],
    }


def cmd_rabi(
    cfg: RunConfig,
    channel: SpinChannel,
    t_max: float,
    n_points: int,
    carrier: Optional[float] = None,
    detuning: float = 0.0,
    rabi: Optional[float] = None,
) -> list:
    """Populations of the four basis states under continuous drive, starting in ``|00>``."""
    if not t_max > 0:
        raise ConfigError(f"t-max must be > 0, got {t_max!r}")
    if n_points < 2:
        raise ConfigError(f"n-points must be >= 2, got {n_points!r}")
    p = cfg.params
    phys = cfg.phys or PhysicalInput.from_system_params(p)
    rabi = cfg.drive.rabi(channel) if rabi is None else rabi
    if rabi < 0:
        raise ConfigError(f"rabi must be >= 0, got {rabi!r}")
    if carrier is None:
        carrier = channel_lines(p, channel)[0].angular_frequency
    carrier = carrier + detuning
    amplitude = rabi_to_amplitude(rabi, phys, channel)
    h_static = np.real(static_hamiltonian(p))
    drive = np.real(drive_operator(phys))
    dt = cfg.dt or default_dt(p, [carrier])

    def hamiltonian(ts):
        return h_static + (amplitude * np.cos(carrier * ts))[:, None, None] * drive

    times = np.linspace(0.0, t_max, n_points)
    psi = basis_state(0.5, 0.5)
    rows = [[0.0, *(float(x) for x in np.abs(psi) ** 2)]]
    for t0, t1 in zip(times[:-1], times[1:]):
        psi = propagate(hamiltonian, PropagationSpec(float(t0), float(t1), dt), vectorized=True) @ psi
        rows.append([float(t1), *(float(x) for x in np.abs(psi) ** 2)])
    return rows


def cmd_gate(cfg: RunConfig, gate: Gate) -> dict:
    seq = compile_gate(gate, cfg.params, cfg.drive)
    u = execute(seq, cfg.backend, cfg.params, phys=cfg.phys, dt=cfg.dt)
    return {
        "gate": str(gate),
        "backend": cfg.backend.value,
        "process_fidelity": process_fidelity(u, ideal_unitary(gate)),
        "duration": seq.duration,
        "unitary": _complex_matrix(u),
        "sequence": seq.to_dict(),
        "warnings": list(seq.warnings),
    }


def cmd_algo(cfg: RunConfig, algo: str, shots: int, seed: int, oracle=None, marked=None, iterations=1) -> dict:
    kwargs = dict(params=cfg.params, drive=cfg.drive, phys=cfg.phys, dt=cfg.dt, shots=shots, seed=seed)
    if algo == "dj":
        try:
            oracle = algorithms.DJOracle(oracle)
        except ValueError:
            raise ConfigError(f"unknown oracle {oracle!r}") from None
        return algorithms.deutsch_jozsa(oracle, cfg.backend, **kwargs).to_dict()
    if marked not in range(4):
        raise ConfigError(f"marked must be in 0..3, got {marked!r}")
    if iterations < 0:
        raise ConfigError("iterations must be >= 0")
    return algorithms.grover(marked, cfg.backend, iterations=iterations, **kwargs).to_dict()


def _csv_text(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([repr(x) if isinstance(x, float) else x for x in row])
    return buf.getvalue()


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help=f"JSON config (default: ${ENV_CONFIG}, else the demo system)")
    common.add_argument("--out", help="output path (default: stdout)")
    common.add_argument("--format", choices=("json", "csv"))
    common.add_argument("--backend", choices=("ideal", "physical"))
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--shots", type=int, default=1024)
    common.add_argument("--dt", type=float, help="integrator step override (seconds)")

    parser = argparse.ArgumentParser(prog="hfqpu", description="Electron-nuclear spin quantum processor simulator")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("spectrum", parents=[common], help="energy levels and transition lines")

    rabi = sub.add_parser("rabi", parents=[common], help="population time series under continuous drive")
    rabi.add_argument("--channel", choices=("electron", "nuclear"), default="electron")
    rabi.add_argument("--carrier", type=float, help="drive angular frequency (default: line addressed from |00>)")
    rabi.add_argument("--detuning", type=float, default=0.0, help="added to the carrier")
    rabi.add_argument("--rabi", type=float, help="Rabi rate override; 0 switches the drive off")
    rabi.add_argument("--t-max", type=float, default=4 * math.pi)
    rabi.add_argument("--n-points", type=int, default=201)

    gate = sub.add_parser("gate", parents=[common], help="compile and execute one gate")
    gate.add_argument("--gate", required=True, help="rx(θ), ry(θ), rz(θ), h, x, z, cz or cnot")
    gate.add_argument("--target", choices=("electron", "nuclear"), default="electron")
    gate.add_argument("--control", choices=("electron", "nuclear"))

    algo = sub.add_parser("algo", help="two-qubit algorithms")
    algo_sub = algo.add_subparsers(dest="algo", required=True)
    dj = algo_sub.add_parser("dj", parents=[common], help="Deutsch-Jozsa")
    dj.add_argument("--oracle", required=True, help="const0, const1, balanced_id or balanced_not")
    gr = algo_sub.add_parser("grover", parents=[common], help="Grover search")
    gr.add_argument("--marked", type=int, required=True)
    gr.add_argument("--iterations", type=int, default=1)
    return parser


def _run(args) -> str:
    cfg = load_config(args.config)
    if args.dt is not None:
        if not (args.dt > 0 and math.isfinite(args.dt)):
            raise ConfigError(f"--dt must be > 0, got {args.dt!r}")
        cfg = replace(cfg, dt=args.dt)
    if args.backend:
        cfg = replace(cfg, backend=Backend(args.backend))
    if args.shots < 1:
        raise ConfigError(f"--shots must be >= 1, got {args.shots}")
    if not 0 <= args.seed < 2**64:
        raise ConfigError("--seed must be an unsigned 64-bit integer")
    check_regime(cfg.params)

    fmt = args.format or ("csv" if args.command == "rabi" else "json")
    if args.command == "rabi":
        rows = cmd_rabi(
            cfg, SpinChannel(args.channel), args.t_max, args.n_points, args.carrier, args.detuning, args.rabi
        )
        header = ["t", "P_00", "P_01", "P_10", "P_11"]
        if fmt == "csv":
            return _csv_text(header, rows)
        return json.dumps({"columns": header, "rows": rows}, indent=2) + "\n"
    if args.command == "spectrum":
        doc = cmd_spectrum(cfg)
        if fmt == "csv":
            keys = ["from_index", "to_index", "channel", "spectator", "angular_frequency"]
            return _csv_text(keys, [[t[k] for k in keys] for t in doc["transitions"]])
        return json.dumps(doc, indent=2) + "\n"
    if fmt == "csv":
        raise ConfigError(f"--format csv is not available for {args.command}")
    if args.command == "gate":
        doc = cmd_gate(cfg, parse_gate(args.gate, args.target, args.control))
    elif args.algo == "dj":
        doc = cmd_algo(cfg, "dj", args.shots, args.seed, oracle=args.oracle)
    else:
        doc = cmd_algo(cfg, "grover", args.shots, args.seed, marked=args.marked, iterations=args.iterations)
    return json.dumps(doc, indent=2) + "\n"


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("always")
            warnings.showwarning = _show_warning
            text = _run(args)
    except ContractViolation as exc:
        print(f"hfqpu: numerical contract violation: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (ConfigError, ValueError) as exc:
        print(f"hfqpu: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def _show_warning(message, category, filename, lineno, file=None, line=None):
    print(f"hfqpu: warning: {message}", file=sys.stderr)


if __name__ == "__main__":
    sys.exit(main())
