import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.linalg import expm

from hfqpu.gates import Gate, GateKind, ideal_unitary, process_fidelity
from hfqpu.hamiltonian import DEMO_PARAMS, PhysicalInput, SystemParams
from hfqpu.pulse import (
    Backend,
    CoarseStepWarning,
    Delay,
    DriveBudget,
    FrameTarget,
    Generator,
    PulseSequence,
    RfPulse,
    SelectivityWarning,
    VirtualZ,
    compile_circuit,
    compile_gate,
    element_unitary,
    execute,
    lower_pulse,
    paper_cz_sequence,
    rotation_semantics,
    stark_shifts,
    zz_delay,
)
from hfqpu.pulse.backends import ramp_time
from hfqpu.pulse.ir import wrap_phase
from hfqpu.pulse.semantics import addressed_lines
from hfqpu.spin import ZZ, SpinChannel

E, N = SpinChannel.ELECTRON, SpinChannel.NUCLEAR
angles = st.floats(-20, 20, allow_nan=False)
CZ = np.diag([1, 1, 1, -1]).astype(complex)


@given(st.sampled_from(list(Generator)), angles)
def test_rotation_semantics_closed_form(generator, theta):
    np.testing.assert_allclose(
        rotation_semantics(generator, theta), expm(-1j * theta * generator.matrix), atol=1e-12
    )


def test_rotation_semantics_general_matrix():
    h = np.diag([1.0, 2.0, 3.0, 4.0])
    np.testing.assert_allclose(rotation_semantics(h, 0.5), np.diag(np.exp(-0.5j * np.arange(1, 5))), atol=1e-15)


def test_virtual_cz_sequence_is_phased_cz():
    u = execute(paper_cz_sequence(), Backend.IDEAL, DEMO_PARAMS)
    np.testing.assert_allclose(u, np.exp(-1j * math.pi / 4) * CZ, atol=1e-15)


# zz_delay: exp(-i*theta*2IzSz) from free coupling needs duration 2*theta/a.
@pytest.mark.parametrize(
    "theta, a, duration, phase",
    [
        (math.pi / 2, 50.0, math.pi / 50, 0.0),
        (-math.pi / 2, 50.0, 3 * math.pi / 50, math.pi),
        (math.pi / 2, -50.0, 3 * math.pi / 50, math.pi),
        (0.0, 50.0, 0.0, 0.0),
    ],
)
def test_zz_delay_examples(theta, a, duration, phase):
    p = SystemParams(1000.0, 10.0, a)
    delay, global_phase = zz_delay(theta, p)
    assert math.isclose(delay.duration, duration, abs_tol=1e-15)
    assert math.isclose(global_phase, phase)
    u = np.exp(1j * global_phase) * element_unitary(delay, p)
    np.testing.assert_allclose(u, expm(-1j * theta * ZZ), atol=1e-13)


@given(angles, st.floats(-200, 200).filter(lambda a: abs(a) > 1e-3))
def test_zz_delay_property(theta, a):
    p = SystemParams(1000.0, 10.0, a)
    delay, global_phase = zz_delay(theta, p)
    assert delay.duration >= 0
    u = np.exp(1j * global_phase) * element_unitary(delay, p)
    np.testing.assert_allclose(u, expm(-1j * theta * ZZ), atol=1e-9)


def test_zz_delay_needs_coupling():
    with pytest.raises(ValueError, match="a = 0"):
        zz_delay(1.0, SystemParams(1000.0, 10.0, 0.0))


def test_ir_validation():
    with pytest.raises(ValueError):
        RfPulse(E, 1025.0, 0.0, 0.0, 1.0)
    with pytest.raises(ValueError):
        RfPulse(E, 1025.0, 1.0, 0.0, -1.0)
    with pytest.raises(ValueError):
        Delay(-1.0)
    with pytest.raises(ValueError):
        VirtualZ(FrameTarget.ZZ, math.nan)
    with pytest.raises(TypeError):
        PulseSequence(("not a pulse",))
    assert RfPulse(E, 1025.0, 2.0, 0.0, 0.5).angle == 1.0
    assert VirtualZ("zz", 1.0).target is FrameTarget.ZZ


@given(angles)
def test_wrap_phase_range(phi):
    w = wrap_phase(phi)
    assert -math.pi < w <= math.pi
    assert math.isclose(math.cos(w), math.cos(phi), abs_tol=1e-9)
    assert math.isclose(math.sin(w), math.sin(phi), abs_tol=1e-9)


element = st.one_of(
    st.builds(RfPulse, st.sampled_from(list(SpinChannel)), angles, st.floats(1e-3, 10), angles, st.floats(0, 10)),
    st.builds(Delay, st.floats(0, 100)),
    st.builds(VirtualZ, st.sampled_from(list(FrameTarget)), angles),
)


@given(st.lists(element, max_size=6), angles)
def test_json_round_trip_is_exact(elements, phase):
    seq = PulseSequence(tuple(elements), phase)
    back = PulseSequence.from_json(seq.to_json())
    assert back == seq
    assert back.to_json() == seq.to_json()


def test_json_schema_and_errors():
    seq = compile_gate(Gate.h(E), DEMO_PARAMS)
    doc = seq.to_dict()
    assert set(doc) == {"elements", "global_phase"}
    assert {el["type"] for el in doc["elements"]} == {"vz", "rf", "delay"}
    with pytest.raises(ValueError, match="unknown"):
        PulseSequence.from_dict({"elements": [{"type": "square"}]})
    with pytest.raises(ValueError, match="missing"):
        PulseSequence.from_dict({"global_phase": 0.0})


def test_sequence_concatenation():
    a = PulseSequence((Delay(1.0),), 3.0, ("w1",))
    b = PulseSequence((Delay(2.0),), 1.0, ("w1", "w2"))
    c = a + b
    assert c.duration == 3.0
    assert math.isclose(c.global_phase, wrap_phase(4.0))
    assert c.warnings == ("w1", "w2")
    assert len(c) == 2


def test_carrier_must_address_a_line():
    pulse = RfPulse(E, 1000.0, 1.0, 0.0, 1.0)
    with pytest.raises(ValueError, match="does not address"):
        addressed_lines(pulse, DEMO_PARAMS)
    both = addressed_lines(RfPulse(E, 1000.0, 1.0, 0.0, 1.0), SystemParams(1000.0, 10.0, 0.0))
    assert len(both) == 2


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([GateKind.RX, GateKind.RY, GateKind.RZ]), st.sampled_from(list(SpinChannel)), angles)
def test_compiled_rotations_are_exact(kind, target, theta):
    g = Gate(kind, target, theta)
    seq = compile_gate(g, DEMO_PARAMS)
    u = execute(seq, Backend.IDEAL, DEMO_PARAMS)
    np.testing.assert_allclose(u, ideal_unitary(g), atol=1e-12)
    for el in seq.elements:
        if isinstance(el, RfPulse):
            assert el.angle <= math.pi * (1 + 1e-12)


@pytest.mark.parametrize(
    "g", [Gate.h(E), Gate.h(N), Gate.x(E), Gate.x(N), Gate.z(E), Gate.z(N), Gate.cz(), Gate.cnot(N, E), Gate.cnot(E, N)]
)
def test_fixed_gates_compile_exactly_including_global_phase(g):
    u = execute(compile_gate(g, DEMO_PARAMS), Backend.IDEAL, DEMO_PARAMS)
    np.testing.assert_allclose(u, ideal_unitary(g), atol=1e-12)


def test_z_rotations_and_cz_are_free_of_rf():
    for g in (Gate.rz(E, 0.3), Gate.z(N), Gate.cz()):
        assert not any(isinstance(el, RfPulse) for el in compile_gate(g, DEMO_PARAMS).elements)


def test_unconditional_rotation_uses_both_lines():
    seq = compile_gate(Gate.rx(E, math.pi / 2), DEMO_PARAMS)
    carriers = sorted(el.carrier for el in seq.elements if isinstance(el, RfPulse))
    assert carriers == [975.0, 1025.0]
    # Each pulse window is padded to whole ZZ periods.
    period = 4 * math.pi / DEMO_PARAMS.a
    assert math.isclose(seq.duration / period, round(seq.duration / period), abs_tol=1e-9)


def test_degenerate_lines_use_one_pulse():
    p = SystemParams(1000.0, 10.0, 0.0)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        seq = compile_gate(Gate.rx(E, 1.0), p)
    assert sum(isinstance(el, RfPulse) for el in seq.elements) == 1
    np.testing.assert_allclose(execute(seq, Backend.IDEAL, p), ideal_unitary(Gate.rx(E, 1.0)), atol=1e-12)


def test_selectivity_warning():
    with pytest.warns(SelectivityWarning):
        seq = compile_gate(Gate.rx(E, 1.0), DEMO_PARAMS, DriveBudget(rabi_e=20.0))
    assert len(seq.warnings) == 1
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        assert compile_gate(Gate.rx(E, 1.0), DEMO_PARAMS).warnings == ()


def test_drive_budget_validation():
    with pytest.raises(ValueError):
        DriveBudget(rabi_e=0.0)
    assert DriveBudget().rabi(N) == 0.25


def test_compile_circuit_concatenates():
    gates = [Gate.h(E), Gate.cz(), Gate.x(N)]
    seq = compile_circuit(gates, DEMO_PARAMS)
    parts = [compile_gate(g, DEMO_PARAMS) for g in gates]
    assert seq.elements == sum((s.elements for s in parts), ())
    assert math.isclose(seq.duration, sum(s.duration for s in parts))


def test_stark_shift_two_level_limit():
    # Two levels split by 10, driven at 4 with coupling 2: both terms of the Floquet sum.
    eps = stark_shifts([5.0, -5.0], np.array([[0, 2.0], [2.0, 0]]), 4.0)
    expected = 1.0 * (1 / 6 + 1 / 14)
    np.testing.assert_allclose(eps, [expected, -expected])
    resonant = stark_shifts([5.0, -5.0], np.array([[0, 2.0], [2.0, 0]]), 10.0, [(0, 1)])
    np.testing.assert_allclose(resonant, [1 / 20, -1 / 20])
    osc = stark_shifts([5.0, -5.0], np.array([[0, 2.0], [2.0, 0]]), 10.0, [(0, 1)], oscillating=True)
    np.testing.assert_array_equal(osc, [0.0, 0.0])


def test_lowered_waveform_preserves_area():
    p = DEMO_PARAMS
    phys = PhysicalInput.from_system_params(p)
    pulse = RfPulse(N, 15.0, 0.25, 0.0, 2 * math.pi)
    wave = lower_pulse(pulse, p, phys, t0=1.0)
    assert 0 < wave.ramp == ramp_time(pulse, p) <= pulse.duration / 4
    ts = 1.0 + (np.arange(200000) + 0.5) * pulse.duration / 200000
    area = wave.amplitude * wave.envelope(ts).mean() * pulse.duration
    assert math.isclose(area, 2 * 0.25 / 10.0 * pulse.duration, rel_tol=1e-8)
    assert wave.envelope(np.array([1.0]))[0] == 0.0
    assert math.isclose(wave.carrier, 15.0, rel_tol=1e-2)


@pytest.mark.parametrize("g", [Gate.h(E), Gate.h(N), Gate.x(N), Gate.cnot(N, E), Gate.cz()])
def test_physical_backend_tracks_ideal(g):
    u = execute(compile_gate(g, DEMO_PARAMS), Backend.PHYSICAL, DEMO_PARAMS)
    assert process_fidelity(u, ideal_unitary(g)) >= 0.999


def test_physical_backend_start_time_independent():
    # A nuclear pulse after an arbitrary delay must not pick up a switch-on error from the shared coil.
    base = compile_gate(Gate.h(N), DEMO_PARAMS)
    for shift in (0.1, 0.15, 0.3):
        seq = PulseSequence((Delay(shift),) + base.elements, base.global_phase)
        u = execute(seq, Backend.PHYSICAL, DEMO_PARAMS)
        assert process_fidelity(u, execute(seq, Backend.IDEAL, DEMO_PARAMS)) >= 1 - 5e-4


def test_stark_compensation_matters_for_nuclear_pulses():
    seq = compile_gate(Gate.h(N), DEMO_PARAMS)
    ideal = ideal_unitary(Gate.h(N))
    good = process_fidelity(execute(seq, Backend.PHYSICAL, DEMO_PARAMS), ideal)
    bare = process_fidelity(execute(seq, Backend.PHYSICAL, DEMO_PARAMS, stark_compensation=False), ideal)
    assert good > 0.999 > bare


def test_coarse_step_warning():
    seq = compile_gate(Gate.cz(), DEMO_PARAMS)
    with pytest.warns(CoarseStepWarning):
        execute(compile_gate(Gate.rx(E, 0.1), DEMO_PARAMS), Backend.PHYSICAL, DEMO_PARAMS, dt=0.01)
    np.testing.assert_allclose(execute(seq, Backend.PHYSICAL, DEMO_PARAMS), CZ, atol=1e-10)


def test_backend_accepts_strings():
    seq = compile_gate(Gate.x(E), DEMO_PARAMS)
    np.testing.assert_array_equal(execute(seq, "ideal", DEMO_PARAMS), execute(seq, Backend.IDEAL, DEMO_PARAMS))
