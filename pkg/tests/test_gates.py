import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.linalg import expm

from hfqpu.gates import (
    Gate,
    GateKind,
    circuit_unitary,
    equal_up_to_global_phase,
    ideal_unitary,
    process_fidelity,
)
from hfqpu.spin import IX, IY, IZ, SX, SY, SZ, ContractViolation, SpinChannel

E, N = SpinChannel.ELECTRON, SpinChannel.NUCLEAR
angles = st.floats(-10, 10, allow_nan=False)
_GEN = {(GateKind.RX, E): SX, (GateKind.RY, E): SY, (GateKind.RZ, E): SZ,
        (GateKind.RX, N): IX, (GateKind.RY, N): IY, (GateKind.RZ, N): IZ}


@given(st.sampled_from(sorted(_GEN, key=str)), angles)
def test_rotations_are_spin_exponentials(key, theta):
    kind, target = key
    np.testing.assert_allclose(ideal_unitary(Gate(kind, target, theta)), expm(-1j * theta * _GEN[key]), atol=1e-12)


def test_fixed_gates():
    hadamard = np.array([[1, 1], [1, -1]]) / math.sqrt(2)
    np.testing.assert_allclose(ideal_unitary(Gate.h(E)), np.kron(np.eye(2), hadamard))
    np.testing.assert_allclose(ideal_unitary(Gate.x(N)), np.kron([[0, 1], [1, 0]], np.eye(2)))
    np.testing.assert_allclose(ideal_unitary(Gate.z(E)), np.diag([1, -1, 1, -1]))
    np.testing.assert_allclose(ideal_unitary(Gate.cz()), np.diag([1, 1, 1, -1]))


def test_cnot_orientation():
    # Nucleus is the high bit: control nucleus flips the electron in the |1x> block.
    np.testing.assert_array_equal(ideal_unitary(Gate.cnot(N, E)).real, np.eye(4)[[0, 1, 3, 2]])
    np.testing.assert_array_equal(ideal_unitary(Gate.cnot(E, N)).real, np.eye(4)[[0, 3, 2, 1]])


def test_cnot_is_cz_conjugated_by_hadamards():
    h = ideal_unitary(Gate.h(E))
    np.testing.assert_allclose(h @ ideal_unitary(Gate.cz()) @ h, ideal_unitary(Gate.cnot(N, E)), atol=1e-15)


def test_circuit_order_is_time_order():
    gates = [Gate.h(E), Gate.cnot(E, N)]
    expected = ideal_unitary(gates[1]) @ ideal_unitary(gates[0])
    np.testing.assert_array_equal(circuit_unitary(gates), expected)


@given(angles, st.floats(0, 2 * math.pi))
def test_fidelity_ignores_global_phase(theta, phi):
    u = ideal_unitary(Gate.rx(E, theta))
    assert math.isclose(process_fidelity(u, np.exp(1j * phi) * u), 1.0, rel_tol=1e-12)
    assert equal_up_to_global_phase(np.exp(1j * phi) * u, u)


def test_fidelity_values():
    assert process_fidelity(np.eye(4), ideal_unitary(Gate.x(E))) == 0.0
    # Every diagonal entry of RZ(theta) has real part cos(theta/2).
    theta = 0.2
    assert math.isclose(process_fidelity(np.eye(4), ideal_unitary(Gate.rz(E, theta))), math.cos(theta / 2) ** 2)
    with pytest.raises(ContractViolation):
        process_fidelity(2 * np.eye(4), np.eye(4))
    assert not equal_up_to_global_phase(np.eye(4), ideal_unitary(Gate.z(E)))


def test_gate_validation():
    with pytest.raises(ValueError, match="angle"):
        Gate(GateKind.RX, E)
    with pytest.raises(ValueError, match="angle"):
        Gate.rx(E, math.inf)
    with pytest.raises(ValueError, match="no angle"):
        Gate(GateKind.H, E, 1.0)
    with pytest.raises(ValueError, match="differ"):
        Gate.cnot(E, E)
    with pytest.raises(ValueError, match="target"):
        Gate(GateKind.X)
    with pytest.raises(ValueError):
        Gate("swap", E)
    assert Gate("rx", "electron", 1.0) == Gate.rx(E, 1.0)
    assert str(Gate.cnot()) == "cnot(nuclear->electron)"
