import math

import numpy as np
import pytest

from app.errors import DimensionError
from app.quantum.constructions import (
    EMISSION_WEIGHTS,
    FIBER_PROJECTION,
    bell_state,
    emission_state,
    fiber_projection,
    ion_photon_state,
    merge_gate,
    merge_unitary,
)
from app.quantum.fidelity import fidelity
from app.quantum.models import QuantumState
from app.quantum.ops import apply_unitary, computational_projectors, measure_projective


def _ion(amplitudes):
    return QuantumState.from_vector(amplitudes, (3,), ("ion",), normalize=True)


def test_emission_state_weights():
    state = emission_state()
    assert state.trace_value() == pytest.approx(1.0, abs=1e-12)
    assert abs(state.data[0]) ** 2 == pytest.approx(1 / 3, abs=1e-12)  # |0, pi>
    assert abs(state.data[4]) ** 2 == pytest.approx(1 / 6, abs=1e-12)  # |1, sigma->
    assert abs(state.data[8]) ** 2 == pytest.approx(1 / 2, abs=1e-12)  # |2, sigma+>


def test_fiber_projection_of_emission_state():
    probability, projected = fiber_projection(emission_state())
    # CG factor 2/3 of the 6% branching gives the 4% budget weight
    assert probability == pytest.approx(2 / 3, abs=1e-12)
    assert projected.dims == (3, 2)
    photon_probs, _ = measure_projective(projected, computational_projectors(2), "photon")
    assert photon_probs == pytest.approx([0.5, 0.5], abs=1e-12)

    expected = np.zeros(6)
    expected[0] = 1 / math.sqrt(2)  # |0, H>
    expected[3] = 0.5 / math.sqrt(2)  # |1, V>
    expected[5] = (math.sqrt(3) / 2) / math.sqrt(2)  # |2, V>
    assert np.allclose(projected.data, expected, atol=1e-12)


def test_fiber_projection_of_pi_photon_is_lossless():
    state = QuantumState.from_vector(np.eye(9)[0], (3, 3), ("ion", "photon"))
    probability, projected = fiber_projection(state)
    assert probability == pytest.approx(1.0)
    assert abs(projected.data[0]) == pytest.approx(1.0)


def test_fiber_projection_conditional_v_state():
    _, projected = fiber_projection(emission_state())
    _, states = measure_projective(projected, computational_projectors(2), "photon")
    v_branch = states[1].data.reshape(3, 2)[:, 1]
    assert np.allclose(v_branch, [0, 0.5, math.sqrt(3) / 2], atol=1e-12)


@pytest.mark.parametrize("weights", [(1, 0, 0), (0.2, 0.5, 0.3), (0, 1, 1)])
def test_fiber_projection_probability_plus_discarded_is_one(weights):
    amplitudes = np.zeros(9, dtype=complex)
    for pol, w in enumerate(weights):
        amplitudes[3 * pol + pol] = math.sqrt(w)
    state = QuantumState.from_vector(amplitudes, (3, 3), ("ion", "photon"), normalize=True)
    probability, _ = fiber_projection(state)
    populations = np.abs(state.data.reshape(3, 3)) ** 2
    discarded = populations[:, 1:].sum() / 2
    assert probability + discarded == pytest.approx(1.0, abs=1e-12)


def test_fiber_projection_requires_polarization_subsystem(bell):
    with pytest.raises(DimensionError):
        fiber_projection(bell)


def test_merge_gate_combines_levels():
    merged = merge_gate(_ion([0, 0.5, math.sqrt(3) / 2]))
    assert np.allclose(merged.data, [0, 1, 0], atol=1e-12)


def test_merge_gate_leaves_ground_level():
    assert np.allclose(merge_gate(_ion([1, 0, 0])).data, [1, 0, 0], atol=1e-12)


def test_merge_gate_orthogonal_image():
    merged = merge_gate(_ion([0, math.sqrt(3) / 2, -0.5]))
    assert abs(merged.data[2]) == pytest.approx(1.0, abs=1e-12)


def test_merge_gate_inverse_is_identity():
    state = emission_state()
    back = apply_unitary(merge_gate(state), merge_unitary().dagger(), "ion")
    assert np.allclose(back.data, state.data, atol=1e-12)


def test_merge_unitary_is_unitary():
    u = merge_unitary().matrix
    assert np.allclose(u.conj().T @ u, np.eye(3), atol=1e-12)


def test_ion_photon_state_is_bell_state():
    assert fidelity(ion_photon_state(), bell_state("phi_plus")) == pytest.approx(1.0, abs=1e-12)


def test_pathway_enumeration_reproduces_bell_state():
    """Push each of the six (ion level, fiber polarization) pathways through by hand."""
    merge = merge_unitary().matrix
    final = np.zeros((3, 2), dtype=complex)
    for level, weight in enumerate(EMISSION_WEIGHTS):
        for out_pol in range(2):
            amplitude = math.sqrt(weight) * FIBER_PROJECTION[out_pol, level]
            for new_level in range(3):
                final[new_level, out_pol] += merge[new_level, level] * amplitude
    final /= np.linalg.norm(final)
    assert abs(final[2, 0]) < 1e-12 and abs(final[2, 1]) < 1e-12
    assert np.allclose(final[:2].reshape(-1), bell_state().data, atol=1e-12)
