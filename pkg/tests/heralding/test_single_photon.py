import math

import numpy as np
import pytest

from app.heralding.fock import beamsplitter, beamsplitter_matrix, click_projectors
from app.heralding.single_photon import (
    herald_single_photon,
    single_photon_joint_state,
    single_photon_success_probability,
)
from app.quantum.constructions import bell_state
from app.quantum.fidelity import bell_fidelity, fidelity
from app.quantum.models import QuantumState


def _modes(n_a: int, n_b: int) -> QuantumState:
    vec = np.zeros(4)
    vec[2 * n_a + n_b] = 1.0
    return QuantumState(vec, (2, 2), ("mode_a", "mode_b"))


def _by_pattern(outcomes):
    return {o.pattern: o for o in outcomes}


def test_joint_state_amplitudes():
    chi = 0.02
    state = single_photon_joint_state(chi).data.reshape(2, 2, 2, 2)
    assert state[0, 0, 0, 0] == pytest.approx(1 - chi)
    assert abs(state[1, 1, 1, 1]) ** 2 == pytest.approx(chi**2)
    assert np.linalg.norm(state) == pytest.approx(1.0, abs=1e-12)


def test_beamsplitter_single_photon():
    out = beamsplitter(_modes(1, 0))
    assert out.labels == ("mode_c", "mode_d")
    amplitudes = out.data.reshape(3, 3)
    assert amplitudes[1, 0] == pytest.approx(1 / math.sqrt(2))
    assert amplitudes[0, 1] == pytest.approx(1 / math.sqrt(2))


def test_beamsplitter_vacuum():
    assert abs(beamsplitter(_modes(0, 0)).data[0]) == pytest.approx(1.0)


def test_hong_ou_mandel_bunching():
    amplitudes = beamsplitter(_modes(1, 1)).data.reshape(3, 3)
    assert amplitudes[1, 1] == 0.0
    assert amplitudes[2, 0] == pytest.approx(1 / math.sqrt(2), abs=1e-15)
    assert amplitudes[0, 2] == pytest.approx(-1 / math.sqrt(2), abs=1e-15)


def test_beamsplitter_is_unitary_and_conserves_photons():
    u = beamsplitter_matrix()
    assert np.allclose(u.conj().T @ u, np.eye(9), atol=1e-12)
    number = np.diag([nc + nd for nc in range(3) for nd in range(3)])
    assert np.allclose(u.conj().T @ number @ u, number, atol=1e-12)


def test_beamsplitter_rejects_multi_photon_input():
    vec = np.zeros(9)
    vec[2 * 3] = 1.0
    with pytest.raises(ValueError):
        beamsplitter(QuantumState(vec, (3, 3), ("mode_a", "mode_b")))


def test_click_projectors_complete():
    assert np.allclose(sum(p.matrix for p in click_projectors()), np.eye(9))


def test_no_excitation_no_clicks():
    outcomes = _by_pattern(herald_single_photon(0.0, 1.0, 1.0))
    assert outcomes["none"].probability == pytest.approx(1.0)
    assert outcomes["c"].probability == 0.0
    assert outcomes["d"].probability == 0.0
    assert outcomes["both"].probability == 0.0


def test_click_probability_with_double_excitation():
    chi = 0.02
    outcomes = _by_pattern(herald_single_photon(chi, 1.0, 1.0))
    clicks = outcomes["c"].probability + outcomes["d"].probability
    assert clicks == pytest.approx(2 * chi * (1 - chi) + chi**2, abs=1e-12)
    assert clicks == pytest.approx(0.0396, abs=1e-12)
    assert single_photon_success_probability(chi, 1.0, 1.0) == pytest.approx(0.0392)
    assert outcomes["both"].probability == pytest.approx(0.0, abs=1e-12)


@pytest.mark.parametrize(("chi", "eta_a", "eta_b"), [(0.02, 1, 1), (0.3, 0.4, 0.7), (1e-4, 0.1, 0.1)])
def test_outcome_probabilities_sum_to_one(chi, eta_a, eta_b):
    total = sum(o.probability for o in herald_single_photon(chi, eta_a, eta_b))
    assert total == pytest.approx(1.0, abs=1e-10)


def test_click_fidelity_with_double_excitation():
    chi = 0.02
    outcomes = _by_pattern(herald_single_photon(chi, 1.0, 1.0))
    f = bell_fidelity(outcomes["c"].post_state)
    assert f == pytest.approx((1 - chi) / (1 - chi / 2), abs=1e-10)
    assert f >= 1 - 2 * chi


def test_small_chi_post_states_are_orthogonal_bell_states():
    outcomes = _by_pattern(herald_single_photon(1e-4, 1.0, 1.0))
    labels = ("ion_a", "ion_b")
    plus = fidelity(outcomes["c"].post_state, bell_state("psi_plus", labels))
    minus = fidelity(outcomes["d"].post_state, bell_state("psi_minus", labels))
    assert plus == pytest.approx(1.0, abs=1e-4)
    assert minus == pytest.approx(1.0, abs=1e-4)
    overlap = np.trace(outcomes["c"].post_state.matrix @ outcomes["d"].post_state.matrix).real
    assert abs(overlap) < 1e-8


def test_success_is_linear_in_chi_eta():
    def clicks(chi, eta):
        outcomes = _by_pattern(herald_single_photon(chi, eta, eta))
        return outcomes["c"].probability + outcomes["d"].probability

    eta = 0.3
    slope_low = (clicks(2e-5, eta) - clicks(1e-5, eta)) / 1e-5
    assert slope_low == pytest.approx(2 * eta, rel=1e-3)
    assert clicks(1e-4, 0.2) / clicks(1e-4, 0.1) == pytest.approx(2.0, rel=1e-3)


def test_path_phase_rotates_heralded_state():
    outcomes = _by_pattern(herald_single_photon(1e-4, 1.0, 1.0, path_phase=math.pi))
    labels = ("ion_a", "ion_b")
    assert fidelity(outcomes["c"].post_state, bell_state("psi_minus", labels)) == pytest.approx(
        1.0, abs=1e-4
    )
