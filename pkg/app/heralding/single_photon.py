"""Single-photon interference heralding between two nodes."""

import logging
import math

import numpy as np

from app.heralding.fock import CLICK_PATTERNS, apply_loss, beamsplitter, click_projectors
from app.heralding.models import HeraldOutcome
from app.quantum.models import QuantumState, Unitary
from app.quantum.ops import apply_unitary, measure_projective, partial_trace

logger = logging.getLogger(__name__)

LABELS = ("ion_a", "ion_b", "mode_a", "mode_b")


def single_photon_joint_state(chi: float) -> QuantumState:
    """Product of two nodes each in sqrt(1-chi)|down,0> + sqrt(chi)|up,1>.

    Ion basis index 0 is |down>, 1 is |up>; modes hold zero or one photon. The
    double-excitation term |up,up>|1,1> keeps its chi^2 weight.
    """
    if not 0 <= chi <= 1:
        raise ValueError(f"Excitation probability must be in [0, 1], got {chi}")
    node = np.zeros((2, 2), dtype=complex)  # (ion, mode)
    node[0, 0] = math.sqrt(1 - chi)
    node[1, 1] = math.sqrt(chi)
    # amplitude[ion_a, ion_b, mode_a, mode_b]
    joint = np.einsum("ac,bd->abcd", node, node)
    return QuantumState(joint.reshape(-1), (2, 2, 2, 2), LABELS)


def herald_single_photon(
    chi: float, eta_a: float, eta_b: float, path_phase: float = 0.0
) -> list[HeraldOutcome]:
    """Loss, beamsplitter and threshold detection of the two emitted modes.

    Args:
        chi: Excitation probability of each node
        eta_a: Detection efficiency of the path from node a
        eta_b: Detection efficiency of the path from node b
        path_phase: Relative phase picked up by mode b before the beamsplitter

    Returns:
        Outcomes for the patterns none, c, d and both with the ion-ion state
        conditioned on each pattern
    """
    state = single_photon_joint_state(chi)
    state = apply_loss(state, "mode_a", eta_a)
    state = apply_loss(state, "mode_b", eta_b)
    if path_phase:
        shifter = Unitary(np.diag([1.0, np.exp(1j * path_phase)]), (2,), "path phase")
        state = apply_unitary(state, shifter, "mode_b")
    state = beamsplitter(state, ("mode_a", "mode_b"))

    probabilities, post_states = measure_projective(
        state, click_projectors(), ["mode_c", "mode_d"]
    )
    outcomes = []
    for pattern, probability, post in zip(CLICK_PATTERNS, probabilities, post_states, strict=True):
        ions = partial_trace(post, ["ion_a", "ion_b"]) if post is not None else None
        outcomes.append(HeraldOutcome(pattern, probability, ions))
    summary = {o.pattern: round(o.probability, 8) for o in outcomes}
    logger.debug(f"Single-photon herald chi={chi} eta=({eta_a}, {eta_b}): {summary}")
    return outcomes


def single_photon_success_probability(chi: float, eta_a: float, eta_b: float) -> float:
    """First-order click probability chi(1-chi)(eta_a + eta_b), ignoring double excitation."""
    return chi * (1 - chi) * (eta_a + eta_b)
