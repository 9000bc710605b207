"""Ideal entanglement swapping between two ion-photon pairs."""

import logging

from app.errors import DimensionError
from app.quantum.constructions import BELL_VECTORS, PAULI
from app.quantum.models import Projector, QuantumState, SwapOutcome, Unitary
from app.quantum.ops import apply_unitary, measure_projective, partial_trace, permute, relabel, tensor

logger = logging.getLogger(__name__)

# Pauli frame correction on the second photon that maps each outcome onto phi_plus
SWAP_CORRECTIONS = {
    "phi_plus": PAULI["I"],
    "phi_minus": PAULI["Z"],
    "psi_plus": PAULI["X"],
    "psi_minus": PAULI["Z"] @ PAULI["X"],
}


def entanglement_swap(pair_1: QuantumState, pair_2: QuantumState) -> list[SwapOutcome]:
    """Bell-measure the two ions and return the corrected photon-photon states.

    Each pair is a two-qubit (ion, photon) state. The gates and the detection are
    ideal; all imperfections must already be present in the input pairs.

    Args:
        pair_1: First ion-photon pair
        pair_2: Second ion-photon pair

    Returns:
        One SwapOutcome per Bell outcome, with the photon pair labelled
        ("photon_1", "photon_2") and Pauli-corrected towards phi_plus
    """
    for pair in (pair_1, pair_2):
        if pair.dims != (2, 2):
            raise DimensionError(f"Swap inputs must be ion-photon qubit pairs, got {pair.dims}")

    joint = tensor(
        relabel(pair_1, ("ion_1", "photon_1")),
        relabel(pair_2, ("ion_2", "photon_2")),
    )
    joint = permute(joint, ["ion_1", "ion_2", "photon_1", "photon_2"])

    projectors = [Projector.onto(vec, (2, 2), kind) for kind, vec in BELL_VECTORS.items()]
    probabilities, post_states = measure_projective(joint, projectors, ["ion_1", "ion_2"])

    outcomes = []
    for projector, probability, post in zip(projectors, probabilities, post_states, strict=True):
        if post is None:
            outcomes.append(SwapOutcome(projector.label, probability, None))
            continue
        photons = partial_trace(post, ["photon_1", "photon_2"])
        correction = Unitary(SWAP_CORRECTIONS[projector.label], (2,), projector.label)
        photons = apply_unitary(photons, correction, "photon_2")
        outcomes.append(SwapOutcome(projector.label, probability, photons))
    logger.debug(f"Swap outcome probabilities: {dict(zip(BELL_VECTORS, probabilities, strict=True))}")
    return outcomes
