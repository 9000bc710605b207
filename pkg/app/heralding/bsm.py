"""Two-photon polarization Bell-state measurement."""

import logging

from app.errors import DimensionError
from app.heralding.models import HeraldOutcome
from app.quantum.constructions import BELL_VECTORS
from app.quantum.models import Projector, QuantumState
from app.quantum.ops import measure_projective, partial_trace, permute, relabel, tensor

logger = logging.getLogger(__name__)

# Linear optics resolves only the two psi coincidences
RESOLVED_BELL_STATES = ("psi_plus", "psi_minus")


def bsm_success_probability(eta_a: float, eta_b: float) -> float:
    return eta_a * eta_b / 2


def herald_bsm(
    state_a: QuantumState, state_b: QuantumState, eta_a: float, eta_b: float
) -> list[HeraldOutcome]:
    """Interfere the photons of two ion-photon pairs on a polarization BSM.

    Photon loss is an erasure in the polarization encoding, so a coincidence needs
    both photons (probability eta_a * eta_b) and then a projection onto psi+ or psi-.

    Returns:
        Outcomes psi_plus, psi_minus and fail; the ion-ion state is (ion_a, ion_b)
    """
    for name, eta in (("eta_a", eta_a), ("eta_b", eta_b)):
        if not 0 <= eta <= 1:
            raise ValueError(f"{name} must be in [0, 1], got {eta}")
    for pair in (state_a, state_b):
        if pair.dims != (2, 2):
            raise DimensionError(f"BSM inputs must be ion-photon qubit pairs, got {pair.dims}")

    joint = tensor(
        relabel(state_a, ("ion_a", "photon_a")), relabel(state_b, ("ion_b", "photon_b"))
    )
    joint = permute(joint, ["ion_a", "ion_b", "photon_a", "photon_b"]).density()
    ions = partial_trace(joint, ["ion_a", "ion_b"])

    projectors = [Projector.onto(BELL_VECTORS[k], (2, 2), k) for k in RESOLVED_BELL_STATES]
    probabilities, post_states = measure_projective(joint, projectors, ["photon_a", "photon_b"])

    transmission = eta_a * eta_b
    outcomes = []
    fail_matrix = ions.matrix
    for kind, probability, post in zip(RESOLVED_BELL_STATES, probabilities, post_states, strict=True):
        if post is None:
            outcomes.append(HeraldOutcome(kind, 0.0, None))
            continue
        post_ions = partial_trace(post, ["ion_a", "ion_b"])
        fail_matrix = fail_matrix - transmission * probability * post_ions.matrix
        outcomes.append(HeraldOutcome(kind, transmission * probability, post_ions))

    p_fail = 1.0 - sum(o.probability for o in outcomes)
    fail_state = None
    if p_fail > 1e-15:
        fail_state = QuantumState.from_matrix(fail_matrix, (2, 2), ("ion_a", "ion_b"), normalize=True)
    outcomes.append(HeraldOutcome("fail", p_fail, fail_state))
    logger.debug(f"BSM success probability {1 - p_fail:.6g} at eta=({eta_a}, {eta_b})")
    return outcomes
