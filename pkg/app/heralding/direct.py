"""Direct ion-photon heralding at a single node."""

from app.budget.ledger import stage_product
from app.budget.models import NodeConfig
from app.noise.channels import merge_imperfection, raman_transfer, snr_mixture
from app.noise.models import NoiseParams
from app.quantum.constructions import ion_photon_state
from app.quantum.models import QuantumState


def heralded_ion_photon_state(noise: NoiseParams) -> QuantumState:
    """Ideal ion-photon Bell state degraded by merge, Raman transfer and SNR noise."""
    state = ion_photon_state()
    state = merge_imperfection(state, noise.merge_fidelity, "ion")
    state = raman_transfer(state, noise.raman_pulses, noise.raman_pi_fidelity, "ion")
    return snr_mixture(state, noise.snr)


def direct_herald(
    config: NodeConfig, noise: NoiseParams | None = None
) -> tuple[float, QuantumState]:
    """Per-attempt success probability and post-herald ion-photon state.

    Args:
        config: Stage efficiencies of the link
        noise: Operation and detection noise; defaults to noiseless

    Returns:
        Tuple of (stage product, ion-photon state)
    """
    return stage_product(config), heralded_ion_photon_state(noise or NoiseParams())
