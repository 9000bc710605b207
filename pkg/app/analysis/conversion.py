"""Frequency-conversion efficiency, background and the resulting herald SNR."""

import math

from app.analysis.models import ConversionModel
from app.budget.ledger import infidelity_budget
from app.budget.models import InfidelityTerms
from app.noise.channels import snr_mixture
from app.quantum.constructions import bell_state
from app.quantum.fidelity import bell_fidelity


def conversion_efficiency(model: ConversionModel, pump_power: float) -> float:
    """eta_max * sin^2((pi/2) sqrt(P / p_ref))."""
    if pump_power < 0:
        raise ValueError(f"Pump power must be non-negative, got {pump_power}")
    return model.eta_max * math.sin(math.pi / 2 * math.sqrt(pump_power / model.p_ref)) ** 2


def background_rate(model: ConversionModel, pump_power: float) -> float:
    """Raman background inside the filter window, scaling with pump power, plus dark counts."""
    if pump_power < 0:
        raise ValueError(f"Pump power must be non-negative, got {pump_power}")
    raman = model.noise_per_nm * model.filter_bandwidth_nm * pump_power / model.p_ref
    return raman + model.dark_rate


def conversion_snr(
    model: ConversionModel, pump_power: float, signal_rate: float
) -> tuple[float, float, float]:
    """Efficiency, background rate and SNR of a converted photon stream.

    Args:
        model: Converter and detection parameters
        pump_power: Pump power in W
        signal_rate: Photon rate at the converter input in Hz

    Returns:
        Tuple of (efficiency, noise rate in Hz, converted signal rate / noise rate)
    """
    if signal_rate < 0:
        raise ValueError(f"Signal rate must be non-negative, got {signal_rate}")
    efficiency = conversion_efficiency(model, pump_power)
    noise = background_rate(model, pump_power)
    snr = efficiency * signal_rate / noise if noise > 0 else math.inf
    return efficiency, noise, snr


def predicted_fidelity(snr: float | None, terms: InfidelityTerms | None = None) -> float:
    """Ion-photon fidelity from the SNR mixture less the remaining first-order terms.

    The dark-count term of `terms` is replaced by the mixture model and ignored.
    """
    base = bell_fidelity(snr_mixture(bell_state(), snr))
    if terms is None:
        return base
    return base - infidelity_budget(terms.model_copy(update={"dark_count_noise": 0.0}))
