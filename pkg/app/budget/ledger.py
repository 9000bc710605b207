"""Analytic rate and infidelity ledger of the ion-photon link."""

import logging
import math
from collections.abc import Iterable, Mapping

from app.budget.models import STAGE_NAMES, BudgetReport, InfidelityTerms, NodeConfig
from app.noise.channels import metastable_decay

logger = logging.getLogger(__name__)


def attempt_rate_cap(length_m: float, c_fiber: float = 2.0e8, ceiling: float = 1.0e6) -> float:
    """Round-trip limited attempt rate 1/(2L/c); `ceiling` applies when L = 0.

    Args:
        length_m: One-way fiber length in m
        c_fiber: Light speed in fiber in m/s
        ceiling: Operation-limited attempt rate in Hz

    Returns:
        Maximum attempt rate in Hz
    """
    if length_m < 0:
        raise ValueError(f"Fiber length must be non-negative, got {length_m}")
    if length_m == 0:
        return ceiling
    return min(ceiling, c_fiber / (2 * length_m))


def stage_factors(config: NodeConfig) -> dict[str, float | None]:
    return {name: getattr(config, name) for name in STAGE_NAMES}


def stage_product(config: NodeConfig) -> float:
    """Per-attempt success probability: product of every present stage."""
    return math.prod(v for v in stage_factors(config).values() if v is not None)


def infidelity_budget(terms: InfidelityTerms | Mapping[str, float] | Iterable[float]) -> float:
    """Total infidelity as the sum of first-order terms."""
    if isinstance(terms, InfidelityTerms):
        values = list(terms.as_rows().values())
    elif isinstance(terms, Mapping):
        values = list(terms.values())
    else:
        values = list(terms)
    for v in values:
        if v < 0:
            raise ValueError(f"Infidelity terms must be non-negative, got {v}")
    return math.fsum(values)


def rate_budget(config: NodeConfig) -> BudgetReport:
    """Success rate = attempt_rate x product of all present stage efficiencies."""
    cap = config.multiplexed_modes * attempt_rate_cap(
        config.fiber_length, config.fiber_light_speed, config.max_attempt_rate
    )
    if config.attempt_rate > cap * (1 + 1e-9):
        logger.warning(
            f"Attempt rate {config.attempt_rate:.0f} Hz exceeds the {cap:.0f} Hz cap "
            f"for {config.fiber_length:.0f} m of fiber"
        )
    probability = stage_product(config)
    terms = config.infidelity.as_rows()
    return BudgetReport(
        stages=stage_factors(config),
        per_attempt_probability=probability,
        attempt_rate=config.attempt_rate,
        success_rate=config.attempt_rate * probability,
        attempt_rate_cap=cap,
        cap_utilization=config.attempt_rate / cap,
        infidelity_terms=terms,
        total_infidelity=infidelity_budget(terms),
    )


def rate_budget_future(config: NodeConfig) -> BudgetReport:
    """Same ledger evaluated on the improved stage values."""
    return rate_budget(config.improved())


def decay_success_penalty(window_s: float, t1_prime: float, n_memories: int = 1) -> float:
    """Fraction of successes lost to memory decay: 1 - exp(-n*window/T1')."""
    if window_s < 0:
        raise ValueError(f"Window must be non-negative, got {window_s}")
    if n_memories < 0:
        raise ValueError(f"Memory count must be non-negative, got {n_memories}")
    return 1.0 - metastable_decay(window_s, t1_prime) ** n_memories


def generation_time(rate_hz: float) -> float:
    """Mean time between heralds."""
    if rate_hz <= 0:
        raise ValueError(f"Rate must be positive, got {rate_hz}")
    return 1.0 / rate_hz


def ion_ion_rate(config_a: NodeConfig, config_b: NodeConfig, scheme: str) -> float:
    """Remote ion-ion entanglement rate of two nodes attempting in lockstep.

    The single-photon scheme collects only the pi photon (half the excitation), and its
    two-detector success 2p matches the per-node ion-photon probability. The two-photon
    Bell-state measurement succeeds with p_a * p_b / 2.
    """
    rate = min(config_a.attempt_rate, config_b.attempt_rate)
    p_a, p_b = stage_product(config_a), stage_product(config_b)
    if scheme == "single_photon":
        return rate * (p_a + p_b) / 2
    if scheme == "bsm":
        return rate * p_a * p_b / 2
    raise ValueError(f"Unknown two-node scheme '{scheme}'")
