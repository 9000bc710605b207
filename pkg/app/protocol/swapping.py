"""Entanglement swapping between two nodes and its rate dependence.

Link 1 is heralded first and its ion is shelved into the memory. Link 2 is then
attempted until it heralds; during that wait the stored ion may decay (caught by
state detection and discarded) and dephases with the Gaussian T2 envelope. The
swap itself is ideal unless a gate fidelity below one is given.
"""

import logging
import math
from collections.abc import Iterator, Sequence

import numpy as np
from scipy.integrate import quad
from scipy.special import erfcx

from app.budget.ledger import stage_product
from app.budget.models import NodeConfig
from app.noise.channels import gaussian_envelope, metastable_decay
from app.noise.models import NoiseParams
from app.protocol.models import SwapCurveRow, SwapResult
from app.protocol.rng import SWAP, SWAP_CURVE, check_seed, trial_generator
from app.protocol.sampler import waiting_time_sampler

logger = logging.getLogger(__name__)

# Monte Carlo column of the swap curve
MC_ATTEMPT_RATE = 1.0e6
MC_BLOCK_SIZE = 4096
MC_MIN_SUCCESSES = 40000
MC_MAX_BLOCKS = 4096


def swap_fidelity(coherence, gate_fidelity: float = 1.0):
    """Photon-photon Bell fidelity after swapping a pair whose memory coherence is `coherence`.

    An imperfect swap is a two-qubit depolarizing step with weight `gate_fidelity`.
    """
    if not 0 <= gate_fidelity <= 1:
        raise ValueError(f"Gate fidelity must be in [0, 1], got {gate_fidelity}")
    ideal = (1 + np.asarray(coherence, dtype=float)) / 2
    return gate_fidelity * ideal + (1 - gate_fidelity) / 4


def swap_experiment(
    config_a: NodeConfig,
    config_b: NodeConfig,
    noise: NoiseParams,
    seed: int,
    n_trials: int,
    gate_fidelity: float = 1.0,
) -> Iterator[SwapResult]:
    """Simulate swapping trials, yielding one SwapResult per trial in order.

    Args:
        config_a: Node holding the first link; its ion is the stored memory
        config_b: Node attempting the second link
        noise: Memory lifetime and dephasing of the stored ion
        seed: 64-bit seed
        n_trials: Number of trials
        gate_fidelity: Depolarizing weight of the swap gates and detection

    Yields:
        SwapResult with the link-2 waiting time and, on success, the fidelity
    """
    check_seed(seed)
    if n_trials < 0:
        raise ValueError(f"Trial count must be non-negative, got {n_trials}")
    if stage_product(config_a) <= 0:
        raise ValueError("The first link has zero per-attempt success probability")
    p = stage_product(config_b)
    if p <= 0:
        raise ValueError("The second link has zero per-attempt success probability")

    for index in range(n_trials):
        rng = trial_generator(seed, SWAP, index)
        t = waiting_time_sampler(
            p,
            config_b.attempt_period,
            config_b.cooling_period_attempts,
            config_b.cooling_time,
            rng,
        )
        success = bool(rng.random() < metastable_decay(t, noise.t1_prime))
        value = None
        if success:
            value = float(swap_fidelity(gaussian_envelope(t, noise.t2), gate_fidelity))
        yield SwapResult(
            trial_index=index,
            waiting_time_second_link=t,
            success=success,
            photon_photon_fidelity=value,
        )


def _waiting_rate(rate: float, t1_prime: float, conditioned: bool) -> float:
    if rate <= 0:
        raise ValueError(f"Rate must be positive, got {rate}")
    if t1_prime <= 0:
        raise ValueError(f"T1' must be positive, got {t1_prime}")
    return rate + 1 / t1_prime if conditioned else rate


def swap_success_probability(rate: float, t1_prime: float) -> float:
    """Probability that the memory survives an exponential wait at rate R: R / (R + 1/T1')."""
    k = _waiting_rate(rate, t1_prime, True)
    return rate / k


def swap_curve_fidelity(rate: float, t1_prime: float, t2: float, conditioned: bool = True) -> float:
    """Closed form of 1/2 (1 + int k e^{-kt} e^{-(t/T2)^2} dt).

    The waiting density has rate k = R + 1/T1' when conditioned on survival and
    k = R otherwise. The integral equals k T2 sqrt(pi)/2 erfcx(k T2 / 2).
    """
    k = _waiting_rate(rate, t1_prime, conditioned)
    if t2 <= 0:
        raise ValueError(f"T2 must be positive, got {t2}")
    overlap = k * t2 * math.sqrt(math.pi) / 2 * float(erfcx(k * t2 / 2))
    return 0.5 * (1 + min(overlap, 1.0))


def swap_curve_fidelity_quadrature(
    rate: float, t1_prime: float, t2: float, conditioned: bool = True
) -> float:
    """Same fidelity as swap_curve_fidelity by numerical integration."""
    k = _waiting_rate(rate, t1_prime, conditioned)
    if t2 <= 0:
        raise ValueError(f"T2 must be positive, got {t2}")

    def integrand(t: float) -> float:
        return k * math.exp(-k * t - (t / t2) ** 2)

    split = min(50 / k, 10 * t2)
    head, _ = quad(integrand, 0.0, split, limit=200, epsabs=1e-12, epsrel=1e-12)
    tail, _ = quad(integrand, split, math.inf, limit=200, epsabs=1e-12, epsrel=1e-12)
    return 0.5 * (1 + head + tail)


def swap_curve_monte_carlo(
    rate: float,
    t1_prime: float,
    t2: float,
    seed: int,
    rate_index: int = 0,
    conditioned: bool = True,
) -> tuple[float, float, int]:
    """Sampled (success probability, fidelity, trials) at one link-2 rate.

    Link-2 waiting is drawn from the discrete attempt loop at a fixed fast attempt
    clock. Blocks of trials are drawn from block-indexed streams until enough
    successes have accumulated.
    """
    _waiting_rate(rate, t1_prime, conditioned)
    attempt_rate = max(MC_ATTEMPT_RATE, 100 * rate)
    p = rate / attempt_rate

    trials = successes = 0
    fidelity_sum = 0.0
    for block in range(MC_MAX_BLOCKS):
        rng = trial_generator(seed, SWAP_CURVE, rate_index * MC_MAX_BLOCKS + block)
        t = rng.geometric(p, size=MC_BLOCK_SIZE) / attempt_rate
        survived = rng.random(MC_BLOCK_SIZE) < np.exp(-t / t1_prime)
        fidelities = swap_fidelity(gaussian_envelope(t, t2))
        trials += MC_BLOCK_SIZE
        successes += int(survived.sum())
        fidelity_sum += float(fidelities[survived].sum() if conditioned else fidelities.sum())
        if successes >= MC_MIN_SUCCESSES:
            break
    else:
        logger.warning(f"Monte Carlo at {rate:.3g} Hz stopped with only {successes} successes")

    counted = successes if conditioned else trials
    fidelity = fidelity_sum / counted if counted else float("nan")
    return successes / trials, fidelity, trials


def swap_curve(
    rates: Sequence[float],
    t1_prime: float,
    t2: float,
    conditioned: bool = True,
    monte_carlo: bool = True,
    seed: int = 0,
) -> list[SwapCurveRow]:
    """Success probability and swapped fidelity against the link-2 generation rate.

    Args:
        rates: Link-2 ion-photon rates in Hz, all positive
        t1_prime: Memory lifetime in s
        t2: Memory coherence time in s
        conditioned: Weight the waiting density by memory survival
        monte_carlo: Add the sampled columns
        seed: Seed of the sampled columns

    Returns:
        One SwapCurveRow per rate, in input order
    """
    check_seed(seed)
    if any(r <= 0 for r in rates):
        raise ValueError(f"Rates must be positive, got {list(rates)}")

    rows = []
    for index, rate in enumerate(rates):
        row = {
            "rate": rate,
            "success_probability": swap_success_probability(rate, t1_prime),
            "fidelity": swap_curve_fidelity(rate, t1_prime, t2, conditioned),
            "fidelity_quadrature": swap_curve_fidelity_quadrature(rate, t1_prime, t2, conditioned),
        }
        if monte_carlo:
            success, fidelity, trials = swap_curve_monte_carlo(
                rate, t1_prime, t2, seed, index, conditioned
            )
            row |= {"mc_success_probability": success, "mc_fidelity": fidelity, "mc_trials": trials}
        rows.append(SwapCurveRow(**row))
    logger.info(f"Swap curve evaluated at {len(rows)} rates (conditioned={conditioned})")
    return rows


def rate_grid(low: float, high: float, count: int = 20) -> list[float]:
    """Log-spaced rates from `low` to `high` inclusive."""
    if not 0 < low <= high:
        raise ValueError(f"Rate range must satisfy 0 < low <= high, got {low}..{high}")
    if count < 1:
        raise ValueError(f"Rate count must be positive, got {count}")
    return [float(r) for r in np.geomspace(low, high, count)]
