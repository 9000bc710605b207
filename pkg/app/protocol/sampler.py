"""Timing model of the heralded attempt loop with intermediate cooling."""

import math

import numpy as np


def _check_timing(period: float, cooling_every: int, cooling_time: float):
    if period <= 0:
        raise ValueError(f"Attempt period must be positive, got {period}")
    if cooling_every < 1:
        raise ValueError(f"Cooling cadence must be at least 1 attempt, got {cooling_every}")
    if cooling_time < 0:
        raise ValueError(f"Cooling time must be non-negative, got {cooling_time}")


def attempt_time(k, period: float, cooling_every: int, cooling_time: float):
    """Elapsed time after k attempts: k*period + floor(k/N)*cooling_time."""
    k = np.asarray(k)
    return k * period + (k // cooling_every) * cooling_time


def attempts_within(window: float, period: float, cooling_every: int, cooling_time: float) -> int:
    """Largest attempt count whose elapsed time fits in `window`."""
    _check_timing(period, cooling_every, cooling_time)
    if window < 0:
        raise ValueError(f"Window must be non-negative, got {window}")
    block = cooling_every * period + cooling_time
    k = int(window // block) * cooling_every
    while k > 0 and attempt_time(k, period, cooling_every, cooling_time) > window:
        k -= 1
    while attempt_time(k + 1, period, cooling_every, cooling_time) <= window:
        k += 1
    return k


def waiting_time_sampler(
    p_per_attempt: float,
    attempt_period: float,
    cooling_every: int,
    cooling_time: float,
    rng: np.random.Generator,
    size: int | None = None,
):
    """Draw the time until the first herald.

    Args:
        p_per_attempt: Success probability of one attempt, 0 < p <= 1
        attempt_period: Time per attempt in s
        cooling_every: Cooling inserted after every N attempts
        cooling_time: Duration of one cooling block in s
        rng: Source of randomness
        size: Number of draws; None returns a single float

    Returns:
        Waiting time(s) in s
    """
    if not 0 < p_per_attempt <= 1:
        raise ValueError(f"Per-attempt probability must be in (0, 1], got {p_per_attempt}")
    _check_timing(attempt_period, cooling_every, cooling_time)
    k = rng.geometric(p_per_attempt, size=size)
    t = attempt_time(k, attempt_period, cooling_every, cooling_time)
    return float(t) if size is None else t


def expected_waiting_time(
    p_per_attempt: float, attempt_period: float, cooling_every: int, cooling_time: float
) -> float:
    """Exact mean of waiting_time_sampler.

    E[floor(k/N)] = sum_j P(k >= jN) = (1-p)^(N-1) / (1 - (1-p)^N) for k ~ Geom(p).
    """
    if not 0 < p_per_attempt <= 1:
        raise ValueError(f"Per-attempt probability must be in (0, 1], got {p_per_attempt}")
    _check_timing(attempt_period, cooling_every, cooling_time)
    if p_per_attempt == 1:
        return attempt_period + (cooling_time if cooling_every == 1 else 0.0)
    q = 1 - p_per_attempt
    # -expm1 keeps 1 - q^N accurate when p*N is small
    blocks = q ** (cooling_every - 1) / -math.expm1(cooling_every * math.log1p(-p_per_attempt))
    return attempt_period / p_per_attempt + blocks * cooling_time
