"""Monte Carlo of the single-node sequence.

Each sequence runs initial Doppler and EIT cooling, prepares the memory qubit and
stores it for the memory window with a spin echo at the midpoint. Inside the window
the communication ion repeats heralded entangling attempts, with intermediate
cooling every N attempts, and halts at the first herald. The memory is read out at
the end of the window. A window must be at least as long as the initial cooling
setup plus one intermediate cooling.
"""

import logging
import math
from collections.abc import Iterator
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from app.budget.models import NodeConfig
from app.heralding.direct import direct_herald
from app.noise.channels import echoed_line_phase, gaussian_envelope, metastable_decay
from app.noise.models import NoiseParams
from app.protocol.models import NodeSimSummary, TrialRecord
from app.protocol.rng import NODE_SEQUENCE, check_seed, trial_generator
from app.protocol.sampler import attempt_time, attempts_within
from app.quantum.fidelity import bell_fidelity

logger = logging.getLogger(__name__)

DETECTORS = ("H", "V")


def check_timing(config: NodeConfig):
    """Reject configs whose storage window cannot hold the cooling overhead."""
    overhead = config.setup_time + config.cooling_time
    if config.memory_window < overhead:
        raise ValueError(
            f"Memory window {config.memory_window} s is shorter than the "
            f"{overhead} s of initial and intermediate cooling"
        )


def _simulate_chunk(
    config: NodeConfig,
    noise: NoiseParams,
    seed: int,
    start: int,
    stop: int,
    stark_phase_per_attempt: float,
) -> list[TrialRecord]:
    p, state = direct_herald(config, noise)
    herald_fidelity = bell_fidelity(state)
    window = config.memory_window
    period = config.attempt_period
    n, cooling = config.cooling_period_attempts, config.cooling_time
    max_attempts = attempts_within(window, period, n, cooling)
    survival = metastable_decay(window, noise.t1_prime)
    envelope = float(gaussian_envelope(window, noise.t2))
    line_period = 1.0 / min((tone.frequency for tone in noise.modulation), default=1.0)

    records = []
    for index in range(start, stop):
        rng = trial_generator(seed, NODE_SEQUENCE, index)
        k = int(rng.geometric(p)) if p > 0 else max_attempts + 1
        decayed = bool(rng.random() >= survival)
        offset = 0.0 if noise.line_triggered else float(rng.uniform(0.0, line_period))

        if k <= max_attempts:
            attempts = k
            herald_time = float(attempt_time(k, period, n, cooling))
            block_index = k // n
            pattern = DETECTORS[int(rng.integers(2))]
        else:
            attempts, k, herald_time, block_index, pattern = max_attempts, None, None, None, "none"

        memory_fidelity = None
        if not decayed:
            phase = float(echoed_line_phase(window, noise.modulation, offset))
            phase += stark_phase_per_attempt * attempts
            memory_fidelity = (1 + envelope * math.cos(phase)) / 2

        records.append(
            TrialRecord(
                sequence_index=index,
                attempts=attempts,
                attempt_index=k,
                block_index=block_index,
                herald_time=herald_time,
                memory_elapsed=window,
                decayed=decayed,
                bell_fidelity=herald_fidelity if k is not None and not decayed else None,
                memory_fidelity=memory_fidelity,
                pattern=pattern,
            )
        )
    return records


def run_node_sequence(
    config: NodeConfig,
    noise: NoiseParams,
    seed: int,
    n_sequences: int,
    workers: int = 1,
    chunk_size: int = 2048,
    stark_phase_per_attempt: float = 0.0,
) -> Iterator[TrialRecord]:
    """Simulate `n_sequences` node sequences and yield their records in order.

    Args:
        config: Stage efficiencies and timings of the node
        noise: Memory and operation noise
        seed: 64-bit seed; each sequence draws from its own counter-based stream
        n_sequences: Number of sequences
        workers: Worker processes; records are identical for any value
        chunk_size: Sequences per work unit
        stark_phase_per_attempt: Echo-suppressed crosstalk phase added to the memory
            per attempt, rad

    Yields:
        TrialRecord per sequence in sequence-index order

    Raises:
        ValueError: If the timing is inconsistent or the arguments are out of range
    """
    check_seed(seed)
    check_timing(config)
    if n_sequences < 0:
        raise ValueError(f"Sequence count must be non-negative, got {n_sequences}")
    if workers < 1 or chunk_size < 1:
        raise ValueError(f"Workers and chunk size must be positive, got {workers}, {chunk_size}")

    bounds = [(s, min(s + chunk_size, n_sequences)) for s in range(0, n_sequences, chunk_size)]
    logger.info(f"Simulating {n_sequences} sequences in {len(bounds)} chunks on {workers} workers")
    args = (config, noise, seed)

    if workers == 1 or len(bounds) <= 1:
        for start, stop in bounds:
            yield from _simulate_chunk(*args, start, stop, stark_phase_per_attempt)
        return

    with ProcessPoolExecutor(max_workers=workers) as executor:
        futures = [
            executor.submit(_simulate_chunk, *args, start, stop, stark_phase_per_attempt)
            for start, stop in bounds
        ]
        for future in futures:
            yield from future.result()


def summarize(
    records: list[TrialRecord], config: NodeConfig, noise: NoiseParams
) -> NodeSimSummary:
    """Herald rate on the attempt clock and decay fraction with binomial errors."""
    if not records:
        raise ValueError("Cannot summarize an empty run")
    p, _ = direct_herald(config, noise)
    sequences = len(records)
    attempts = sum(r.attempts for r in records)
    heralds = sum(r.heralded for r in records)
    decays = sum(r.decayed for r in records)

    rate = config.attempt_rate
    herald_p = heralds / attempts if attempts else 0.0
    sigma_p = math.sqrt(p * (1 - p) / attempts) if attempts else float("inf")
    decay_fraction = decays / sequences
    analytic_decay = 1 - metastable_decay(config.memory_window, noise.t1_prime)

    bell = [r.bell_fidelity for r in records if r.bell_fidelity is not None]
    memory = [r.memory_fidelity for r in records if r.memory_fidelity is not None]
    return NodeSimSummary(
        sequences=sequences,
        attempts=attempts,
        heralds=heralds,
        herald_rate=herald_p * rate,
        herald_rate_sigma=sigma_p * rate,
        analytic_herald_rate=p * rate,
        decay_fraction=decay_fraction,
        decay_fraction_sigma=math.sqrt(analytic_decay * (1 - analytic_decay) / sequences),
        analytic_decay_fraction=analytic_decay,
        mean_bell_fidelity=float(np.mean(bell)) if bell else None,
        mean_memory_fidelity=float(np.mean(memory)) if memory else None,
    )
