"""Counter-based random streams keyed by (seed, stream, index).

Every trial or block owns a generator derived from its index alone, so results do
not depend on how trials are split between workers.
"""

import numpy as np

MAX_SEED = 2**64

# Stream identifiers
NODE_SEQUENCE = 0
SWAP = 1
SWAP_CURVE = 2
TOMOGRAPHY = 3
HISTOGRAM = 4
PHASE_SCAN = 5


def check_seed(seed: int) -> int:
    if not 0 <= int(seed) < MAX_SEED:
        raise ValueError(f"Seed must be a 64-bit unsigned value, got {seed}")
    return int(seed)


def trial_generator(seed: int, stream: int, index: int) -> np.random.Generator:
    """Philox generator for one trial (or block) of one stream."""
    sequence = np.random.SeedSequence(check_seed(seed), spawn_key=(stream, index))
    return np.random.Generator(np.random.Philox(sequence))
