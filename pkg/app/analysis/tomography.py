"""Two-qubit Pauli tomography: count simulation and maximum-likelihood reconstruction."""

import logging
import math
from collections.abc import Sequence

import numpy as np

from app.analysis.models import OUTCOMES, PAULI_SETTINGS, CountTable, MLEResult
from app.errors import DimensionError, NumericalError
from app.protocol.rng import TOMOGRAPHY, check_seed, trial_generator
from app.quantum.models import QuantumState

logger = logging.getLogger(__name__)

MAX_ITERATIONS = 5000
LIKELIHOOD_TOLERANCE = 1e-10
PROBABILITY_FLOOR = 1e-15

_SQ2 = 1 / math.sqrt(2)
EIGENVECTORS = {
    "X": (np.array([_SQ2, _SQ2]), np.array([_SQ2, -_SQ2])),
    "Y": (np.array([_SQ2, 1j * _SQ2]), np.array([_SQ2, -1j * _SQ2])),
    "Z": (np.array([1.0, 0.0]), np.array([0.0, 1.0])),
}


def setting_projectors(setting: str) -> np.ndarray:
    """Four rank-one projectors of a two-qubit Pauli setting, shape (4, 4, 4)."""
    if len(setting) != 2 or any(letter not in EIGENVECTORS for letter in setting):
        raise ValueError(f"Setting '{setting}' is not a pair of X, Y, Z")
    first, second = EIGENVECTORS[setting[0]], EIGENVECTORS[setting[1]]
    projectors = []
    for outcome in OUTCOMES:
        a = first[0 if outcome[0] == "+" else 1]
        b = second[0 if outcome[1] == "+" else 1]
        vec = np.kron(a, b).astype(complex)
        projectors.append(np.outer(vec, vec.conj()))
    return np.array(projectors)


def _require_two_qubits(rho: QuantumState):
    if rho.dims != (2, 2):
        raise DimensionError(f"Tomography expects a two-qubit state, got dims {rho.dims}")


def born_probabilities(rho: QuantumState, setting: str) -> np.ndarray:
    _require_two_qubits(rho)
    probabilities = np.einsum("kij,ji->k", setting_projectors(setting), rho.matrix).real
    probabilities = np.clip(probabilities, 0.0, None)
    return probabilities / probabilities.sum()


def _warn_if_incomplete(settings: Sequence[str]):
    missing = sorted(set(PAULI_SETTINGS) - set(settings))
    if missing:
        logger.warning(f"Tomography settings are incomplete, missing {missing}")


def simulate_counts(
    rho: QuantumState, settings: Sequence[str] = PAULI_SETTINGS, shots: int = 1000, seed: int = 0
) -> CountTable:
    """Multinomial outcome counts per setting from the Born probabilities.

    Each setting draws from its own stream so adding settings does not change the
    counts of the others.
    """
    check_seed(seed)
    if shots < 1:
        raise ValueError(f"Shots must be positive, got {shots}")
    _warn_if_incomplete(settings)
    counts = {}
    for setting in settings:
        if setting not in PAULI_SETTINGS:
            raise ValueError(f"Setting '{setting}' is not a pair of X, Y, Z")
        rng = trial_generator(seed, TOMOGRAPHY, PAULI_SETTINGS.index(setting))
        drawn = rng.multinomial(shots, born_probabilities(rho, setting))
        counts[setting] = [float(n) for n in drawn]
    return CountTable(shots=shots, counts=counts)


def expected_counts(
    rho: QuantumState, settings: Sequence[str] = PAULI_SETTINGS, shots: float = 1.0
) -> CountTable:
    """Noise-free counts: shots times the Born probabilities."""
    _warn_if_incomplete(settings)
    return CountTable(
        shots=shots,
        counts={s: [float(shots * p) for p in born_probabilities(rho, s)] for s in settings},
    )


def _stack(table: CountTable) -> tuple[np.ndarray, np.ndarray]:
    projectors = np.concatenate([setting_projectors(s) for s in table.settings])
    counts = np.concatenate([np.asarray(table.counts[s], dtype=float) for s in table.settings])
    return projectors, counts


def log_likelihood(rho: np.ndarray, projectors: np.ndarray, counts: np.ndarray) -> float:
    """sum_j n_j log p_j, normalized by the total count."""
    probabilities = np.einsum("kij,ji->k", projectors, rho).real
    probabilities = np.maximum(probabilities, PROBABILITY_FLOOR)
    return float(np.dot(counts, np.log(probabilities)) / counts.sum())


def mle_fit(
    table: CountTable,
    initial: QuantumState | None = None,
    max_iterations: int = MAX_ITERATIONS,
    tolerance: float = LIKELIHOOD_TOLERANCE,
    strict: bool = False,
) -> MLEResult:
    """Iterative R rho R maximum-likelihood reconstruction.

    A step that would lower the likelihood is diluted, rho -> (I + eR) rho (I + eR)
    with e halved until the likelihood no longer decreases, so the recorded
    log-likelihood history is non-decreasing.

    Args:
        table: Pauli-setting counts
        initial: Starting state, maximally mixed by default
        max_iterations: Iteration cap
        tolerance: Stop once the per-shot log-likelihood changes by less than this
        strict: Raise instead of warning when the cap is reached

    Returns:
        MLEResult holding the reconstructed density matrix

    Raises:
        NumericalError: If strict and the iteration cap is reached
    """
    if not table.complete:
        _warn_if_incomplete(table.settings)
    projectors, counts = _stack(table)
    if counts.sum() <= 0:
        raise ValueError("Count table holds no counts")

    if initial is None:
        rho = np.eye(4, dtype=complex) / 4
    else:
        _require_two_qubits(initial)
        rho = initial.matrix
    identity = np.eye(4, dtype=complex)
    current = log_likelihood(rho, projectors, counts)
    history = [current]
    converged = False
    iterations = 0

    for iterations in range(1, max_iterations + 1):
        probabilities = np.einsum("kij,ji->k", projectors, rho).real
        weights = counts / np.maximum(probabilities, PROBABILITY_FLOOR) / counts.sum()
        r = np.einsum("k,kij->ij", weights, projectors)

        # Plain R rho R first, then diluted steps
        operator, step = r, 1.0
        while True:
            candidate = operator @ rho @ operator
            candidate = (candidate + candidate.conj().T) / 2
            candidate /= np.trace(candidate).real
            value = log_likelihood(candidate, projectors, counts)
            if value >= current or step < 1e-8:
                break
            operator = (identity + step * r) / (1 + step)
            step /= 2

        if value < current:
            converged = True
            break
        change = value - current
        rho, current = candidate, value
        history.append(current)
        if change < tolerance:
            converged = True
            break

    state = QuantumState.from_matrix(rho, (2, 2), ("ion", "photon"))
    if not converged:
        message = f"MLE did not converge in {max_iterations} iterations"
        if strict:
            raise NumericalError(message, last_iterate=state)
        logger.warning(message)
    logger.debug(f"MLE stopped after {iterations} iterations, log-likelihood {current:.6g}")
    return MLEResult(state, current, iterations, converged, history)


def mle_reconstruct(table: CountTable, **kwargs) -> QuantumState:
    """Reconstructed density matrix; see mle_fit for the options."""
    return mle_fit(table, **kwargs).state
