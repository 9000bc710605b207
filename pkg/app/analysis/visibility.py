"""Correlation visibilities and sinusoidal phase-scan fits."""

import logging
import math
from collections.abc import Sequence

import numpy as np
from scipy.optimize import curve_fit

from app.analysis.models import OUTCOMES, CountTable, PhaseScanFit, VisibilityResult
from app.protocol.rng import PHASE_SCAN, check_seed, trial_generator
from app.quantum.fidelity import pauli_expectation
from app.quantum.models import QuantumState

logger = logging.getLogger(__name__)

CORRELATION_SETTINGS = ("XX", "YY", "ZZ")

# Signs of <XX>, <YY>, <ZZ> on each Bell state
BELL_SIGNS = {
    "phi_plus": (1, -1, 1),
    "phi_minus": (-1, 1, 1),
    "psi_plus": (1, 1, -1),
    "psi_minus": (-1, -1, -1),
}

MIN_SCAN_POINTS = 4

_PARITY = np.array([1 if o.count("-") % 2 == 0 else -1 for o in OUTCOMES])


def correlators(source: QuantumState | CountTable) -> tuple[float, float, float]:
    """<XX>, <YY>, <ZZ> from a state or from tomography counts."""
    if isinstance(source, QuantumState):
        return tuple(pauli_expectation(source, s) for s in CORRELATION_SETTINGS)
    missing = [s for s in CORRELATION_SETTINGS if s not in source.counts]
    if missing:
        raise ValueError(f"Counts lack the correlation settings {missing}")
    return tuple(
        float(np.dot(_PARITY, source.counts[s]) / source.shots) for s in CORRELATION_SETTINGS
    )


def visibilities(source: QuantumState | CountTable) -> VisibilityResult:
    """Absolute correlation visibilities, sign-aligned to the nearest Bell state.

    The Bell state whose sign pattern best matches the correlators is recorded;
    signs_consistent is False when a correlator opposes that pattern, in which case
    the fidelity estimate (1 + Vx + Vy + Vz) / 4 overstates the overlap.
    """
    values = correlators(source)
    aligned_to = max(
        BELL_SIGNS, key=lambda k: sum(s * v for s, v in zip(BELL_SIGNS[k], values, strict=True))
    )
    signs = BELL_SIGNS[aligned_to]
    consistent = all(s * v >= -1e-12 for s, v in zip(signs, values, strict=True))
    if not consistent:
        logger.warning(f"Correlators {values} disagree in sign with {aligned_to}")
    vx, vy, vz = (min(abs(v), 1.0) for v in values)
    return VisibilityResult(vx, vy, vz, aligned_to, consistent)


def _sinusoid(phase, offset, visibility, shift):
    return offset * (1 + visibility * np.cos(phase + shift))


def fit_phase_scan(
    phases: Sequence[float], probabilities: Sequence[float], shots: int | None = None
) -> PhaseScanFit:
    """Fit offset * (1 + V cos(phase + phi)) to a scanned probability.

    Args:
        phases: Analysis phases in rad
        probabilities: Measured outcome probabilities at those phases
        shots: Shots per point; enables binomial weights and absolute errors

    Raises:
        ValueError: If fewer than four points are given
    """
    x = np.asarray(phases, dtype=float)
    y = np.asarray(probabilities, dtype=float)
    if x.shape != y.shape:
        raise ValueError(f"{x.size} phases for {y.size} probabilities")
    if x.size < MIN_SCAN_POINTS:
        raise ValueError(f"A sinusoid fit needs at least {MIN_SCAN_POINTS} points, got {x.size}")

    # Linear least squares for a + b cos + c sin gives the starting point
    design = np.column_stack([np.ones_like(x), np.cos(x), np.sin(x)])
    (a, b, c), *_ = np.linalg.lstsq(design, y, rcond=None)
    guess = [a, math.hypot(b, c) / a if a > 0 else 0.0, math.atan2(-c, b)]

    sigma = None
    if shots:
        sigma = np.sqrt(np.clip(y * (1 - y), 1 / shots, None) / shots)
    params, covariance = curve_fit(
        _sinusoid, x, y, p0=guess, sigma=sigma, absolute_sigma=sigma is not None
    )
    offset, vis, shift = params
    if vis < 0:
        vis, shift = -vis, shift + math.pi
    error = float(np.sqrt(covariance[1, 1])) if np.isfinite(covariance[1, 1]) else float("inf")
    return PhaseScanFit(
        visibility=float(vis),
        visibility_error=error,
        phase=float(math.remainder(shift, 2 * math.pi)),
        offset=float(offset),
    )


def sample_phase_scan(
    visibility: float,
    phases: Sequence[float],
    shots: int,
    seed: int,
    offset: float = 0.5,
    shift: float = 0.0,
) -> np.ndarray:
    """Binomially sampled outcome frequencies of an ideal sinusoidal scan."""
    check_seed(seed)
    if not 0 <= visibility <= 1:
        raise ValueError(f"Visibility must be in [0, 1], got {visibility}")
    rng = trial_generator(seed, PHASE_SCAN, 0)
    p = np.clip(_sinusoid(np.asarray(phases, dtype=float), offset, visibility, shift), 0, 1)
    return rng.binomial(shots, p) / shots
