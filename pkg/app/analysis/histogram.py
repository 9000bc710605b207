"""Photon arrival-time histograms: exponentially modified Gaussian model and fit."""

import logging
import math

import numdifftools as nd
import numpy as np
from scipy.integrate import quad
from scipy.optimize import minimize
from scipy.stats import exponnorm

from app.analysis.models import HistogramFit, HistogramModel
from app.errors import NumericalError
from app.protocol.rng import HISTOGRAM, check_seed, trial_generator

logger = logging.getLogger(__name__)

# Jitter below this fraction of the decay time counts as a collapsed fit
DEGENERATE_RATIO = 1e-3


def _distribution(latency: float, sigma: float, tau: float):
    return exponnorm(tau / sigma, loc=latency, scale=sigma)


def histogram_pdf(model: HistogramModel, t):
    """Arrival density at t (s): Gaussian jitter convolved with the exponential decay."""
    return _distribution(model.latency, model.jitter_sigma, model.decay_tau).pdf(t)


def pdf_total_mass(model: HistogramModel) -> float:
    """Integral of histogram_pdf over the real line, evaluated in units of sigma + tau."""
    unit = model.jitter_sigma + model.decay_tau

    def integrand(u: float) -> float:
        return float(histogram_pdf(model, model.latency + u * unit)) * unit

    left, _ = quad(integrand, -math.inf, 0.0, epsabs=1e-13, epsrel=1e-13, limit=200)
    right, _ = quad(integrand, 0.0, math.inf, epsabs=1e-13, epsrel=1e-13, limit=200)
    return left + right


def expected_histogram(model: HistogramModel, edges) -> np.ndarray:
    """Expected counts per bin: amplitude spread over the in-window probability mass."""
    dist = _distribution(model.latency, model.jitter_sigma, model.decay_tau)
    start, end = model.window
    edges = np.clip(np.asarray(edges, dtype=float), start, end)
    mass = dist.cdf(end) - dist.cdf(start)
    return model.amplitude * np.diff(dist.cdf(edges)) / mass


def sample_arrival_times(model: HistogramModel, n: int, seed: int) -> np.ndarray:
    """Draw n arrival times inside the model window (s)."""
    check_seed(seed)
    if n < 0:
        raise ValueError(f"Sample count must be non-negative, got {n}")
    rng = trial_generator(seed, HISTOGRAM, 0)
    start, end = model.window
    kept: list[np.ndarray] = []
    have = 0
    while have < n:
        batch = max(2 * (n - have), 1024)
        t = (
            model.latency
            + rng.normal(0.0, model.jitter_sigma, batch)
            + rng.exponential(model.decay_tau, batch)
        )
        t = t[(t >= start) & (t <= end)]
        kept.append(t)
        have += t.size
    return np.concatenate(kept)[:n] if kept else np.empty(0)


def _negative_log_likelihood(params, z, a, b):
    latency, sigma, tau = params
    if sigma <= 0 or tau <= 0:
        return math.inf
    dist = _distribution(latency, sigma, tau)
    mass = dist.cdf(b) - dist.cdf(a)
    if mass <= 0:
        return math.inf
    return float(-np.sum(dist.logpdf(z)) + z.size * math.log(mass))


def fit_histogram(
    samples, window: tuple[float, float], strict: bool = False
) -> HistogramFit:
    """Maximum-likelihood fit of the window-truncated arrival model.

    The fit runs on standardized times; standard errors come from the inverse
    Hessian of the negative log-likelihood.

    Args:
        samples: Arrival times in s, all inside `window`
        window: Acquisition window (start, end) in s
        strict: Raise instead of flagging a degenerate fit

    Returns:
        HistogramFit with the fitted model and standard errors in s

    Raises:
        ValueError: If samples fall outside the window or are too few
        NumericalError: If strict and the fit is degenerate
    """
    t = np.asarray(samples, dtype=float)
    start, end = window
    if t.size < 10:
        raise ValueError(f"At least 10 samples are needed, got {t.size}")
    if t.min() < start or t.max() > end:
        raise ValueError(f"Samples extend beyond the window {window}")

    center, scale = float(t.mean()), float(t.std())
    if scale <= 0:
        raise ValueError("Samples have zero spread")
    z = (t - center) / scale
    a, b = (start - center) / scale, (end - center) / scale

    # Moment estimates: skewness 2 tau^3 / (sigma^2 + tau^2)^(3/2)
    skew = float(np.mean(z**3))
    tau0 = float(np.clip(np.cbrt(max(skew, 0.0) / 2), 0.1, 0.95))
    start_point = [-tau0, math.sqrt(1 - tau0**2), tau0]

    result = minimize(
        _negative_log_likelihood,
        start_point,
        args=(z, a, b),
        method="Nelder-Mead",
        options={"xatol": 1e-7, "fatol": 1e-7, "maxiter": 4000},
    )
    latency, sigma, tau = (float(v) for v in result.x)

    if not result.success:
        logger.warning(f"Histogram fit stopped early: {result.message}")
    degenerate = sigma < DEGENERATE_RATIO * tau
    errors = {"latency": math.inf, "jitter_sigma": math.inf, "decay_tau": math.inf}
    if not degenerate:
        hessian = nd.Hessian(_negative_log_likelihood)(result.x, z, a, b)
        try:
            covariance = np.linalg.inv(hessian)
        except np.linalg.LinAlgError:
            covariance = None
        if (
            covariance is None
            or not np.all(np.isfinite(covariance))
            or np.any(np.diag(covariance) <= 0)
        ):
            degenerate = True
        else:
            spread = np.sqrt(np.diag(covariance))
            # A jitter estimate smaller than its own error sits on the sigma = 0 edge
            if spread[1] >= sigma:
                degenerate = True
            else:
                errors = dict(zip(errors, (float(s * scale) for s in spread), strict=True))

    fitted = HistogramModel(
        latency=center + latency * scale,
        jitter_sigma=max(sigma, 1e-12) * scale,
        decay_tau=tau * scale,
        amplitude=float(t.size),
        window=(start, end),
    )
    if degenerate:
        message = (
            f"Degenerate histogram fit: sigma={fitted.jitter_sigma:.3g}, "
            f"tau={fitted.decay_tau:.3g}"
        )
        if strict:
            raise NumericalError(message, last_iterate=fitted)
        logger.warning(message)

    return HistogramFit(
        model=fitted,
        errors=errors,
        log_likelihood=-float(result.fun) - t.size * math.log(scale),
        samples=int(t.size),
        degenerate=degenerate,
    )
