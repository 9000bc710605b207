import math

import numpy as np
import pytest
from pydantic import ValidationError

from app.analysis.histogram import (
    expected_histogram,
    fit_histogram,
    histogram_pdf,
    pdf_total_mass,
    sample_arrival_times,
)
from app.analysis.models import HistogramModel
from app.errors import NumericalError

NS = 1e-9


@pytest.fixture
def model():
    return HistogramModel(
        latency=5 * NS,
        jitter_sigma=1 * NS,
        decay_tau=6.936 * NS,
        window=(0.0, 100 * NS),
    )


@pytest.mark.parametrize("sigma", [0.05, 1.0, 20.0])
def test_pdf_is_normalized(model, sigma):
    wide = model.model_copy(update={"jitter_sigma": sigma * NS})
    assert pdf_total_mass(wide) == pytest.approx(1.0, abs=1e-8)


def test_narrow_jitter_approaches_exponential(model):
    narrow = model.model_copy(update={"jitter_sigma": 1e-3 * model.decay_tau})
    tau = model.decay_tau
    for t in (2 * tau, 5 * tau):
        expected = math.exp(-t / tau) / tau
        assert float(histogram_pdf(narrow, model.latency + t)) == pytest.approx(expected, rel=2e-3)


def test_expected_histogram_sums_to_amplitude(model):
    amplitude_model = model.model_copy(update={"amplitude": 5000.0})
    edges = np.linspace(0.0, 100 * NS, 101)
    counts = expected_histogram(amplitude_model, edges)
    assert counts.sum() == pytest.approx(5000.0, rel=1e-9)
    assert np.argmax(counts) < 20


def test_samples_stay_inside_window(model):
    t = sample_arrival_times(model, 10_000, seed=1)
    assert t.size == 10_000
    assert t.min() >= 0.0
    assert t.max() <= 100 * NS


def test_sampling_is_reproducible(model):
    assert np.array_equal(sample_arrival_times(model, 100, 3), sample_arrival_times(model, 100, 3))


def test_fit_recovers_generator_parameters(model):
    samples = sample_arrival_times(model, 100_000, seed=2)
    fit = fit_histogram(samples, model.window)
    assert not fit.degenerate
    assert fit.samples == 100_000
    for name in ("latency", "jitter_sigma", "decay_tau"):
        truth = getattr(model, name)
        estimate = getattr(fit.model, name)
        assert math.isfinite(fit.errors[name])
        assert abs(estimate - truth) < 4 * fit.errors[name]


@pytest.fixture
def jitterless_samples(model):
    collapsed = model.model_copy(update={"jitter_sigma": 1e-15})
    return sample_arrival_times(collapsed, 50_000, seed=6)


def test_vanishing_jitter_is_flagged_degenerate(model, jitterless_samples):
    fit = fit_histogram(jitterless_samples, model.window)
    assert fit.degenerate
    assert not all(math.isfinite(e) for e in fit.errors.values())
    assert fit.model.decay_tau == pytest.approx(model.decay_tau, rel=0.05)


def test_strict_fit_raises_with_last_iterate(model, jitterless_samples):
    with pytest.raises(NumericalError, match="Degenerate") as info:
        fit_histogram(jitterless_samples, model.window, strict=True)
    assert isinstance(info.value.last_iterate, HistogramModel)


def test_fit_rejects_samples_outside_window(model):
    samples = sample_arrival_times(model, 100, seed=4)
    with pytest.raises(ValueError, match="beyond the window"):
        fit_histogram(samples, (0.0, 10 * NS))


def test_fit_needs_enough_samples(model):
    with pytest.raises(ValueError):
        fit_histogram([1 * NS, 2 * NS], model.window)


def test_window_must_be_ordered():
    with pytest.raises(ValidationError):
        HistogramModel(latency=0, jitter_sigma=1, decay_tau=1, window=(1.0, 0.0))
