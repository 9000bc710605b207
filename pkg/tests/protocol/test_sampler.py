import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from app.protocol.rng import check_seed, trial_generator
from app.protocol.sampler import (
    attempt_time,
    attempts_within,
    expected_waiting_time,
    waiting_time_sampler,
)


def test_certain_success_takes_one_period():
    rng = trial_generator(1, 0, 0)
    assert waiting_time_sampler(1.0, 200e-6, 100, 200e-6, rng) == pytest.approx(200e-6)
    assert expected_waiting_time(1.0, 200e-6, 100, 200e-6) == pytest.approx(200e-6)


def test_expected_waiting_time_with_cooling():
    # (1/p) * period + roughly (1/(pN)) * cooling
    assert expected_waiting_time(1e-4, 200e-6, 100, 200e-6) == pytest.approx(2.02, abs=1e-3)


def test_sampler_mean_matches_expectation():
    rng = trial_generator(11, 0, 0)
    n = 1_000_000
    draws = waiting_time_sampler(0.01, 1e-5, 100, 2e-4, rng, size=n)
    expected = expected_waiting_time(0.01, 1e-5, 100, 2e-4)
    assert abs(draws.mean() - expected) < 4 * draws.std() / np.sqrt(n)


def test_sampler_is_reproducible():
    a = waiting_time_sampler(0.05, 1e-5, 10, 1e-4, trial_generator(5, 1, 3), size=100)
    b = waiting_time_sampler(0.05, 1e-5, 10, 1e-4, trial_generator(5, 1, 3), size=100)
    c = waiting_time_sampler(0.05, 1e-5, 10, 1e-4, trial_generator(5, 1, 4), size=100)
    assert np.array_equal(a, b)
    assert not np.array_equal(a, c)


def test_attempts_within_counts_cooling_blocks():
    # attempt times 1, 2.5, 3.5, 5 with a 0.5 cooling after every second attempt
    assert attempts_within(3.5, 1.0, 2, 0.5) == 3
    assert attempts_within(4.9, 1.0, 2, 0.5) == 3
    assert attempts_within(0.5, 1.0, 2, 0.5) == 0


@given(
    window=st.floats(min_value=0.0, max_value=0.5),
    period=st.floats(min_value=1e-6, max_value=1e-3),
    every=st.integers(min_value=1, max_value=200),
    cooling=st.floats(min_value=0.0, max_value=1e-3),
)
def test_attempts_within_is_the_last_fitting_attempt(window, period, every, cooling):
    k = attempts_within(window, period, every, cooling)
    assert attempt_time(k, period, every, cooling) <= window
    assert attempt_time(k + 1, period, every, cooling) > window


@pytest.mark.parametrize("p", [0.0, -0.1, 1.5])
def test_sampler_rejects_bad_probability(p):
    with pytest.raises(ValueError):
        waiting_time_sampler(p, 1e-5, 100, 2e-4, trial_generator(0, 0, 0))


def test_seed_must_fit_in_64_bits():
    assert check_seed(2**64 - 1) == 2**64 - 1
    with pytest.raises(ValueError):
        check_seed(2**64)
    with pytest.raises(ValueError):
        check_seed(-1)
