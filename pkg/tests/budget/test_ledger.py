import pytest

from app.budget.ledger import (
    attempt_rate_cap,
    decay_success_penalty,
    generation_time,
    infidelity_budget,
    ion_ion_rate,
    rate_budget,
    rate_budget_future,
    stage_product,
)
from app.budget.models import InfidelityTerms, NodeConfig, StageImprovements
from app.heralding.direct import direct_herald


@pytest.fixture
def config_3m():
    return NodeConfig(
        objective_eff=0.06,
        fiber_coupling=0.32,
        fiber_transmission=0.80,
        other_optics=0.75,
        detector_eff=0.40,
        attempt_rate=264e3,
        fiber_length=3,
        infidelity=InfidelityTerms(
            dark_count_noise=0.001,
            state_detection=0.005,
            rotation_729=0.010,
            raman_850_854=0.008,
            raman_866_866=0.038,
        ),
        improvements=StageImprovements(
            objective_eff=0.09,
            fiber_coupling=0.5,
            fiber_transmission=0.9,
            other_optics=0.9,
            detector_eff=0.9,
            attempt_rate=300e3,
        ),
    )


@pytest.fixture
def config_12km():
    return NodeConfig(
        objective_eff=0.06,
        fiber_coupling=0.32,
        conversion_eff=0.11,
        fiber_transmission=0.40,
        other_optics=0.31,
        detector_eff=0.65,
        attempt_rate=5e3,
        fiber_length=12000,
    )


def test_rate_budget_3m(config_3m):
    report = rate_budget(config_3m)
    assert report.success_rate == pytest.approx(46.227, abs=1e-3)
    assert report.success_rate == pytest.approx(46, rel=0.02)
    assert report.stages["conversion_eff"] is None
    assert report.total_infidelity == pytest.approx(0.062, abs=1e-12)


def test_rate_budget_12km(config_12km):
    report = rate_budget(config_12km)
    assert report.per_attempt_probability == pytest.approx(6.4686e-6, rel=1e-4)
    assert report.success_rate == pytest.approx(0.0323, abs=1e-4)
    assert report.attempt_rate_cap == pytest.approx(2e8 / 24000)
    assert report.cap_utilization == pytest.approx(0.6)


def test_rate_budget_unit_stages():
    config = NodeConfig(
        branching_weight=1,
        excitation_prob=1,
        objective_eff=1,
        fiber_coupling=1,
        fiber_transmission=1,
        other_optics=1,
        detector_eff=1,
        attempt_rate=1,
    )
    assert rate_budget(config).success_rate == 1.0


def test_rate_budget_future_3m(config_3m):
    assert rate_budget_future(config_3m).success_rate == pytest.approx(374, rel=0.01)


def test_rate_budget_future_requires_improvements(config_12km):
    with pytest.raises(ValueError):
        rate_budget_future(config_12km)


@pytest.mark.parametrize("stage", ["objective_eff", "detector_eff", "fiber_transmission"])
def test_rate_budget_is_multiplicative(config_3m, stage):
    halved = config_3m.model_copy(update={stage: getattr(config_3m, stage) / 2})
    assert rate_budget(halved).success_rate == pytest.approx(
        rate_budget(config_3m).success_rate / 2, rel=1e-12
    )


def test_attempt_rate_cap_values():
    assert attempt_rate_cap(1000) == pytest.approx(100e3)
    assert attempt_rate_cap(12000) == pytest.approx(8.333e3, rel=1e-3)
    assert attempt_rate_cap(0, ceiling=1e6) == 1e6


def test_attempt_rate_cap_is_monotone():
    caps = [attempt_rate_cap(length) for length in (10, 100, 1000, 5000, 20000)]
    assert caps == sorted(caps, reverse=True)


def test_rate_above_cap_warns(config_12km, caplog):
    caplog.set_level("WARNING")
    rate_budget(config_12km.model_copy(update={"attempt_rate": 80e3}))
    assert "exceeds" in caplog.text


def test_multiplexing_raises_cap(config_12km):
    report = rate_budget(config_12km.model_copy(update={"multiplexed_modes": 10}))
    assert report.attempt_rate_cap == pytest.approx(10 * 2e8 / 24000)


def test_infidelity_budget_columns():
    assert infidelity_budget([0.001, 0.005, 0.010, 0.008, 0.038]) == pytest.approx(0.062, abs=1e-15)
    assert infidelity_budget([0.034, 0.005, 0.015, 0.012, 0.057]) == pytest.approx(0.123, abs=1e-15)
    assert infidelity_budget([]) == 0


def test_infidelity_budget_rejects_negative():
    with pytest.raises(ValueError):
        infidelity_budget({"a": -0.1})


def test_decay_success_penalty():
    assert decay_success_penalty(0.04, 0.79, 1) == pytest.approx(0.0494, abs=1e-4)
    assert decay_success_penalty(0.2, 0.79, 2) == pytest.approx(0.3976, abs=1e-4)
    assert decay_success_penalty(0.0, 0.79, 2) == 0.0


def test_generation_time():
    assert generation_time(46.227) == pytest.approx(0.0216, abs=1e-4)


def test_budget_matches_direct_herald(config_12km):
    probability, _ = direct_herald(config_12km)
    assert probability == rate_budget(config_12km).per_attempt_probability


def test_ion_ion_rates(config_3m):
    single = ion_ion_rate(config_3m, config_3m, "single_photon")
    bsm = ion_ion_rate(config_3m, config_3m, "bsm")
    assert single == pytest.approx(rate_budget(config_3m).success_rate)
    assert bsm == pytest.approx(264e3 * stage_product(config_3m) ** 2 / 2)
    with pytest.raises(ValueError):
        ion_ion_rate(config_3m, config_3m, "teleport")
