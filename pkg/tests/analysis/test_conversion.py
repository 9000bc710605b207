import pytest

from app.analysis.conversion import (
    background_rate,
    conversion_efficiency,
    conversion_snr,
    predicted_fidelity,
)
from app.analysis.models import ConversionModel
from app.budget.models import InfidelityTerms


@pytest.fixture
def converter():
    return ConversionModel()


def test_reference_power_gives_peak_efficiency(converter):
    assert conversion_efficiency(converter, 1.1) == pytest.approx(0.38, abs=1e-12)


def test_efficiency_rises_with_power(converter):
    values = [conversion_efficiency(converter, p) for p in (0.0, 0.3, 0.6, 1.1)]
    assert values[0] == 0.0
    assert values == sorted(values)


def test_background_at_reference_power(converter):
    assert converter.filter_bandwidth_nm == pytest.approx(1.619e-3, rel=1e-3)
    assert background_rate(converter, 1.1) == pytest.approx(18.09, abs=0.01)
    assert background_rate(converter, 1.1) - converter.dark_rate == pytest.approx(8.09, abs=0.01)


def test_zero_pump_leaves_dark_counts(converter):
    assert background_rate(converter, 0.0) == converter.dark_rate


def test_negative_power_is_rejected(converter):
    with pytest.raises(ValueError):
        conversion_efficiency(converter, -1.0)


def test_snr_of_converted_stream(converter):
    efficiency, noise, snr = conversion_snr(converter, 1.1, signal_rate=1000.0)
    assert snr == pytest.approx(efficiency * 1000.0 / noise)
    assert snr == pytest.approx(21.0, abs=0.1)


def test_noiseless_prediction_is_ideal():
    assert predicted_fidelity(None) == pytest.approx(1.0)


def test_twelve_kilometre_prediction_lands_in_measured_interval():
    terms = InfidelityTerms(
        dark_count_noise=0.034,
        state_detection=0.005,
        rotation_729=0.015,
        raman_850_854=0.012,
        raman_866_866=0.057,
    )
    predicted = predicted_fidelity(22.0, terms)
    assert predicted == pytest.approx(0.878, abs=0.002)
    assert 0.877 - 0.045 <= predicted <= 0.877 + 0.045
