import math

import pytest
from scipy import constants

from app.crosstalk.estimators import (
    accumulated_phase,
    beam_field_fraction,
    detuning_from_wavelengths,
    equilibrium_phonons,
    heating_per_attempt,
    offres_excitation,
    operation_params,
    pumping_photon_count,
    recoil_heating,
    scattering_error,
    scattering_rate,
    stark_phase,
    stark_phase_rate,
)
from app.crosstalk.models import CrosstalkOperation, CrosstalkParams, CrosstalkSettings, HeatingParams
from app.crosstalk.table import crosstalk_table


@pytest.fixture
def ps_pulse():
    return CrosstalkOperation(
        name="397 nm picosecond pulse",
        group="397 nm picosecond pulse",
        laser_wavelength_nm=397.0,
        rabi_frequency_hz=50e9,
        duration=10e-12,
        pol_coeff=0.40,
        focused=True,
    )


@pytest.fixture
def settings(ps_pulse):
    return CrosstalkSettings(
        attempt_rate=5e3,
        operations=[
            ps_pulse,
            CrosstalkOperation(
                name="397 nm pumping", group="optical pumping", laser_wavelength_nm=397.0,
                rabi_frequency_hz=10e6, duration=290e-9, pol_coeff=0.01,
            ),
            CrosstalkOperation(
                name="866 nm pumping", group="optical pumping", laser_wavelength_nm=866.2,
                rabi_frequency_hz=5e6, duration=290e-9, pol_coeff=0.05,
            ),
            CrosstalkOperation(
                name="397 nm cooling", group="sympathetic cooling", laser_wavelength_nm=397.0,
                rabi_frequency_hz=10e6, duration=200e-6, pol_coeff=0.01, every_attempts=100,
            ),
            CrosstalkOperation(
                name="866 nm cooling", group="sympathetic cooling", laser_wavelength_nm=866.2,
                rabi_frequency_hz=1e6, duration=200e-6, pol_coeff=0.05, every_attempts=100,
            ),
        ],
    )


def test_offres_excitation_limits():
    assert offres_excitation(1.0, 1.0) == pytest.approx(1 / 6)
    assert offres_excitation(0.0, 1.0) == 0.0
    assert offres_excitation(1e-3, 1.0) == pytest.approx(1e-6 / 4, rel=1e-5)


def test_offres_excitation_requires_detuning():
    with pytest.raises(ValueError):
        offres_excitation(1.0, 0.0)


def test_field_fraction_at_memory_ion():
    assert beam_field_fraction(9e-6, 10e-6) == pytest.approx(0.44, abs=0.01)


def test_picosecond_pulse_scattering(ps_pulse, settings):
    scatter, _ = operation_params(ps_pulse, settings)
    assert scattering_error(scatter) == pytest.approx(5e-12, rel=0.5)
    assert scattering_rate(scatter) == pytest.approx(2e-8, rel=0.5)


def test_picosecond_pulse_stark_phase(ps_pulse, settings):
    unechoed = ps_pulse.model_copy(update={"echo_alpha": 1.0})
    _, stark = operation_params(unechoed, settings)
    assert stark_phase(stark) == pytest.approx(8e-6, rel=0.5)
    _, stark = operation_params(ps_pulse, settings)
    assert stark_phase(stark) == pytest.approx(8e-8, rel=0.5)
    assert stark_phase_rate(stark) == pytest.approx(4e-4, rel=0.5)


def test_pumping_866_scattering(settings):
    scatter, _ = operation_params(settings.operations[2], settings)
    assert scattering_error(scatter) == pytest.approx(9e-12, rel=0.5)
    assert scattering_rate(scatter) == pytest.approx(5e-8, rel=0.5)


def test_crosstalk_table_totals(settings):
    report = crosstalk_table(settings)
    assert report.total_decay_rate == pytest.approx(8e-8, rel=0.5)
    assert report.total_phase_rate == pytest.approx(4e-4, rel=0.5)
    assert report.groups["optical pumping"]["phase_rate"] == pytest.approx(6e-6, rel=0.5)
    assert report.groups["sympathetic cooling"]["decay_rate"] == pytest.approx(1e-8, rel=0.6)
    assert report.groups["sympathetic cooling"]["phase_rate"] == pytest.approx(2e-6, rel=0.5)


def test_zero_duration_and_polarization():
    params = CrosstalkParams(omega=1e8, delta=1e13, tau=0.0, pol_coeff=0.4)
    assert scattering_error(params) == 0.0
    params = CrosstalkParams(omega=1e8, delta=1e13, tau=1e-6, pol_coeff=0.0)
    assert stark_phase(params) == 0.0


def test_scaling_in_omega_and_delta():
    base = CrosstalkParams(omega=1e8, delta=1e13, tau=1e-6)
    double_omega = base.model_copy(update={"omega": 2e8})
    double_delta = base.model_copy(update={"delta": 2e13})
    assert math.log2(scattering_error(double_omega) / scattering_error(base)) == pytest.approx(2)
    assert math.log2(scattering_error(double_delta) / scattering_error(base)) == pytest.approx(-2)
    assert math.log2(stark_phase(double_omega) / stark_phase(base)) == pytest.approx(2)
    assert math.log2(stark_phase(double_delta) / stark_phase(base)) == pytest.approx(-1)


def test_strong_drive_warns(caplog):
    caplog.set_level("WARNING")
    CrosstalkParams(omega=1.0, delta=2.0, tau=1e-6)
    assert "far-detuned" in caplog.text


def test_detuning_397_from_854():
    assert detuning_from_wavelengths(397.0, 854.2) == pytest.approx(2.54e15, rel=0.01)


def test_accumulated_phase():
    assert accumulated_phase(4e-4, 0.12) == pytest.approx(4.8e-5)


def test_recoil_heating_values():
    energy, phonons = recoil_heating(HeatingParams())
    assert energy == pytest.approx(2e-29, rel=0.01)
    assert phonons[0] == pytest.approx(3e-3, rel=0.1)
    assert recoil_heating(HeatingParams(p_excite=0.0))[0] == 0.0


def test_recoil_heating_recovers_energy():
    hp = HeatingParams(mode_freqs=[2 * math.pi * 1.6e6] * 6)
    energy, phonons = recoil_heating(hp)
    pairs = zip(phonons, hp.mode_freqs, strict=True)
    assert sum(p * constants.hbar * w for p, w in pairs) == pytest.approx(energy)


def test_combined_heating_per_radial_mode():
    heat = heating_per_attempt(HeatingParams())
    assert heat == pytest.approx([5.8e-3, 6.2e-3, 6.1e-3, 6.5e-3], rel=0.01)


def test_pumping_photon_count():
    assert pumping_photon_count() == pytest.approx(0.868, abs=1e-3)
    assert pumping_photon_count(rounds=0) == 0.0
    assert pumping_photon_count(survival=0.0) == pytest.approx(1 / 3)


def test_pumping_photon_count_monotone_and_bounded():
    counts = [pumping_photon_count(rounds=r) for r in range(0, 30)]
    assert counts == sorted(counts)
    assert counts[-1] <= (1 / 3) / (1 - 2 / 3) + 1e-12


def test_equilibrium_phonons():
    assert equilibrium_phonons(0.26, 6e-3, 100) == pytest.approx((0.26, 0.86, 0.56))
    assert equilibrium_phonons(0.26, 0.0, 100) == (0.26, 0.26, 0.26)
    assert equilibrium_phonons(0.0, 6e-3, 100)[2] == pytest.approx(0.30)


def test_heating_params_require_full_mode_sets():
    with pytest.raises(ValueError):
        HeatingParams(n_modes=4)
