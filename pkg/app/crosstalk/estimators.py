"""Closed-form crosstalk, AC Stark and recoil-heating estimates."""

import math

from scipy import constants

from app.crosstalk.models import CrosstalkOperation, CrosstalkParams, CrosstalkSettings, HeatingParams


def detuning_from_wavelengths(laser_nm: float, transition_nm: float) -> float:
    """Angular detuning 2 pi c |1/lambda_laser - 1/lambda_transition| in rad/s."""
    return 2 * math.pi * constants.c * abs(1 / (laser_nm * 1e-9) - 1 / (transition_nm * 1e-9))


def beam_field_fraction(separation: float, radius: float) -> float:
    """Field amplitude left at distance `separation` from a Gaussian beam of 1/e^2 radius."""
    if radius <= 0:
        raise ValueError(f"Beam radius must be positive, got {radius}")
    return math.exp(-((separation / radius) ** 2))


def offres_excitation(omega: float, delta: float) -> float:
    """Upper-state population Omega^2 / (2 Omega^2 + 4 Delta^2)."""
    if delta <= 0:
        raise ValueError(f"Detuning must be positive, got {delta}")
    return omega**2 / (2 * omega**2 + 4 * delta**2)


def scattering_error(params: CrosstalkParams) -> float:
    """Spontaneous decay error per pulse, (Omega^2 / 4 Delta^2) Gamma tau."""
    if params.delta <= 0:
        raise ValueError("Detuning must be positive")
    return params.omega**2 / (4 * params.delta**2) * params.gamma * params.tau


def scattering_rate(params: CrosstalkParams) -> float:
    return scattering_error(params) * params.operation_rate


def stark_phase(params: CrosstalkParams) -> float:
    """Differential AC Stark phase per pulse, (Omega^2 / 4 Delta) tau P alpha."""
    if params.delta <= 0:
        raise ValueError("Detuning must be positive")
    return (
        params.omega**2 / (4 * params.delta) * params.tau * params.pol_coeff * params.echo_alpha
    )


def stark_phase_rate(params: CrosstalkParams) -> float:
    return stark_phase(params) * params.operation_rate


def accumulated_phase(phase_rate: float, storage_time: float) -> float:
    return phase_rate * storage_time


def operation_params(
    op: CrosstalkOperation, settings: CrosstalkSettings
) -> tuple[CrosstalkParams, CrosstalkParams]:
    """Expand a lab-unit operation into (scattering, Stark) parameter sets.

    Scattering takes the full Rabi frequency as an upper bound. The Stark estimate
    of a focused beam uses the field remaining at the memory ion.
    """
    omega = 2 * math.pi * op.rabi_frequency_hz
    common = {
        "delta": detuning_from_wavelengths(op.laser_wavelength_nm, op.transition_wavelength_nm),
        "gamma": settings.gamma,
        "tau": op.duration,
        "pol_coeff": op.pol_coeff,
        "echo_alpha": op.echo_alpha,
        "attempt_rate": settings.attempt_rate,
        "every_attempts": op.every_attempts,
    }
    fraction = 1.0
    if op.focused:
        fraction = beam_field_fraction(settings.ion_separation, settings.beam_radius)
    return (
        CrosstalkParams(omega=omega, **common),
        CrosstalkParams(omega=omega * fraction, **common),
    )


def recoil_energy(wavelength: float, mass: float, photons: float = 1.0) -> float:
    """Kinetic energy (h/lambda)^2 / 2m deposited by `photons` recoil events, in J."""
    return photons * (constants.h / wavelength) ** 2 / (2 * mass)


def recoil_heating(hp: HeatingParams) -> tuple[float, list[float]]:
    """Recoil energy of the excitation pulse and phonons added per mode per attempt.

    Returns:
        Tuple of (energy in J, phonons per attempt for each entry of hp.mode_freqs)
    """
    energy = recoil_energy(hp.wavelength, hp.mass, hp.p_excite)
    per_mode = energy / hp.n_modes
    return energy, [per_mode / (constants.hbar * w) for w in hp.mode_freqs]


def pumping_photon_count(survival: float = 2 / 3, rounds: int = 5, initial: float = 1 / 3) -> float:
    """Expected photons scattered during optical pumping.

    The unwanted state, occupied with probability `initial`, scatters one photon per
    round and survives each round with probability `survival`; pumping stops after
    `rounds` rounds.
    """
    if rounds < 0:
        raise ValueError(f"Rounds must be non-negative, got {rounds}")
    if rounds == 0:
        return 0.0
    expected = sum(n * (1 - survival) * survival ** (n - 1) for n in range(1, rounds))
    expected += rounds * survival ** (rounds - 1)
    return initial * expected


def heating_per_attempt(hp: HeatingParams) -> list[float]:
    """Phonons added per attempt by the excitation pulse plus optical pumping, per mode."""
    photons = hp.p_excite + pumping_photon_count(hp.pump_branch, hp.n_pump_rounds, hp.pump_initial)
    per_mode = recoil_energy(hp.wavelength, hp.mass, photons) / hp.n_modes
    return [per_mode / (constants.hbar * w) for w in hp.mode_freqs]


def equilibrium_phonons(
    base_nbar: float, heat_per_attempt: float, attempts_between_cooling: int
) -> tuple[float, float, float]:
    """(min, max, mean) phonon number over one cooling cycle."""
    if base_nbar < 0 or heat_per_attempt < 0 or attempts_between_cooling < 0:
        raise ValueError("Phonon inputs must be non-negative")
    gained = heat_per_attempt * attempts_between_cooling
    return base_nbar, base_nbar + gained, base_nbar + gained / 2
