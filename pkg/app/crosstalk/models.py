"""Data models for crosstalk and heating estimates."""

import logging
import math

from pydantic import BaseModel, Field, field_validator, model_validator
from scipy import constants

logger = logging.getLogger(__name__)

# 854 nm D5/2 - P3/2 dipole transition of the memory manifold
MEMORY_TRANSITION_NM = 854.2
P32_LIFETIME = 6.924e-9
CA40_MASS = 40 * constants.atomic_mass


class CrosstalkParams(BaseModel):
    """Drive seen by the memory ion during one communication-qubit operation."""

    omega: float = Field(..., ge=0, description="Rabi frequency, rad/s")
    delta: float = Field(..., ge=0, description="Detuning from the memory dipole transition, rad/s")
    gamma: float = Field(default=1 / P32_LIFETIME, ge=0, description="Upper-state decay rate, 1/s")
    tau: float = Field(..., ge=0, description="Pulse duration, s")
    pol_coeff: float = Field(default=1.0, ge=0, description="Polarization coefficient")
    echo_alpha: float = Field(default=1.0, ge=0, description="Spin-echo suppression factor")
    attempt_rate: float = Field(default=0.0, ge=0, description="Attempt rate, Hz")
    every_attempts: int = Field(default=1, ge=1, description="Operation applied every N attempts")

    @model_validator(mode="after")
    def warn_on_strong_drive(self) -> "CrosstalkParams":
        if self.delta > 0 and self.omega / self.delta > 0.1:
            logger.warning(
                f"Omega/Delta = {self.omega / self.delta:.3g} > 0.1; "
                "the far-detuned approximation is questionable"
            )
        return self

    @property
    def operation_rate(self) -> float:
        return self.attempt_rate / self.every_attempts


class CrosstalkOperation(BaseModel):
    """One laser pulse applied to the communication ion, in lab units."""

    name: str = Field(..., description="Row label, e.g. '397 nm picosecond pulse'")
    group: str = Field(..., description="Operation the pulse belongs to")
    laser_wavelength_nm: float = Field(..., gt=0)
    transition_wavelength_nm: float = Field(default=MEMORY_TRANSITION_NM, gt=0)
    rabi_frequency_hz: float = Field(..., ge=0, description="Rabi frequency Omega/2pi, Hz")
    duration: float = Field(..., ge=0, description="Pulse duration, s")
    pol_coeff: float = Field(..., ge=0)
    echo_alpha: float = Field(default=0.01, ge=0)
    every_attempts: int = Field(default=1, ge=1)
    focused: bool = Field(
        default=False,
        description="Beam focused on the communication ion; the Stark estimate uses the "
        "field left at the memory ion",
    )


class CrosstalkSettings(BaseModel):
    """All communication-qubit operations of an attempt cycle."""

    attempt_rate: float = Field(default=5e3, gt=0, description="Attempt rate, Hz")
    gamma: float = Field(default=1 / P32_LIFETIME, gt=0)
    ion_separation: float = Field(default=9e-6, ge=0, description="Ion separation, m")
    beam_radius: float = Field(default=10e-6, gt=0, description="1/e^2 intensity radius, m")
    operations: list[CrosstalkOperation] = Field(default_factory=list)


class HeatingParams(BaseModel):
    """Recoil heating inputs of the two-ion crystal."""

    wavelength: float = Field(default=397e-9, gt=0, description="Scattered photon wavelength, m")
    mass: float = Field(default=CA40_MASS, gt=0, description="Ion mass, kg")
    p_excite: float = Field(default=0.95, ge=0, le=1, description="Excitation probability")
    n_modes: int = Field(default=6, ge=3, description="Motional modes sharing the recoil")
    mode_freqs: list[float] = Field(
        default_factory=lambda: [2 * math.pi * f for f in (1.65e6, 1.55e6, 1.57e6, 1.47e6)],
        description="Angular frequencies of the modes of interest, rad/s",
    )
    pump_initial: float = Field(
        default=1 / 3, ge=0, le=1, description="Unwanted occupation before optical pumping"
    )
    pump_branch: float = Field(
        default=2 / 3, ge=0, le=1, description="Chance the unwanted state survives one round"
    )
    n_pump_rounds: int = Field(default=5, ge=0)
    base_nbar: float = Field(default=0.26, ge=0, description="Phonons right after cooling")
    attempts_between_cooling: int = Field(default=100, ge=1)

    @field_validator("n_modes")
    @classmethod
    def validate_modes(cls, v: int) -> int:
        if v % 3:
            raise ValueError(f"n_modes must be 3 x number of ions, got {v}")
        return v

    @field_validator("mode_freqs")
    @classmethod
    def validate_freqs(cls, v: list[float]) -> list[float]:
        if any(f <= 0 for f in v):
            raise ValueError("Mode frequencies must be positive")
        return v


class CrosstalkRow(BaseModel):
    name: str
    group: str
    scattering_error: float
    decay_rate: float
    stark_phase: float
    phase_rate: float


class CrosstalkReport(BaseModel):
    """Per-pulse rows, per-operation totals and the overall influence on the memory."""

    rows: list[CrosstalkRow]
    groups: dict[str, dict[str, float]]
    total_decay_rate: float
    total_phase_rate: float
