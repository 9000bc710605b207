"""Data models for measurement simulation and estimation."""

from dataclasses import dataclass, field

from pydantic import BaseModel, Field, model_validator
from scipy.constants import speed_of_light

from app.quantum.models import QuantumState

# Outcome order of a two-qubit Pauli setting: ion sign, photon sign
OUTCOMES = ("++", "+-", "-+", "--")
PAULI_SETTINGS = tuple(a + b for a in "XYZ" for b in "XYZ")


class CountTable(BaseModel):
    """Outcome counts of two-qubit Pauli tomography (ion setting first)."""

    shots: float = Field(..., gt=0, description="Shots per setting")
    counts: dict[str, list[float]] = Field(
        ..., description="Counts per setting in the order ++, +-, -+, --"
    )

    @model_validator(mode="after")
    def validate_counts(self) -> "CountTable":
        for setting, values in self.counts.items():
            if len(setting) != 2 or any(letter not in "XYZ" for letter in setting):
                raise ValueError(f"Setting '{setting}' is not a pair of X, Y, Z")
            if len(values) != len(OUTCOMES):
                raise ValueError(f"Setting '{setting}' has {len(values)} outcomes, expected 4")
            if any(v < 0 for v in values):
                raise ValueError(f"Setting '{setting}' has negative counts")
            if abs(sum(values) - self.shots) > 1e-6 * self.shots:
                raise ValueError(
                    f"Counts of setting '{setting}' sum to {sum(values)}, not {self.shots} shots"
                )
        return self

    @property
    def settings(self) -> list[str]:
        return list(self.counts)

    @property
    def complete(self) -> bool:
        return set(PAULI_SETTINGS) <= set(self.counts)


@dataclass(frozen=True)
class MLEResult:
    """Maximum-likelihood reconstruction with its convergence record."""

    state: QuantumState
    log_likelihood: float
    iterations: int
    converged: bool
    history: list[float] = field(default_factory=list, repr=False)


@dataclass(frozen=True)
class VisibilityResult:
    """Correlation visibilities and the Bell state their signs were aligned to."""

    vx: float
    vy: float
    vz: float
    aligned_to: str
    signs_consistent: bool

    @property
    def values(self) -> tuple[float, float, float]:
        return self.vx, self.vy, self.vz


@dataclass(frozen=True)
class PhaseScanFit:
    """Sinusoid fitted to a phase scan: offset * (1 + V cos(phase + phi))."""

    visibility: float
    visibility_error: float
    phase: float
    offset: float


class HistogramModel(BaseModel):
    """Photon arrival-time distribution: a Gaussian jitter convolved with exponential decay."""

    latency: float = Field(..., description="Gaussian centre, s")
    jitter_sigma: float = Field(..., gt=0, description="Gaussian jitter, s")
    decay_tau: float = Field(..., gt=0, description="Exponential decay time, s")
    amplitude: float = Field(default=1.0, ge=0, description="Counts under the curve")
    window: tuple[float, float] = Field(..., description="Acquisition window (start, end), s")

    @model_validator(mode="after")
    def validate_window(self) -> "HistogramModel":
        if self.window[1] <= self.window[0]:
            raise ValueError(f"Window end must follow its start, got {self.window}")
        return self


class HistogramFit(BaseModel):
    """Maximum-likelihood fit of a HistogramModel with parameter standard errors."""

    model: HistogramModel
    errors: dict[str, float] = Field(..., description="Standard error per fitted parameter")
    log_likelihood: float
    samples: int
    degenerate: bool = Field(default=False, description="Jitter collapsed or covariance singular")


class ConversionModel(BaseModel):
    """Difference-frequency converter efficiency and background model."""

    eta_max: float = Field(default=0.38, ge=0, le=1, description="Efficiency at the reference power")
    p_ref: float = Field(default=1.1, gt=0, description="Pump power of full conversion, W")
    noise_per_nm: float = Field(
        default=5e3, ge=0, description="Raman background at p_ref per nm of bandwidth, Hz/nm"
    )
    filter_bandwidth_hz: float = Field(default=200e6, gt=0, description="Filter window, Hz")
    wavelength_nm: float = Field(default=1558.0, gt=0, description="Converted wavelength, nm")
    dark_rate: float = Field(default=10.0, ge=0, description="Detector dark counts, Hz")

    @property
    def filter_bandwidth_nm(self) -> float:
        """Filter window in nm: lambda^2 * dnu / c."""
        wavelength = self.wavelength_nm * 1e-9
        return wavelength**2 * self.filter_bandwidth_hz / speed_of_light * 1e9
