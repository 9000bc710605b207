"""Data models for protocol simulation records and summaries."""

from dataclasses import asdict, dataclass

from pydantic import BaseModel, Field


@dataclass(frozen=True)
class TrialRecord:
    """Outcome of one simulated node sequence.

    Times are measured from memory preparation. A sequence that sees no herald
    inside the storage window has attempt_index, herald_time and block_index set
    to None and pattern "none". A decayed memory reports no fidelities.
    """

    sequence_index: int
    attempts: int
    attempt_index: int | None
    block_index: int | None
    herald_time: float | None
    memory_elapsed: float
    decayed: bool
    bell_fidelity: float | None
    memory_fidelity: float | None
    pattern: str

    @property
    def heralded(self) -> bool:
        return self.attempt_index is not None

    def as_row(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class SwapResult:
    """One entanglement-swapping trial between two nodes."""

    trial_index: int
    waiting_time_second_link: float
    success: bool
    photon_photon_fidelity: float | None

    def as_row(self) -> dict:
        return asdict(self)


class NodeSimSummary(BaseModel):
    """Aggregates of a node-sequence run next to their analytic values."""

    sequences: int = Field(..., description="Simulated sequences")
    attempts: int = Field(..., description="Entangling attempts over all sequences")
    heralds: int = Field(..., description="Heralded sequences")
    herald_rate: float = Field(..., description="Heralds per second of attempt clock, Hz")
    herald_rate_sigma: float = Field(..., description="Binomial standard error of herald_rate, Hz")
    analytic_herald_rate: float = Field(..., description="attempt_rate x per-attempt probability")
    decay_fraction: float = Field(..., description="Fraction of sequences with memory decay")
    decay_fraction_sigma: float = Field(..., description="Binomial standard error of decay_fraction")
    analytic_decay_fraction: float = Field(..., description="1 - exp(-window/T1')")
    mean_bell_fidelity: float | None = Field(default=None)
    mean_memory_fidelity: float | None = Field(default=None)


class SwapCurveRow(BaseModel):
    """Success probability and photon-photon fidelity at one link-2 generation rate."""

    rate: float = Field(..., gt=0, description="Link-2 ion-photon generation rate, Hz")
    success_probability: float = Field(..., description="R / (R + 1/T1')")
    fidelity: float = Field(..., description="Closed-form fidelity")
    fidelity_quadrature: float = Field(..., description="Fidelity by numerical integration")
    mc_success_probability: float | None = Field(default=None)
    mc_fidelity: float | None = Field(default=None)
    mc_trials: int = Field(default=0, description="Monte Carlo trials behind the MC columns")
