"""Data models for link budgets."""

from pydantic import BaseModel, Field


class InfidelityTerms(BaseModel):
    """First-order infidelity contributions of the ion-photon state."""

    dark_count_noise: float = Field(default=0.0, ge=0, description="Dark count and noise photon")
    state_detection: float = Field(default=0.0, ge=0, description="State detection error")
    rotation_729: float = Field(default=0.0, ge=0, description="729 nm rotation pulse")
    raman_850_854: float = Field(default=0.0, ge=0, description="850/854 nm Raman transfer")
    raman_866_866: float = Field(default=0.0, ge=0, description="866/866 nm Raman transfer")

    def as_rows(self) -> dict[str, float]:
        return self.model_dump()


class StageImprovements(BaseModel):
    """Improved values overlaid on a NodeConfig; unset fields keep the measured value."""

    objective_eff: float | None = Field(default=None, ge=0, le=1)
    fiber_coupling: float | None = Field(default=None, ge=0, le=1)
    conversion_eff: float | None = Field(default=None, ge=0, le=1)
    fiber_transmission: float | None = Field(default=None, ge=0, le=1)
    other_optics: float | None = Field(default=None, ge=0, le=1)
    detector_eff: float | None = Field(default=None, ge=0, le=1)
    attempt_rate: float | None = Field(default=None, gt=0, description="Improved attempt rate in Hz")
    multiplexed_modes: int | None = Field(default=None, ge=1)


class NodeConfig(BaseModel):
    """Stage efficiencies and timings of one ion-photon link."""

    branching_weight: float = Field(
        default=0.04, ge=0, le=1, description="Branching ratio times the CG collection weight"
    )
    excitation_prob: float = Field(default=0.95, ge=0, le=1, description="Excitation probability")
    objective_eff: float = Field(..., ge=0, le=1, description="Objective collection efficiency")
    fiber_coupling: float = Field(..., ge=0, le=1, description="Single-mode fiber coupling")
    conversion_eff: float | None = Field(
        default=None, ge=0, le=1, description="Frequency conversion efficiency, None if absent"
    )
    fiber_transmission: float = Field(..., ge=0, le=1, description="Fiber transmission")
    other_optics: float = Field(..., ge=0, le=1, description="Other optical losses")
    detector_eff: float = Field(..., ge=0, le=1, description="Detector efficiency")
    attempt_rate: float = Field(..., gt=0, description="Measured attempt rate in Hz")
    fiber_length: float = Field(default=0.0, ge=0, description="One-way fiber length in m")
    fiber_light_speed: float = Field(default=2.0e8, gt=0, description="Light speed in fiber, m/s")
    multiplexed_modes: int = Field(
        default=1, ge=1, description="Photonic modes sent per round trip; multiplies the cap"
    )
    max_attempt_rate: float = Field(
        default=1.0e6, gt=0, description="Attempt ceiling without round-trip limit, Hz"
    )
    cooling_period_attempts: int = Field(
        default=100, ge=1, description="Intermediate cooling every N attempts"
    )
    cooling_time: float = Field(default=200e-6, ge=0, description="Intermediate cooling time, s")
    doppler_time: float = Field(default=2.5e-3, ge=0, description="Initial Doppler cooling, s")
    eit_time: float = Field(default=1.4e-3, ge=0, description="Initial EIT cooling, s")
    op_overhead: float = Field(default=0.0, ge=0, description="Fixed overhead per sequence, s")
    memory_window: float = Field(
        default=0.04, gt=0, description="Memory storage window 2*tau between preparation and readout, s"
    )
    infidelity: InfidelityTerms = Field(default_factory=InfidelityTerms)
    improvements: StageImprovements | None = Field(
        default=None, description="Stage values of the improved setup"
    )

    @property
    def setup_time(self) -> float:
        return self.doppler_time + self.eit_time + self.op_overhead

    @property
    def attempt_period(self) -> float:
        return 1.0 / self.attempt_rate

    def improved(self) -> "NodeConfig":
        """Copy with the improvement overlay applied."""
        if self.improvements is None:
            raise ValueError("NodeConfig has no improvement values")
        overlay = self.improvements.model_dump(exclude_none=True)
        return self.model_copy(update={**overlay, "improvements": None})


# Display names in table order
STAGE_NAMES = {
    "branching_weight": "Branching ratio and weight from CG-coefficient",
    "excitation_prob": "Excitation probability",
    "objective_eff": "Objective collection",
    "fiber_coupling": "Fiber coupling",
    "conversion_eff": "Frequency conversion",
    "fiber_transmission": "Fiber transmission",
    "other_optics": "Other optics",
    "detector_eff": "Detector efficiency",
}

INFIDELITY_NAMES = {
    "dark_count_noise": "Dark count and noise photon",
    "state_detection": "State detection",
    "rotation_729": "729 nm rotation pulse",
    "raman_850_854": "850/854 nm Raman",
    "raman_866_866": "866/866 nm Raman",
}


class BudgetReport(BaseModel):
    """Stage-by-stage rate and infidelity ledger."""

    stages: dict[str, float | None] = Field(..., description="Stage factor per stage, None if absent")
    per_attempt_probability: float = Field(..., description="Product of the present stages")
    attempt_rate: float = Field(..., description="Attempt rate in Hz")
    success_rate: float = Field(..., description="Heralded ion-photon rate in Hz")
    attempt_rate_cap: float = Field(..., description="Round-trip limited attempt rate in Hz")
    cap_utilization: float = Field(..., description="attempt_rate / attempt_rate_cap")
    infidelity_terms: dict[str, float] = Field(default_factory=dict)
    total_infidelity: float = Field(default=0.0)

    @property
    def generation_time(self) -> float:
        return 1.0 / self.success_rate if self.success_rate > 0 else float("inf")
