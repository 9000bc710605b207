"""Data models for memory and operation noise."""

from pydantic import BaseModel, Field, field_validator


class ModulationTone(BaseModel):
    """One sinusoidal term of the AC-line phase modulation."""

    frequency: float = Field(..., gt=0, description="Tone frequency in Hz")
    amplitude: float = Field(default=0.0, description="Phase amplitude in rad")
    phase: float = Field(default=0.0, description="Tone phase in rad at the line trigger")


class NoiseParams(BaseModel):
    """Memory lifetime, dephasing and operation fidelities of one node."""

    t1_prime: float = Field(default=0.79, gt=0, description="Metastable lifetime T1' in s")
    t2: float = Field(default=0.323, gt=0, description="Gaussian 1/e dephasing time T2 in s")
    modulation: list[ModulationTone] = Field(
        default_factory=lambda: [ModulationTone(frequency=50.0), ModulationTone(frequency=150.0)],
        description="AC-line phase modulation tones (amplitudes are fit parameters)",
    )
    line_triggered: bool = Field(
        default=True,
        description="Sequences start at a fixed AC-line phase; otherwise the phase is random",
    )
    snr: float | None = Field(
        default=None, ge=0, description="Signal-to-noise ratio of heralds; None means noiseless"
    )
    raman_pi_fidelity: float = Field(
        default=1.0, ge=0, le=1, description="MUB-averaged fidelity per Raman pi-pulse"
    )
    raman_pulses: int = Field(
        default=3, ge=0, description="Raman pulses in the communication-to-memory conversion"
    )
    merge_fidelity: float = Field(
        default=1.0, ge=0, le=1, description="MUB-averaged fidelity of the merge rotation"
    )

    @field_validator("modulation")
    @classmethod
    def validate_modulation(cls, v: list[ModulationTone]) -> list[ModulationTone]:
        frequencies = [tone.frequency for tone in v]
        if len(set(frequencies)) != len(frequencies):
            raise ValueError(f"Duplicate modulation frequencies: {frequencies}")
        return v

    @property
    def raman_fidelity_total(self) -> float:
        return self.raman_pi_fidelity**self.raman_pulses
