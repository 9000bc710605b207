"""Data models for heralding schemes."""

from dataclasses import dataclass
from enum import Enum

from pydantic import BaseModel, Field

from app.quantum.models import QuantumState


class HeraldScheme(str, Enum):
    """Entangling primitive used by a link."""

    DIRECT = "direct"
    BSM = "bsm"
    SINGLE_PHOTON = "single_photon"


class HeraldParams(BaseModel):
    """Excitation and detection parameters of a heralding scheme."""

    chi: float = Field(default=0.02, ge=0, le=1, description="Excitation probability per attempt")
    eta: float = Field(default=1.0, ge=0, le=1, description="Total detection efficiency")
    scheme: HeraldScheme = Field(default=HeraldScheme.DIRECT)
    path_phase: float = Field(
        default=0.0, description="Relative optical path phase of the single-photon scheme, rad"
    )


@dataclass(frozen=True)
class HeraldOutcome:
    """One detector pattern with its probability and conditional ion state."""

    pattern: str
    probability: float
    post_state: QuantumState | None
