"""Data models for scenario files."""

import hashlib

from pydantic import BaseModel, Field

from app.analysis.models import ConversionModel
from app.budget.models import NodeConfig
from app.crosstalk.models import CrosstalkSettings, HeatingParams
from app.heralding.models import HeraldParams
from app.noise.models import NoiseParams


class Scenario(BaseModel):
    """Everything one command needs to reproduce a link setting."""

    name: str = Field(..., min_length=1, description="Name the scenario is referenced by")
    description: str = Field(default="", description="Free-text summary of the setting")
    node: NodeConfig
    noise: NoiseParams = Field(default_factory=NoiseParams)
    herald: HeraldParams = Field(default_factory=HeraldParams)
    crosstalk: CrosstalkSettings | None = Field(
        default=None, description="Communication-qubit operations seen by the memory"
    )
    heating: HeatingParams = Field(default_factory=HeatingParams)
    conversion: ConversionModel | None = Field(
        default=None, description="Frequency converter, for links that convert to telecom"
    )
    outputs: dict[str, str] = Field(
        default_factory=dict, description="Default output path per command"
    )

    def digest(self) -> str:
        """SHA-256 of the canonical JSON form."""
        return hashlib.sha256(self.model_dump_json().encode("utf-8")).hexdigest()
