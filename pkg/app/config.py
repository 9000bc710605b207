"""Configuration management for the ion node simulator."""

import os
from pathlib import Path

from dotenv import load_dotenv
from pydantic import BaseModel, Field

# Load environment variables
load_dotenv()

SHIPPED_SCENARIO_DIR = Path(__file__).resolve().parent / "scenarios" / "data"


class ScenarioConfig(BaseModel):
    """Scenario lookup configuration."""

    scenario_dir: Path = Field(
        default=SHIPPED_SCENARIO_DIR,
        description="Directory searched for <name>.json scenario files",
    )


class SimulationConfig(BaseModel):
    """Monte Carlo execution configuration."""

    workers: int = Field(default=1, ge=1, description="Worker processes for trial evaluation")
    chunk_size: int = Field(
        default=2048, ge=1, description="Trials per work unit handed to a worker"
    )


class LoggingConfig(BaseModel):
    """Logging configuration."""

    level: str = Field(default="INFO", description="Logging level")
    format: str = Field(
        default="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        description="Log format",
    )


class Config(BaseModel):
    """Main application configuration."""

    scenarios: ScenarioConfig = Field(default_factory=ScenarioConfig)
    simulation: SimulationConfig = Field(default_factory=SimulationConfig)
    logging: LoggingConfig = Field(default_factory=LoggingConfig)


def load_config() -> Config:
    """Load configuration from environment variables."""
    scenario_dir = os.getenv("ION_NODE_SCENARIO_DIR")
    workers = os.getenv("ION_NODE_WORKERS")
    log_level = os.getenv("LOG_LEVEL", "INFO")

    config_data: dict = {
        "scenarios": {},
        "simulation": {},
        "logging": {"level": log_level},
    }

    if scenario_dir:
        config_data["scenarios"]["scenario_dir"] = Path(scenario_dir)
    if workers:
        config_data["simulation"]["workers"] = int(workers)

    return Config(**config_data)
