"""Scenario file storage."""

import json
import logging
from pathlib import Path

import aiofiles
from pydantic import ValidationError

from app.errors import ScenarioNotFoundError
from app.scenarios.models import Scenario

logger = logging.getLogger(__name__)

SCENARIO_SUFFIX = ".json"


class ScenarioManager:
    """Loads and stores scenarios as <name>.json files in one directory."""

    def __init__(self, scenario_dir: Path):
        """Initialize the scenario manager.

        Args:
            scenario_dir: Directory holding the scenario files
        """
        self.scenario_dir = scenario_dir
        self._cache: dict[str, Scenario] = {}

    def path_for(self, name: str) -> Path:
        return self.scenario_dir / f"{name}{SCENARIO_SUFFIX}"

    def list_names(self) -> list[str]:
        """Names of every scenario file in the directory, sorted."""
        if not self.scenario_dir.is_dir():
            return []
        return sorted(p.stem for p in self.scenario_dir.glob(f"*{SCENARIO_SUFFIX}"))

    async def load(self, name: str) -> Scenario:
        """Load a scenario by name.

        Raises:
            ScenarioNotFoundError: If no file exists for `name`
            ValidationError: If the file does not describe a valid scenario
        """
        if name in self._cache:
            return self._cache[name]

        path = self.path_for(name)
        if not path.is_file():
            available = ", ".join(self.list_names()) or "none"
            raise ScenarioNotFoundError(
                f"Scenario '{name}' not found in {self.scenario_dir} (available: {available})"
            )
        scenario = await self.load_file(path)
        if scenario.name != name:
            logger.warning(f"Scenario file {path.name} declares the name '{scenario.name}'")
        self._cache[name] = scenario
        return scenario

    async def load_file(self, path: Path) -> Scenario:
        """Load a scenario from an explicit path."""
        if not path.is_file():
            raise ScenarioNotFoundError(f"Scenario file {path} not found")
        async with aiofiles.open(path, encoding="utf-8") as f:
            content = await f.read()
        try:
            scenario = Scenario.model_validate_json(content)
        except ValidationError:
            logger.error(f"Invalid scenario file {path}")
            raise
        logger.info(f"Loaded scenario '{scenario.name}' from {path}")
        return scenario

    async def save(self, scenario: Scenario, path: Path | None = None) -> Path:
        """Write a scenario as indented JSON; defaults to <dir>/<name>.json."""
        target = path or self.path_for(scenario.name)
        target.parent.mkdir(parents=True, exist_ok=True)
        content = json.dumps(scenario.model_dump(mode="json"), indent=2, sort_keys=True)
        async with aiofiles.open(target, "w", encoding="utf-8") as f:
            await f.write(content + "\n")
        self._cache[scenario.name] = scenario
        logger.info(f"Saved scenario '{scenario.name}' to {target}")
        return target
