"""Shared fixtures."""

import asyncio

import pytest

from app.config import SHIPPED_SCENARIO_DIR
from app.quantum.constructions import bell_state, werner_state
from app.scenarios.manager import ScenarioManager


@pytest.fixture
def bell():
    return bell_state("phi_plus")


@pytest.fixture
def werner_09():
    return werner_state(0.9)


@pytest.fixture
def scenarios():
    return ScenarioManager(SHIPPED_SCENARIO_DIR)
