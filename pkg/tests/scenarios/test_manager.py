import asyncio
import json

import pytest
from pydantic import ValidationError

from app.budget.ledger import infidelity_budget, rate_budget, rate_budget_future
from app.crosstalk.table import crosstalk_table
from app.errors import ScenarioNotFoundError
from app.scenarios.manager import ScenarioManager
from app.scenarios.models import Scenario

SHIPPED = [
    "paper-12km",
    "paper-12km-future",
    "paper-1km",
    "paper-1km-future",
    "paper-3m",
    "paper-3m-future",
    "paper-S13",
]


def test_shipped_scenarios_are_listed(scenarios):
    assert scenarios.list_names() == SHIPPED


@pytest.mark.parametrize("name", SHIPPED)
def test_shipped_scenarios_round_trip(scenarios, name, tmp_path):
    scenario = asyncio.run(scenarios.load(name))
    assert scenario.name == name
    assert Scenario.model_validate_json(scenario.model_dump_json()) == scenario

    copy = ScenarioManager(tmp_path)
    asyncio.run(copy.save(scenario))
    reloaded = asyncio.run(ScenarioManager(tmp_path).load(name))
    assert reloaded == scenario
    assert reloaded.digest() == scenario.digest()


@pytest.mark.parametrize(
    ("name", "rate"),
    [
        ("paper-3m", 46),
        ("paper-1km", 3.4),
        ("paper-12km", 0.032),
        ("paper-3m-future", 374),
        ("paper-1km-future", 40),
        ("paper-12km-future", 23),
    ],
)
def test_shipped_success_rates(scenarios, name, rate):
    scenario = asyncio.run(scenarios.load(name))
    assert rate_budget(scenario.node).success_rate == pytest.approx(rate, rel=0.02)


@pytest.mark.parametrize("size", ["3m", "1km", "12km"])
def test_improvement_overlay_matches_improved_scenario(scenarios, size):
    measured = asyncio.run(scenarios.load(f"paper-{size}"))
    improved = asyncio.run(scenarios.load(f"paper-{size}-future"))
    assert rate_budget_future(measured.node).success_rate == pytest.approx(
        rate_budget(improved.node).success_rate, rel=1e-12
    )


@pytest.mark.parametrize(
    ("name", "total"), [("paper-3m", 0.062), ("paper-1km", 0.088), ("paper-12km", 0.123)]
)
def test_shipped_infidelity_totals(scenarios, name, total):
    scenario = asyncio.run(scenarios.load(name))
    assert infidelity_budget(scenario.node.infidelity) == pytest.approx(total, abs=1e-12)


def test_crosstalk_scenario_carries_operations(scenarios):
    scenario = asyncio.run(scenarios.load("paper-S13"))
    assert scenario.crosstalk is not None
    assert len(scenario.crosstalk.operations) == 5
    report = crosstalk_table(scenario.crosstalk)
    assert report.total_phase_rate == pytest.approx(4e-4, rel=0.5)


def test_unknown_scenario(scenarios):
    with pytest.raises(ScenarioNotFoundError, match="available"):
        asyncio.run(scenarios.load("no-such-link"))


def test_missing_scenario_file(tmp_path):
    with pytest.raises(ScenarioNotFoundError, match="not found"):
        asyncio.run(ScenarioManager(tmp_path).load_file(tmp_path / "absent.json"))


def test_invalid_scenario_reports_field_path(tmp_path):
    bad = {"name": "bad", "node": {"objective_eff": 1.5}}
    (tmp_path / "bad.json").write_text(json.dumps(bad))
    with pytest.raises(ValidationError) as info:
        asyncio.run(ScenarioManager(tmp_path).load("bad"))
    assert ("node", "objective_eff") in [error["loc"] for error in info.value.errors()]


def test_digest_tracks_content(scenarios):
    scenario = asyncio.run(scenarios.load("paper-3m"))
    changed = scenario.model_copy(update={"description": "other"})
    assert scenario.digest() != changed.digest()
    assert len(scenario.digest()) == 64
