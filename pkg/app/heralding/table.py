"""Outcome table export."""

from app.heralding.models import HeraldOutcome
from app.quantum.fidelity import bell_fidelity


def outcome_table(outcomes: list[HeraldOutcome]) -> dict[str, dict[str, float | None]]:
    """Map each pattern to its probability and the Bell fidelity of its post-state."""
    table = {}
    for outcome in outcomes:
        fidelity = None
        if outcome.post_state is not None and outcome.post_state.dims == (2, 2):
            fidelity = bell_fidelity(outcome.post_state)
        table[outcome.pattern] = {"probability": outcome.probability, "fidelity": fidelity}
    return table
