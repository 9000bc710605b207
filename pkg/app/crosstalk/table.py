"""Ledger of memory decay and decoherence caused by communication-qubit operations."""

import logging
from collections import defaultdict

from app.crosstalk.estimators import (
    operation_params,
    scattering_error,
    scattering_rate,
    stark_phase,
    stark_phase_rate,
)
from app.crosstalk.models import CrosstalkReport, CrosstalkRow, CrosstalkSettings

logger = logging.getLogger(__name__)


def crosstalk_table(settings: CrosstalkSettings) -> CrosstalkReport:
    """Evaluate every operation and total the rows per operation group."""
    rows = []
    groups: dict[str, dict[str, float]] = defaultdict(lambda: {"decay_rate": 0.0, "phase_rate": 0.0})
    for op in settings.operations:
        scatter, stark = operation_params(op, settings)
        row = CrosstalkRow(
            name=op.name,
            group=op.group,
            scattering_error=scattering_error(scatter),
            decay_rate=scattering_rate(scatter),
            stark_phase=stark_phase(stark),
            phase_rate=stark_phase_rate(stark),
        )
        rows.append(row)
        groups[op.group]["decay_rate"] += row.decay_rate
        groups[op.group]["phase_rate"] += row.phase_rate

    report = CrosstalkReport(
        rows=rows,
        groups=dict(groups),
        total_decay_rate=sum(r.decay_rate for r in rows),
        total_phase_rate=sum(r.phase_rate for r in rows),
    )
    logger.info(
        f"Crosstalk totals: decay {report.total_decay_rate:.2e}/s, "
        f"phase {report.total_phase_rate:.2e} rad/s"
    )
    return report
