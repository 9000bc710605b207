"""Byte-stable CSV and JSON writers with metadata sidecars."""

import csv
import io
import json
import logging
import math
from pathlib import Path

import aiofiles

from app import __version__

logger = logging.getLogger(__name__)

META_SUFFIX = ".meta.json"


def format_csv(rows: list[dict]) -> str:
    """Render rows as CSV with the column order of the first row."""
    if not rows:
        return ""
    buffer = io.StringIO()
    writer = csv.DictWriter(buffer, fieldnames=list(rows[0]), lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({k: "" if v is None else v for k, v in row.items()})
    return buffer.getvalue()


def _finite(value):
    # Non-finite floats become null so the output stays strict JSON
    if isinstance(value, float) and not math.isfinite(value):
        return None
    if isinstance(value, dict):
        return {k: _finite(v) for k, v in value.items()}
    if isinstance(value, list | tuple):
        return [_finite(v) for v in value]
    return value


def format_json(document) -> str:
    return json.dumps(_finite(document), indent=2, sort_keys=True, allow_nan=False) + "\n"


def meta_path(path: Path) -> Path:
    return path.with_name(path.name + META_SUFFIX)


def build_metadata(
    command: str, scenario: str | None, scenario_sha256: str | None, seed: int | None
) -> dict:
    """Provenance of one output file; no timestamps so reruns are byte-identical."""
    return {
        "command": command,
        "scenario": scenario,
        "scenario_sha256": scenario_sha256,
        "seed": seed,
        "version": __version__,
    }


async def write_text(path: Path, content: str):
    path.parent.mkdir(parents=True, exist_ok=True)
    async with aiofiles.open(path, "w", encoding="utf-8", newline="") as f:
        await f.write(content)
    logger.info(f"Wrote {path}")


async def write_output(path: Path, content: str, metadata: dict):
    """Write an output file followed by its <name>.meta.json sidecar."""
    await write_text(path, content)
    await write_text(meta_path(path), format_json(metadata))


async def read_timestamps(path: Path) -> list[float]:
    """First column of a CSV file as floats; non-numeric rows such as headers are skipped."""
    if not path.is_file():
        raise ValueError(f"Input file {path} not found")
    async with aiofiles.open(path, encoding="utf-8") as f:
        content = await f.read()
    values = []
    for row in csv.reader(io.StringIO(content)):
        if not row or not row[0].strip():
            continue
        try:
            values.append(float(row[0]))
        except ValueError:
            logger.debug(f"Skipping non-numeric row {row}")
    return values
