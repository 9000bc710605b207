"""Command-line entry point: ion-node <command> [options]."""

import argparse
import asyncio
import logging
import sys
from dataclasses import dataclass, field
from pathlib import Path

from pydantic import ValidationError

from app.analysis.histogram import fit_histogram, sample_arrival_times
from app.analysis.models import HistogramModel
from app.analysis.tomography import mle_fit, simulate_counts
from app.analysis.visibility import visibilities
from app.budget.ledger import decay_success_penalty, rate_budget, rate_budget_future
from app.budget.models import INFIDELITY_NAMES, STAGE_NAMES
from app.cli.output import (
    build_metadata,
    format_csv,
    format_json,
    read_timestamps,
    write_output,
)
from app.config import Config, load_config
from app.crosstalk.estimators import (
    accumulated_phase,
    equilibrium_phonons,
    heating_per_attempt,
    pumping_photon_count,
    recoil_heating,
)
from app.crosstalk.table import crosstalk_table
from app.errors import NumericalError
from app.heralding.bsm import herald_bsm
from app.heralding.direct import direct_herald, heralded_ion_photon_state
from app.heralding.models import HeraldOutcome, HeraldScheme
from app.heralding.single_photon import herald_single_photon
from app.heralding.table import outcome_table
from app.noise.models import NoiseParams
from app.protocol.node_sequence import run_node_sequence, summarize
from app.protocol.swapping import rate_grid, swap_curve
from app.quantum.fidelity import bell_fidelity, visibility_fidelity
from app.scenarios.manager import ScenarioManager
from app.scenarios.models import Scenario

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CONFIG_ERROR = 1
EXIT_NUMERICAL_ERROR = 2

NS = 1e-9

# Arrival-time generator used when fit-histogram gets no input file
DEMO_HISTOGRAM = {"latency": 5 * NS, "jitter_sigma": 1 * NS, "decay_tau": 6.936 * NS}


@dataclass
class CommandResult:
    """Tabular rows (if any), the full JSON document and extra JSON files by suffix."""

    rows: list[dict] | None
    document: dict
    default_format: str = "csv"
    extras: dict[str, dict] = field(default_factory=dict)


def parse_count(text: str) -> int:
    """Non-negative integer that may be written as a float, e.g. 1e5."""
    try:
        value = int(text)
    except ValueError:
        try:
            number = float(text)
        except ValueError as e:
            raise argparse.ArgumentTypeError(f"'{text}' is not a number") from e
        if not number.is_integer():
            raise argparse.ArgumentTypeError(f"'{text}' is not an integer") from None
        value = int(number)
    if value < 0:
        raise argparse.ArgumentTypeError(f"'{text}' is negative")
    return value


def parse_range(text: str) -> tuple[float, float]:
    """Range written as 'low..high'."""
    low, sep, high = text.partition("..")
    if not sep:
        raise argparse.ArgumentTypeError(f"Range '{text}' must look like low..high")
    try:
        return float(low), float(high)
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"Range '{text}' has non-numeric bounds") from e


def describe_validation_error(error: ValidationError) -> str:
    """One 'field.path: message' entry per validation failure."""
    return "; ".join(
        f"{'.'.join(str(part) for part in e['loc']) or '<root>'}: {e['msg']}"
        for e in error.errors()
    )


def _require_scenario(scenario: Scenario | None, command: str) -> Scenario:
    if scenario is None:
        raise ValueError(f"Command '{command}' requires --scenario")
    return scenario


async def run_budget(args, scenario: Scenario | None, config: Config) -> CommandResult:
    scenario = _require_scenario(scenario, args.command)
    node = scenario.node.improved() if args.future else scenario.node
    report = rate_budget_future(scenario.node) if args.future else rate_budget(scenario.node)
    penalty = decay_success_penalty(node.memory_window, scenario.noise.t1_prime)

    rows = [{"quantity": STAGE_NAMES[k], "value": v} for k, v in report.stages.items()]
    rows += [
        {"quantity": INFIDELITY_NAMES[k], "value": v} for k, v in report.infidelity_terms.items()
    ]
    rows += [
        {"quantity": "Total infidelity", "value": report.total_infidelity},
        {"quantity": "Per-attempt probability", "value": report.per_attempt_probability},
        {"quantity": "Attempt rate cap (Hz)", "value": report.attempt_rate_cap},
        {"quantity": "Cap utilization", "value": report.cap_utilization},
        {"quantity": "Memory decay penalty", "value": penalty},
        {"quantity": "Generation time (s)", "value": report.generation_time},
        {"quantity": "Attempt rate (Hz)", "value": report.attempt_rate},
        {"quantity": "Success rate (Hz)", "value": report.success_rate},
    ]
    document = report.model_dump() | {
        "generation_time": report.generation_time,
        "decay_penalty": penalty,
    }
    return CommandResult(rows, document)


def _stark_phase_per_attempt(scenario: Scenario) -> float:
    if scenario.crosstalk is None:
        return 0.0
    report = crosstalk_table(scenario.crosstalk)
    return report.total_phase_rate / scenario.crosstalk.attempt_rate


async def run_simulate_node(args, scenario: Scenario | None, config: Config) -> CommandResult:
    scenario = _require_scenario(scenario, args.command)
    records = list(
        run_node_sequence(
            scenario.node,
            scenario.noise,
            args.seed,
            args.sequences,
            workers=args.workers or config.simulation.workers,
            chunk_size=args.chunk_size or config.simulation.chunk_size,
            stark_phase_per_attempt=_stark_phase_per_attempt(scenario),
        )
    )
    summary = summarize(records, scenario.node, scenario.noise)
    logger.info(
        f"Herald rate {summary.herald_rate:.4g} +/- {summary.herald_rate_sigma:.2g} Hz "
        f"(analytic {summary.analytic_herald_rate:.4g}), decay fraction "
        f"{summary.decay_fraction:.4f} (analytic {summary.analytic_decay_fraction:.4f})"
    )
    rows = [r.as_row() for r in records]
    return CommandResult(
        rows,
        {"summary": summary.model_dump(), "records": rows},
        extras={"summary": summary.model_dump()},
    )


async def run_swap_curve(args, scenario: Scenario | None, config: Config) -> CommandResult:
    noise = scenario.noise if scenario else NoiseParams()
    t1_prime = args.t1 if args.t1 is not None else noise.t1_prime
    t2 = args.t2 if args.t2 is not None else noise.t2
    if t1_prime <= 0 or t2 <= 0:
        raise ValueError(f"T1' and T2 must be positive, got {t1_prime}, {t2}")
    low, high = args.rates
    curve = swap_curve(
        rate_grid(low, high, args.points),
        t1_prime,
        t2,
        conditioned=not args.unconditioned,
        monte_carlo=not args.no_monte_carlo,
        seed=args.seed,
    )
    rows = [row.model_dump() for row in curve]
    document = {
        "t1_prime": t1_prime,
        "t2": t2,
        "conditioned": not args.unconditioned,
        "rows": rows,
    }
    return CommandResult(rows, document)


async def run_crosstalk_report(args, scenario: Scenario | None, config: Config) -> CommandResult:
    scenario = _require_scenario(scenario, args.command)
    if scenario.crosstalk is None:
        raise ValueError(f"Scenario '{scenario.name}' has no crosstalk operations")
    report = crosstalk_table(scenario.crosstalk)
    hp = scenario.heating
    energy, recoil_phonons = recoil_heating(hp)
    per_attempt = heating_per_attempt(hp)
    equilibrium = []
    for heat in per_attempt:
        low, high, mean = equilibrium_phonons(hp.base_nbar, heat, hp.attempts_between_cooling)
        equilibrium.append({"min": low, "max": high, "mean": mean})
    heating = {
        "recoil_energy": energy,
        "recoil_phonons_per_mode": recoil_phonons,
        "pumping_photons": pumping_photon_count(hp.pump_branch, hp.n_pump_rounds, hp.pump_initial),
        "phonons_per_attempt": per_attempt,
        "equilibrium": equilibrium,
    }
    document = report.model_dump() | {
        "storage_phase": accumulated_phase(report.total_phase_rate, scenario.node.memory_window),
        "heating": heating,
    }
    return CommandResult([row.model_dump() for row in report.rows], document)


def _matrix_document(matrix) -> dict:
    return {"real": matrix.real.tolist(), "imag": matrix.imag.tolist()}


async def run_tomography_demo(args, scenario: Scenario | None, config: Config) -> CommandResult:
    noise = scenario.noise if scenario else NoiseParams()
    target = heralded_ion_photon_state(noise)
    counts = simulate_counts(target, shots=args.shots, seed=args.seed)
    result = mle_fit(counts, strict=args.strict)
    vis = visibilities(counts)
    document = {
        "shots": args.shots,
        "counts": counts.counts,
        "target_fidelity": bell_fidelity(target),
        "bell_fidelity": bell_fidelity(result.state),
        "log_likelihood": result.log_likelihood,
        "iterations": result.iterations,
        "converged": result.converged,
        "visibilities": {
            "vx": vis.vx,
            "vy": vis.vy,
            "vz": vis.vz,
            "aligned_to": vis.aligned_to,
            "signs_consistent": vis.signs_consistent,
        },
        "visibility_fidelity": visibility_fidelity(*vis.values),
        "density_matrix": _matrix_document(result.state.matrix),
    }
    return CommandResult(None, document, default_format="json")


async def run_fit_histogram(args, scenario: Scenario | None, config: Config) -> CommandResult:
    start_ns, end_ns = args.window
    window = (start_ns * NS, end_ns * NS)
    if args.input:
        samples = [t * NS for t in await read_timestamps(Path(args.input))]
        logger.info(f"Read {len(samples)} arrival times from {args.input}")
    else:
        model = HistogramModel(window=window, **DEMO_HISTOGRAM)
        samples = sample_arrival_times(model, args.samples, args.seed)
    fit = fit_histogram(samples, window, strict=args.strict)
    rows = [
        {"parameter": name, "value": getattr(fit.model, name), "error": fit.errors[name]}
        for name in ("latency", "jitter_sigma", "decay_tau")
    ]
    return CommandResult(rows, fit.model_dump(mode="json"), default_format="json")


async def run_herald_table(args, scenario: Scenario | None, config: Config) -> CommandResult:
    scenario = _require_scenario(scenario, args.command)
    herald = scenario.herald
    if herald.scheme == HeraldScheme.DIRECT:
        p, state = direct_herald(scenario.node, scenario.noise)
        outcomes = [HeraldOutcome("herald", p, state), HeraldOutcome("fail", 1 - p, None)]
    elif herald.scheme == HeraldScheme.BSM:
        state = heralded_ion_photon_state(scenario.noise)
        outcomes = herald_bsm(state, state, herald.eta, herald.eta)
    else:
        outcomes = herald_single_photon(herald.chi, herald.eta, herald.eta, herald.path_phase)
    table = outcome_table(outcomes)
    rows = [{"pattern": pattern} | values for pattern, values in table.items()]
    return CommandResult(
        rows, {"scheme": herald.scheme.value, "outcomes": table}, default_format="json"
    )


COMMANDS = {
    "budget": run_budget,
    "simulate-node": run_simulate_node,
    "swap-curve": run_swap_curve,
    "crosstalk-report": run_crosstalk_report,
    "tomography-demo": run_tomography_demo,
    "fit-histogram": run_fit_histogram,
    "herald-table": run_herald_table,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--scenario", help="Scenario name or path to a scenario JSON file")
    common.add_argument("--out", help="Output file; defaults to the scenario's or out/<command>")
    common.add_argument("--seed", type=parse_count, default=0, help="64-bit seed")
    common.add_argument("--format", choices=("csv", "json"), help="Output format")

    parser = argparse.ArgumentParser(
        prog="ion-node", description="Dual-type trapped-ion network node simulator"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    budget = sub.add_parser("budget", parents=[common], help="Rate and infidelity ledger")
    budget.add_argument("--future", action="store_true", help="Use the improved stage values")

    node = sub.add_parser("simulate-node", parents=[common], help="Monte Carlo node sequences")
    node.add_argument("--sequences", type=parse_count, default=10_000)
    node.add_argument("--workers", type=parse_count, help="Worker processes")
    node.add_argument("--chunk-size", type=parse_count, help="Sequences per work unit")

    swap = sub.add_parser("swap-curve", parents=[common], help="Swap success and fidelity vs rate")
    swap.add_argument("--rates", type=parse_range, default=(0.01, 1000.0), help="low..high in Hz")
    swap.add_argument("--points", type=parse_count, default=20)
    swap.add_argument("--t1", type=float, help="Memory lifetime T1' in s")
    swap.add_argument("--t2", type=float, help="Memory coherence time T2 in s")
    swap.add_argument("--unconditioned", action="store_true", help="Average over decayed trials")
    swap.add_argument("--no-monte-carlo", action="store_true", help="Skip the sampled columns")

    sub.add_parser("crosstalk-report", parents=[common], help="Memory crosstalk and heating")

    tomo = sub.add_parser("tomography-demo", parents=[common], help="Simulated tomography and MLE")
    tomo.add_argument("--shots", type=parse_count, default=10_000)
    tomo.add_argument("--strict", action="store_true", help="Fail if the MLE does not converge")

    hist = sub.add_parser("fit-histogram", parents=[common], help="Arrival-time histogram fit")
    hist.add_argument("--input", help="CSV of arrival times in ns")
    hist.add_argument("--samples", type=parse_count, default=100_000)
    hist.add_argument("--window", type=parse_range, default=(0.0, 100.0), help="start..end in ns")
    hist.add_argument("--strict", action="store_true", help="Fail on a degenerate fit")

    sub.add_parser("herald-table", parents=[common], help="Herald outcome probabilities")
    return parser


async def load_scenario(name: str | None, config: Config) -> Scenario | None:
    if name is None:
        return None
    manager = ScenarioManager(config.scenarios.scenario_dir)
    if name.endswith(".json"):
        return await manager.load_file(Path(name))
    return await manager.load(name)


def output_path(args, scenario: Scenario | None, fmt: str) -> Path:
    if args.out:
        return Path(args.out)
    if scenario and args.command in scenario.outputs:
        return Path(scenario.outputs[args.command])
    stem = f"{args.command}-{scenario.name}" if scenario else args.command
    return Path("out") / f"{stem}.{fmt}"


async def execute(args, config: Config) -> Path:
    """Run one command and write its outputs; returns the main output path."""
    scenario = await load_scenario(args.scenario, config)
    result = await COMMANDS[args.command](args, scenario, config)

    fmt = args.format or result.default_format
    if fmt == "csv" and result.rows is None:
        raise ValueError(f"Command '{args.command}' has no tabular output; use --format json")
    content = format_csv(result.rows) if fmt == "csv" else format_json(result.document)

    metadata = build_metadata(
        args.command,
        scenario.name if scenario else None,
        scenario.digest() if scenario else None,
        args.seed,
    )
    path = output_path(args, scenario, fmt)
    await write_output(path, content, metadata)
    for suffix, document in result.extras.items():
        extra = path.with_name(f"{path.stem}.{suffix}.json")
        await write_output(extra, format_json(document), metadata)
    return path


def main(argv: list[str] | None = None) -> int:
    """Parse arguments, run the command and map failures to exit codes."""
    config = load_config()
    logging.basicConfig(format=config.logging.format, level=config.logging.level)
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as e:
        # argparse has already printed usage or help
        return EXIT_OK if e.code in (0, None) else EXIT_CONFIG_ERROR

    try:
        asyncio.run(execute(args, config))
    except ValidationError as e:
        logger.error(f"Invalid configuration: {describe_validation_error(e)}")
        return EXIT_CONFIG_ERROR
    except ValueError as e:
        logger.error(str(e))
        return EXIT_CONFIG_ERROR
    except OSError as e:
        logger.error(f"Cannot access {e.filename}: {e.strerror}")
        return EXIT_CONFIG_ERROR
    except NumericalError as e:
        logger.error(f"Numerical failure: {e}")
        return EXIT_NUMERICAL_ERROR
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
