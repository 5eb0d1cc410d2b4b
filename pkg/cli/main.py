"""
skybench command line.

    skybench generate --scenario s.json [--seed N] [--set scenario.field=value ...]
    skybench plan     --scenario s.json --planner {astar,rrtstar,pso} [--seed N] [--settings p.json]
    skybench bench    [--seed N] [--trials N] [--planners a,b] [--scenario-id N ...] [--jobs N]
    skybench figures  [--out DIR]

Data goes to files under the output directory; diagnostics go to stderr.
"""

import argparse
import dataclasses
import enum
import logging
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import List, Optional, Sequence

from bench.aggregate import aggregate
from bench.csv_output import ROWS_FILE, emit_csv, emit_summary_json, read_rows
from bench.experiment_plan import default_plan
from bench.figures import emit_figures
from bench.manifest import build_manifest, read_manifest, scenes_from_manifest, write_manifest
from bench.runner import run
from city.errors import CityError
from city.generator import GeneratorConfig, generate_city
from city.serialization import city_to_dict, scenario_to_dict, write_json
from evaluation.metrics import validate
from evaluation.timing import timed
from planners.common import PlannerError
from planners.registry import PlannerName, run_planner

from .config import (
    load_constraints,
    load_scenario,
    load_settings,
    parse_overrides,
    resolve_output_dir,
)

logger = logging.getLogger("skybench")

# Override sections each subcommand accepts
ALLOWED_SECTIONS = {
    "generate": {"scenario"},
    "plan": {"scenario", "astar", "rrtstar", "pso", "constraints"},
    "bench": {"astar", "rrtstar", "pso"},
    "figures": set(),
}


class ExitCode(enum.IntEnum):
    OK = 0
    USAGE = 2
    NO_PATH = 3
    IO_ERROR = 4
    BAD_CONFIG = 5


@dataclass
class CliInvocation:
    subcommand: str
    output_dir: Path
    scenario_file: Optional[Path] = None
    planner: Optional[PlannerName] = None
    seed: Optional[int] = None
    overrides: List[str] = field(default_factory=list)
    settings_file: Optional[Path] = None
    trials: Optional[int] = None
    planners: Optional[List[PlannerName]] = None
    scenario_ids: Optional[List[int]] = None
    jobs: int = 1
    verbosity: int = 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="skybench", description="UAV path planner benchmark for urban maps")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", dest="out", help="output directory (default: $SKYBENCH_OUT or ./skybench_out)")
    common.add_argument("--seed", type=int, help="seed for every stochastic component")
    common.add_argument("--set", dest="overrides", action="append", default=[], metavar="SECTION.FIELD=VALUE",
                        help="override a scenario, planner or constraint field (repeatable)")
    common.add_argument("-v", "--verbose", action="count", default=0, help="debug logging")
    common.add_argument("-q", "--quiet", action="store_true", help="warnings and errors only")

    sub = parser.add_subparsers(dest="subcommand", required=True)

    gen = sub.add_parser("generate", parents=[common], help="generate the city of a scenario")
    gen.add_argument("--scenario", type=Path, required=True, help="scenario JSON file")

    plan = sub.add_parser("plan", parents=[common], help="run one planner on a scenario")
    plan.add_argument("--scenario", type=Path, required=True, help="scenario JSON file")
    plan.add_argument("--planner", required=True, choices=[p.value for p in PlannerName])
    plan.add_argument("--settings", type=Path, help="planner settings JSON file")

    bench = sub.add_parser("bench", parents=[common], help="run the benchmark plan")
    bench.add_argument("--trials", type=int, help="trials per (scenario, planner)")
    bench.add_argument("--planners", help="comma-separated planner subset")
    bench.add_argument("--scenario-id", dest="scenario_ids", type=int, action="append",
                       help="restrict to a scenario (repeatable)")
    bench.add_argument("--jobs", type=int, default=1, help="worker processes (default 1)")
    bench.add_argument("--settings", type=Path, help="planner settings JSON file")

    sub.add_parser("figures", parents=[common], help="re-emit figures from rows.csv and manifest.json")
    return parser


def parse_args(argv: Optional[Sequence[str]] = None) -> CliInvocation:
    """
    Parse and check a command line.

    Raises:
        SystemExit: Usage error (status 2, message on stderr)
    """
    parser = build_parser()
    ns = parser.parse_args(argv)

    try:
        overrides = parse_overrides(ns.overrides)
    except ValueError as e:
        parser.error(str(e))
    for section, name, _ in overrides:
        if section not in ALLOWED_SECTIONS[ns.subcommand]:
            parser.error(f"'{section}.{name}' overrides are not accepted by {ns.subcommand}")

    planners = None
    if getattr(ns, "planners", None):
        try:
            planners = [PlannerName.parse(p) for p in ns.planners.split(",") if p.strip()]
        except ValueError as e:
            parser.error(str(e))
    if getattr(ns, "trials", None) is not None and ns.trials < 1:
        parser.error("--trials must be >= 1")
    if getattr(ns, "jobs", 1) < 1:
        parser.error("--jobs must be >= 1")

    return CliInvocation(
        subcommand=ns.subcommand,
        output_dir=resolve_output_dir(ns.out),
        scenario_file=getattr(ns, "scenario", None),
        planner=PlannerName(ns.planner) if getattr(ns, "planner", None) else None,
        seed=ns.seed,
        overrides=list(ns.overrides),
        settings_file=getattr(ns, "settings", None),
        trials=getattr(ns, "trials", None),
        planners=planners,
        scenario_ids=getattr(ns, "scenario_ids", None),
        jobs=getattr(ns, "jobs", 1),
        verbosity=-1 if ns.quiet else ns.verbose,
    )


def configure_logging(verbosity: int) -> None:
    level = logging.WARNING if verbosity < 0 else logging.DEBUG if verbosity > 0 else logging.INFO
    logging.basicConfig(stream=sys.stderr, level=level, format="[%(levelname)s] %(message)s", force=True)


# ------------------------------------------------------------------ #
#   Subcommands
# ------------------------------------------------------------------ #

def _generate(inv: CliInvocation) -> List[Path]:
    overrides = parse_overrides(inv.overrides)
    if inv.seed is not None:
        overrides.append(("scenario", "seed", inv.seed))
    scenario = load_scenario(inv.scenario_file, overrides)
    city = generate_city(scenario)
    logger.info("scenario %d: %d buildings", scenario.scenario_id, len(city.obstacles))
    return [
        write_json(city_to_dict(city), inv.output_dir / "city.json"),
        write_json(scenario_to_dict(scenario), inv.output_dir / "scenario.json"),
    ]


def _plan(inv: CliInvocation) -> List[Path]:
    overrides = parse_overrides(inv.overrides)
    if inv.seed is not None:
        overrides.append(("scenario", "seed", inv.seed))
    scenario = load_scenario(inv.scenario_file, overrides)
    settings = load_settings(inv.settings_file, overrides, inv.seed)
    constraints = load_constraints(scenario, overrides)
    city = generate_city(scenario, GeneratorConfig(safety_margin=constraints.safety_margin))

    (path, stats), seconds = timed(
        run_planner, inv.planner, city, scenario.start, scenario.goal, settings, constraints
    )
    metrics = validate(path, city, constraints)
    metrics.planning_time = seconds
    logger.info("%s: length %.2f m, turning %.3f rad, %.3f s%s", inv.planner.value,
                metrics.path_length, metrics.turning_sum, seconds,
                f", violates {metrics.violation_names()}" if metrics.violations else "")
    return [
        write_json(path.to_dict(), inv.output_dir / "path.json"),
        write_json({
            "planner": inv.planner.value,
            "scenario_id": scenario.scenario_id,
            "seed": scenario.seed,
            "metrics": metrics.to_dict(),
            "feasible": metrics.feasible,
            "constraints": constraints.to_dict(),
            "stats": stats.summary(),
            "settings": dataclasses.asdict(settings.for_planner(inv.planner)),
        }, inv.output_dir / "metrics.json"),
    ]


def _bench(inv: CliInvocation) -> List[Path]:
    overrides = parse_overrides(inv.overrides)
    plan = default_plan(base_seed=inv.seed or 0)
    plan = plan.restrict(inv.scenario_ids, inv.planners, inv.trials)
    settings = load_settings(inv.settings_file, overrides)
    plan = dataclasses.replace(plan, settings=settings)

    table = run(plan, jobs=inv.jobs)
    summary = aggregate(table, strict=False)
    written = emit_csv(table, summary, inv.output_dir)
    written.append(emit_summary_json(summary, inv.output_dir))
    manifest = build_manifest(plan, table)
    written.append(write_manifest(manifest, inv.output_dir))
    written += emit_figures(summary, scenes_from_manifest(manifest), inv.output_dir)
    return written


def _figures(inv: CliInvocation) -> List[Path]:
    table = read_rows(inv.output_dir / ROWS_FILE)
    scenes = scenes_from_manifest(read_manifest(inv.output_dir))
    return emit_figures(aggregate(table, strict=False), scenes, inv.output_dir)


HANDLERS = {"generate": _generate, "plan": _plan, "bench": _bench, "figures": _figures}


def main(invocation: CliInvocation) -> int:
    """
    Execute a parsed invocation.

    Returns:
        ExitCode value: 0 only when every requested file was written
    """
    try:
        written = HANDLERS[invocation.subcommand](invocation)
    except PlannerError as e:
        logger.error("no path: %s", e)
        return ExitCode.NO_PATH
    except OSError as e:
        logger.error("I/O failure: %s", e)
        return ExitCode.IO_ERROR
    except (CityError, ValueError, KeyError) as e:
        logger.error("bad configuration: %s", e)
        return ExitCode.BAD_CONFIG
    for p in written:
        logger.debug("wrote %s", p)
    return ExitCode.OK


def run_cli(argv: Optional[Sequence[str]] = None) -> int:
    try:
        invocation = parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    configure_logging(invocation.verbosity)
    return int(main(invocation))


def entry() -> None:
    """Console-script entry point."""
    sys.exit(run_cli())
