"""
Benchmark execution.

Every (scenario, planner, trial) cell is independent: it regenerates the
trial's city from its seed, plans under the timer and validates the result.
Cells can therefore run in worker processes; the table is assembled and
sorted after all of them finish.
"""

import functools
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Dict, Iterable, List, Optional

import pandas as pd

from city.city_map import CityMap
from city.errors import CityError
from city.generator import GeneratorConfig, generate_city
from city.scenario import ScenarioSpec
from evaluation.constraints import ConstraintSet, Violation
from evaluation.metrics import MetricsRecord, validate
from evaluation.timing import timed
from planners.common import Path, PlannerError
from planners.registry import PlannerName, PlannerSettings, run_planner

from .experiment_plan import ExperimentPlan, scenario_for_trial, trial_seed

logger = logging.getLogger(__name__)

ROW_COLUMNS = [
    "scenario_id", "planner", "trial", "seed", "feasible", "path_length_m",
    "turning_sum_rad", "planning_time_s", "min_clearance_m", "violations",
]
PLANNER_ORDER = {p: i for i, p in enumerate(PlannerName)}


@dataclass
class ResultRow:
    """
    One benchmark cell.

    metrics is None when the planner returned no usable path; error then
    holds the failure message.
    """
    scenario_id: int
    planner: PlannerName
    trial: int
    seed: int
    feasible: bool
    metrics: Optional[MetricsRecord] = None
    error: Optional[str] = None
    path: Optional[Path] = field(default=None, compare=False)

    @property
    def sort_key(self):
        return (self.scenario_id, PLANNER_ORDER[self.planner], self.trial)

    def to_record(self) -> Dict[str, Any]:
        m = self.metrics
        return {
            "scenario_id": self.scenario_id,
            "planner": self.planner.value,
            "trial": self.trial,
            "seed": self.seed,
            "feasible": self.feasible,
            "path_length_m": m.path_length if m else math.nan,
            "turning_sum_rad": m.turning_sum if m else math.nan,
            "planning_time_s": m.planning_time if m else math.nan,
            "min_clearance_m": m.min_clearance if m else math.nan,
            "violations": m.violation_names() if m else "",
        }


@dataclass
class ResultTable:
    rows: List[ResultRow] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.rows)

    def sorted(self) -> "ResultTable":
        return ResultTable(sorted(self.rows, key=lambda r: r.sort_key))

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame([r.to_record() for r in self.rows], columns=ROW_COLUMNS)

    @classmethod
    def from_frame(cls, frame: pd.DataFrame) -> "ResultTable":
        """Rebuild rows (without paths) from a rows.csv frame."""
        rows = []
        for rec in frame.to_dict("records"):
            has_metrics = not pd.isna(rec["path_length_m"])
            violations = rec["violations"] if isinstance(rec["violations"], str) else ""
            metrics = None
            if has_metrics:
                metrics = MetricsRecord(
                    path_length=float(rec["path_length_m"]),
                    turning_sum=float(rec["turning_sum_rad"]),
                    planning_time=float(rec["planning_time_s"]),
                    min_clearance=float(rec["min_clearance_m"]),
                    violations=[Violation(v) for v in violations.split(";") if v],
                )
            rows.append(ResultRow(
                scenario_id=int(rec["scenario_id"]),
                planner=PlannerName(rec["planner"]),
                trial=int(rec["trial"]),
                seed=int(rec["seed"]),
                feasible=_as_bool(rec["feasible"]),
                metrics=metrics,
            ))
        return cls(rows)

    def cell(self, scenario_id: int, planner: PlannerName) -> List[ResultRow]:
        return [r for r in self.rows if r.scenario_id == scenario_id and r.planner == planner]


def _as_bool(value: Any) -> bool:
    if isinstance(value, str):
        return value.strip().lower() == "true"
    return bool(value)


@dataclass(frozen=True)
class CellTask:
    """Everything a worker needs to run one cell."""
    scenario: ScenarioSpec
    planner: PlannerName
    trial: int
    base_seed: int
    settings: PlannerSettings
    generator: GeneratorConfig


@functools.lru_cache(maxsize=8)
def trial_city(scenario: ScenarioSpec, generator: GeneratorConfig) -> CityMap:
    """City of one trial; cached so every planner in a process reuses it."""
    return generate_city(scenario, generator)


def run_cell(task: CellTask) -> ResultRow:
    """Generate (or reuse) the trial city, plan under the timer and validate."""
    scenario = scenario_for_trial(task.scenario, task.base_seed, task.trial)
    seed = trial_seed(task.base_seed, scenario.scenario_id, task.planner.value, task.trial)
    row = ResultRow(scenario.scenario_id, task.planner, task.trial, seed, feasible=False)

    try:
        city = trial_city(scenario, task.generator)
    except CityError as e:
        row.error = f"city generation failed: {e}"
        logger.warning("scenario %d trial %d: %s", scenario.scenario_id, task.trial, row.error)
        return row

    settings = task.settings.with_seed(seed)
    constraints = ConstraintSet.for_scenario(scenario, safety_margin=city.safety_margin)
    try:
        (path, _stats), seconds = timed(
            run_planner, task.planner, city, scenario.start, scenario.goal, settings, constraints
        )
    except PlannerError as e:
        row.error = f"{type(e).__name__}: {e}"
    else:
        metrics = validate(path, city, constraints)
        metrics.planning_time = seconds
        row.metrics, row.path, row.feasible = metrics, path, metrics.feasible

    logger.info(
        "scenario %d %-7s trial %2d: %s",
        row.scenario_id, row.planner.value, row.trial,
        _describe(row),
    )
    return row


def _describe(row: ResultRow) -> str:
    if row.metrics is None:
        return f"no path ({row.error})"
    m = row.metrics
    status = "feasible" if row.feasible else f"violates {m.violation_names()}"
    return f"length {m.path_length:.1f} m, turning {m.turning_sum:.3f} rad, {m.planning_time:.3f} s, {status}"


def iter_tasks(plan: ExperimentPlan) -> Iterable[CellTask]:
    # Trial-major order so consecutive cells share a cached city
    for scenario in plan.scenarios:
        for trial in range(plan.trials_per_cell):
            for planner in plan.planners:
                yield CellTask(scenario, planner, trial, plan.base_seed, plan.settings, plan.generator)


def run(plan: ExperimentPlan, jobs: int = 1) -> ResultTable:
    """
    Run every cell of a plan.

    Args:
        plan: Scenarios, planners and trials
        jobs: Worker processes; 1 runs in-process so timings are uncontended

    Returns:
        ResultTable sorted by (scenario, planner, trial)
    """
    tasks = list(iter_tasks(plan))
    logger.info("running %d cells with %d job(s)", len(tasks), jobs)
    if jobs <= 1:
        rows = [run_cell(t) for t in tasks]
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(run_cell, tasks, chunksize=len(plan.planners)))
    return ResultTable(rows).sorted()


def replay_row(plan: ExperimentPlan, row: ResultRow) -> ResultRow:
    """Re-run the cell behind a recorded row from its derived seeds."""
    task = CellTask(plan.scenario(row.scenario_id), row.planner, row.trial,
                    plan.base_seed, plan.settings, plan.generator)
    return run_cell(task)
