"""
Statistical summary of a ResultTable.

Per (scenario, planner) cell: median, mean and standard deviation of each
metric over the feasible trials, a Student-t 95% confidence half-width, and
the feasibility rate. Medians also feed the pairwise percent differences
between planners.
"""

import math
import statistics
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple

import pandas as pd
from scipy import stats

from planners.registry import PlannerName

from .runner import PLANNER_ORDER, ResultTable

METRICS = ("path_length", "turning_sum", "planning_time")
SUMMARY_COLUMNS = [
    "scenario_id", "planner", "n_feasible", "median_length_m", "mean_length_m",
    "std_length_m", "median_turning_rad", "median_time_s", "feasibility_rate",
]


class AllInfeasibleError(ValueError):
    """A (scenario, planner) cell has no feasible trial to aggregate."""

    def __init__(self, scenario_id: int, planner: PlannerName):
        super().__init__(f"scenario {scenario_id} / {PlannerName(planner).value}: no feasible trials")
        self.scenario_id = scenario_id
        self.planner = planner


@dataclass
class MetricStats:
    median: float
    mean: float
    std: float
    ci95: float

    @classmethod
    def of(cls, values: List[float]) -> "MetricStats":
        if not values:
            return cls(math.nan, math.nan, math.nan, math.nan)
        n = len(values)
        mean = statistics.mean(values)
        std = statistics.stdev(values) if n > 1 else 0.0
        ci = float(stats.t.ppf(0.975, n - 1)) * std / math.sqrt(n) if n > 1 else 0.0
        return cls(statistics.median(values), mean, std, ci)

    def to_dict(self) -> Dict[str, float]:
        return {"median": self.median, "mean": self.mean, "std": self.std, "ci95": self.ci95}


@dataclass
class CellSummary:
    scenario_id: int
    planner: PlannerName
    n_trials: int
    n_feasible: int
    metrics: Dict[str, MetricStats]

    @property
    def feasibility_rate(self) -> float:
        return self.n_feasible / self.n_trials if self.n_trials else 0.0

    def to_record(self) -> Dict[str, Any]:
        length = self.metrics["path_length"]
        return {
            "scenario_id": self.scenario_id,
            "planner": self.planner.value,
            "n_feasible": self.n_feasible,
            "median_length_m": length.median,
            "mean_length_m": length.mean,
            "std_length_m": length.std,
            "median_turning_rad": self.metrics["turning_sum"].median,
            "median_time_s": self.metrics["planning_time"].median,
            "feasibility_rate": self.feasibility_rate,
        }


@dataclass
class Summary:
    cells: List[CellSummary] = field(default_factory=list)
    # (scenario_id, metric, a, b) -> (median_b - median_a) / median_b
    differences: Dict[Tuple[int, str, PlannerName, PlannerName], float] = field(default_factory=dict)

    def cell(self, scenario_id: int, planner: PlannerName) -> Optional[CellSummary]:
        for c in self.cells:
            if c.scenario_id == scenario_id and c.planner == planner:
                return c
        return None

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame([c.to_record() for c in self.cells], columns=SUMMARY_COLUMNS)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "cells": [
                {
                    "scenario_id": c.scenario_id,
                    "planner": c.planner.value,
                    "n_trials": c.n_trials,
                    "n_feasible": c.n_feasible,
                    "feasibility_rate": c.feasibility_rate,
                    "metrics": {k: v.to_dict() for k, v in c.metrics.items()},
                }
                for c in self.cells
            ],
            "differences": [
                {"scenario_id": s, "metric": m, "a": a.value, "b": b.value, "percent": 100.0 * d}
                for (s, m, a, b), d in sorted(
                    self.differences.items(),
                    key=lambda kv: (kv[0][0], kv[0][1], PLANNER_ORDER[kv[0][2]], PLANNER_ORDER[kv[0][3]]),
                )
            ],
        }


def percent_difference(a: float, b: float) -> float:
    """
    Fraction by which a is smaller than b: (b - a) / b.

    Identical values give 0 even when both are 0; any other comparison
    against b = 0 is undefined and gives NaN.
    """
    if a == b:
        return 0.0
    if b == 0 or math.isnan(a) or math.isnan(b):
        return math.nan
    return (b - a) / b


def aggregate(table: ResultTable, strict: bool = True) -> Summary:
    """
    Summarize a result table.

    Args:
        table: Benchmark rows (any order; the summary does not depend on it)
        strict: Raise when a cell has no feasible trial instead of reporting NaN

    Raises:
        ValueError: Empty table
        AllInfeasibleError: strict and a cell has zero feasible trials
    """
    if not table.rows:
        raise ValueError("cannot aggregate an empty result table")

    keys = sorted({(r.scenario_id, r.planner) for r in table.rows},
                  key=lambda k: (k[0], PLANNER_ORDER[k[1]]))
    summary = Summary()
    for scenario_id, planner in keys:
        rows = table.cell(scenario_id, planner)
        feasible = sorted((r for r in rows if r.feasible and r.metrics is not None), key=lambda r: r.trial)
        if strict and not feasible:
            raise AllInfeasibleError(scenario_id, planner)
        metrics = {
            name: MetricStats.of([getattr(r.metrics, name) for r in feasible])
            for name in METRICS
        }
        summary.cells.append(CellSummary(scenario_id, planner, len(rows), len(feasible), metrics))

    for scenario_id in sorted({k[0] for k in keys}):
        cells = [c for c in summary.cells if c.scenario_id == scenario_id]
        for a in cells:
            for b in cells:
                if a.planner == b.planner:
                    continue
                for metric in METRICS:
                    summary.differences[(scenario_id, metric, a.planner, b.planner)] = percent_difference(
                        a.metrics[metric].median, b.metrics[metric].median
                    )
    return summary
