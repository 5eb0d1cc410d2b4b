"""
Benchmark harness: seeded experiment plans, cell execution, aggregation and
CSV/SVG emission.
"""

from .aggregate import AllInfeasibleError, CellSummary, MetricStats, Summary, aggregate, percent_difference
from .csv_output import emit_csv, emit_summary_json, read_rows
from .experiment_plan import ExperimentPlan, city_seed, default_plan, scenario_for_trial, trial_seed
from .figures import ScenarioMap, emit_figures, metric_figure, save_svg, scenario_figure
from .manifest import build_manifest, read_manifest, scenes_from_manifest, write_manifest
from .runner import ResultRow, ResultTable, replay_row, run, run_cell

__all__ = [
    "AllInfeasibleError",
    "CellSummary",
    "MetricStats",
    "Summary",
    "aggregate",
    "percent_difference",
    "emit_csv",
    "emit_summary_json",
    "read_rows",
    "ExperimentPlan",
    "city_seed",
    "default_plan",
    "scenario_for_trial",
    "trial_seed",
    "ScenarioMap",
    "emit_figures",
    "metric_figure",
    "save_svg",
    "scenario_figure",
    "build_manifest",
    "read_manifest",
    "scenes_from_manifest",
    "write_manifest",
    "ResultRow",
    "ResultTable",
    "replay_row",
    "run",
    "run_cell",
]
