"""
SVG figures: a top-down map per scenario with each planner's path, and one
grouped bar chart per metric comparing planners across scenarios.

Figures are drawn with matplotlib on the Agg backend and saved as SVG with a
fixed hash salt and no date stamp, so the same inputs give the same bytes.
"""

import logging
import math
from dataclasses import dataclass, field
from pathlib import Path as FilePath
from typing import Dict, List, Union

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402
from matplotlib.figure import Figure  # noqa: E402
from matplotlib.patches import Rectangle  # noqa: E402

from city.city_map import CityMap  # noqa: E402
from city.geometry import Vec3  # noqa: E402
from planners.common import Path  # noqa: E402
from planners.registry import PlannerName  # noqa: E402

from .aggregate import METRICS, Summary  # noqa: E402

logger = logging.getLogger(__name__)

PLANNER_COLORS = {
    PlannerName.ASTAR: "#d62728",
    PlannerName.RRTSTAR: "#1f77b4",
    PlannerName.PSO: "#2ca02c",
}
PLANNER_LABELS = {PlannerName.ASTAR: "A*", PlannerName.RRTSTAR: "RRT*", PlannerName.PSO: "PSO"}
METRIC_LABELS = {
    "path_length": "Median path length (m)",
    "turning_sum": "Median turning sum (rad)",
    "planning_time": "Median planning time (s)",
}
SVG_RC = {"svg.hashsalt": "skybench", "svg.fonttype": "path"}


@dataclass
class ScenarioMap:
    """What a scenario figure shows: one trial's city, endpoints and paths."""
    scenario_id: int
    city: CityMap
    start: Vec3
    goal: Vec3
    paths: Dict[PlannerName, Path] = field(default_factory=dict)


def scenario_figure(scene: ScenarioMap) -> Figure:
    """Top-down projection: building footprints shaded by height, paths as polylines."""
    city = scene.city
    ceiling = city.bounds_max.z - city.bounds_min.z
    greys = matplotlib.colormaps["Greys"]

    fig, ax = plt.subplots(figsize=(7, 6))
    for i, box in enumerate(city.obstacles):
        shade = 0.25 + 0.6 * min(box.max_corner.z / ceiling, 1.0) if ceiling > 0 else 0.5
        ax.add_patch(Rectangle(
            (box.min_corner.x, box.min_corner.y),
            box.max_corner.x - box.min_corner.x,
            box.max_corner.y - box.min_corner.y,
            facecolor=greys(shade), edgecolor="none", gid=f"building-{i}",
        ))

    for planner in PlannerName:
        path = scene.paths.get(planner)
        if path is None:
            continue
        xy = path.as_array()
        ax.plot(xy[:, 0], xy[:, 1], color=PLANNER_COLORS[planner], linewidth=2.0,
                label=PLANNER_LABELS[planner], gid=f"path-{planner.value}")

    for label, p, color in (("start", scene.start, "#000000"), ("goal", scene.goal, "#ff7f0e")):
        ax.plot([p.x], [p.y], marker="o", linestyle="none", color=color, label=label, gid=label)

    ax.set_xlim(city.bounds_min.x, city.bounds_max.x)
    ax.set_ylim(city.bounds_min.y, city.bounds_max.y)
    ax.set_aspect("equal")
    ax.set_xlabel("x (m)")
    ax.set_ylabel("y (m)")
    ax.set_title(f"Scenario {scene.scenario_id}")
    ax.legend(fontsize=8, loc="upper left", bbox_to_anchor=(1.02, 1.0))
    fig.tight_layout()
    return fig


def metric_figure(summary: Summary, metric: str) -> Figure:
    """Grouped bars: one group per scenario, one bar per planner, height = median."""
    if metric not in METRICS:
        raise ValueError(f"unknown metric '{metric}'")
    scenario_ids = sorted({c.scenario_id for c in summary.cells})
    planners = [p for p in PlannerName if any(c.planner == p for c in summary.cells)]
    values = {(c.scenario_id, c.planner): c.metrics[metric].median for c in summary.cells}

    x = np.arange(len(scenario_ids), dtype=float)
    bar_width = 0.8 / max(len(planners), 1)
    offset = -0.4 + bar_width / 2

    fig, ax = plt.subplots(figsize=(max(6.0, 1.2 * len(scenario_ids) + 2.0), 4.5))
    for i, planner in enumerate(planners):
        heights = np.array([values.get((sid, planner), math.nan) for sid in scenario_ids])
        known = ~np.isnan(heights)
        ax.bar(x[known] + offset + i * bar_width, heights[known], bar_width,
               label=PLANNER_LABELS[planner], color=PLANNER_COLORS[planner], gid=f"bar-{planner.value}")
        for xi in x[~known]:
            ax.text(xi + offset + i * bar_width, 0.0, "n/a", ha="center", va="bottom", fontsize=7)

    ax.set_xticks(x)
    ax.set_xticklabels([f"S{sid}" for sid in scenario_ids])
    ax.set_xlabel("Scenario")
    ax.set_ylabel(METRIC_LABELS[metric])
    ax.set_title(METRIC_LABELS[metric])
    ax.grid(True, axis="y", alpha=0.3)
    if planners:
        ax.legend()
    fig.tight_layout()
    return fig


def save_svg(fig: Figure, path: FilePath) -> FilePath:
    """Save and close a figure; output bytes depend only on its content."""
    try:
        with matplotlib.rc_context(SVG_RC):
            fig.savefig(path, format="svg", metadata={"Date": None})
    finally:
        plt.close(fig)
    return path


def emit_figures(summary: Summary, scenes: Dict[int, ScenarioMap],
                 output_dir: Union[str, FilePath]) -> List[FilePath]:
    """
    Write scenario_<id>.svg for every scene and metrics_<name>.svg per metric.

    Raises:
        OSError: Directory not writable
    """
    out = FilePath(output_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = [save_svg(scenario_figure(scenes[sid]), out / f"scenario_{sid}.svg") for sid in sorted(scenes)]
    written += [save_svg(metric_figure(summary, m), out / f"metrics_{m}.svg") for m in METRICS]
    logger.info("wrote %d figures to %s", len(written), out)
    return written
