import importlib
import json
from pathlib import Path

import pandas as pd
import pytest

from bench.csv_output import read_rows
from city.serialization import read_json
from cli.config import OUTPUT_ENV, load_settings, parse_override, resolve_output_dir
from cli.main import ExitCode, parse_args, run_cli
from planners.common import NoPathError
from planners.registry import PlannerName


@pytest.fixture
def scenario_file(tmp_path):
    document = {
        "scenario_id": 2,
        "map_size": [300, 300],
        "obstacle_density": 0.1,
        "max_building_height": 100,
        "start": [80, 150, 25],
        "goal": [220, 150, 25],
        "max_range": 200,
        "max_altitude_delta": 30,
        "seed": 11,
    }
    path = tmp_path / "scenario.json"
    path.write_text(json.dumps(document))
    return path


# ------------------------------------------------------------------ #
#   Argument parsing
# ------------------------------------------------------------------ #

def test_parse_plan_with_override(tmp_path):
    inv = parse_args(["plan", "--scenario", "s.json", "--planner", "pso", "--set", "pso.iterations=200",
                      "--out", str(tmp_path)])
    assert inv.subcommand == "plan"
    assert inv.planner is PlannerName.PSO
    assert inv.overrides == ["pso.iterations=200"]
    assert inv.output_dir == tmp_path
    assert load_settings(None, [parse_override(o) for o in inv.overrides]).pso.iterations == 200


def test_parse_bench_subset():
    inv = parse_args(["bench", "--planners", "ASTAR, pso", "--scenario-id", "2", "--scenario-id", "5",
                      "--trials", "3", "--seed", "7", "-q"])
    assert inv.planners == [PlannerName.ASTAR, PlannerName.PSO]
    assert inv.scenario_ids == [2, 5]
    assert inv.trials == 3
    assert inv.seed == 7
    assert inv.verbosity == -1


@pytest.mark.parametrize("argv", [
    ["bench", "--set", "scenario.seed=3"],
    ["bench", "--set", "pso.nope=1"],
    ["bench", "--set", "pso"],
    ["bench", "--planners", "astar,dstar"],
    ["bench", "--trials", "0"],
    ["bench", "--jobs", "0"],
    ["plan", "--scenario", "s.json"],
    ["generate", "--scenario", "s.json", "--set", "astar.resolution=5"],
    ["teleport"],
])
def test_usage_errors_exit(argv):
    with pytest.raises(SystemExit) as err:
        parse_args(argv)
    assert err.value.code == 2


def test_run_cli_returns_usage_status():
    assert run_cli(["bench", "--jobs", "0"]) == ExitCode.USAGE


@pytest.mark.parametrize("text, expected", [
    ("pso.iterations=200", ("pso", "iterations", 200)),
    ("scenario.start=[1, 2, 3]", ("scenario", "start", [1, 2, 3])),
    ("constraints.max_range=300.5", ("constraints", "max_range", 300.5)),
    ("pso.v_max=null", ("pso", "v_max", None)),
    ("astar.allow_corner_cutting=true", ("astar", "allow_corner_cutting", True)),
])
def test_parse_override(text, expected):
    assert parse_override(text) == expected


@pytest.mark.parametrize("text", ["pso=3", "pso.iterations", "wind.speed=3", "rrtstar.radius=4"])
def test_parse_override_rejects(text):
    with pytest.raises(ValueError):
        parse_override(text)


def test_output_dir_resolution(monkeypatch, tmp_path):
    monkeypatch.setenv(OUTPUT_ENV, str(tmp_path / "env"))
    assert resolve_output_dir(None) == tmp_path / "env"
    assert resolve_output_dir(str(tmp_path / "flag")) == tmp_path / "flag"
    assert parse_args(["figures"]).output_dir == tmp_path / "env"
    monkeypatch.delenv(OUTPUT_ENV)
    assert resolve_output_dir(None) == Path("skybench_out")


# ------------------------------------------------------------------ #
#   Subcommands
# ------------------------------------------------------------------ #

def test_generate_writes_city_and_scenario(scenario_file, tmp_path):
    out = tmp_path / "gen"
    assert run_cli(["generate", "--scenario", str(scenario_file), "--seed", "5", "--out", str(out)]) == ExitCode.OK
    city = read_json(out / "city.json")
    scenario = read_json(out / "scenario.json")
    assert scenario["seed"] == 5
    assert city["obstacles"]


def test_plan_astar_writes_path_and_metrics(scenario_file, tmp_path):
    out = tmp_path / "plan"
    code = run_cli(["plan", "--scenario", str(scenario_file), "--planner", "astar",
                    "--set", "constraints.max_range=500", "--out", str(out)])
    assert code == ExitCode.OK
    path = read_json(out / "path.json")
    assert path["waypoints"][0] == [80, 150, 25]
    assert path["waypoints"][-1] == [220, 150, 25]
    metrics = read_json(out / "metrics.json")
    assert metrics["planner"] == "astar"
    assert metrics["constraints"]["max_range"] == 500
    assert metrics["metrics"]["path_length"] >= 140.0
    assert metrics["feasible"] == (metrics["metrics"]["violations"] == [])


def test_plan_seed_reseeds_the_city(scenario_file, tmp_path):
    argv = ["plan", "--scenario", str(scenario_file), "--planner", "astar", "--seed", "5",
            "--set", "constraints.max_range=500", "--out", str(tmp_path)]
    assert run_cli(argv) == ExitCode.OK
    assert read_json(tmp_path / "metrics.json")["seed"] == 5


def test_plan_seed_matches_explicit_seed_overrides(scenario_file, tmp_path):
    base = ["plan", "--scenario", str(scenario_file), "--planner", "pso",
            "--set", "pso.population=20", "--set", "pso.iterations=30"]
    first = run_cli([*base, "--seed", "5", "--out", str(tmp_path / "a")])
    second = run_cli([*base, "--set", "scenario.seed=5", "--set", "pso.seed=5", "--out", str(tmp_path / "b")])
    assert first == second
    if first == ExitCode.OK:
        assert (tmp_path / "a" / "path.json").read_bytes() == (tmp_path / "b" / "path.json").read_bytes()


def test_plan_without_path_exits_three(scenario_file, tmp_path, monkeypatch):
    def no_path(*args, **kwargs):
        raise NoPathError("sealed")

    monkeypatch.setattr(importlib.import_module("cli.main"), "run_planner", no_path)
    out = tmp_path / "plan"
    assert run_cli(["plan", "--scenario", str(scenario_file), "--planner", "rrtstar", "--out", str(out)]) == 3
    assert not (out / "path.json").exists()


def test_bad_scenario_exits_five(tmp_path, scenario_file):
    document = json.loads(scenario_file.read_text())
    document["scenario_id"] = 9
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(document))
    assert run_cli(["generate", "--scenario", str(bad), "--out", str(tmp_path)]) == ExitCode.BAD_CONFIG


def test_bad_settings_exit_five(scenario_file, tmp_path):
    settings = tmp_path / "settings.json"
    settings.write_text(json.dumps({"pso": {"population": 1}}))
    code = run_cli(["plan", "--scenario", str(scenario_file), "--planner", "pso",
                    "--settings", str(settings), "--out", str(tmp_path)])
    assert code == ExitCode.BAD_CONFIG


def test_missing_scenario_file_exits_four(tmp_path):
    assert run_cli(["generate", "--scenario", str(tmp_path / "nope.json"), "--out", str(tmp_path)]) == 4


def test_figures_without_results_exit_four(tmp_path):
    assert run_cli(["figures", "--out", str(tmp_path / "empty")]) == ExitCode.IO_ERROR


def test_bench_then_figures(tmp_path):
    out = tmp_path / "bench"
    argv = ["bench", "--scenario-id", "2", "--planners", "astar", "--trials", "1", "--seed", "1", "--out", str(out)]
    assert run_cli(argv) == ExitCode.OK
    names = {p.name for p in out.iterdir()}
    assert {"rows.csv", "summary.csv", "summary.json", "manifest.json", "scenario_2.svg",
            "metrics_path_length.svg", "metrics_turning_sum.svg", "metrics_planning_time.svg"} <= names
    assert len((out / "rows.csv").read_text().splitlines()) == 2

    (out / "scenario_2.svg").unlink()
    assert run_cli(["figures", "--out", str(out)]) == ExitCode.OK
    assert (out / "scenario_2.svg").exists() == bool(read_json(out / "manifest.json")["scenes"]["2"]["city"])


def rows_without_time(path):
    return pd.read_csv(path, dtype=str, keep_default_na=False).drop(columns=["planning_time_s"])


@pytest.mark.slow
def test_bench_rows_repeat_for_a_seed(tmp_path):
    base = ["bench", "--scenario-id", "2", "--scenario-id", "5", "--trials", "2", "--seed", "3", "-q"]
    assert run_cli([*base, "--jobs", "1", "--out", str(tmp_path / "a")]) == ExitCode.OK
    assert run_cli([*base, "--jobs", "2", "--out", str(tmp_path / "b")]) == ExitCode.OK
    first, second = rows_without_time(tmp_path / "a" / "rows.csv"), rows_without_time(tmp_path / "b" / "rows.csv")
    assert len(first) == 12
    pd.testing.assert_frame_equal(first, second)


@pytest.mark.slow
def test_full_bench_writes_every_file(tmp_path):
    out = tmp_path / "full"
    assert run_cli(["bench", "--seed", "0", "--jobs", "4", "-q", "--out", str(out)]) == ExitCode.OK
    expected = {"rows.csv", "summary.csv", "summary.json", "manifest.json"}
    expected |= {f"scenario_{sid}.svg" for sid in range(1, 7)}
    expected |= {f"metrics_{m}.svg" for m in ("path_length", "turning_sum", "planning_time")}
    assert expected <= {p.name for p in out.iterdir()}
    assert len(read_rows(out / "rows.csv")) == 6 * 3 * 10
