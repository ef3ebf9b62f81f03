import importlib
from pathlib import Path

import pandas as pd
import pytest

from coopnet.errors import QuadratureError, SamplingError
from coopnet.simulation import SimMode

coverage_cli = importlib.import_module("scripts.coverage_cli")


def write_config(tmp_path: Path, lines: list[str]) -> Path:
    path = tmp_path / "run.cfg"
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


def test_parse_grid_log_spacing_keeps_end_points():
    grid = coverage_cli.parse_grid("0.1:10:log21")
    assert len(grid) == 21
    assert grid[0] == pytest.approx(0.1)
    assert grid[10] == pytest.approx(1.0)
    assert grid[-1] == pytest.approx(10.0)


def test_parse_grid_lists_and_db():
    assert coverage_cli.parse_grid("0.5, 1, 2") == (0.5, 1.0, 2.0)
    assert coverage_cli.parse_grid("0,10", db=True) == pytest.approx((1.0, 10.0))
    assert coverage_cli.parse_grid("-10:0:lin2", db=True) == pytest.approx((0.1, 1.0))


@pytest.mark.parametrize("text", ["1:2:step3", "0:1:log5", "1:2:lin0", ""])
def test_parse_grid_rejects_malformed_grids(text):
    with pytest.raises(ValueError):
        coverage_cli.parse_grid(text)


def test_parse_rhos_sorts_numbers_and_keeps_optimal_last():
    assert coverage_cli.parse_rhos("optimal, 1, 0") == (0.0, 1.0, "optimal")


def test_run_spec_rejects_invalid_grids():
    with pytest.raises(ValueError):
        coverage_cli.RunSpec(coverage_cli.Command.ANALYTIC, thresholds=(1.0, 0.5))
    with pytest.raises(ValueError):
        coverage_cli.RunSpec(coverage_cli.Command.ANALYTIC, rhos=(1.5,))
    with pytest.raises(ValueError):
        coverage_cli.RunSpec(coverage_cli.Command.ANALYTIC, thresholds=(0.0,))


def test_config_file_values_yield_to_flags(tmp_path):
    config = write_config(tmp_path, ["# network", "lambda = 2", "threshold = 0.5,1", "rho = 0.5", "dpc = true"])
    args = coverage_cli.parse_args(["analytic", "--config", str(config), "--rho", "1"])
    spec = coverage_cli.spec_from_args(args)
    assert spec.params.intensity == 2.0
    assert spec.thresholds == (0.5, 1.0)
    assert spec.rhos == (1.0,)
    assert spec.dpc is True


def test_unreadable_config_is_a_usage_error(tmp_path):
    config = write_config(tmp_path, ["no separator here"])
    with pytest.raises(SystemExit) as excinfo:
        coverage_cli.parse_args(["analytic", "--config", str(config)])
    assert excinfo.value.code == 2


def test_optimize_and_sweep_rho_defaults():
    optimize = coverage_cli.spec_from_args(coverage_cli.parse_args(["optimize", "--rho", "0.3"]))
    assert optimize.rhos == ("optimal",)
    sweep = coverage_cli.spec_from_args(coverage_cli.parse_args(["sweep"]))
    assert sweep.rhos == (0.0, 1.0, "optimal")


def test_preset_window_simulation_config():
    spec = coverage_cli.RunSpec(coverage_cli.Command.SIMULATE, preset_window=True, realizations=50)
    config = spec.sim_config(0.5, 0.4)
    assert config.mode is SimMode.FULL_VORONOI
    assert config.realizations == 50
    assert config.params.threshold == 0.5
    assert not config.compensate_tail


def test_analytic_command_writes_reproducible_csv(tmp_path):
    first, second = tmp_path / "a.csv", tmp_path / "b.csv"
    for output in (first, second):
        argv = ["analytic", "--threshold", "0.5,1", "--rho", "1", "--no-timing", "--output", str(output)]
        assert coverage_cli.main(argv) == 0
    assert first.read_bytes() == second.read_bytes()

    frame = pd.read_csv(first)
    assert list(frame.columns) == coverage_cli.CSV_COLUMNS
    assert frame["T"].tolist() == [0.5, 1.0]
    assert frame["method"].unique().tolist() == ["analytic"]
    assert (frame["runtime_ms"] == 0).all()
    assert frame["coverage"].is_monotonic_decreasing


def test_simulate_command_reports_standard_error(tmp_path):
    output = tmp_path / "sim.csv"
    argv = ["simulate", "--threshold", "1", "--rho", "0.5", "--realizations", "2000", "--output", str(output)]
    assert coverage_cli.main(argv) == 0
    frame = pd.read_csv(output)
    assert frame.loc[0, "method"] == "shot_noise"
    assert 0.0 < frame.loc[0, "stderr_or_errbound"] < 0.02


def test_numerical_failure_exits_with_status_one(tmp_path, monkeypatch):
    def fail(spec):
        raise QuadratureError("did not converge", 1e-3, {"r2": 2.0})

    monkeypatch.setattr(coverage_cli, "evaluate", fail)
    assert coverage_cli.main(["analytic", "--output", str(tmp_path / "out.csv")]) == 1
    assert not (tmp_path / "out.csv").exists()


def test_failed_validation_exits_with_status_one(tmp_path, monkeypatch):
    frame = pd.DataFrame(
        {"check": ["ok", "broken"], "value": [1.0, 2.0], "expected": [1.0, 1.0], "tolerance": [0.0, 0.1], "passed": [True, False]}
    )
    monkeypatch.setattr(coverage_cli, "run_validation_suite", lambda params, seed: frame)
    output = tmp_path / "validate.csv"
    assert coverage_cli.main(["validate", "--output", str(output)]) == 1
    assert pd.read_csv(output)["check"].tolist() == ["ok", "broken"]


def test_invalid_parameters_are_usage_errors():
    with pytest.raises(SystemExit) as excinfo:
        coverage_cli.main(["analytic", "--beta", "2"])
    assert excinfo.value.code == 2
    with pytest.raises(SystemExit):
        coverage_cli.main(["analytic", "--threshold", "0:1:bogus"])


def test_save_targets_the_results_directory():
    spec = coverage_cli.spec_from_args(coverage_cli.parse_args(["optimize", "--save"]))
    assert spec.output == coverage_cli.RESULTS_DIR / "optimize.csv"
    explicit = coverage_cli.spec_from_args(coverage_cli.parse_args(["optimize", "--save", "--output", "x.csv"]))
    assert explicit.output == Path("x.csv")


def test_failed_user_placement_exits_with_status_one(tmp_path, monkeypatch):
    monte_carlo = importlib.import_module("coopnet.simulation.monte_carlo")

    def fail(pattern, seed, indices=None):
        raise SamplingError("Could not place a user", {"pending_cells": 1})

    monkeypatch.setattr(monte_carlo, "sample_users_in_cells", fail)
    output = tmp_path / "fv.csv"
    argv = ["simulate", "--mode", "full_voronoi", "--realizations", "5", "--output", str(output)]
    assert coverage_cli.main(argv) == 1
    assert not output.exists()
