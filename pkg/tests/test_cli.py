"""End-to-end tests of the command-line entry point."""

import io
import json
import math
from pathlib import Path

import pandas as pd
import pytest

from fracq_errors import ConfigError
from main import (
    BOX_COLUMNS,
    EXIT_CONFIG,
    EXIT_NUMERICAL,
    EXIT_OK,
    EXIT_VERIFY_FAILED,
    FOXH_COLUMNS,
    ML_COLUMNS,
    SweepConfig,
    TimeGrid,
    main,
)
from mittag_leffler import ml

DATA_DIR = Path(__file__).resolve().parent.parent / "data"
DATA_COMMANDS = {"box_half_order": "box", "ml_euler": "ml", "veff_small_time": "veff", "verify_quick": "verify"}

ML_PARAMS_TEXT = "H[1,1,1,2] upper=(0,1) lower=(0,1);(0,0.5)"
RING_PARAMS_TEXT = "H[1,1,1,1] upper=(0,1) lower=(0,1)"


def run_csv(capsys, argv):
    assert main(argv) == EXIT_OK
    return pd.read_csv(io.StringIO(capsys.readouterr().out))


def test_ml_sweep_exponential_order(capsys):
    frame = run_csv(capsys, ["ml", "--alpha", "1", "--lambda", "-1", "--t-grid", "0:1:3"])
    assert list(frame.columns) == ML_COLUMNS
    assert len(frame) == 3
    assert frame["prob"].tolist() == pytest.approx([1.0, 1.0, 1.0], abs=1e-12)
    assert frame["reT"].iloc[-1] == pytest.approx(math.cos(1.0))


def test_box_scan_starts_at_full_probability(capsys):
    frame = run_csv(capsys, ["box", "--a", str(math.pi), "--alpha", "0.5", "--t-grid", "0:1:5"])
    assert list(frame.columns) == BOX_COLUMNS
    assert frame["prob"].iloc[0] == pytest.approx(1.0)
    assert frame["prob_small_t"].iloc[0] == pytest.approx(1.0)
    assert frame["energy"].iloc[0] == pytest.approx(1.0)


def test_box_scan_large_time_column(capsys):
    frame = run_csv(
        capsys,
        ["box", "--a", str(math.pi), "--alpha", "0.5", "--t-grid", "1e-2:1e4:7:log", "--workers", "3"],
    )
    last = frame.iloc[-1]
    assert last["t"] == pytest.approx(1e4)
    assert last["prob"] == pytest.approx(1.0 / (math.pi * 1e4), rel=1e-2)
    assert last["prob_large_t"] == pytest.approx(1.0 / (math.pi * 1e4))
    assert math.isnan(frame["prob_large_t"].iloc[0])
    assert frame["t"].is_monotonic_increasing


def test_sweep_output_is_reproducible(tmp_path):
    outputs = []
    for workers in ("1", "3"):
        path = tmp_path / f"box_{workers}.csv"
        argv = ["box", "--alpha", "0.3", "0.7", "--n", "1", "2", "--t-grid", "0:5:11", "--workers", workers, "-o", str(path)]
        assert main(argv) == EXIT_OK
        outputs.append(path.read_bytes())
    assert outputs[0] == outputs[1]
    assert outputs[0].count(b"\n") == 1 + 2 * 2 * 11


def test_veff_rejects_grid_through_origin(capsys):
    assert main(["veff", "--t-grid", "0:1:5"]) == EXIT_CONFIG
    assert "configuration error" in capsys.readouterr().err


def test_veff_sweep(capsys):
    frame = run_csv(capsys, ["veff", "--a", str(math.pi), "--alpha", "0.5", "--t-grid", "0.1:1:4"])
    assert len(frame) == 4
    assert frame[["vR", "vI"]].notna().all().all()


def test_foxh_mittag_leffler(capsys):
    frame = run_csv(capsys, ["foxh", "--params", ML_PARAMS_TEXT, "--z=-1,0"])
    assert list(frame.columns) == FOXH_COLUMNS
    assert frame["h_re"].iloc[0] == pytest.approx(ml(0.5, 1.0).real, rel=1e-10)
    assert frame["mu"].iloc[0] == pytest.approx(0.5)


def test_foxh_on_convergence_ring_is_numerical_failure(capsys):
    assert main(["foxh", "--params", RING_PARAMS_TEXT, "--z=1,0"]) == EXIT_NUMERICAL
    assert "numerical failure" in capsys.readouterr().err


def test_foxh_parse_error_is_configuration_error():
    assert main(["foxh", "--params", "H[1,1] upper=", "--z=1,0"]) == EXIT_CONFIG
    assert main(["foxh", "--z=1,0"]) == EXIT_CONFIG


def test_config_file_with_override(tmp_path, capsys):
    path = tmp_path / "ml.json"
    path.write_text(json.dumps({"alpha": 1.0, "lambda": -4, "t_grid": "0:1:3"}), encoding="utf-8")
    frame = run_csv(capsys, ["ml", "--config", str(path), "--t-grid", "0:2:5"])
    assert len(frame) == 5
    assert set(frame["lambda"]) == {-4.0}


def test_config_errors(tmp_path):
    unknown = tmp_path / "unknown.json"
    unknown.write_text(json.dumps({"alpha": 0.5, "beta": 2}), encoding="utf-8")
    assert main(["ml", "--config", str(unknown)]) == EXIT_CONFIG
    broken = tmp_path / "broken.json"
    broken.write_text("{alpha: 0.5", encoding="utf-8")
    assert main(["ml", "--config", str(broken)]) == EXIT_CONFIG


@pytest.mark.parametrize(
    "data",
    [
        {"alpha": "abc"},
        {"a": "wide"},
        {"workers": "two"},
        {"workers": True},
        {"n": [1, 2.5]},
        {"t_grid": 5},
        {"tolerances": [1e-3]},
        {"tolerances": {"bromwich": "tight"}},
        {"alpha": None},
    ],
)
def test_config_value_types(tmp_path, capsys, data):
    path = tmp_path / "typed.json"
    path.write_text(json.dumps(data), encoding="utf-8")
    assert main(["ml", "--config", str(path)]) == EXIT_CONFIG
    assert "configuration error" in capsys.readouterr().err


def test_config_mapping():
    cfg = SweepConfig.from_mapping({"lambda": -2.0, "n": 3})
    assert cfg.lam == [-2.0]
    assert cfg.n == [3]
    coerced = SweepConfig.from_mapping({"alpha": 1, "n": [2.0], "workers": 3.0, "tolerances": {"bromwich": 1}})
    assert coerced.alpha == [1.0]
    assert coerced.n == [2]
    assert coerced.workers == 3
    assert coerced.tolerances == {"bromwich": 1.0}
    with pytest.raises(ConfigError):
        SweepConfig.from_mapping({"lam": [-1.0]})


@pytest.mark.parametrize("text", ["0:1", "1:0:5", "0:1:1", "0:1:5:lin", "0:1:5:log", "-1:1:5", "a:b:c"])
def test_time_grid_errors(text):
    with pytest.raises(ConfigError):
        TimeGrid.parse(text)


def test_time_grid_points():
    assert TimeGrid.parse("0:1:5").points().tolist() == pytest.approx([0.0, 0.25, 0.5, 0.75, 1.0])
    assert TimeGrid.parse("1:100:3:log").points().tolist() == pytest.approx([1.0, 10.0, 100.0])


def test_verify_single_check(capsys):
    assert main(["verify", "--only", "euler_limit"]) == EXIT_OK
    assert "1/1 checks passed" in capsys.readouterr().out


def test_verify_failure_exit_code(capsys):
    assert main(["verify", "--tol", "1e-30", "--only", "classical_potential"]) == EXIT_VERIFY_FAILED
    assert "FAIL" in capsys.readouterr().out


def test_verify_unknown_check():
    assert main(["verify", "--only", "no_such_check"]) == EXIT_CONFIG


def test_missing_command_is_usage_error():
    with pytest.raises(SystemExit) as info:
        main([])
    assert info.value.code == 2


@pytest.mark.parametrize("path", sorted(DATA_DIR.glob("*.json")), ids=lambda path: path.stem)
def test_sample_configs_run(tmp_path, path):
    command = DATA_COMMANDS[path.stem]
    argv = [command, "--config", str(path)]
    if command != "verify":
        argv += ["-o", str(tmp_path / "out.csv")]
    assert main(argv) == EXIT_OK
    if command != "verify":
        assert len(pd.read_csv(tmp_path / "out.csv")) > 0


def test_small_order_box_sweep(tmp_path):
    path = tmp_path / "box.csv"
    assert main(["box", "--alpha", "0.3", "--n", "2", "--t-grid", "0:20:11", "-o", str(path)]) == EXIT_OK
    frame = pd.read_csv(path)
    assert len(frame) == 11
    assert (frame["prob"] <= 1.0 + 1e-12).all()
