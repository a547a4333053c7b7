"""Command-line front end for the fractional quantum box toolkit.

Run from project root:
    python src/main.py ml --alpha 0.5 --lambda -1 --t-grid 0:10:101 -o ml.csv
    python src/main.py box --a 1 --n 1 2 --alpha 0.5 --t-grid 1e-3:1e4:200:log
    python src/main.py veff --alpha 0.5 0.7 --t-grid 0.01:2:100
    python src/main.py foxh --params "H[1,1,1,2] upper=(0,1) lower=(0,1);(0,0.5)" --z=-1,0
    python src/main.py verify --only euler_limit bromwich

Settings come from an optional flat JSON file (``--config``) and are
overridden by any flag given on the command line. Sweeps are written as CSV
in grid order. Exit codes: 0 ok, 1 verification failure, 2 usage or
configuration error, 3 numerical failure.
"""

import argparse
import json
import logging
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, fields, replace
from pathlib import Path
from typing import Callable, Dict, List, NamedTuple, Optional, Sequence

# Add this directory to path so the modules import when run as a script
sys.path.insert(0, str(Path(__file__).parent))

import numpy as np
import pandas as pd

from fox_h import HFunctionParams, h_classify, h_eval
from fracq_errors import ConfigError, DomainError, FracqError, NumericalError, ParamError
from mittag_leffler import MLQuery, ml, time_argument
from tfse_model import (
    BoxModel,
    box_eigenvalue,
    energy_expectation,
    time_factor,
    total_probability_large_t,
    total_probability_small_t,
    v_eff,
)
from verification import CHECKS, print_report, run_checks

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3

SMALL_TIME_LIMIT = 0.1
LARGE_TIME_LIMIT = 10.0

ML_COLUMNS = ["alpha", "lambda", "t", "reT", "imT", "prob"]
BOX_COLUMNS = ["alpha", "n", "t", "reT", "imT", "prob", "prob_small_t", "prob_large_t", "energy"]
VEFF_COLUMNS = ["alpha", "n", "t", "vR", "vI"]
FOXH_COLUMNS = ["z_re", "z_im", "h_re", "h_im", "mu", "verdict"]


@dataclass(frozen=True)
class TimeGrid:
    """Time nodes written as ``S:E:N`` (uniform) or ``S:E:N:log`` (geometric)."""

    start: float
    end: float
    count: int
    log: bool = False

    @classmethod
    def parse(cls, text: str) -> "TimeGrid":
        parts = text.strip().split(":")
        if len(parts) not in (3, 4) or (len(parts) == 4 and parts[3] != "log"):
            raise ConfigError(f"time grid must look like S:E:N[:log], got {text!r}")
        try:
            start, end, count = float(parts[0]), float(parts[1]), int(parts[2])
        except ValueError as exc:
            raise ConfigError(f"malformed time grid {text!r}: {exc}") from exc
        grid = cls(start, end, count, len(parts) == 4)
        grid.validate()
        return grid

    def validate(self) -> None:
        if self.count < 2:
            raise ConfigError(f"time grid needs at least 2 nodes, got {self.count}")
        if not self.end > self.start:
            raise ConfigError(f"time grid must be increasing, got {self.start}..{self.end}")
        if self.start < 0.0:
            raise ConfigError(f"time grid must start at t >= 0, got {self.start}")
        if self.log and self.start <= 0.0:
            raise ConfigError(f"logarithmic time grid must start above 0, got {self.start}")

    def points(self) -> np.ndarray:
        if self.log:
            return np.geomspace(self.start, self.end, self.count)
        return np.linspace(self.start, self.end, self.count)


_FLOAT_FIELDS = {"a", "d_alpha", "hbar", "mass", "tol"}
_STR_FIELDS = {"command", "t_grid", "output", "params"}
_LIST_FIELDS = {"alpha": "float", "lam": "float", "n": "int", "z": "str", "only": "str"}
_OPTIONAL_FIELDS = {"command", "output", "params", "tol", "only"}


def _as_float(key: str, value: object) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{key} must be a number, got {value!r}")
    return float(value)


def _as_int(key: str, value: object) -> int:
    if isinstance(value, float) and value.is_integer():
        return int(value)
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(f"{key} must be an integer, got {value!r}")
    return value


def _as_str(key: str, value: object) -> str:
    if not isinstance(value, str):
        raise ConfigError(f"{key} must be a string, got {value!r}")
    return value


_CONVERTERS = {"float": _as_float, "int": _as_int, "str": _as_str}


def _coerce_field(key: str, name: str, value: object) -> object:
    """Check the JSON type of one configuration value and convert it to the field's type."""

    if value is None:
        if name not in _OPTIONAL_FIELDS:
            raise ConfigError(f"{key} may not be null")
        return None
    if name in _LIST_FIELDS:
        convert = _CONVERTERS[_LIST_FIELDS[name]]
        items = value if isinstance(value, list) else [value]
        return [convert(key, item) for item in items]
    if name in _FLOAT_FIELDS:
        return _as_float(key, value)
    if name in _STR_FIELDS:
        return _as_str(key, value)
    if name == "workers":
        return _as_int(key, value)
    if not isinstance(value, dict):
        raise ConfigError(f"{key} must map check names to tolerances, got {value!r}")
    return {_as_str(key, check): _as_float(f"{key}.{check}", tol) for check, tol in value.items()}


@dataclass(frozen=True)
class SweepConfig:
    """Settings of one CLI run; the JSON key ``lambda`` maps to ``lam``."""

    command: Optional[str] = None
    alpha: List[float] = field(default_factory=lambda: [0.5])
    lam: List[float] = field(default_factory=lambda: [-1.0])
    a: float = 1.0
    n: List[int] = field(default_factory=lambda: [1])
    d_alpha: float = 1.0
    hbar: float = 1.0
    mass: float = 0.5
    t_grid: str = "0:10:101"
    output: Optional[str] = None
    workers: int = 1
    params: Optional[str] = None
    z: List[str] = field(default_factory=lambda: ["-1,0"])
    tolerances: Dict[str, float] = field(default_factory=dict)
    tol: Optional[float] = None
    only: Optional[List[str]] = None

    @classmethod
    def from_mapping(cls, data: Dict[str, object]) -> "SweepConfig":
        known = {f.name for f in fields(cls)}
        values = {}
        for key, value in data.items():
            name = "lam" if key == "lambda" else key
            if name not in known or key == "lam":
                raise ConfigError(f"unknown configuration key {key!r}")
            values[name] = _coerce_field(key, name, value)
        return cls(**values)

    @classmethod
    def from_file(cls, path: Path) -> "SweepConfig":
        try:
            with open(path, "r", encoding="utf-8") as file:
                data = json.load(file)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read configuration {path}: {exc}") from exc
        if not isinstance(data, dict):
            raise ConfigError(f"configuration {path} must hold a JSON object")
        return cls.from_mapping(data)

    def with_overrides(self, args: argparse.Namespace) -> "SweepConfig":
        """Replace every field whose flag was given on the command line."""

        changes = {
            f.name: getattr(args, f.name)
            for f in fields(self)
            if getattr(args, f.name, None) is not None
        }
        return replace(self, **changes)

    def time_points(self) -> np.ndarray:
        return TimeGrid.parse(self.t_grid).points()

    def models(self) -> List[BoxModel]:
        return [
            BoxModel(a=self.a, n=n, alpha=alpha, d_alpha=self.d_alpha, hbar=self.hbar, mass=self.mass)
            for alpha in self.alpha
            for n in self.n
        ]


class SweepFailure(FracqError):
    """A numerical failure at one sweep node."""

    def __init__(self, where: str, cause: Exception) -> None:
        super().__init__(f"{where}: {type(cause).__name__}: {cause}")
        self.where = where
        self.cause = cause


class _Task(NamedTuple):
    where: str
    run: Callable[[], Dict[str, object]]


def _parse_z(text: str) -> complex:
    try:
        re_part, im_part = (float(part) for part in text.split(","))
    except ValueError as exc:
        raise ConfigError(f"z must look like RE,IM, got {text!r}") from exc
    return complex(re_part, im_part)


def _run_task(task: _Task) -> Dict[str, object]:
    try:
        return task.run()
    except (NumericalError, DomainError) as exc:
        raise SweepFailure(task.where, exc) from exc


def _sweep(cfg: SweepConfig, tasks: Sequence[_Task], columns: List[str]) -> int:
    with ThreadPoolExecutor(max_workers=max(1, cfg.workers)) as executor:
        rows = list(executor.map(_run_task, tasks))
    frame = pd.DataFrame(rows, columns=columns)
    frame.to_csv(
        cfg.output if cfg.output else sys.stdout,
        index=False,
        float_format="%.17g",
        na_rep="",
        lineterminator="\n",
    )
    logger.info("wrote %d rows", len(frame))
    return EXIT_OK


# {{{ commands


def run_ml_sweep(cfg: SweepConfig) -> int:
    """Time factor ``E_alpha(lambda i**alpha t**alpha)`` over alpha, lambda and the grid."""

    times = cfg.time_points()
    for alpha in cfg.alpha:
        MLQuery(alpha=alpha)

    def row(alpha: float, lam: float, t: float) -> Dict[str, object]:
        value = ml(alpha, time_argument(alpha, lam, t))
        return {"alpha": alpha, "lambda": lam, "t": t, "reT": value.real, "imT": value.imag, "prob": abs(value) ** 2}

    tasks = [
        _Task(f"alpha={alpha}, lambda={lam}, t={t}", lambda alpha=alpha, lam=lam, t=float(t): row(alpha, lam, t))
        for alpha in cfg.alpha
        for lam in cfg.lam
        for t in times
    ]
    return _sweep(cfg, tasks, ML_COLUMNS)


def _box_row(model: BoxModel, t: float) -> Dict[str, object]:
    value = time_factor(model, t)
    scaled = abs(box_eigenvalue(model)) * t**model.alpha
    return {
        "alpha": model.alpha,
        "n": model.n,
        "t": t,
        "reT": value.real,
        "imT": value.imag,
        "prob": abs(value) ** 2,
        "prob_small_t": total_probability_small_t(model, t) if scaled <= SMALL_TIME_LIMIT else None,
        "prob_large_t": total_probability_large_t(model, t) if scaled >= LARGE_TIME_LIMIT else None,
        "energy": energy_expectation(model, t),
    }


def run_box_scan(cfg: SweepConfig) -> int:
    """Probability and energy of the box modes over the grid."""

    times = cfg.time_points()
    tasks = [
        _Task(
            f"alpha={model.alpha}, lambda={box_eigenvalue(model)}, t={t}",
            lambda model=model, t=float(t): _box_row(model, t),
        )
        for model in cfg.models()
        for t in times
    ]
    return _sweep(cfg, tasks, BOX_COLUMNS)


def run_veff_sweep(cfg: SweepConfig) -> int:
    """Complex effective potential of the box modes; the grid must start above 0."""

    grid = TimeGrid.parse(cfg.t_grid)
    if grid.start <= 0.0:
        raise ConfigError("the effective potential grid must start above t = 0")

    def row(model: BoxModel, t: float) -> Dict[str, object]:
        sample = v_eff(model, t)
        return {"alpha": model.alpha, "n": model.n, "t": t, "vR": sample.v_r, "vI": sample.v_i}

    tasks = [
        _Task(
            f"alpha={model.alpha}, lambda={box_eigenvalue(model)}, t={t}",
            lambda model=model, t=float(t): row(model, t),
        )
        for model in cfg.models()
        for t in grid.points()
    ]
    return _sweep(cfg, tasks, VEFF_COLUMNS)


def run_fox_eval(cfg: SweepConfig) -> int:
    """Evaluate one serialized H-function at every requested argument."""

    if not cfg.params:
        raise ConfigError("foxh needs --params")
    params = HFunctionParams.from_text(cfg.params)
    convergence = h_classify(params)

    def row(z: complex) -> Dict[str, object]:
        value = h_eval(params, z)
        return {
            "z_re": z.real,
            "z_im": z.imag,
            "h_re": value.real,
            "h_im": value.imag,
            "mu": convergence.mu,
            "verdict": convergence.verdict.value,
        }

    tasks = [_Task(f"params={params}, z={text}", lambda z=_parse_z(text): row(z)) for text in cfg.z]
    return _sweep(cfg, tasks, FOXH_COLUMNS)


def run_verify(cfg: SweepConfig) -> int:
    """Run the acceptance checks; exit code 1 when any fails."""

    names = cfg.only
    if names:
        unknown = [name for name in names if name not in CHECKS]
        if unknown:
            raise ConfigError(f"unknown checks: {', '.join(unknown)}; known: {', '.join(CHECKS)}")
    results = run_checks(names=names, tol=cfg.tol, tolerances=cfg.tolerances)
    return EXIT_OK if print_report(results) else EXIT_VERIFY_FAILED


# }}}


def _add_common_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", type=Path, help="Flat JSON file with default settings")
    parser.add_argument("-o", "--output", help="CSV destination (stdout when omitted)")
    parser.add_argument("--workers", type=int, help="Threads used for the sweep")
    parser.add_argument("-v", "--verbose", action="store_true", help="Log debug details to stderr")


def _add_model_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--a", type=float, help="Well width")
    parser.add_argument("--n", type=int, nargs="+", help="Quantum numbers")
    parser.add_argument("--alpha", type=float, nargs="+", help="Fractional orders in (0, 1]")
    parser.add_argument("--d-alpha", dest="d_alpha", type=float, help="Generalized diffusion coefficient")
    parser.add_argument("--hbar", type=float)
    parser.add_argument("--mass", type=float)
    parser.add_argument("--t-grid", dest="t_grid", help="Time grid S:E:N or S:E:N:log")


def build_arg_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(description="Time-fractional quantum box utilities")
    subparsers = parser.add_subparsers(dest="command", required=True)

    ml_parser = subparsers.add_parser("ml", help="Sweep the Mittag-Leffler time factor")
    _add_common_options(ml_parser)
    ml_parser.add_argument("--alpha", type=float, nargs="+", help="Fractional orders in (0, 1]")
    ml_parser.add_argument("--lambda", dest="lam", type=float, nargs="+", help="Separation constants")
    ml_parser.add_argument("--t-grid", dest="t_grid", help="Time grid S:E:N or S:E:N:log")
    ml_parser.set_defaults(func=run_ml_sweep)

    box_parser = subparsers.add_parser("box", help="Probability and energy of box modes")
    _add_common_options(box_parser)
    _add_model_options(box_parser)
    box_parser.set_defaults(func=run_box_scan)

    veff_parser = subparsers.add_parser("veff", help="Complex effective potential of box modes")
    _add_common_options(veff_parser)
    _add_model_options(veff_parser)
    veff_parser.set_defaults(func=run_veff_sweep)

    fox_parser = subparsers.add_parser("foxh", help="Evaluate a Fox H-function")
    _add_common_options(fox_parser)
    fox_parser.add_argument("--params", help='Parameters, e.g. "H[1,1,1,2] upper=(0,1) lower=(0,1);(0,0.5)"')
    fox_parser.add_argument("--z", nargs="+", help="Arguments RE,IM")
    fox_parser.set_defaults(func=run_fox_eval)

    verify_parser = subparsers.add_parser("verify", help="Run the acceptance checks")
    _add_common_options(verify_parser)
    verify_parser.add_argument("--tol", type=float, help="Tolerance for every upper-bounded check")
    verify_parser.add_argument("--only", nargs="+", help="Names of the checks to run")
    verify_parser.set_defaults(func=run_verify)

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_arg_parser()
    args = parser.parse_args(argv)

    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    logging.captureWarnings(True)

    try:
        cfg = SweepConfig.from_file(args.config) if args.config else SweepConfig()
        cfg = cfg.with_overrides(args)
        return args.func(cfg)
    except SweepFailure as exc:
        print(f"numerical failure at {exc.where}: {exc.cause}", file=sys.stderr)
        return EXIT_NUMERICAL
    except ParamError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (NumericalError, DomainError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (ArithmeticError, ValueError) as exc:
        logger.debug("unexpected failure", exc_info=True)
        print(f"numerical failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
