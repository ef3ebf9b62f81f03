"""Evaluate, simulate and optimize coverage with cooperation and write the results as CSV."""
from __future__ import annotations

import argparse
import logging
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from enum import Enum
from pathlib import Path
from typing import Sequence

import numpy as np
import pandas as pd

from coopnet.analytic import CoverageIntegrator, optimize_rho
from coopnet.errors import CoverageError
from coopnet.settings import DEFAULT_PARAMS, RESULTS_DIR, SystemParams, ensure_directories, thread_limit
from coopnet.simulation import SimConfig, SimMode, preset_config, simulate_coverage
from coopnet.validation import run_validation_suite

CSV_COLUMNS = ["T", "rho", "method", "dpc", "coverage", "stderr_or_errbound", "runtime_ms"]
OPTIMAL = "optimal"
DEFAULT_REALIZATIONS = 100_000

# Config-file keys that differ from the argparse destinations.
_CONFIG_ALIASES = {"lambda": "intensity", "threshold": "thresholds", "rho": "rhos"}
_BOOLEAN_KEYS = {"db", "dpc_both_terms", "preset_window", "with_simulation", "no_timing", "save"}


class Command(str, Enum):
    ANALYTIC = "analytic"
    SIMULATE = "simulate"
    OPTIMIZE = "optimize"
    SWEEP = "sweep"
    VALIDATE = "validate"


@dataclass(frozen=True)
class RunSpec:
    """A fully parsed command: what to evaluate, on which grids, and where to write it."""

    command: Command
    params: SystemParams = DEFAULT_PARAMS
    thresholds: tuple[float, ...] = (1.0,)
    rhos: tuple[float | str, ...] = (1.0,)
    dpc: bool = False
    dpc_both_terms: bool = False
    mode: SimMode = SimMode.SHOT_NOISE
    realizations: int | None = None
    seed: int = 0
    preset_window: bool = False
    with_simulation: bool = False
    timing: bool = True
    output: Path | None = None

    def __post_init__(self) -> None:
        if not self.thresholds:
            raise ValueError("the threshold grid is empty")
        if any(not t > 0 for t in self.thresholds):
            raise ValueError("thresholds must be positive")
        if list(self.thresholds) != sorted(self.thresholds):
            raise ValueError("thresholds must be sorted")
        if not self.rhos:
            raise ValueError("the rho grid is empty")
        numeric = [rho for rho in self.rhos if rho != OPTIMAL]
        if any(not 0.0 <= rho <= 1.0 for rho in numeric):
            raise ValueError("rho values must lie in [0, 1]")
        if numeric != sorted(numeric):
            raise ValueError("rho values must be sorted")

    def sim_config(self, threshold: float, rho: float) -> SimConfig:
        params = self.params.with_threshold(threshold)
        if self.preset_window:
            config = preset_config(params, rho, self.dpc, self.seed)
            if self.realizations is not None:
                config = replace(config, realizations=self.realizations)
            return config
        return SimConfig(
            params=params,
            rho=rho,
            dpc=self.dpc,
            mode=self.mode,
            realizations=self.realizations or DEFAULT_REALIZATIONS,
            seed=self.seed,
        )


def parse_bool(text: str | bool) -> bool:
    if isinstance(text, bool):
        return text
    lowered = text.strip().lower()
    if lowered in {"true", "1", "yes", "on"}:
        return True
    if lowered in {"false", "0", "no", "off"}:
        return False
    raise argparse.ArgumentTypeError(f"expected true or false, got {text!r}")


def parse_grid(text: str, *, db: bool = False) -> tuple[float, ...]:
    """Parse ``start:stop:logN``, ``start:stop:linN`` or a comma list; dB values are converted."""
    text = text.strip()
    if text.count(":") == 2:
        start_text, stop_text, spec = text.split(":")
        start, stop = float(start_text), float(stop_text)
        kind, count_text = spec[:3].lower(), spec[3:]
        if kind not in {"log", "lin"} or not count_text.isdigit() or int(count_text) < 1:
            raise ValueError(f"grid step must read logN or linN, got {spec!r}")
        count = int(count_text)
        if kind == "log":
            if db:
                raise ValueError("log grids are not available in dB; use a linear grid of dB values")
            if start <= 0 or stop <= 0:
                raise ValueError("log grids need positive end points")
            values = np.geomspace(start, stop, count)
        else:
            values = np.linspace(start, stop, count)
    else:
        values = np.array([float(item) for item in text.split(",") if item.strip()])
    if db:
        values = np.power(10.0, values / 10.0)
    if not len(values):
        raise ValueError("empty grid")
    return tuple(float(v) for v in values)


def parse_rhos(text: str) -> tuple[float | str, ...]:
    values: list[float | str] = []
    for item in text.split(","):
        item = item.strip().lower()
        if not item:
            continue
        values.append(OPTIMAL if item == OPTIMAL else float(item))
    numeric = sorted(v for v in values if v != OPTIMAL)
    return tuple(numeric) + ((OPTIMAL,) if OPTIMAL in values else ())


def load_config_file(path: Path) -> dict[str, object]:
    """Read flat ``key=value`` lines; ``#`` starts a comment."""
    settings: dict[str, object] = {}
    for number, line in enumerate(path.read_text(encoding="utf-8").splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"{path}:{number}: expected key=value, got {line!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        key = _CONFIG_ALIASES.get(key, key.replace("-", "_"))
        settings[key] = parse_bool(value) if key in _BOOLEAN_KEYS else value
    return settings


def _common_parser(defaults: dict[str, object]) -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(add_help=False)
    parser.add_argument("--config", type=Path, help="Flat key=value file; explicit flags take precedence.")
    parser.add_argument("--lambda", dest="intensity", type=float, default=DEFAULT_PARAMS.intensity, help="BS density λ.")
    parser.add_argument("--beta", type=float, default=DEFAULT_PARAMS.beta, help="Path-loss exponent (> 2).")
    parser.add_argument("--power", type=float, default=DEFAULT_PARAMS.power, help="Per-user transmit power p.")
    parser.add_argument("--noise", type=float, default=DEFAULT_PARAMS.noise, help="Noise power σ².")
    parser.add_argument(
        "--threshold",
        "--thresholds",
        dest="thresholds",
        default=str(DEFAULT_PARAMS.threshold),
        help="SINR threshold T: a value, a comma list or start:stop:logN|linN.",
    )
    parser.add_argument("--db", action="store_true", help="Read thresholds in dB.")
    parser.add_argument("--rho", dest="rhos", default=None, help="Comma list of ρ values; 'optimal' runs the optimizer.")
    parser.add_argument("--dpc", type=parse_bool, default=False, help="Dirty paper coding: true or false.")
    parser.add_argument(
        "--dpc-both-terms",
        action="store_true",
        help="Apply DPC to the NoCoop term as well (literal reading of the coverage formula).",
    )
    parser.add_argument("--mode", type=SimMode, choices=list(SimMode), default=SimMode.SHOT_NOISE, help="Simulator mode.")
    parser.add_argument("--realizations", type=int, default=None, help="Monte Carlo realizations.")
    parser.add_argument("--seed", type=int, default=0, help="Master seed of the simulator.")
    parser.add_argument("--preset-window", action="store_true", help="Simulate the finite 20 m² window protocol.")
    parser.add_argument("--no-timing", action="store_true", help="Write runtime_ms as 0 for reproducible output.")
    parser.add_argument("--output", type=Path, default=None, help="CSV destination (default: stdout).")
    parser.add_argument("--save", action="store_true", help="Write to data/results/<command>.csv unless --output is given.")
    parser.add_argument(
        "--log-level",
        choices=["DEBUG", "INFO", "WARNING", "ERROR"],
        default="INFO",
        help="Set the logging level (default: INFO)",
    )
    parser.set_defaults(**defaults)
    return parser


def build_parser(defaults: dict[str, object] | None = None) -> argparse.ArgumentParser:
    common = _common_parser(defaults or {})
    parser = argparse.ArgumentParser(
        prog="coopnet",
        description="Coverage probability of cellular networks with pairwise BS cooperation.",
    )
    commands = parser.add_subparsers(dest="command", required=True)
    commands.add_parser("analytic", parents=[common], help="Analytic coverage for each (T, ρ).")
    commands.add_parser("simulate", parents=[common], help="Monte Carlo coverage for each (T, ρ).")
    commands.add_parser("optimize", parents=[common], help="Optimal ρ for each T.")
    sweep = commands.add_parser("sweep", parents=[common], help="Analytic curves over the T grid for every ρ.")
    sweep.add_argument("--with-simulation", action="store_true", help="Append Monte Carlo rows for every point.")
    commands.add_parser("validate", parents=[common], help="Run the invariant suite.")
    return parser


def parse_args(argv: Sequence[str] | None = None) -> argparse.Namespace:
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config", type=Path, default=None)
    known, _ = pre.parse_known_args(argv)
    defaults: dict[str, object] = {}
    parser = build_parser()
    if known.config is not None:
        try:
            defaults = load_config_file(known.config)
        except (OSError, ValueError, argparse.ArgumentTypeError) as exc:
            parser.error(f"cannot read config file: {exc}")
        parser = build_parser(defaults)
    return parser.parse_args(argv)


def spec_from_args(args: argparse.Namespace) -> RunSpec:
    command = Command(args.command)
    params = SystemParams(
        intensity=float(args.intensity),
        beta=float(args.beta),
        power=float(args.power),
        noise=float(args.noise),
        threshold=DEFAULT_PARAMS.threshold,
    )
    rho_text = args.rhos if args.rhos is not None else ("0,1,optimal" if command is Command.SWEEP else "1")
    rhos = parse_rhos(str(rho_text))
    if command is Command.OPTIMIZE:
        rhos = (OPTIMAL,)
    return RunSpec(
        command=command,
        params=params,
        thresholds=tuple(sorted(set(parse_grid(str(args.thresholds), db=bool(args.db))))),
        rhos=rhos,
        dpc=bool(args.dpc),
        dpc_both_terms=bool(args.dpc_both_terms),
        mode=SimMode(args.mode),
        realizations=args.realizations,
        seed=int(args.seed),
        preset_window=bool(args.preset_window),
        with_simulation=bool(getattr(args, "with_simulation", False)),
        timing=not args.no_timing,
        output=args.output or (RESULTS_DIR / f"{command.value}.csv" if args.save else None),
    )


def _row(spec: RunSpec, threshold: float, rho: float, method: str, coverage: float, error: float, started: float) -> dict:
    runtime = (time.perf_counter() - started) * 1000.0 if spec.timing else 0.0
    return {
        "T": threshold,
        "rho": rho,
        "method": method,
        "dpc": "true" if spec.dpc else "false",
        "coverage": coverage,
        "stderr_or_errbound": error,
        "runtime_ms": runtime,
    }


def _simulation_row(spec: RunSpec, threshold: float, rho: float) -> dict:
    started = time.perf_counter()
    config = spec.sim_config(threshold, rho)
    estimate = simulate_coverage(config)
    return _row(spec, threshold, rho, config.mode.value, estimate.coverage, estimate.stderr, started)


def _analytic_rows(spec: RunSpec, threshold: float) -> list[dict]:
    integrator = CoverageIntegrator(spec.params.with_threshold(threshold))
    rows = []
    for rho in spec.rhos:
        started = time.perf_counter()
        if rho == OPTIMAL:
            optimum = optimize_rho(integrator.params, spec.dpc, dpc_both_terms=spec.dpc_both_terms, integrator=integrator)
            result = integrator.evaluate(optimum.rho_star, spec.dpc, spec.dpc_both_terms)
            rows.append(_row(spec, threshold, optimum.rho_star, OPTIMAL, result.coverage, result.error_estimate, started))
        else:
            result = integrator.evaluate(rho, spec.dpc, spec.dpc_both_terms)
            rows.append(_row(spec, threshold, rho, "analytic", result.coverage, result.error_estimate, started))
    if spec.with_simulation:
        for row in list(rows):
            rows.append(_simulation_row(spec, threshold, float(row["rho"])))
    return rows


def _simulate_rows(spec: RunSpec, threshold: float) -> list[dict]:
    rows = []
    for rho in spec.rhos:
        if rho == OPTIMAL:
            rho = optimize_rho(spec.params.with_threshold(threshold), spec.dpc, dpc_both_terms=spec.dpc_both_terms).rho_star
        rows.append(_simulation_row(spec, threshold, float(rho)))
    return rows


def evaluate(spec: RunSpec) -> pd.DataFrame:
    """Rows for every grid point in grid order."""
    logger = logging.getLogger(__name__)
    if spec.command is Command.VALIDATE:
        return run_validation_suite(spec.params, seed=spec.seed)

    task = _simulate_rows if spec.command is Command.SIMULATE else _analytic_rows
    workers = 1 if spec.command is Command.SIMULATE else min(thread_limit(), len(spec.thresholds))
    logger.info(f"{spec.command.value}: {len(spec.thresholds)} threshold(s) x {len(spec.rhos)} rho value(s)")
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            chunks = list(pool.map(lambda threshold: task(spec, threshold), spec.thresholds))
    else:
        chunks = [task(spec, threshold) for threshold in spec.thresholds]
    return pd.DataFrame([row for chunk in chunks for row in chunk], columns=CSV_COLUMNS)


def write_csv(frame: pd.DataFrame, output: Path | None) -> None:
    if output is None:
        frame.to_csv(sys.stdout, index=False, float_format="%.10g", lineterminator="\n")
        return
    if output.parent == RESULTS_DIR:
        ensure_directories()
    output.parent.mkdir(parents=True, exist_ok=True)
    frame.to_csv(output, index=False, float_format="%.10g", encoding="utf-8", lineterminator="\n")


def run(spec: RunSpec) -> int:
    """Evaluate ``spec``, write its CSV and return the process exit status."""
    logger = logging.getLogger(__name__)
    try:
        frame = evaluate(spec)
    except CoverageError as exc:
        logger.error(f"Numerical failure: {exc}")
        for key, value in exc.diagnostics.items():
            logger.error(f"  {key}: {value}")
        return 1
    except ValueError as exc:
        logger.error(f"Invalid run specification: {exc}")
        return 2
    write_csv(frame, spec.output)
    if spec.output is not None:
        logger.info(f"Wrote {len(frame)} rows to {spec.output}")
    if spec.command is Command.VALIDATE and not frame["passed"].all():
        return 1
    return 0


def main(argv: Sequence[str] | None = None) -> int:
    args = parse_args(argv)

    logging.basicConfig(
        level=getattr(logging, args.log_level),
        format='[%(asctime)s] %(levelname)s: %(message)s',
        datefmt='%H:%M:%S',
        stream=sys.stderr,
    )
    try:
        spec = spec_from_args(args)
    except ValueError as exc:
        build_parser().error(str(exc))
    return run(spec)


if __name__ == "__main__":
    sys.exit(main())
