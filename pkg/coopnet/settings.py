"""Project-wide configuration helpers, system parameters and directory constants."""
from __future__ import annotations

import math
import os
from dataclasses import dataclass, replace
from pathlib import Path

PROJECT_ROOT = Path(__file__).resolve().parent.parent
DATA_DIR = PROJECT_ROOT / "data"
RESULTS_DIR = DATA_DIR / "results"

THREADS_ENV_VAR = "COOPNET_THREADS"

# Finite-window simulation protocol: E[N] = 20 at λ = 1.
PRESET_WINDOW_AREA = 20.0
PRESET_REALIZATIONS = 10_000


def ensure_directories() -> None:
    """Create the expected data directories if they do not already exist."""
    for directory in (DATA_DIR, RESULTS_DIR):
        directory.mkdir(parents=True, exist_ok=True)


def thread_limit() -> int:
    """Number of workers allowed for sweeps and Monte Carlo blocks."""
    raw = os.environ.get(THREADS_ENV_VAR, "").strip()
    if not raw:
        return os.cpu_count() or 1
    try:
        value = int(raw)
    except ValueError as exc:
        raise ValueError(f"{THREADS_ENV_VAR} must be a positive integer, got {raw!r}") from exc
    if value < 1:
        raise ValueError(f"{THREADS_ENV_VAR} must be a positive integer, got {value}")
    return value


@dataclass(frozen=True)
class SystemParams:
    """Network constants shared by every computation.

    ``intensity`` is the BS density λ (1/m²), ``beta`` the path-loss exponent,
    ``power`` the per-user transmit power p, ``noise`` the noise power σ² and
    ``threshold`` the SINR threshold T (linear units).
    """

    intensity: float = 1.0
    beta: float = 4.0
    power: float = 1.0
    noise: float = 1.0
    threshold: float = 1.0

    def __post_init__(self) -> None:
        if not self.intensity > 0:
            raise ValueError(f"intensity must be positive, got {self.intensity}")
        if not self.beta > 2:
            raise ValueError(f"beta must exceed 2, got {self.beta}")
        if not self.power > 0:
            raise ValueError(f"power must be positive, got {self.power}")
        if not self.noise >= 0:
            raise ValueError(f"noise must be non-negative, got {self.noise}")
        if not self.threshold > 0:
            raise ValueError(f"threshold must be positive, got {self.threshold}")
        for name in ("intensity", "beta", "power", "noise", "threshold"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")

    def with_threshold(self, threshold: float) -> "SystemParams":
        return replace(self, threshold=threshold)


DEFAULT_PARAMS = SystemParams(intensity=1.0, beta=4.0, power=1.0, noise=1.0, threshold=1.0)
