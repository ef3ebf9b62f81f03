"""Monte Carlo configuration objects."""
from __future__ import annotations

import math
from dataclasses import dataclass, replace
from enum import Enum

from coopnet.errors import SamplingError
from coopnet.geometry import Window, preset_window
from coopnet.settings import DEFAULT_PARAMS, PRESET_REALIZATIONS, PRESET_WINDOW_AREA, SystemParams

MIN_EXPECTED_ATOMS = 10.0
DEFAULT_BLOCK_SIZE = 4096
# Half-extent of the default FullVoronoi window, in units of 1/√λ.
WINDOW_HALF_EXTENT_FACTOR = 5.0


class SimMode(str, Enum):
    SHOT_NOISE = "shot_noise"
    FULL_VORONOI = "full_voronoi"


def default_window(intensity: float) -> Window:
    """Square window centred on the typical location, never smaller than the preset window."""
    half_extent = max(WINDOW_HALF_EXTENT_FACTOR / math.sqrt(intensity), math.sqrt(PRESET_WINDOW_AREA) / 2.0)
    return Window.centered(half_extent)


@dataclass(frozen=True)
class SimConfig:
    """Everything that determines a Monte Carlo coverage estimate.

    ``outer_radius`` bounds the sampled interferers in ShotNoise mode (default
    10/√λ); FullVoronoi counts every atom of the window other than the serving
    ones and sums their exact powers, with no far-field term beyond the window.
    With ``compensate_tail`` the ShotNoise sampler adds the mean power of the
    unsampled far field to every draw.
    """

    params: SystemParams = DEFAULT_PARAMS
    rho: float = 1.0
    dpc: bool = False
    mode: SimMode = SimMode.SHOT_NOISE
    realizations: int = 100_000
    seed: int = 0
    window: Window | None = None
    outer_radius: float | None = None
    compensate_tail: bool = True
    workers: int | None = None
    block_size: int = DEFAULT_BLOCK_SIZE

    def __post_init__(self) -> None:
        if self.realizations < 1:
            raise ValueError(f"realizations must be at least 1, got {self.realizations}")
        if not 0.0 <= self.rho <= 1.0:
            raise ValueError(f"rho must lie in [0, 1], got {self.rho}")
        if self.seed < 0:
            raise ValueError(f"seed must be non-negative, got {self.seed}")
        if self.block_size < 1:
            raise ValueError(f"block_size must be positive, got {self.block_size}")
        if self.workers is not None and self.workers < 1:
            raise ValueError(f"workers must be positive, got {self.workers}")
        if self.outer_radius is not None and not self.outer_radius > 0:
            raise ValueError(f"outer_radius must be positive, got {self.outer_radius}")
        mode = SimMode(self.mode)
        object.__setattr__(self, "mode", mode)
        if mode is SimMode.FULL_VORONOI:
            expected = self.params.intensity * self.resolved_window.area
            if expected < MIN_EXPECTED_ATOMS:
                raise ValueError(
                    f"FullVoronoi needs at least {MIN_EXPECTED_ATOMS:g} expected atoms in the window, got {expected:.3g}"
                )

    @property
    def resolved_window(self) -> Window:
        return self.window if self.window is not None else default_window(self.params.intensity)

    def with_threshold(self, threshold: float) -> "SimConfig":
        return replace(self, params=self.params.with_threshold(threshold))


def preset_config(
    params: SystemParams = DEFAULT_PARAMS,
    rho: float = 1.0,
    dpc: bool = False,
    seed: int = 0,
) -> SimConfig:
    """Finite-window protocol: a 20 m² window, 10⁴ realizations, no far-field correction."""
    return SimConfig(
        params=params,
        rho=rho,
        dpc=dpc,
        mode=SimMode.FULL_VORONOI,
        realizations=PRESET_REALIZATIONS,
        seed=seed,
        window=preset_window(),
        compensate_tail=False,
    )


@dataclass(frozen=True)
class SimEstimate:
    coverage: float
    stderr: float
    n_effective: int

    def __post_init__(self) -> None:
        if not 0.0 <= self.coverage <= 1.0:
            raise ValueError(f"coverage must lie in [0, 1], got {self.coverage}")
        if self.stderr < 0:
            raise ValueError(f"stderr must be non-negative, got {self.stderr}")

    @classmethod
    def from_counts(cls, hits: int, n_effective: int) -> "SimEstimate":
        if n_effective == 0:
            raise SamplingError("no realization had the two atoms needed to evaluate coverage")
        coverage = hits / n_effective
        return cls(coverage, math.sqrt(coverage * (1.0 - coverage) / n_effective), n_effective)
