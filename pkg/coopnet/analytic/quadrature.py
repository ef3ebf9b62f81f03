"""Fixed-panel Gauss–Legendre rules and the tolerances of the nested coverage integrals."""
from __future__ import annotations

import math
from dataclasses import dataclass, replace
from functools import lru_cache

import numpy as np
from scipy.special import roots_legendre


@lru_cache(maxsize=32)
def _reference_rule(nodes: int) -> tuple[np.ndarray, np.ndarray]:
    x, w = roots_legendre(nodes)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def gauss_legendre(lo: float, hi: float, nodes: int) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and weights of an ``nodes``-point rule on [lo, hi]."""
    x, w = _reference_rule(nodes)
    half = 0.5 * (hi - lo)
    return 0.5 * (hi + lo) + half * x, half * w


def panel_rule(edges, nodes: int) -> tuple[np.ndarray, np.ndarray]:
    """Composite rule over consecutive panels; vectorized over the edge array."""
    edges = np.asarray(edges, dtype=float)
    x, w = _reference_rule(nodes)
    lo, hi = edges[:-1, None], edges[1:, None]
    half = 0.5 * (hi - lo)
    return (0.5 * (hi + lo) + half * x).ravel(), (half * w).ravel()


@dataclass(frozen=True)
class QuadratureConfig:
    """Node counts and tolerances of the coverage integral.

    The outer integral runs over t = √(λπ r2²) on ``radial_edges`` (t ≤ √30) and
    over v = r1/r2 split at ρ; the FullCoop kernel integrates over s on a
    geometric-then-linear panel sequence until the envelope of |ℒ_I| drops below
    ``inner_tolerance``.
    """

    radial_edges: tuple[float, ...] = (0.0, 1.0, 2.0, 3.0, 4.0, math.sqrt(30.0))
    radial_nodes: int = 12
    ratio_nodes: int = 16
    s_nodes: int = 10
    first_panel_fraction: float = 0.25
    s_growth: float = 2.0
    panels_per_batch: int = 16
    inner_tolerance: float = 1e-7
    outer_tolerance: float = 1e-5
    s_cap: float = 1e4
    estimate_error: bool = True

    def __post_init__(self) -> None:
        if min(self.radial_nodes, self.ratio_nodes, self.s_nodes, self.panels_per_batch) < 1:
            raise ValueError("node counts must be positive")
        if not self.s_growth > 1:
            raise ValueError(f"s_growth must exceed 1, got {self.s_growth}")
        if not 0 < self.first_panel_fraction <= 1:
            raise ValueError("first_panel_fraction must lie in (0, 1]")
        if list(self.radial_edges) != sorted(self.radial_edges) or self.radial_edges[0] != 0.0:
            raise ValueError("radial_edges must be increasing and start at 0")

    def coarse(self) -> "QuadratureConfig":
        """A cheaper outer rule used to estimate the discretization error."""
        return replace(
            self,
            radial_nodes=max(4, (2 * self.radial_nodes) // 3),
            ratio_nodes=max(4, (2 * self.ratio_nodes) // 3),
            estimate_error=False,
        )

    @property
    def radial_rule(self) -> tuple[np.ndarray, np.ndarray]:
        return panel_rule(self.radial_edges, self.radial_nodes)
