"""Rayleigh fading draws and the beneficial-signal algebra of a cooperating pair."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from coopnet.geometry import Action
from coopnet.geometry.point_process import SeedLike, as_generator


@dataclass(frozen=True)
class FadingDraw:
    """Exponential power ``g`` and uniform phase ``theta`` (scalars or equal-shape arrays)."""

    g: float | np.ndarray
    theta: float | np.ndarray


def sample_fading(mean_power: float, seed: SeedLike, size: int | None = None) -> FadingDraw:
    if not (math.isfinite(mean_power) and mean_power > 0):
        raise ValueError(f"mean_power must be positive, got {mean_power}")
    rng = as_generator(seed)
    g = rng.exponential(mean_power, size=size)
    theta = rng.uniform(0.0, 2.0 * np.pi, size=size)
    return FadingDraw(g=g, theta=theta)


def _check_split(a: float) -> None:
    if not 0.0 <= a <= 0.5:
        raise ValueError(f"power split a must lie in [0, 1/2], got {a}")


def beneficial_signal(a: float, p: float, h1, h2, phase_diff):
    """Received power when a fraction ``a`` of the power carries the common message."""
    _check_split(a)
    h1 = np.asarray(h1, dtype=float)
    h2 = np.asarray(h2, dtype=float)
    if (h1 < 0).any() or (h2 < 0).any():
        raise ValueError("channel gains must be non-negative")
    signal = h1 * (1.0 - a) * p + h2 * a * p + 2.0 * a * p * np.sqrt(h1 * h2) * np.cos(phase_diff)
    return float(signal) if np.ndim(signal) == 0 else signal


def mean_beneficial_signal(a: float, p: float, h1, h2):
    """Phase-averaged beneficial signal; the cross term vanishes in expectation."""
    _check_split(a)
    result = np.asarray(h1, dtype=float) * (1.0 - a) * p + np.asarray(h2, dtype=float) * a * p
    return float(result) if np.ndim(result) == 0 else result


def optimal_split(h1: float, h2: float) -> Action:
    """Best endpoint of a ∈ {0, 1/2} for a coherent (zero phase difference) pair.

    The coherent signal is affine in ``a`` with slope ``h2 - h1 + 2√(h1 h2)``;
    a zero slope resolves to NoCoop.
    """
    slope = h2 - h1 + 2.0 * math.sqrt(h1 * h2)
    return Action.FULL_COOP if slope > 0 else Action.NO_COOP
