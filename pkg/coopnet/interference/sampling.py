"""Monte Carlo draws of the marked shot-noise interference seen beyond radius r2."""
from __future__ import annotations

import logging
import math

import numpy as np

from coopnet.geometry.point_process import SeedLike, as_generator
from coopnet.settings import SystemParams

from .shot_noise import MarkModel, far_field_tail_mean

# Draws are generated in chunks so that no more than this many annulus atoms
# are held in memory at once.
_ATOMS_PER_CHUNK = 2_000_000
DEFAULT_OUTER_RADIUS_FACTOR = 10.0


def default_outer_radius(params: SystemParams) -> float:
    return DEFAULT_OUTER_RADIUS_FACTOR / math.sqrt(params.intensity)


def _draw_chunk(
    rng: np.random.Generator,
    r2: np.ndarray,
    rho: float,
    params: SystemParams,
    include_boundary: np.ndarray,
    outer_radius: float,
    compensate_tail: bool,
) -> np.ndarray:
    n = len(r2)
    beta = params.beta
    mark_model = MarkModel(rho, params.power)
    boundary = mark_model.sample(rng, n) * np.power(r2, -beta)

    inner_sq = np.minimum(r2, outer_radius) ** 2
    annulus_area = np.pi * (outer_radius**2 - inner_sq)
    counts = rng.poisson(params.intensity * annulus_area)
    owner = np.repeat(np.arange(n), counts)
    total_atoms = int(counts.sum())
    squared = inner_sq[owner] + rng.random(total_atoms) * (outer_radius**2 - inner_sq[owner])
    marks = mark_model.sample(rng, total_atoms)
    field = np.bincount(owner, weights=marks * np.power(squared, -0.5 * beta), minlength=n)

    interference = field + np.where(include_boundary, boundary, 0.0)
    if compensate_tail:
        interference = interference + far_field_tail_mean(np.maximum(r2, outer_radius), params)
    return interference


def sample_interference(
    r2,
    rho: float,
    params: SystemParams,
    seed: SeedLike,
    *,
    size: int | None = None,
    include_boundary=True,
    outer_radius: float | None = None,
    compensate_tail: bool = True,
):
    """Draw I(ρ, r2): a boundary atom at exactly r2 plus a PPP beyond r2.

    Every atom carries a Bernoulli(ρ²) mark: an exponential (mean p) power for
    NoCoop, otherwise the average of two exponentials. The PPP is sampled up to
    ``outer_radius`` (default 10/√λ); with ``compensate_tail`` the mean power of
    the interferers beyond it is added deterministically.

    ``r2`` and ``include_boundary`` may be arrays of length ``size``; a scalar
    ``r2`` with ``size=None`` returns a float.
    """
    if not 0.0 <= rho <= 1.0:
        raise ValueError(f"rho must lie in [0, 1], got {rho}")
    scalar = size is None and np.ndim(r2) == 0
    n = 1 if scalar else (size if size is not None else int(np.size(r2)))
    radii = np.broadcast_to(np.asarray(r2, dtype=float), (n,))
    if not np.all(radii > 0):
        raise ValueError("r2 must be positive")
    boundary_flags = np.broadcast_to(np.asarray(include_boundary, dtype=bool), (n,))
    radius = default_outer_radius(params) if outer_radius is None else float(outer_radius)
    if not radius > 0:
        raise ValueError(f"outer_radius must be positive, got {radius}")

    rng = as_generator(seed)
    if n == 0:
        return np.empty(0)
    expected_atoms = params.intensity * np.pi * radius**2
    chunk = max(1, int(_ATOMS_PER_CHUNK // max(expected_atoms, 1.0)))
    pieces = []
    for start in range(0, n, chunk):
        stop = min(n, start + chunk)
        pieces.append(
            _draw_chunk(rng, radii[start:stop], rho, params, boundary_flags[start:stop], radius, compensate_tail)
        )
    result = np.concatenate(pieces)
    if n > chunk:
        logging.getLogger(__name__).debug(f"Sampled {n:,} interference values in {len(pieces)} chunks")
    return float(result[0]) if scalar else result
