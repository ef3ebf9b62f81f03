"""Poisson point process sampling and nearest-neighbour queries in a square window."""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np
from scipy.spatial import cKDTree

from coopnet.errors import SamplingError
from coopnet.settings import PRESET_WINDOW_AREA

SeedLike = int | np.random.Generator | None

# Angular sectors used to bound a 1-Voronoi cell: with a neighbour inside every
# 60 degree sector, no cell point lies farther than that neighbour distance.
_SECTOR_COUNT = 6
_BOUNDING_NEIGHBOURS = 24
_MAX_REJECTION_ROUNDS = 1000


def as_generator(seed: SeedLike) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


@dataclass(frozen=True)
class Window:
    """Axis-aligned square observation window."""

    center: tuple[float, float] = (0.0, 0.0)
    half_extent: float = 1.0

    def __post_init__(self) -> None:
        if not (math.isfinite(self.half_extent) and self.half_extent > 0):
            raise ValueError(f"Window half_extent must be positive, got {self.half_extent}")
        if len(self.center) != 2 or not all(math.isfinite(c) for c in self.center):
            raise ValueError(f"Window center must be a finite planar point, got {self.center}")

    @property
    def area(self) -> float:
        return (2.0 * self.half_extent) ** 2

    @property
    def bounds(self) -> tuple[float, float, float, float]:
        cx, cy = self.center
        h = self.half_extent
        return cx - h, cx + h, cy - h, cy + h

    def contains(self, points: np.ndarray) -> np.ndarray:
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        x_lo, x_hi, y_lo, y_hi = self.bounds
        return (pts[:, 0] >= x_lo) & (pts[:, 0] <= x_hi) & (pts[:, 1] >= y_lo) & (pts[:, 1] <= y_hi)

    @classmethod
    def centered(cls, half_extent: float) -> "Window":
        return cls((0.0, 0.0), half_extent)

    @classmethod
    def with_area(cls, area: float) -> "Window":
        if not area > 0:
            raise ValueError(f"Window area must be positive, got {area}")
        return cls((0.0, 0.0), math.sqrt(area) / 2.0)


def preset_window() -> Window:
    """The finite 20 m² window of the preset simulation protocol."""
    return Window.with_area(PRESET_WINDOW_AREA)


def window_for_expected_atoms(intensity: float, expected_atoms: float) -> Window:
    return Window.with_area(expected_atoms / intensity)


@dataclass(frozen=True)
class PointPattern:
    """A realization of BS positions; immutable once built."""

    atoms: np.ndarray
    intensity: float
    window: Window

    def __post_init__(self) -> None:
        atoms = np.asarray(self.atoms, dtype=float).reshape(-1, 2)
        atoms.setflags(write=False)
        object.__setattr__(self, "atoms", atoms)
        if not self.intensity > 0:
            raise ValueError(f"intensity must be positive, got {self.intensity}")
        if len(atoms) and not self.window.contains(atoms).all():
            raise ValueError("Every atom of a PointPattern must lie inside its window")

    def __len__(self) -> int:
        return len(self.atoms)

    @cached_property
    def tree(self) -> cKDTree:
        return cKDTree(self.atoms)


@dataclass(frozen=True)
class NeighborPair:
    """First and second closest atoms to a location."""

    first_index: int
    second_index: int
    r1: float
    r2: float

    def __post_init__(self) -> None:
        if self.first_index == self.second_index:
            raise ValueError("NeighborPair requires two distinct atoms")
        if not (0.0 <= self.r1 <= self.r2):
            raise ValueError(f"NeighborPair requires 0 <= r1 <= r2, got r1={self.r1}, r2={self.r2}")


def sample_ppp(intensity: float, window: Window, seed: SeedLike) -> PointPattern:
    """Draw a homogeneous Poisson point process inside ``window``."""
    if not (math.isfinite(intensity) and intensity > 0):
        raise ValueError(f"intensity must be positive, got {intensity}")
    rng = as_generator(seed)
    count = rng.poisson(intensity * window.area)
    x_lo, x_hi, y_lo, y_hi = window.bounds
    atoms = np.column_stack(
        (rng.uniform(x_lo, x_hi, size=count), rng.uniform(y_lo, y_hi, size=count))
    )
    return PointPattern(atoms=atoms, intensity=intensity, window=window)


def _exhaustive_order(atoms: np.ndarray, location: np.ndarray, candidates: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    offsets = atoms[candidates] - location
    distances = np.hypot(offsets[:, 0], offsets[:, 1])
    order = np.lexsort((candidates, distances))
    return candidates[order], distances[order]


def two_nearest(pattern: PointPattern, location) -> NeighborPair:
    """Indices and distances of the two atoms closest to ``location``.

    Ties are broken by the lower atom index, so the result matches an
    exhaustive scan exactly.
    """
    n = len(pattern)
    if n < 2:
        raise ValueError(f"two_nearest needs at least 2 atoms, pattern has {n}")
    point = np.asarray(location, dtype=float).reshape(2)

    k = min(n, 4)
    while True:
        distances, indices = pattern.tree.query(point, k=k)
        # Expand until the candidate list provably holds every atom tied with the second.
        if k == n or distances[-1] > distances[1] * (1.0 + 1e-9):
            break
        k = min(n, 2 * k)

    ordered, exact = _exhaustive_order(pattern.atoms, point, np.asarray(indices, dtype=np.intp))
    return NeighborPair(int(ordered[0]), int(ordered[1]), float(exact[0]), float(exact[1]))


def two_nearest_many(pattern: PointPattern, locations: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized nearest-two query; returns ``(indices, distances)`` of shape (m, 2)."""
    if len(pattern) < 2:
        raise ValueError(f"two_nearest_many needs at least 2 atoms, pattern has {len(pattern)}")
    pts = np.atleast_2d(np.asarray(locations, dtype=float))
    distances, indices = pattern.tree.query(pts, k=2)
    return indices, distances


def two_voronoi_members(pattern: PointPattern, location) -> frozenset[int]:
    """The BS pair whose 2-Voronoi cell contains ``location``."""
    pair = two_nearest(pattern, location)
    return frozenset((pair.first_index, pair.second_index))


def joint_distance_pdf(r1, r2, intensity: float):
    """Joint density of the first and second neighbour distances.

    Zero outside the ordered support ``0 < r1 <= r2``.
    """
    r1 = np.asarray(r1, dtype=float)
    r2 = np.asarray(r2, dtype=float)
    inside = (r1 > 0) & (r1 <= r2)
    density = (2.0 * intensity * np.pi) ** 2 * r1 * r2 * np.exp(-intensity * np.pi * r2**2)
    result = np.where(inside, density, 0.0)
    return float(result) if result.ndim == 0 else result


def expected_r2(intensity: float) -> float:
    if not intensity > 0:
        raise ValueError(f"intensity must be positive, got {intensity}")
    return 3.0 / (4.0 * math.sqrt(intensity))


def _sector_reach(centres: np.ndarray, window: Window) -> np.ndarray:
    """Farthest distance from each centre to a window point inside each angular sector.

    The window clipped to a sector is a convex polygon, so its farthest point is
    either where a sector edge leaves the window or a window corner.
    """
    x_lo, x_hi, y_lo, y_hi = window.bounds
    width = 2.0 * np.pi / _SECTOR_COUNT
    edges = np.arange(_SECTOR_COUNT + 1) * width
    cos, sin = np.cos(edges), np.sin(edges)
    cx, cy = centres[:, :1], centres[:, 1:]
    dx = np.where(cos > 0, x_hi - cx, x_lo - cx)
    dy = np.where(sin > 0, y_hi - cy, y_lo - cy)
    with np.errstate(divide="ignore", invalid="ignore"):
        exits = np.fmin(np.abs(dx / cos), np.abs(dy / sin))
    reach = np.maximum(exits[:, :-1], exits[:, 1:])

    corners = np.array([[x_lo, y_lo], [x_hi, y_lo], [x_lo, y_hi], [x_hi, y_hi]])
    offsets = corners[None, :, :] - centres[:, None, :]
    angles = np.mod(np.arctan2(offsets[..., 1], offsets[..., 0]), 2.0 * np.pi)
    sectors = np.minimum((angles / width).astype(int), _SECTOR_COUNT - 1)
    rows = np.repeat(np.arange(len(centres)), 4)
    np.maximum.at(reach, (rows, sectors.ravel()), np.hypot(offsets[..., 0], offsets[..., 1]).ravel())
    return reach


def cell_bounding_radii(pattern: PointPattern, indices: np.ndarray | None = None) -> np.ndarray:
    """Radius around each atom that contains its whole 1-Voronoi cell clipped to the window.

    Per sector the cell is bounded by the nearest neighbour in that sector and by
    the window; sectors without a neighbour fall back to the window alone.
    """
    n = len(pattern)
    idx = np.arange(n) if indices is None else np.asarray(indices, dtype=np.intp)
    centres = pattern.atoms[idx]
    reach = _sector_reach(centres, pattern.window)
    if n < 2:
        return reach.max(axis=1)
    k = min(n, _BOUNDING_NEIGHBOURS + 1)
    distances, neighbours = pattern.tree.query(centres, k=k)
    distances, neighbours = distances[:, 1:], neighbours[:, 1:]

    offsets = pattern.atoms[neighbours] - centres[:, None, :]
    angles = np.mod(np.arctan2(offsets[..., 1], offsets[..., 0]), 2.0 * np.pi)
    sectors = np.minimum((angles / (2.0 * np.pi / _SECTOR_COUNT)).astype(int), _SECTOR_COUNT - 1)

    nearest_in_sector = np.full((len(idx), _SECTOR_COUNT), np.inf)
    rows = np.repeat(np.arange(len(idx)), distances.shape[1])
    np.minimum.at(nearest_in_sector, (rows, sectors.ravel()), distances.ravel())
    return np.fmin(nearest_in_sector, reach).max(axis=1)


def sample_users_in_cells(
    pattern: PointPattern,
    seed: SeedLike,
    indices: np.ndarray | None = None,
) -> np.ndarray:
    """One point uniform over each requested atom's 1-Voronoi cell ∩ window.

    Rejection sampling against the cell's bounding box; membership is decided by
    a nearest-neighbour query, so no polygon is ever built.
    """
    n = len(pattern)
    idx = np.arange(n) if indices is None else np.asarray(indices, dtype=np.intp)
    if len(idx) and (idx.min() < 0 or idx.max() >= n):
        raise ValueError(f"atom index out of range for a pattern of {n} atoms")
    rng = as_generator(seed)

    x_lo, x_hi, y_lo, y_hi = pattern.window.bounds
    radii = cell_bounding_radii(pattern, idx)
    centres = pattern.atoms[idx]
    box_lo = np.column_stack((np.maximum(centres[:, 0] - radii, x_lo), np.maximum(centres[:, 1] - radii, y_lo)))
    box_hi = np.column_stack((np.minimum(centres[:, 0] + radii, x_hi), np.minimum(centres[:, 1] + radii, y_hi)))

    users = np.full((len(idx), 2), np.nan)
    pending = np.arange(len(idx))
    for _ in range(_MAX_REJECTION_ROUNDS):
        if not len(pending):
            break
        candidates = rng.uniform(box_lo[pending], box_hi[pending])
        if n == 1:
            accepted = np.ones(len(pending), dtype=bool)
        else:
            _, nearest = pattern.tree.query(candidates, k=1)
            accepted = nearest == idx[pending]
        users[pending[accepted]] = candidates[accepted]
        pending = pending[~accepted]
    if not len(pending):
        return users

    raise SamplingError(
        f"Could not place a user in {len(pending)} cell(s) after {_MAX_REJECTION_ROUNDS} rounds; "
        "the cell-window intersection is empty or degenerate",
        {"pending_cells": len(pending), "window_half_extent": pattern.window.half_extent},
    )


def sample_user_in_cell(pattern: PointPattern, atom_index: int, seed: SeedLike) -> np.ndarray:
    """A point uniform over the 1-Voronoi cell of ``atom_index`` clipped to the window."""
    return sample_users_in_cells(pattern, seed, np.array([atom_index]))[0]
