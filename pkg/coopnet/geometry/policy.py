"""Geometric cooperation policies with a global parameter ρ."""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .point_process import NeighborPair


class Action(Enum):
    """Power split chosen for a user: all private (NoCoop) or half common (FullCoop)."""

    NO_COOP = 0.0
    FULL_COOP = 0.5

    @property
    def split(self) -> float:
        return self.value


@dataclass(frozen=True)
class PolicyParams:
    rho: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.rho) and 0.0 <= self.rho <= 1.0):
            raise ValueError(f"rho must lie in [0, 1], got {self.rho}")


def policy_action(pair: NeighborPair, policy: PolicyParams) -> Action:
    """NoCoop iff r1 <= ρ·r2."""
    if pair.r1 <= policy.rho * pair.r2:
        return Action.NO_COOP
    return Action.FULL_COOP


def no_coop_mask(r1, r2, rho: float) -> np.ndarray:
    """Vectorized form of :func:`policy_action`; True where NoCoop is chosen."""
    return np.asarray(r1) <= rho * np.asarray(r2)


def no_coop_probability(policy: PolicyParams) -> float:
    return policy.rho**2
