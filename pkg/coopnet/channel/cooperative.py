"""The cooperative fading variable Z = (√(G1 r1^-β) + √(G2 r2^-β))² and its Laplace transform."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from coopnet.errors import TransformDomainError
from coopnet.geometry.point_process import SeedLike, as_generator


@dataclass(frozen=True)
class ZLaplaceParams:
    """Rate-like parameters μ_i = r_i^β / p_i (scalars or broadcastable arrays)."""

    mu1: float | np.ndarray
    mu2: float | np.ndarray

    def __post_init__(self) -> None:
        if not (np.all(np.asarray(self.mu1) > 0) and np.all(np.asarray(self.mu2) > 0)):
            raise ValueError("mu1 and mu2 must be positive")

    @classmethod
    def from_distances(cls, r1, r2, power: float, beta: float) -> "ZLaplaceParams":
        return cls(np.asarray(r1, dtype=float) ** beta / power, np.asarray(r2, dtype=float) ** beta / power)


def _arctan(z: np.ndarray) -> np.ndarray:
    # Principal branch through the logarithmic identity.
    return 0.5j * (np.log(1.0 - 1j * z) - np.log(1.0 + 1j * z))


def z_laplace(s, params: ZLaplaceParams):
    """ℒ_Z(s) for complex ``s`` with Re(1 + (1/μ1 + 1/μ2)s) > 0.

    Pure-imaginary arguments, used by the coverage inversion, always satisfy the
    condition, so the principal square root is continuous along them.
    """
    s = np.asarray(s, dtype=complex)
    if not np.all(np.isfinite(s)):
        raise ValueError("z_laplace requires finite arguments")
    mu1 = np.asarray(params.mu1, dtype=float)
    mu2 = np.asarray(params.mu2, dtype=float)
    rate_sum = 1.0 / mu1 + 1.0 / mu2
    radicand = 1.0 + rate_sum * s
    if np.any(radicand.real <= 0):
        raise TransformDomainError("z_laplace argument crosses the branch cut: Re(1 + (1/mu1 + 1/mu2) s) <= 0")

    g = np.sqrt(radicand)
    scale = s / np.sqrt(mu1 * mu2)
    ratio = np.sqrt(mu1 / mu2)
    numerator = -scale * np.pi + scale * _arctan(ratio * g) + scale * _arctan(g / ratio) + g
    value = numerator / g**3
    return complex(value) if value.ndim == 0 else value


def z_mean(params: ZLaplaceParams):
    mu1 = np.asarray(params.mu1, dtype=float)
    mu2 = np.asarray(params.mu2, dtype=float)
    root = np.sqrt(mu1 * mu2)
    mean = (np.pi / 2.0 + (mu1 + mu2) / root) / root
    return float(mean) if mean.ndim == 0 else mean


def sample_z(
    r1: float,
    r2: float,
    p: float,
    seed: SeedLike,
    *,
    beta: float = 4.0,
    size: int | None = None,
):
    """Squared coherent sum of two exponential (mean ``p``) links at distances r1, r2."""
    if not (r1 > 0 and r2 > 0 and p > 0):
        raise ValueError("sample_z requires positive r1, r2 and p")
    rng = as_generator(seed)
    g1 = rng.exponential(p, size=size)
    g2 = rng.exponential(p, size=size)
    return coherent_sum(g1, g2, r1, r2, beta)


def coherent_sum(g1, g2, r1, r2, beta: float):
    """Z for given fading powers; vectorized over any broadcastable inputs."""
    z = (np.sqrt(g1 * np.power(r1, -beta)) + np.sqrt(g2 * np.power(r2, -beta))) ** 2
    return float(z) if np.ndim(z) == 0 else z


def laplace_exponential(s, mu: float):
    """ℒ_G(s) = 1/(1 + s/μ) of an exponential variable with rate μ."""
    value = 1.0 / (1.0 + np.asarray(s, dtype=complex) / mu)
    return complex(value) if value.ndim == 0 else value


def laplace_order_holds(mu: float, s_grid) -> bool:
    """Check G ≤_L Z_{r,r}/2 on ``s_grid``: ℒ_G(s) >= ℒ_Z(s/2) for equal rates."""
    s = np.asarray(s_grid, dtype=float)
    lhs = np.real(laplace_exponential(s, mu))
    rhs = np.real(z_laplace(s / 2.0, ZLaplaceParams(mu, mu)))
    return bool(np.all(lhs >= rhs - 1e-12))

