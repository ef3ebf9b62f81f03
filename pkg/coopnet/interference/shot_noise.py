"""Laplace transforms of the shot-noise interference outside the ball of radius r2.

Every interferer carries a mixture mark: with probability ρ² an exponential
(mean p) power, otherwise the Gamma(2, p/2) average of two exponentials.
"""
from __future__ import annotations

import logging
import math
import warnings
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy import integrate
from scipy.special import roots_legendre

from coopnet.errors import QuadratureError, TransformDomainError
from coopnet.settings import SystemParams

_POLE_TOLERANCE = 1e-12
_RADIAL_RTOL = 1e-8
_TAIL_RATIO = 1e-10
_MAX_DOUBLINGS = 60

# Fixed panels of the compactified radial variable w = (r2/r)^(β-2) ∈ (0, 1].
_W_PANEL_RATIO = 2.0
_W_PANEL_COUNT = 30
_W_PANEL_NODES = 8


@dataclass(frozen=True)
class MarkModel:
    """Bernoulli(ρ²) mixture of NoCoop and FullCoop interferer marks.

    Both components have mean ``power``; only their spread differs.
    """

    rho: float
    power: float

    def __post_init__(self) -> None:
        if not 0.0 <= self.rho <= 1.0:
            raise ValueError(f"rho must lie in [0, 1], got {self.rho}")
        if not self.power > 0:
            raise ValueError(f"power must be positive, got {self.power}")

    @property
    def no_coop_weight(self) -> float:
        return self.rho**2

    @property
    def mean(self) -> float:
        return self.power

    def laplace(self, x):
        """Mark transform at ``x = s r^-β``."""
        gain = self.power * np.asarray(x, dtype=complex)
        w = self.no_coop_weight
        return w / (1.0 + gain) + (1.0 - w) / (1.0 + 0.5 * gain) ** 2

    def sample(self, rng: np.random.Generator, count: int) -> np.ndarray:
        # Both fading powers are always drawn so that streams stay aligned across ρ.
        no_coop = rng.random(count) < self.no_coop_weight
        g1 = rng.exponential(self.power, size=count)
        g2 = rng.exponential(self.power, size=count)
        return np.where(no_coop, g1, 0.5 * (g1 + g2))


def _path_gain(s, r, params: SystemParams):
    return np.asarray(s, dtype=complex) * params.power * np.power(np.asarray(r, dtype=float), -params.beta)


def _one_minus_components(x):
    """(1 - 1/(1+x), 1 - 1/(1+x/2)²) without cancellation for small x."""
    y = 0.5 * x
    return x / (1.0 + x), y * (2.0 + y) / (1.0 + y) ** 2


def lj(s, rho: float, r, params: SystemParams):
    """Mixture Laplace transform of a single interferer mark at distance ``r``."""
    marks = MarkModel(rho, params.power)
    attenuated = np.asarray(s, dtype=complex) * np.power(np.asarray(r, dtype=float), -params.beta)
    x = marks.power * attenuated
    if np.any(np.abs(1.0 + x) < _POLE_TOLERANCE) or np.any(np.abs(1.0 + 0.5 * x) < _POLE_TOLERANCE):
        raise TransformDomainError("lj evaluated too close to a pole of the mark transform")
    value = marks.laplace(attenuated)
    return complex(value) if np.ndim(value) == 0 else value


def _tail_remainder_bound(s: complex, radius: float, params: SystemParams) -> float:
    """Bound on the error of the first-order tail s p R^(2-β)/(β-2).

    Both mark components satisfy |1 - ℒ - s p r^-β| <= |s p r^-β|² for Re(s) >= 0.
    """
    beta = params.beta
    return (abs(s) * params.power) ** 2 * radius ** (2.0 - 2.0 * beta) / (2.0 * beta - 2.0)


def _quad_part(func, lo: float, hi: float) -> tuple[float, float]:
    with warnings.catch_warnings():
        warnings.simplefilter("error", integrate.IntegrationWarning)
        try:
            value, abserr = integrate.quad(func, lo, hi, epsabs=0.0, epsrel=_RADIAL_RTOL, limit=200)
        except integrate.IntegrationWarning as exc:
            raise QuadratureError(f"radial quadrature on [{lo:.4g}, {hi:.4g}] did not converge: {exc}", math.nan) from exc
    return value, abserr


def radial_integral(s: complex, rho: float, r2: float, params: SystemParams) -> complex:
    """∫_{r2}^∞ (1 - ℒ_J(s, ρ, r)) r dr by adaptive quadrature with a certified tail.

    The range is extended by doublings until the error bound of the closed-form
    first-order tail ``s p R^(2-β)/(β-2)`` falls below ``1e-10`` of the
    accumulated integral; that tail is then added.
    """
    if not r2 > 0:
        raise ValueError(f"r2 must be positive, got {r2}")
    s = complex(s)
    if s == 0:
        return 0j
    weight = MarkModel(rho, params.power).no_coop_weight

    def integrand(r: float) -> complex:
        exp_part, gamma_part = _one_minus_components(_path_gain(s, r, params))
        return (weight * exp_part + (1.0 - weight) * gamma_part) * r

    total = 0j
    error = 0.0
    lo, hi = r2, 2.0 * r2
    for _ in range(_MAX_DOUBLINGS):
        real, real_err = _quad_part(lambda r: integrand(r).real, lo, hi)
        imag, imag_err = _quad_part(lambda r: integrand(r).imag, lo, hi)
        total += complex(real, imag)
        error += real_err + imag_err
        bound = _tail_remainder_bound(s, hi, params)
        if bound <= _TAIL_RATIO * max(abs(total), 1e-300):
            tail = s * params.power * hi ** (2.0 - params.beta) / (params.beta - 2.0)
            logging.getLogger(__name__).debug(
                f"radial integral s={s:.4g} r2={r2:.4g}: R_max={hi:.4g}, quad error {error:.2e}, tail bound {bound:.2e}"
            )
            return total + tail
        lo, hi = hi, 2.0 * hi
    raise QuadratureError(
        f"radial integral tail did not fall below tolerance for s={s}, r2={r2}",
        error + _tail_remainder_bound(s, hi, params),
        {"r_max": hi},
    )


def interference_laplace(s: complex, rho: float, r2: float, params: SystemParams) -> complex:
    """ℒ_I(s, ρ, r2): boundary atom at r2 times the shot noise beyond it."""
    boundary = lj(s, rho, r2, params)
    return boundary * np.exp(-2.0 * np.pi * params.intensity * radial_integral(s, rho, r2, params))


def interference_laplace_dpc(s: complex, rho: float, r2: float, params: SystemParams) -> complex:
    """ℒ_I with the second neighbour's contribution removed by dirty paper coding."""
    return complex(np.exp(-2.0 * np.pi * params.intensity * radial_integral(s, rho, r2, params)))


def interference_mean(r2: float, params: SystemParams) -> float:
    """E[I(ρ, r2)]; independent of ρ since both marks have mean p."""
    if params.beta <= 2:
        raise ValueError("interference mean diverges for beta <= 2")
    beta = params.beta
    return params.power / ((beta - 2.0) * r2**beta) * (beta - 2.0 + 2.0 * np.pi * params.intensity * r2**2)


def interference_mean_dpc(r2: float, params: SystemParams) -> float:
    """Mean interference once the boundary atom is cancelled."""
    return far_field_tail_mean(r2, params)


def far_field_tail_mean(radius, params: SystemParams):
    """Mean shot noise from interferers beyond ``radius``: 2πλp R^(2-β)/(β-2)."""
    beta = params.beta
    return 2.0 * np.pi * params.intensity * params.power * np.power(radius, 2.0 - beta) / (beta - 2.0)


@lru_cache(maxsize=8)
def _w_rule(beta: float) -> tuple[np.ndarray, np.ndarray]:
    nodes, weights = roots_legendre(_W_PANEL_NODES)
    edges = np.concatenate(([0.0], _W_PANEL_RATIO ** -np.arange(_W_PANEL_COUNT, -1, -1.0)))
    lo, hi = edges[:-1], edges[1:]
    half = 0.5 * (hi - lo)
    w = (0.5 * (hi + lo))[:, None] + half[:, None] * nodes[None, :]
    wt = half[:, None] * weights[None, :]
    return w.ravel(), wt.ravel()


def radial_exponent(s, r2, params: SystemParams) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized radial integrals of the two mark components.

    Returns ``(A, B)`` with A = ∫_{r2}^∞ (1 - 1/(1+s p r^-β)) r dr and
    B = ∫_{r2}^∞ (1 - 1/(1+s p r^-β/2)²) r dr, broadcast over ``s`` and ``r2``.
    The substitution w = (r2/r)^(β-2) maps the range onto (0, 1] with a bounded
    integrand, so no truncation is involved; ℒ_I for any ρ follows from
    ρ²A + (1-ρ²)B.
    """
    beta = params.beta
    s = np.asarray(s, dtype=complex)
    r2 = np.asarray(r2, dtype=float)
    w, wt = _w_rule(beta)
    q = beta / (beta - 2.0)
    base = s * params.power * np.power(r2, -beta)
    x = base[..., None] * w**q
    exp_part, gamma_part = _one_minus_components(x)
    jac = wt * w ** (-q)
    scale = r2**2 / (beta - 2.0)
    return scale * (exp_part @ jac), scale * (gamma_part @ jac)


@dataclass(frozen=True)
class InterferenceTransform:
    """ρ-independent pieces of ℒ_I on a grid of arguments for one r2 (or a broadcast set)."""

    boundary_exp: np.ndarray
    boundary_gamma: np.ndarray
    radial_exp: np.ndarray
    radial_gamma: np.ndarray
    intensity: float

    @classmethod
    def build(cls, s, r2, params: SystemParams) -> "InterferenceTransform":
        s = np.asarray(s, dtype=complex)
        x = _path_gain(s, r2, params)
        radial_exp, radial_gamma = radial_exponent(s, r2, params)
        return cls(1.0 / (1.0 + x), 1.0 / (1.0 + 0.5 * x) ** 2, radial_exp, radial_gamma, params.intensity)

    def laplace(self, rho: float, dpc: bool = False) -> np.ndarray:
        weight = rho**2
        exponent = weight * self.radial_exp + (1.0 - weight) * self.radial_gamma
        value = np.exp(-2.0 * np.pi * self.intensity * exponent)
        if dpc:
            return value
        return (weight * self.boundary_exp + (1.0 - weight) * self.boundary_gamma) * value

    def envelope(self, dpc: bool = False) -> np.ndarray:
        """Upper bound of |ℒ_I| valid for every ρ ∈ [0, 1]."""
        radial = np.minimum(self.radial_exp.real, self.radial_gamma.real)
        value = np.exp(-2.0 * np.pi * self.intensity * radial)
        if dpc:
            return value
        return np.maximum(np.abs(self.boundary_exp), np.abs(self.boundary_gamma)) * value

    @classmethod
    def concatenate(cls, parts: list["InterferenceTransform"]) -> "InterferenceTransform":
        """Join transforms built on consecutive pieces of a 1-d argument grid."""
        if not parts:
            raise ValueError("nothing to concatenate")
        return cls(
            np.concatenate([part.boundary_exp for part in parts]),
            np.concatenate([part.boundary_gamma for part in parts]),
            np.concatenate([part.radial_exp for part in parts]),
            np.concatenate([part.radial_gamma for part in parts]),
            parts[0].intensity,
        )
