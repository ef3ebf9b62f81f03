"""Fading draws, beneficial-signal algebra and the cooperative fading variable Z."""

from .cooperative import (
    ZLaplaceParams,
    coherent_sum,
    laplace_exponential,
    laplace_order_holds,
    sample_z,
    z_laplace,
    z_mean,
)
from .fading import FadingDraw, beneficial_signal, mean_beneficial_signal, optimal_split, sample_fading

__all__ = [
    "FadingDraw",
    "ZLaplaceParams",
    "beneficial_signal",
    "coherent_sum",
    "laplace_exponential",
    "laplace_order_holds",
    "mean_beneficial_signal",
    "optimal_split",
    "sample_fading",
    "sample_z",
    "z_laplace",
    "z_mean",
]
