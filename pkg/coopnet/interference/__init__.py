"""Shot-noise interference: mark transforms, interference Laplace transforms and samplers."""

from .sampling import default_outer_radius, sample_interference
from .shot_noise import (
    InterferenceTransform,
    MarkModel,
    far_field_tail_mean,
    interference_laplace,
    interference_laplace_dpc,
    interference_mean,
    interference_mean_dpc,
    lj,
    radial_exponent,
    radial_integral,
)

__all__ = [
    "InterferenceTransform",
    "MarkModel",
    "default_outer_radius",
    "far_field_tail_mean",
    "interference_laplace",
    "interference_laplace_dpc",
    "interference_mean",
    "interference_mean_dpc",
    "lj",
    "radial_exponent",
    "radial_integral",
    "sample_interference",
]
