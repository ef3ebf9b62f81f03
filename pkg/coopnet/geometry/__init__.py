"""Point process sampling, neighbour geometry and the ρ-policy."""

from .point_process import (
    NeighborPair,
    PointPattern,
    Window,
    cell_bounding_radii,
    expected_r2,
    joint_distance_pdf,
    preset_window,
    sample_ppp,
    sample_user_in_cell,
    sample_users_in_cells,
    two_nearest,
    two_nearest_many,
    two_voronoi_members,
    window_for_expected_atoms,
)
from .policy import Action, PolicyParams, no_coop_mask, no_coop_probability, policy_action

__all__ = [
    "Action",
    "NeighborPair",
    "PointPattern",
    "PolicyParams",
    "Window",
    "cell_bounding_radii",
    "expected_r2",
    "joint_distance_pdf",
    "no_coop_mask",
    "no_coop_probability",
    "preset_window",
    "policy_action",
    "sample_ppp",
    "sample_user_in_cell",
    "sample_users_in_cells",
    "two_nearest",
    "two_nearest_many",
    "two_voronoi_members",
    "window_for_expected_atoms",
]
