"""Regrasp planning toolchain: precompute grasp/placement stores for a
parallel-jaw gripper over a tabletop and answer reorientation queries."""

from ._regrasp import (
    Gripper,
    Grasp,
    GraspPlanParams,
    InfeasibleError,
    InvalidInputError,
    Mesh,
    MeshParseError,
    Placement,
    Robot,
    Store,
    StoreError,
    fk,
    ik,
    plan_free_grasps,
    precompute,
    reorient,
    segment,
    stable_placements,
)

__all__ = [
    "Gripper",
    "Grasp",
    "GraspPlanParams",
    "InfeasibleError",
    "InvalidInputError",
    "Mesh",
    "MeshParseError",
    "Placement",
    "Robot",
    "Store",
    "StoreError",
    "fk",
    "ik",
    "plan_free_grasps",
    "precompute",
    "reorient",
    "segment",
    "stable_placements",
]

__version__ = "0.1.0"
