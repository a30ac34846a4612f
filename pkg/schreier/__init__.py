"""Stallings cores, Schreier coset balls and the walk spaces built from them."""

from __future__ import annotations

from .core import (
    CoreGraph,
    IndexInfo,
    free_basis,
    intersect_cores,
    membership,
    shortest_cycle_word,
    stallings_core,
    subgroup_index_info,
)
from .cosets import CosetMode, SchreierBall, schreier_ball
from .walkspace import WalkSpace, ball_walk_space, lumped_walk_space

__all__ = [
    "CoreGraph",
    "CosetMode",
    "IndexInfo",
    "SchreierBall",
    "WalkSpace",
    "ball_walk_space",
    "free_basis",
    "intersect_cores",
    "lumped_walk_space",
    "membership",
    "schreier_ball",
    "shortest_cycle_word",
    "stallings_core",
    "subgroup_index_info",
]
