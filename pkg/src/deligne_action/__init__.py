"""Deligne-cohomology cocycles, fundamental cycles and the chiral Polyakov action on covered surfaces."""

from .atlas import CoverAtlas, build_nerve, chern_cocycle, verify_transitions
from .chains import build_fundamental_class
from .group_cohomology import FuchsianGroup, build_polygon_cycle, euler_number, octagon_group
from .pairing import action
from .polyakov import DeformationData, build_lagrangian_cocycle
from .scenario import load_builtin, load_scenario

__all__ = [
    "CoverAtlas", "build_nerve", "chern_cocycle", "verify_transitions", "build_fundamental_class",
    "FuchsianGroup", "build_polygon_cycle", "euler_number", "octagon_group", "action",
    "DeformationData", "build_lagrangian_cocycle", "load_builtin", "load_scenario",
]
__version__ = "0.1.0"
