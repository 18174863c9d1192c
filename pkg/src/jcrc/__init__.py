"""Completely regular codes in Johnson graphs: analysis, clique codes, constructions and search."""

from .analysis import (
    Code,
    CrcReport,
    IntersectionMatrix,
    check_crc,
    design_table,
    distance_partition,
    opposite_code,
    strength,
)
from .johnson import JohnsonParams, theta
from .projection import project, projection_profile, reconstruct

__all__ = [
    "Code",
    "CrcReport",
    "IntersectionMatrix",
    "JohnsonParams",
    "check_crc",
    "design_table",
    "distance_partition",
    "opposite_code",
    "project",
    "projection_profile",
    "reconstruct",
    "strength",
    "theta",
]
