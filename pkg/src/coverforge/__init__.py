"""Exact computation of abelian and toric covers with prescribed branching."""

__version__ = "0.1.0"

from .abgrp import FgAbGroup, GroupElt, GroupHom, Character
from .clgrp import class_group, abstract_class_group, torsion_check, torsion_cover
from .coverlab import (
    BranchData,
    CoverDoesNotExist,
    gmax,
    max_toric_cover,
    max_abelian_cover,
    enumerate_covers,
    solve_building_data,
    verify_fundamental_relations,
)
from .fanlat import Fan, Sublattice, fixture

__all__ = [
    "FgAbGroup", "GroupElt", "GroupHom", "Character",
    "class_group", "abstract_class_group", "torsion_check", "torsion_cover",
    "BranchData", "CoverDoesNotExist", "gmax", "max_toric_cover", "max_abelian_cover",
    "enumerate_covers", "solve_building_data", "verify_fundamental_relations",
    "Fan", "Sublattice", "fixture",
]
