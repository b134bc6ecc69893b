"""Divisor class groups of complete toric varieties, and the torsion cover.

For a complete fan with rays r_1..r_n in N = Z^s the invariant divisors
D_i generate Cl(Y), and

    0 -> M -> Z^n -> Cl(Y) -> 0,   m |-> (<m, r_i>)_i

is exact. We present Cl(Y) on the generators D_i with the ray matrix as
relations, so the class of D_i is simply the i-th unit vector.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .abgrp import FgAbGroup, GroupElt, GroupHom, from_invariant_factors, torsion_subgroup
from .fanlat import CoverSpec, Fan, Sublattice, toric_cover
from .intlin import IntMatrix


class ConsistencyError(RuntimeError):
    """Two independent computations of the same object disagree."""


@dataclass(frozen=True)
class ClassGroupData:
    cl: FgAbGroup
    divisor_classes: tuple[GroupElt, ...]
    projection: GroupHom
    fan: Optional[Fan] = None

    @property
    def n(self) -> int:
        return len(self.divisor_classes)


def class_group(fan: Fan) -> ClassGroupData:
    cl = FgAbGroup(fan.ray_matrix)
    proj = GroupHom(FgAbGroup.free(fan.n), cl, IntMatrix.identity(fan.n), check=False)
    return ClassGroupData(cl, tuple(cl.gen(i) for i in range(fan.n)), proj, fan)


def abstract_class_group(invariant_factors: Sequence[int], free_rank: int,
                         divisor_classes: Sequence[Sequence[int]]) -> ClassGroupData:
    """Class group supplied by hand, for varieties that are not toric.

    ``divisor_classes[i]`` are coordinates of [D_i] on the generators of
    ``Z_{e_1} + ... + Z_{e_t} + Z^f`` (factors equal to 1 are not allowed,
    so coordinates line up with the listed factors).
    """
    if any(e < 2 for e in invariant_factors):
        raise ValueError("invariant factors must be >= 2")
    cl = from_invariant_factors(invariant_factors, free_rank)
    for i, c in enumerate(divisor_classes):
        if len(c) != cl.ngens:
            raise ValueError(f"divisor class {i} has {len(c)} coordinates, expected {cl.ngens}")
    n = len(divisor_classes)
    mat = IntMatrix.from_cols(divisor_classes, cl.ngens)
    proj = GroupHom(FgAbGroup.free(n), cl, mat, check=False)
    return ClassGroupData(cl, tuple(cl.elt(c) for c in divisor_classes), proj, None)


@dataclass(frozen=True)
class TorsionReport:
    torsion_free: bool
    class_group_torsion: list[int]
    lattice_quotient: list[int]


def torsion_check(fan: Fan) -> TorsionReport:
    """Compare Tors Cl(Y) with N / <r_i>; they must agree."""
    tors, _ = torsion_subgroup(class_group(fan).cl)
    gens = IntMatrix.from_cols(fan.rays, fan.rank)
    lat = FgAbGroup(gens)
    if lat.free_rank:
        raise ConsistencyError("rays do not span N over Q; the fan is not complete")
    if tors.invariant_factors != lat.invariant_factors:
        raise ConsistencyError(
            f"Tors Cl = {tors.invariant_factors} but N/<r_i> = {lat.invariant_factors}")
    return TorsionReport(tors.is_trivial, tors.invariant_factors, lat.invariant_factors)


def torsion_cover(fan: Fan) -> CoverSpec:
    """Toric cover for the sublattice generated by the rays.

    Its Galois group is Tors Cl(Y), and the covering variety has a
    torsion-free class group (checked).
    """
    sub = Sublattice.from_generators(IntMatrix.from_cols(fan.rays, fan.rank))
    cover = toric_cover(fan, sub)
    tors, _ = torsion_subgroup(class_group(fan).cl)
    if not cover.galois_group.isomorphic(tors):
        raise ConsistencyError("torsion cover group differs from Tors Cl(Y)")
    if not torsion_check(cover.covering_fan).torsion_free:
        raise ConsistencyError("class group of the torsion cover still has torsion")
    return cover

