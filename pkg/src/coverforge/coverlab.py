"""Abelian covers branched on prescribed divisors with prescribed orders.

Given divisors D_1..D_n on Y with classes in a finitely generated Cl(Y) and
orders d_1..d_n, let phi: Cl(Y)^dual -> Z_{d_1} + ... + Z_{d_n} send a
functional to its values on the [D_i], reduced mod d_i. With K_min its image,

    0 -> K_min -> Z_{d_1} + ... + Z_{d_n} -> G_max -> 0

defines the Galois group of the maximal totally ramified cover. A cover with
the prescribed orders exists iff every Z_{d_i} -> G_max is injective (plus a
torsion condition on Cl(Y) in the non-toric setting). For toric Y the same
cover is the toric cover for the lattice generated by the d_i r_i.

Character values are exponents of one fixed primitive d-th root of unity.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property, reduce
from math import lcm
from typing import Optional, Sequence

from .abgrp import (
    DEFAULT_BOUND,
    Character,
    FgAbGroup,
    GroupElt,
    GroupHom,
    Subgroup,
    basis_characters,
    characters,
    cokernel,
    dual_free,
    element_order,
    image,
    is_injective,
    is_surjective,
    pair_character,
    quotient,
    subgroups,
)
from .clgrp import ClassGroupData, ConsistencyError, class_group
from .fanlat import (
    CoverSpec,
    Fan,
    Sublattice,
    quotient_group,
    sublattice_from_multiples,
    sublattices_containing,
    toric_cover,
)
from .intlin import IntMatrix, solve, vector_gcd


class CoverDoesNotExist(Exception):
    """No cover with the requested branching exists; ``divisors`` names the culprits."""

    def __init__(self, message: str, divisors: Sequence[int] = ()):
        super().__init__(message)
        self.divisors = list(divisors)


class PreconditionError(ValueError):
    """Inputs fall outside the hypotheses under which an answer is determined."""


@dataclass(frozen=True)
class BranchData:
    orders: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "orders", tuple(int(d) for d in self.orders))
        bad = [i for i, d in enumerate(self.orders) if d < 1]
        if bad:
            raise ValueError(f"branch order at divisor {bad[0]} must be >= 1")

    @property
    def n(self) -> int:
        return len(self.orders)

    @property
    def lcm_d(self) -> int:
        return reduce(lcm, self.orders, 1)


def _check_length(n: int, branch: BranchData) -> None:
    if branch.n != n:
        raise ValueError(f"{branch.n} branch orders given for {n} divisors")


# ---------------------------------------------------------------------------
# G_max and existence


def phi(cl: ClassGroupData, branch: BranchData) -> GroupHom:
    _check_length(cl.n, branch)
    dual, pairing = dual_free(cl.cl)
    cols = []
    for j in range(dual.ngens):
        f = pairing.row(j)
        cols.append([sum(a * b for a, b in zip(f, D.coords)) % d
                     for D, d in zip(cl.divisor_classes, branch.orders)])
    target = FgAbGroup.cyclic_sum(branch.orders)
    return GroupHom(dual, target, IntMatrix.from_cols(cols, branch.n), check=False)


@dataclass(frozen=True)
class ExistenceReport:
    branch: BranchData
    phi: GroupHom = field(repr=False)
    k_min: FgAbGroup
    g_max: FgAbGroup
    projection: GroupHom = field(repr=False)
    per_divisor_injective: tuple[bool, ...]
    torsion_condition_ok: bool

    @property
    def exists(self) -> bool:
        return all(self.per_divisor_injective) and self.torsion_condition_ok

    @property
    def offending(self) -> list[int]:
        return [i for i, ok in enumerate(self.per_divisor_injective) if not ok]

    def branch_element(self, i: int) -> GroupElt:
        """Image of 1 in Z_{d_i} inside G_max."""
        return self.projection(self.projection.source.gen(i))


def gmax(cl: ClassGroupData, branch: BranchData) -> ExistenceReport:
    f = phi(cl, branch)
    k_min, _ = image(f)
    g, proj = cokernel(f)
    flags = []
    for i, d in enumerate(branch.orders):
        src = FgAbGroup.cyclic_sum([d])
        flags.append(is_injective(GroupHom(src, g, IntMatrix.from_cols([proj.matrix.col(i)], g.ngens), check=False)))
    return ExistenceReport(branch, f, k_min, g, proj, tuple(flags),
                           cl.cl.d_torsion_trivial(branch.lcm_d))


def existence_toric(fan: Fan, branch: BranchData) -> list[bool]:
    """Whether each d_i r_i is primitive in the lattice spanned by all d_j r_j.

    On a fan with torsion-free class group this must agree with the
    injectivity flags of :func:`gmax`; disagreement raises ConsistencyError.
    """
    _check_length(fan.n, branch)
    sub = sublattice_from_multiples(fan, branch.orders)
    flags = []
    for d, r in zip(branch.orders, fan.rays):
        y = sub.coordinates([d * x for x in r])
        flags.append(vector_gcd(y) == 1)
    cl = class_group(fan)
    if not cl.cl.invariant_factors:
        abelian = list(gmax(cl, branch).per_divisor_injective)
        if abelian != flags:
            raise ConsistencyError(
                f"lattice criterion {flags} disagrees with G_max injectivity {abelian}")
    return flags


def max_toric_cover(fan: Fan, branch: BranchData) -> CoverSpec:
    flags = existence_toric(fan, branch)
    bad = [i for i, ok in enumerate(flags) if not ok]
    if bad:
        raise CoverDoesNotExist(
            "no toric cover with these orders: "
            + ", ".join(f"Z_{branch.orders[i]} -> G_max not injective at divisor {i}" for i in bad),
            bad)
    cover = toric_cover(fan, sublattice_from_multiples(fan, branch.orders))
    if list(cover.ram_orders) != list(branch.orders):
        raise ConsistencyError(f"maximal cover ramifies with {cover.ram_orders}, expected {branch.orders}")
    cl = class_group(fan)
    if not cl.cl.invariant_factors:
        g = gmax(cl, branch).g_max
        if not g.isomorphic(cover.galois_group):
            raise ConsistencyError(f"N/N'_min = {cover.galois_group} but G_max = {g}")
    return cover


def enumerate_covers(fan: Fan, branch: BranchData, bound: int = DEFAULT_BOUND) -> list[CoverSpec]:
    """Every quotient of the maximal toric cover, one per subgroup of its group.

    Sorted by the HNF basis of the sublattice.
    """
    top = max_toric_cover(fan, branch)
    G, _ = quotient_group(top.sublattice)
    seen = {}
    for H in subgroups(G, bound):
        gens = top.sublattice.basis.hstack(IntMatrix.from_cols(H.generators, fan.rank))
        sub = Sublattice.from_generators(gens)
        seen.setdefault(sub.key, sub)
    return [toric_cover(fan, seen[k]) for k in sorted(seen)]


# ---------------------------------------------------------------------------
# the abelian side


@dataclass(frozen=True)
class AbelianCoverData:
    group: FgAbGroup
    branch_elements: tuple[GroupElt, ...]
    branch: BranchData

    def __post_init__(self):
        if not self.group.is_finite:
            raise ValueError("Galois group must be finite")
        _check_length(len(self.branch_elements), self.branch)
        for i, (g, d) in enumerate(zip(self.branch_elements, self.branch.orders)):
            if g.group is not self.group:
                raise ValueError(f"branch element {i} is not in the Galois group")
            if element_order(g) != d:
                raise ValueError(f"branch element {i} has order {element_order(g)}, expected {d}")

    @cached_property
    def totally_ramified(self) -> bool:
        n = len(self.branch_elements)
        m = IntMatrix.from_cols([g.coords for g in self.branch_elements], self.group.ngens)
        return is_surjective(GroupHom(FgAbGroup.free(n), self.group, m, check=False))


def max_abelian_cover(cl: ClassGroupData, branch: BranchData) -> AbelianCoverData:
    """G_max with g_i the image of 1 in Z_{d_i}."""
    rep = gmax(cl, branch)
    if not all(rep.per_divisor_injective):
        raise CoverDoesNotExist(
            ", ".join(f"Z_{branch.orders[i]} -> G_max not injective at divisor {i}" for i in rep.offending),
            rep.offending)
    g = rep.g_max
    return AbelianCoverData(g, tuple(rep.branch_element(i) for i in range(branch.n)), branch)


def quotient_cover(cover: AbelianCoverData, H: Subgroup) -> AbelianCoverData:
    """The intermediate cover X/H; ramification orders are those of the images of g_i."""
    q, p = quotient(cover.group, IntMatrix.from_cols(H.generators, cover.group.ngens))
    imgs = tuple(p(g) for g in cover.branch_elements)
    return AbelianCoverData(q, imgs, BranchData(tuple(element_order(g) for g in imgs)))


def abelian_covers(cl: ClassGroupData, branch: BranchData,
                   bound: int = DEFAULT_BOUND) -> list[AbelianCoverData]:
    top = max_abelian_cover(cl, branch)
    return [quotient_cover(top, H) for H in subgroups(top.group, bound)]


# ---------------------------------------------------------------------------
# characters and the fundamental relations


def chi_bar(chi: Character, g: GroupElt) -> int:
    """Least a >= 0 with chi(g) = zeta^(a d / o(g))."""
    d = chi.group.exponent
    o = element_order(g)
    t = pair_character(chi, g)
    if (t * o) % d:
        raise ConsistencyError(f"character value {t} is not a multiple of d/o(g) = {d // o}")
    return t * o // d


def epsilon(chi: Character, chi2: Character, g: GroupElt) -> int:
    return (chi_bar(chi, g) + chi_bar(chi2, g)) // element_order(g)


class _ClassArith:
    """Arithmetic on canonical coordinates of a class group."""

    def __init__(self, cl: FgAbGroup):
        self.mods = cl.invariant_factors + [0] * cl.free_rank

    def norm(self, v):
        return tuple(x % m if m else x for x, m in zip(v, self.mods))

    def comb(self, terms):
        out = [0] * len(self.mods)
        for c, v in terms:
            if c:
                for k, x in enumerate(v):
                    out[k] += c * x
        return self.norm(out)


@dataclass(frozen=True)
class BuildingData:
    """Classes L_j solving m_j L_j = sum_i (m_j chibar_j(g_i) / d_i) D_i.

    The L_j depend on the chosen basis of characters (the dual basis of the
    invariant-factor decomposition of G); the relations they satisfy do not.
    """

    cover: AbelianCoverData
    cl: ClassGroupData = field(repr=False)
    basis_chars: tuple[Character, ...]
    L_classes: tuple[GroupElt, ...]
    unique: bool = True

    @cached_property
    def _chibar_table(self) -> dict:
        gs = self.cover.branch_elements
        return {chi.coords: [chi_bar(chi, g) for g in gs] for chi in characters(self.cover.group)}

    @cached_property
    def derived_classes(self) -> dict:
        """L_chi for every character, canonical Cl coordinates, built from the L_j.

        L_{chi + chi_j} = L_chi + L_j - sum_i eps^i(chi, chi_j) D_i, applied along
        the path that adds chi_0 first, then chi_1, and so on.
        """
        arith = _ClassArith(self.cl.cl)
        D = [arith.norm(x.key) for x in self.cl.divisor_classes]
        Lj = [arith.norm(x.key) for x in self.L_classes]
        orders = self.cover.branch.orders
        table = self._chibar_table
        es = self.cover.group.invariant_factors
        out = {}
        for a in itertools.product(*(range(e) for e in es)):
            last = max((j for j, x in enumerate(a) if x), default=None)
            if last is None:
                out[a] = arith.norm([0] * len(arith.mods))
                continue
            prev = tuple(x - (j == last) for j, x in enumerate(a))
            cb_prev, cb_j = table[prev], table[self.basis_chars[last].coords]
            eps = [(u + v) // d for u, v, d in zip(cb_prev, cb_j, orders)]
            out[a] = arith.comb([(1, out[prev]), (1, Lj[last])] + [(-e, Di) for e, Di in zip(eps, D)])
        return out

    def L(self, chi: Character) -> GroupElt:
        return self.cl.cl.elt(self.cl.cl.from_canonical(self.derived_classes[chi.coords]))


def _reduced_rhs(cl: ClassGroupData, cover: AbelianCoverData, chi: Character) -> tuple[int, ...]:
    m = chi.order()
    rhs = [0] * cl.cl.ngens
    for D, g, d in zip(cl.divisor_classes, cover.branch_elements, cover.branch.orders):
        num = m * chi_bar(chi, g)
        if num % d:
            raise ConsistencyError("reduced relation has a non-integral coefficient")
        c = num // d
        rhs = [x + c * y for x, y in zip(rhs, D.coords)]
    return tuple(rhs)


def solve_building_data(cl: ClassGroupData, cover: AbelianCoverData,
                        require_unique: bool = True) -> BuildingData:
    """Solve the reduced fundamental relations in Cl(Y).

    Needs a totally ramified cover. When Cl(Y)[d] != 0 (d the exponent of G)
    solutions are no longer unique; with ``require_unique`` that is an error,
    otherwise one solution is returned and flagged ``unique=False``.
    """
    _check_length(cl.n, cover.branch)
    G = cover.group
    d = G.exponent
    if not cover.totally_ramified:
        raise PreconditionError("the branch elements do not generate G; the cover is not totally ramified")
    unique = cl.cl.d_torsion_trivial(d)
    if not unique and require_unique:
        raise PreconditionError(
            f"Cl(Y)[{d}] is nonzero, so the branch data do not determine the building data; "
            "pass through the torsion cover first")
    k = cl.cl.ngens
    chars = basis_characters(G)
    Ls = []
    for chi in chars:
        m = chi.order()
        rhs = _reduced_rhs(cl, cover, chi)
        x = solve(IntMatrix.identity(k).scale(m).hstack(cl.cl.relations), rhs)
        if x is None:
            raise CoverDoesNotExist(
                f"{m} L = {list(rhs)} has no solution: cover does not exist over this class group")
        Ls.append(cl.cl.elt(x[:k]))
    return BuildingData(cover, cl, tuple(chars), tuple(Ls), unique)


@dataclass(frozen=True)
class RelationCheck:
    ok: bool
    pairs_checked: int
    violation: Optional[tuple] = None

    def __bool__(self) -> bool:
        return self.ok


def verify_fundamental_relations(bd: BuildingData) -> RelationCheck:
    """Check L_chi + L_chi' = L_{chi+chi'} + sum_i eps^i D_i for every ordered pair."""
    arith = _ClassArith(bd.cl.cl)
    D = [arith.norm(x.key) for x in bd.cl.divisor_classes]
    orders = bd.cover.branch.orders
    L = bd.derived_classes
    cb = bd._chibar_table
    es = bd.cover.group.invariant_factors
    keys = list(L)
    count = 0
    for a in keys:
        for b in keys:
            s = tuple((x + y) % e for x, y, e in zip(a, b, es))
            eps = [(u + v) // d for u, v, d in zip(cb[a], cb[b], orders)]
            diff = arith.comb([(1, L[a]), (1, L[b]), (-1, L[s])] + [(-e, Di) for e, Di in zip(eps, D)])
            count += 1
            if any(diff):
                return RelationCheck(False, count, (a, b, diff))
    for chi, Lc in zip(bd.basis_chars, bd.L_classes):
        # the reduced relation itself, directly
        rhs = arith.norm(bd.cl.cl.canonical(_reduced_rhs(bd.cl, bd.cover, chi)))
        lhs = arith.comb([(chi.order(), arith.norm(Lc.key))])
        if lhs != rhs:
            return RelationCheck(False, count, (chi.coords, None, "reduced relation fails"))
    return RelationCheck(True, count)


# ---------------------------------------------------------------------------
# abelian versus toric


@dataclass
class CrossCheckReport:
    g_max: list[int]
    lattice_quotient: list[int]
    natural_map_iso: bool
    subgroup_count: int
    enumerated_count: int
    brute_force_count: int
    extra_sublattices: list = field(default_factory=list)
    building_data_ok: bool = False

    @property
    def ok(self) -> bool:
        return (self.g_max == self.lattice_quotient and self.natural_map_iso
                and self.subgroup_count == self.enumerated_count == self.brute_force_count
                and not self.extra_sublattices and self.building_data_ok)


def natural_map(fan: Fan, rep: ExistenceReport, sub: Sublattice) -> GroupHom:
    """G_max -> N/N' induced by 1 in Z_{d_i} |-> r_i (raises if ill-defined)."""
    target, _ = quotient_group(sub)
    return GroupHom(rep.g_max, target, IntMatrix.from_cols(fan.rays, fan.rank))


def cross_check_abelian_toric(fan: Fan, branch: BranchData, bound: int = DEFAULT_BOUND) -> CrossCheckReport:
    """Compare the abelian and toric descriptions of all covers with given orders.

    Requires a torsion-free class group.
    """
    cl = class_group(fan)
    if cl.cl.invariant_factors:
        raise PreconditionError("class group has torsion; run the torsion cover first")
    rep = gmax(cl, branch)
    if not rep.exists:
        raise CoverDoesNotExist("no cover with these orders", rep.offending)
    top = max_toric_cover(fan, branch)
    try:
        nat = natural_map(fan, rep, top.sublattice)
        iso = is_injective(nat) and is_surjective(nat)
    except ValueError:
        iso = False
    covers = enumerate_covers(fan, branch, bound)
    n_sub = len(subgroups(rep.g_max, bound))
    found = {c.sublattice.key for c in covers}
    brute = {s.key for s in sublattices_containing(top.sublattice)}
    bd = solve_building_data(cl, max_abelian_cover(cl, branch))
    return CrossCheckReport(
        g_max=rep.g_max.invariant_factors,
        lattice_quotient=top.galois_group.invariant_factors,
        natural_map_iso=iso,
        subgroup_count=n_sub,
        enumerated_count=len(found),
        brute_force_count=len(brute),
        extra_sublattices=sorted(brute ^ found),
        building_data_ok=verify_fundamental_relations(bd).ok,
    )
