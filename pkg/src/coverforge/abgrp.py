"""Finitely generated abelian groups given as cokernels of integer matrices.

A group on ``k`` generators is ``Z^k / (column span of relations)``. Elements
are coordinate vectors on the generators; two vectors name the same element
exactly when their difference lies in the relation span. Internally every
group caches its Smith form, which gives a canonical coordinate system
``Z_{e_1} + ... + Z_{e_t} + Z^f`` (the "invariant coordinates").
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property, reduce
from math import gcd, lcm, prod
from typing import Iterator, Optional, Sequence

from .intlin import IntMatrix, column_basis, kernel_basis, snf

DEFAULT_BOUND = 10_000


class CapacityError(RuntimeError):
    """An enumeration would exceed the configured size bound."""


class IllDefinedHom(ValueError):
    """A matrix does not send relations of the source into relations of the target."""


class FgAbGroup:
    def __init__(self, relations: IntMatrix):
        self.relations = relations

    # constructors -----------------------------------------------------
    @classmethod
    def free(cls, rank: int) -> "FgAbGroup":
        return cls(IntMatrix(rank, 0))

    @classmethod
    def trivial(cls) -> "FgAbGroup":
        return cls.free(0)

    @classmethod
    def cyclic_sum(cls, orders: Sequence[int]) -> "FgAbGroup":
        """``Z_{d_1} + ... + Z_{d_n}`` keeping one generator per summand (even when d_i = 1)."""
        if any(d < 0 for d in orders):
            raise ValueError("cyclic orders must be nonnegative")
        return cls(IntMatrix.diag(list(orders)))

    # structure --------------------------------------------------------
    @property
    def ngens(self) -> int:
        return self.relations.rows

    @cached_property
    def _snf(self):
        return snf(self.relations)

    @cached_property
    def _layout(self) -> list[int]:
        """Modulus of every Smith coordinate: 1 (dead), e >= 2 (torsion) or 0 (free)."""
        diag = self._snf.diagonal
        return [diag[i] if i < len(diag) else 0 for i in range(self.ngens)]

    @cached_property
    def _torsion_rows(self) -> list[int]:
        return [i for i, e in enumerate(self._layout) if e >= 2]

    @cached_property
    def _free_rows(self) -> list[int]:
        return [i for i, e in enumerate(self._layout) if e == 0]

    @property
    def invariant_factors(self) -> list[int]:
        return [self._layout[i] for i in self._torsion_rows]

    @property
    def free_rank(self) -> int:
        return len(self._free_rows)

    @property
    def is_finite(self) -> bool:
        return self.free_rank == 0

    @property
    def is_trivial(self) -> bool:
        return self.is_finite and not self.invariant_factors

    @property
    def torsion_order(self) -> int:
        return prod(self.invariant_factors)

    def order(self) -> Optional[int]:
        """Cardinality, or None for an infinite group."""
        return self.torsion_order if self.is_finite else None

    @property
    def exponent(self) -> Optional[int]:
        if not self.is_finite:
            return None
        return reduce(lcm, self.invariant_factors, 1)

    def isomorphic(self, other: "FgAbGroup") -> bool:
        return (self.invariant_factors == other.invariant_factors
                and self.free_rank == other.free_rank)

    def d_torsion_trivial(self, d: int) -> bool:
        """True iff ``A[d] = {a : d a = 0}`` is trivial."""
        return all(gcd(e, d) == 1 for e in self.invariant_factors)

    def __repr__(self) -> str:
        return f"FgAbGroup({describe(self)})"

    # element coordinates ----------------------------------------------
    def canonical(self, coords: Sequence[int]) -> tuple[int, ...]:
        """Invariant coordinates of an element: torsion parts reduced, then free parts."""
        coords = list(coords)
        if len(coords) != self.ngens:
            raise ValueError(f"element has {len(coords)} coordinates, group has {self.ngens} generators")
        y = self._snf.U @ coords
        tors = tuple(y[i] % self._layout[i] for i in self._torsion_rows)
        return tors + tuple(y[i] for i in self._free_rows)

    def from_canonical(self, inv: Sequence[int]) -> tuple[int, ...]:
        """Presentation coordinates of the element with the given invariant coordinates."""
        y = [0] * self.ngens
        for i, v in zip(self._torsion_rows + self._free_rows, inv):
            y[i] = v
        return self._snf.U_inv @ y

    def invariant_generators(self) -> list[tuple[int, ...]]:
        """Presentation coordinates of the generators of the invariant-factor decomposition."""
        k = len(self.invariant_factors) + self.free_rank
        return [self.from_canonical([1 if i == j else 0 for i in range(k)]) for j in range(k)]

    def elt(self, coords: Sequence[int]) -> "GroupElt":
        return GroupElt(self, tuple(coords))

    def zero(self) -> "GroupElt":
        return GroupElt(self, (0,) * self.ngens)

    def gen(self, i: int) -> "GroupElt":
        return GroupElt(self, tuple(1 if j == i else 0 for j in range(self.ngens)))

    def elements(self, bound: int = DEFAULT_BOUND) -> Iterator["GroupElt"]:
        """Every element once, in lexicographic order of invariant coordinates."""
        if not self.is_finite:
            raise CapacityError("cannot enumerate the elements of an infinite group")
        if self.torsion_order > bound:
            raise CapacityError(f"group of order {self.torsion_order} exceeds bound {bound}")
        for inv in itertools.product(*(range(e) for e in self.invariant_factors)):
            yield GroupElt(self, self.from_canonical(inv))


def describe(group: FgAbGroup) -> str:
    parts = [f"Z_{e}" for e in group.invariant_factors]
    if group.free_rank:
        parts.insert(0, "Z" if group.free_rank == 1 else f"Z^{group.free_rank}")
    return " + ".join(parts) if parts else "0"


@dataclass(frozen=True, eq=False)
class GroupElt:
    group: FgAbGroup
    coords: tuple[int, ...]

    @cached_property
    def key(self) -> tuple[int, ...]:
        return self.group.canonical(self.coords)

    def _check(self, other: "GroupElt"):
        if other.group is not self.group:
            raise ValueError("elements of different groups")

    def __add__(self, other: "GroupElt") -> "GroupElt":
        self._check(other)
        return GroupElt(self.group, tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: "GroupElt") -> "GroupElt":
        self._check(other)
        return GroupElt(self.group, tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self) -> "GroupElt":
        return GroupElt(self.group, tuple(-a for a in self.coords))

    def __mul__(self, c: int) -> "GroupElt":
        return GroupElt(self.group, tuple(c * a for a in self.coords))

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        return isinstance(other, GroupElt) and other.group is self.group and self.key == other.key

    def __hash__(self) -> int:
        return hash(self.key)

    def is_zero(self) -> bool:
        return not any(self.key)

    def __repr__(self) -> str:
        return f"GroupElt({list(self.coords)})"


def element_order(a: GroupElt) -> Optional[int]:
    """Least m >= 1 with m a = 0, or None when the order is infinite."""
    g = a.group
    key = a.key
    nt = len(g.invariant_factors)
    if any(key[nt:]):
        return None
    return reduce(lcm, (e // gcd(e, x) for e, x in zip(g.invariant_factors, key)), 1)


# ---------------------------------------------------------------------------
# homomorphisms


@dataclass(frozen=True, eq=False)
class GroupHom:
    """Homomorphism given by a ``target.ngens x source.ngens`` integer matrix."""

    source: FgAbGroup
    target: FgAbGroup
    matrix: IntMatrix
    check: bool = field(default=True, repr=False)

    def __post_init__(self):
        if self.matrix.shape != (self.target.ngens, self.source.ngens):
            raise IllDefinedHom(
                f"matrix shape {self.matrix.shape} does not fit "
                f"{self.source.ngens} -> {self.target.ngens} generators")
        if self.check:
            image = self.matrix @ self.source.relations
            for j in range(image.cols):
                if any(self.target.canonical(image.col(j))):
                    raise IllDefinedHom(f"relation {j} of the source is not killed in the target")

    def __call__(self, a: GroupElt) -> GroupElt:
        if a.group is not self.source:
            raise ValueError("element does not belong to the source group")
        return GroupElt(self.target, self.matrix @ a.coords)

    def compose(self, inner: "GroupHom") -> "GroupHom":
        """``self o inner``."""
        if inner.target is not self.source:
            raise ValueError("cannot compose: groups do not match")
        return GroupHom(inner.source, self.target, self.matrix @ inner.matrix, check=False)

    def is_zero(self) -> bool:
        return all(not any(self.target.canonical(c)) for c in self.matrix.columns())


def subgroup(ambient: FgAbGroup, gens: IntMatrix) -> tuple[FgAbGroup, GroupHom]:
    """Subgroup generated by the columns of ``gens`` with its inclusion.

    The subgroup is presented on those generators; its relations are all
    integer combinations of them that vanish in the ambient group.
    """
    if gens.rows != ambient.ngens:
        raise ValueError("generator matrix does not match the ambient group")
    k = gens.cols
    ker = kernel_basis(gens.hstack(ambient.relations))
    rels = ker.select_rows(range(k))
    sub = FgAbGroup(column_basis(rels) if rels.cols else IntMatrix(k, 0))
    return sub, GroupHom(sub, ambient, gens, check=False)


def cokernel(h: GroupHom) -> tuple[FgAbGroup, GroupHom]:
    """``target / image(h)`` with the quotient map."""
    t = h.target
    q = FgAbGroup(t.relations.hstack(h.matrix))
    return q, GroupHom(t, q, IntMatrix.identity(t.ngens), check=False)


def quotient(ambient: FgAbGroup, gens: IntMatrix) -> tuple[FgAbGroup, GroupHom]:
    """``ambient / <columns of gens>`` with the quotient map."""
    q = FgAbGroup(ambient.relations.hstack(gens))
    return q, GroupHom(ambient, q, IntMatrix.identity(ambient.ngens), check=False)


def image(h: GroupHom) -> tuple[FgAbGroup, GroupHom]:
    return subgroup(h.target, h.matrix)


def kernel(h: GroupHom) -> tuple[FgAbGroup, GroupHom]:
    """Kernel of ``h`` as a subgroup of the source, with its inclusion."""
    s = h.source
    k = s.ngens
    # x is in the kernel iff M x lies in the target's relation span
    ker = kernel_basis(h.matrix.hstack(h.target.relations))
    pre = ker.select_rows(range(k)) if ker.cols else IntMatrix(k, 0)
    gens = column_basis(pre) if pre.cols else IntMatrix(k, 0)
    return subgroup(s, gens)


def is_injective(h: GroupHom) -> bool:
    return kernel(h)[0].is_trivial


def is_surjective(h: GroupHom) -> bool:
    return cokernel(h)[0].is_trivial


def dual_free(A: FgAbGroup) -> tuple[FgAbGroup, IntMatrix]:
    """``Hom(A, Z)`` as a free group, with the pairing matrix.

    Returns ``(Z^r, P)`` where ``P`` is ``r x A.ngens`` and the j-th dual
    generator sends the element with coordinates x to ``(P x)_j``. Torsion
    and relations pair to zero.
    """
    U = A._snf.U
    P = U.select_rows(A._free_rows)
    return FgAbGroup.free(A.free_rank), P


def torsion_subgroup(A: FgAbGroup) -> tuple[FgAbGroup, GroupHom]:
    gens = [A.from_canonical([1 if i == j else 0 for i in range(len(A.invariant_factors) + A.free_rank)])
            for j in range(len(A.invariant_factors))]
    return subgroup(A, IntMatrix.from_cols(gens, A.ngens))


def from_invariant_factors(factors: Sequence[int], free_rank: int = 0) -> FgAbGroup:
    """Canonical diagonal presentation; factors equal to 1 are dropped."""
    if free_rank < 0 or any(f < 1 for f in factors):
        raise ValueError("invariant factors must be >= 1 and free rank >= 0")
    kept = [f for f in factors if f != 1]
    return FgAbGroup(IntMatrix.diag(kept, len(kept) + free_rank, len(kept)))


# ---------------------------------------------------------------------------
# subgroup enumeration


@dataclass(frozen=True)
class Subgroup:
    """A subgroup of a finite group, stored as its set of invariant-coordinate keys."""

    ambient: FgAbGroup = field(repr=False)
    keys: frozenset
    generators: tuple[tuple[int, ...], ...]

    @property
    def order(self) -> int:
        return len(self.keys)

    def inclusion(self) -> tuple[FgAbGroup, GroupHom]:
        gens = IntMatrix.from_cols(self.generators, self.ambient.ngens)
        return subgroup(self.ambient, gens)


def subgroups(A: FgAbGroup, bound: int = DEFAULT_BOUND) -> list[Subgroup]:
    """Every subgroup of a finite group exactly once.

    Subgroups are grown by adjoining one element at a time to subgroups
    already found; each is recorded with a small generating set.
    """
    if not A.is_finite:
        raise CapacityError("subgroup enumeration needs a finite group")
    if A.torsion_order > bound:
        raise CapacityError(f"group of order {A.torsion_order} exceeds bound {bound}")
    es = A.invariant_factors

    def add(x, y):
        return tuple((a + b) % e for a, b, e in zip(x, y, es))

    elements = list(itertools.product(*(range(e) for e in es)))
    zero = tuple(0 for _ in es)
    start = frozenset([zero])
    found = {start: ()}
    frontier = [start]
    while frontier:
        nxt = []
        for S in frontier:
            for g in elements:
                if g in S:
                    continue
                # <S, g> = union of cosets S + k g
                cosets = set(S)
                step = g
                while step not in S:
                    cosets.update(add(s, step) for s in S)
                    step = add(step, g)
                T = frozenset(cosets)
                if T not in found:
                    found[T] = found[S] + (g,)
                    nxt.append(T)
        frontier = nxt
    out = [Subgroup(A, S, tuple(A.from_canonical(g) for g in gens))
           for S, gens in found.items()]
    out.sort(key=lambda s: (s.order, sorted(s.keys)))
    return out


# ---------------------------------------------------------------------------
# characters


@dataclass(frozen=True, eq=False)
class Character:
    """Character of a finite group in invariant-factor coordinates.

    Values are never materialised as roots of unity: a character sends an
    element to an exponent t in Z_d, d the group exponent, meaning zeta^t
    for one fixed primitive d-th root zeta.
    """

    group: FgAbGroup
    coords: tuple[int, ...]

    def __post_init__(self):
        es = self.group.invariant_factors
        if not self.group.is_finite:
            raise ValueError("characters are only supported on finite groups")
        if len(self.coords) != len(es):
            raise ValueError("character coordinates do not match the invariant factors")
        object.__setattr__(self, "coords", tuple(c % e for c, e in zip(self.coords, es)))

    def __add__(self, other: "Character") -> "Character":
        if other.group is not self.group:
            raise ValueError("characters of different groups")
        return Character(self.group, tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __mul__(self, c: int) -> "Character":
        return Character(self.group, tuple(c * a for a in self.coords))

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        return isinstance(other, Character) and other.group is self.group and other.coords == self.coords

    def __hash__(self) -> int:
        return hash(self.coords)

    def order(self) -> int:
        return reduce(lcm, (e // gcd(e, c) for e, c in zip(self.group.invariant_factors, self.coords)), 1)

    def __repr__(self) -> str:
        return f"Character({list(self.coords)})"


def characters(G: FgAbGroup) -> list[Character]:
    return [Character(G, c) for c in itertools.product(*(range(e) for e in G.invariant_factors))]


def basis_characters(G: FgAbGroup) -> list[Character]:
    """Dual basis of the invariant-factor decomposition; the j-th has order e_j."""
    r = len(G.invariant_factors)
    return [Character(G, tuple(1 if i == j else 0 for i in range(r))) for j in range(r)]


def pair_character(chi: Character, a: GroupElt) -> int:
    """Exponent t in Z_d with chi(a) = zeta^t."""
    G = chi.group
    if a.group is not G:
        raise ValueError("character and element belong to different groups")
    d = G.exponent
    return sum(c * x * (d // e) for c, x, e in zip(chi.coords, a.key, G.invariant_factors)) % d
