"""Fans, finite-index sublattices and the toric covers they define.

A toric cover of the toric variety of a fan (N, S) is given by a sublattice
N' of N of finite index, keeping the same cones. Its Galois group is N/N' and
it ramifies over the divisor of ray r_i with order d_i, where d_i r_i is the
first lattice point of N' on that ray.
"""

from __future__ import annotations

import itertools
import json
import random
from dataclasses import dataclass, field
from functools import cached_property, cmp_to_key
from math import prod
from pathlib import Path
from typing import Optional, Sequence

from .abgrp import FgAbGroup, GroupHom, element_order
from .intlin import IntMatrix, column_basis, det, rank, solve, vector_gcd


class FanError(ValueError):
    """Malformed or invalid fan data."""


def primitive(v: Sequence[int]) -> tuple[int, ...]:
    """Primitive lattice vector on the ray through ``v``."""
    g = vector_gcd(v)
    if g == 0:
        raise ValueError("the zero vector spans no ray")
    return tuple(x // g for x in v)


@dataclass(frozen=True)
class Fan:
    rank: int
    rays: tuple[tuple[int, ...], ...]
    cones: tuple[frozenset, ...]
    complete: bool = True

    @classmethod
    def build(cls, rank: int, rays, cones, complete: bool = True, validate: bool = True) -> "Fan":
        fan = cls(rank, tuple(tuple(int(x) for x in r) for r in rays),
                  tuple(frozenset(int(i) for i in c) for c in cones), bool(complete))
        if validate:
            fan.validate()
        return fan

    @property
    def n(self) -> int:
        return len(self.rays)

    @cached_property
    def ray_matrix(self) -> IntMatrix:
        """``n x s`` matrix whose i-th row is r_i."""
        return IntMatrix.from_rows(self.rays, self.rank)

    def validate(self) -> None:
        s = self.rank
        if s < 0:
            raise FanError("rank must be nonnegative")
        for i, r in enumerate(self.rays):
            if len(r) != s:
                raise FanError(f"ray {i} has {len(r)} coordinates, expected {s}")
            if not any(r):
                raise FanError(f"ray {i} is zero")
            if vector_gcd(r) != 1:
                raise FanError(f"ray {i} = {list(r)} is not primitive")
        if len(set(self.rays)) != len(self.rays):
            raise FanError("rays are not pairwise distinct")
        used = set()
        for k, c in enumerate(self.cones):
            if not c:
                raise FanError(f"cone {k} is empty")
            bad = [i for i in c if not 0 <= i < self.n]
            if bad:
                raise FanError(f"cone {k} refers to unknown ray index {bad[0]}")
            used |= c
            if len(c) <= s and rank(IntMatrix.from_rows([self.rays[i] for i in sorted(c)], s)) < len(c):
                raise FanError(f"cone {k} has linearly dependent rays")
        missing = sorted(set(range(self.n)) - used)
        if missing:
            raise FanError(f"ray {missing[0]} lies in no cone")
        if self.complete:
            check_complete(self)

    # serialisation ----------------------------------------------------
    def to_json(self) -> dict:
        return {"rank": self.rank, "rays": [list(r) for r in self.rays],
                "cones": [sorted(c) for c in self.cones], "complete": self.complete}

    @classmethod
    def from_json(cls, data: dict) -> "Fan":
        if not isinstance(data, dict):
            raise FanError("fan document must be a JSON object")
        for key in ("rank", "rays", "cones"):
            if key not in data:
                raise FanError(f"fan document lacks field '{key}'")
        if not isinstance(data["rank"], int):
            raise FanError("field 'rank' must be an integer")
        for key in ("rays", "cones"):
            v = data[key]
            if not isinstance(v, list) or not all(
                    isinstance(x, list) and all(isinstance(y, int) for y in x) for x in v):
                raise FanError(f"field '{key}' must be a list of integer lists")
        return cls.build(data["rank"], data["rays"], data["cones"], data.get("complete", True))


def load_fan(path) -> Fan:
    with open(path) as fh:
        return Fan.from_json(json.load(fh))


FIXTURES = Path(__file__).with_name("fixtures")


def fixture(name: str) -> Fan:
    """One of the bundled fans: p1, p2, p3, p1xp1, hirzebruch_a, square_torsion."""
    return load_fan(FIXTURES / f"{name}.json")


# ---------------------------------------------------------------------------
# completeness


def _angle_cmp(u, v):
    def half(w):
        return 0 if (w[1] > 0 or (w[1] == 0 and w[0] > 0)) else 1
    hu, hv = half(u), half(v)
    if hu != hv:
        return hu - hv
    cross = u[0] * v[1] - u[1] * v[0]
    return -1 if cross > 0 else (1 if cross < 0 else 0)


def _complete_rank2(fan: Fan) -> Optional[str]:
    if fan.n < 3:
        return "a complete plane fan needs at least three rays"
    order = sorted(range(fan.n), key=cmp_to_key(lambda a, b: _angle_cmp(fan.rays[a], fan.rays[b])))
    for a, b in zip(order, order[1:] + order[:1]):
        u, v = fan.rays[a], fan.rays[b]
        if u[0] * v[1] - u[1] * v[0] <= 0:
            return f"gap of angle >= pi between rays {a} and {b}"
        if not any({a, b} <= c for c in fan.cones):
            return f"no cone spans the sector between rays {a} and {b}"
    return None


def _in_cone(point, rays) -> bool:
    s = len(point)
    for sub in itertools.combinations(rays, s):
        B = IntMatrix.from_cols(sub, s)
        d = det(B)
        if not d:
            continue
        ok = True
        for k in range(s):
            cols = list(sub)
            cols[k] = point
            if det(IntMatrix.from_cols(cols, s)) * d < 0:
                ok = False
                break
        if ok:
            return True
    return False


def check_complete(fan: Fan, samples: int = 200, seed: int = 0) -> None:
    """Raise FanError unless the cones cover the whole space.

    Exact in rank <= 2. In higher rank the check samples random lattice
    points and looks for a cone containing each one, so it can only refute.
    """
    s = fan.rank
    if s == 0:
        return
    if s == 1:
        if set(fan.rays) != {(1,), (-1,)}:
            raise FanError("a complete fan in rank 1 has rays +1 and -1")
        return
    if s == 2:
        msg = _complete_rank2(fan)
        if msg:
            raise FanError(f"fan is not complete: {msg}")
        return
    rng = random.Random(seed)
    cones = [[fan.rays[i] for i in sorted(c)] for c in fan.cones if len(c) >= s]
    for _ in range(samples):
        p = tuple(rng.randint(-50, 50) for _ in range(s))
        if not any(p):
            continue
        if not any(_in_cone(p, c) for c in cones):
            raise FanError(f"fan is not complete: point {list(p)} lies in no cone")


# ---------------------------------------------------------------------------
# sublattices


@dataclass(frozen=True)
class Sublattice:
    """Finite-index sublattice of Z^s with its canonical (column HNF) basis."""

    ambient_rank: int
    basis: IntMatrix

    @classmethod
    def from_generators(cls, gens: IntMatrix) -> "Sublattice":
        s = gens.rows
        B = column_basis(gens) if gens.cols else IntMatrix(s, 0)
        if B.cols != s:
            raise ValueError(f"generators span a sublattice of rank {B.cols} < {s}; index is infinite")
        return cls(s, B)

    @classmethod
    def full(cls, s: int) -> "Sublattice":
        return cls(s, IntMatrix.identity(s))

    @property
    def index(self) -> int:
        return prod(self.basis[i, i] for i in range(self.ambient_rank))

    def coordinates(self, v: Sequence[int]) -> Optional[tuple[int, ...]]:
        return solve(self.basis, v)

    def __contains__(self, v) -> bool:
        return self.coordinates(v) is not None

    def contains_lattice(self, other: "Sublattice") -> bool:
        return all(c in self for c in other.basis.columns())

    @property
    def key(self) -> tuple:
        return tuple(map(tuple, self.basis.tolist()))


def quotient_group(sub: Sublattice) -> tuple[FgAbGroup, GroupHom]:
    """N/N' with the projection from N = Z^s."""
    G = FgAbGroup(sub.basis)
    return G, GroupHom(FgAbGroup.free(sub.ambient_rank), G, IntMatrix.identity(sub.ambient_rank), check=False)


def ramification_orders(fan: Fan, sub: Sublattice) -> list[int]:
    """Least d_i >= 1 with d_i r_i in N'."""
    G, _ = quotient_group(sub)
    return [element_order(G.elt(r)) for r in fan.rays]


def sublattice_from_multiples(fan: Fan, orders: Sequence[int]) -> Sublattice:
    """Sublattice generated by the vectors d_i r_i."""
    if len(orders) != fan.n:
        raise ValueError(f"{len(orders)} orders given for {fan.n} rays")
    if any(d < 1 for d in orders):
        raise ValueError("branch orders must be >= 1")
    gens = IntMatrix.from_cols([[d * x for x in r] for d, r in zip(orders, fan.rays)], fan.rank)
    try:
        return Sublattice.from_generators(gens)
    except ValueError as exc:
        raise FanError(f"rays do not span the lattice ({exc})") from None


def refine(fan: Fan, sub: Sublattice) -> Fan:
    """The same cones with rays written in a basis of N' (the fan of the cover)."""
    rays = []
    for r, d in zip(fan.rays, ramification_orders(fan, sub)):
        y = sub.coordinates([d * x for x in r])
        rays.append(primitive(y))
    return Fan.build(fan.rank, rays, fan.cones, fan.complete, validate=False)


@dataclass(frozen=True)
class CoverSpec:
    """Toric cover (N', S) -> (N, S)."""

    fan: Fan = field(repr=False)
    sublattice: Sublattice
    galois_group: FgAbGroup
    ram_orders: tuple[int, ...]

    @cached_property
    def covering_fan(self) -> Fan:
        return refine(self.fan, self.sublattice)

    @property
    def degree(self) -> int:
        return self.sublattice.index


def toric_cover(fan: Fan, sub: Sublattice) -> CoverSpec:
    if sub.ambient_rank != fan.rank:
        raise ValueError("sublattice and fan live in different lattices")
    G, _ = quotient_group(sub)
    return CoverSpec(fan, sub, G, tuple(ramification_orders(fan, sub)))


# ---------------------------------------------------------------------------
# isomorphism of fans


def fan_isomorphism(f1: Fan, f2: Fan) -> Optional[IntMatrix]:
    """A unimodular A mapping the rays and cones of ``f1`` onto those of ``f2``, or None."""
    if f1.rank != f2.rank or f1.n != f2.n or len(f1.cones) != len(f2.cones):
        return None
    s = f1.rank
    basis = None
    for sub in itertools.combinations(range(f1.n), s):
        if det(IntMatrix.from_rows([f1.rays[i] for i in sub], s)):
            basis = sub
            break
    if basis is None:
        return None
    R1t = IntMatrix.from_rows([f1.rays[i] for i in basis], s)
    targets = {r: k for k, r in enumerate(f2.rays)}
    cones2 = set(f2.cones)
    for img in itertools.permutations(range(f2.n), s):
        # solve A R1 = R2 column by column through R1^T A^T = R2^T
        rows = []
        for k in range(s):
            rhs = [f2.rays[j][k] for j in img]
            x = solve(R1t, rhs)
            if x is None:
                break
            rows.append(x)
        else:
            A = IntMatrix.from_rows(rows, s)
            if abs(det(A)) != 1:
                continue
            perm = []
            for r in f1.rays:
                k = targets.get(A @ r)
                if k is None:
                    break
                perm.append(k)
            else:
                if {frozenset(perm[i] for i in c) for c in f1.cones} == cones2:
                    return A
    return None


def _hnf_bases(s: int, index: int):
    """All lower-triangular column-HNF bases of sublattices of Z^s with index dividing ``index``."""
    def diagonals(k, budget):
        if k == 0:
            yield ()
            return
        for a in range(1, budget + 1):
            if budget % a == 0:
                for rest in diagonals(k - 1, budget // a):
                    yield (a,) + rest

    for diag in diagonals(s, index):
        # entry (r, c) for c < r ranges over [0, diag[r])
        slots = [(r, c) for r in range(s) for c in range(r)]
        for vals in itertools.product(*(range(diag[r]) for r, _ in slots)):
            m = [[0] * s for _ in range(s)]
            for r in range(s):
                m[r][r] = diag[r]
            for (r, c), v in zip(slots, vals):
                m[r][c] = v
            yield IntMatrix.from_rows(m, s)


def sublattices_containing(inner: Sublattice) -> list[Sublattice]:
    """Every lattice between ``inner`` and Z^s, by exhaustive search over HNF bases.

    Deliberately independent of subgroup enumeration; used as an oracle.
    """
    out = []
    for B in _hnf_bases(inner.ambient_rank, inner.index):
        cand = Sublattice(inner.ambient_rank, B)
        if cand.contains_lattice(inner):
            out.append(cand)
    return out
