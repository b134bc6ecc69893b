"""Existence table for covers of P^{n-1} branched over the coordinate hyperplanes.

Compares the class-group test against the rule "d_i divides the lcm of the
other orders" and prints G_max for every order tuple that admits a cover.

    python3 scripts/pn_existence_table.py --n 3 --max-order 6
"""

import argparse
import itertools
import time
from dataclasses import dataclass
from math import lcm

from coverforge.clgrp import class_group
from coverforge.coverlab import BranchData, gmax
from coverforge.fanlat import Fan


@dataclass
class TableConfig:
    n: int = 3
    max_order: int = 6
    show: bool = False


def projective_space(n: int) -> Fan:
    """Fan of P^{n-1}: rays e_1..e_{n-1} and -(e_1+...+e_{n-1})."""
    s = n - 1
    rays = [[int(i == j) for j in range(s)] for i in range(s)] + [[-1] * s]
    cones = [[j for j in range(n) if j != i] for i in range(n)]
    return Fan.build(s, rays, cones)


def run(cfg: TableConfig) -> int:
    cl = class_group(projective_space(cfg.n))
    t0 = time.perf_counter()
    total = mismatches = exists = 0
    for d in itertools.product(range(1, cfg.max_order + 1), repeat=cfg.n):
        rep = gmax(cl, BranchData(d))
        rule = tuple(lcm(*(d[j] for j in range(cfg.n) if j != i)) % d[i] == 0 for i in range(cfg.n))
        total += 1
        mismatches += rep.per_divisor_injective != rule
        exists += rep.exists
        if cfg.show and rep.exists:
            print(f"{d}  G_max={rep.g_max.invariant_factors}")
    print(f"n={cfg.n} orders<= {cfg.max_order}: {total} tuples, {exists} admit covers, "
          f"{mismatches} disagree with the divisibility rule ({time.perf_counter() - t0:.2f}s)")
    return mismatches


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--n", type=int, default=3)
    ap.add_argument("--max-order", type=int, default=6)
    ap.add_argument("--show", action="store_true")
    a = ap.parse_args()
    raise SystemExit(1 if run(TableConfig(a.n, a.max_order, a.show)) else 0)


if __name__ == "__main__":
    main()
