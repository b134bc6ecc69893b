"""Run the abelian/toric cross check over shipped torsion-free fixtures.

For each fixture and each order tuple in {1..max}^n that admits a cover with
|G_max| <= limit, checks N/N'_min = G_max, matching subgroup and sublattice
counts, and the fundamental relations for the maximal cover.

    python3 scripts/crosscheck_fixtures.py --max-order 3
"""

import argparse
import itertools
import time
from dataclasses import dataclass, field

from coverforge.clgrp import class_group
from coverforge.coverlab import BranchData, cross_check_abelian_toric, gmax
from coverforge.fanlat import fixture


@dataclass
class CrossConfig:
    fixtures: list = field(default_factory=lambda: ["p1", "p2", "p1xp1", "hirzebruch_a"])
    max_order: int = 3
    limit: int = 200


def run(cfg: CrossConfig) -> int:
    bad = 0
    for name in cfg.fixtures:
        fan = fixture(name)
        cl = class_group(fan)
        t0 = time.perf_counter()
        cases = 0
        for orders in itertools.product(range(1, cfg.max_order + 1), repeat=fan.n):
            b = BranchData(orders)
            rep = gmax(cl, b)
            if not rep.exists or rep.g_max.order() > cfg.limit:
                continue
            cc = cross_check_abelian_toric(fan, b)
            cases += 1
            if not cc.ok:
                bad += 1
                print(f"  MISMATCH {name} {orders}: {cc}")
        print(f"{name:14s} {cases:4d} cases  {time.perf_counter() - t0:.2f}s")
    print("all agree" if not bad else f"{bad} mismatches")
    return bad


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--fixtures", nargs="*")
    ap.add_argument("--max-order", type=int, default=3)
    ap.add_argument("--limit", type=int, default=200)
    a = ap.parse_args()
    cfg = CrossConfig(max_order=a.max_order, limit=a.limit)
    if a.fixtures:
        cfg.fixtures = a.fixtures
    raise SystemExit(1 if run(cfg) else 0)


if __name__ == "__main__":
    main()
