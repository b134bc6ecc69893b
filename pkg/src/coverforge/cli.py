"""Command line front end.

    coverforge exists --fan p2.json --orders 2,3,5
    coverforge maxcover --fan p2.json --orders 2,2,2 --format json

Exit status: 0 on success, 2 when the requested cover does not exist
(a mathematical answer, not a failure), 1 on bad input or internal errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass
from typing import Optional

from . import __version__
from .abgrp import DEFAULT_BOUND, CapacityError, FgAbGroup, describe, element_order
from .clgrp import ClassGroupData, ConsistencyError, abstract_class_group, class_group, torsion_check, torsion_cover
from .coverlab import (
    AbelianCoverData,
    BranchData,
    CoverDoesNotExist,
    PreconditionError,
    abelian_covers,
    cross_check_abelian_toric,
    enumerate_covers,
    existence_toric,
    gmax,
    max_abelian_cover,
    max_toric_cover,
    solve_building_data,
    verify_fundamental_relations,
)
from .fanlat import CoverSpec, Fan, FanError, Sublattice, load_fan, toric_cover
from .intlin import IntMatrix

COMMANDS = ("clgroup", "exists", "maxcover", "covers", "verify", "torsion-cover", "crosscheck")
TORIC_ONLY = ("torsion-cover", "crosscheck")


class InputError(ValueError):
    pass


class NotExists(Exception):
    """Carries the report for a cover that does not exist (exit status 2)."""

    def __init__(self, report: dict):
        super().__init__(report.get("reason", "cover does not exist"))
        self.report = report


@dataclass
class JobConfig:
    command: str
    mode: str  # "toric" or "abstract"
    input_path: str
    orders: Optional[list] = None
    output_format: str = "text"
    bound: int = DEFAULT_BOUND
    sublattice_path: Optional[str] = None


# ---------------------------------------------------------------------------
# input


def _read_json(path: str, what: str):
    try:
        with open(path) as fh:
            return json.load(fh)
    except FileNotFoundError:
        raise InputError(f"{what} file not found: {path}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"{what} file {path} is not valid JSON: {exc}") from None


def parse_orders(arg: str) -> list[int]:
    """``"2,3,5"`` or a path to a JSON list (or an object with an "orders" list)."""
    if os.path.exists(arg):
        data = _read_json(arg, "orders")
        if isinstance(data, dict):
            data = data.get("orders")
        if not isinstance(data, list) or not all(isinstance(x, int) for x in data):
            raise InputError("orders file must hold a list of integers")
        return data
    try:
        orders = [int(x) for x in arg.split(",") if x.strip()]
    except ValueError:
        raise InputError(f"--orders: cannot parse {arg!r} as comma separated integers") from None
    bad = [i for i, d in enumerate(orders) if d < 1]
    if bad:
        raise InputError(f"--orders: order at divisor {bad[0]} must be >= 1")
    return orders


def load_abstract(path: str) -> ClassGroupData:
    data = _read_json(path, "abstract")
    if not isinstance(data, dict) or "cl" not in data or "divisor_classes" not in data:
        raise InputError("abstract document needs fields 'cl' and 'divisor_classes'")
    cl = data["cl"]
    if not isinstance(cl, dict):
        raise InputError("field 'cl' must be an object")
    factors = cl.get("invariant_factors", [])
    free_rank = cl.get("free_rank", 0)
    if not isinstance(factors, list) or not all(isinstance(x, int) for x in factors):
        raise InputError("field 'cl.invariant_factors' must be a list of integers")
    if not isinstance(free_rank, int) or free_rank < 0:
        raise InputError("field 'cl.free_rank' must be a nonnegative integer")
    classes = data["divisor_classes"]
    if not isinstance(classes, list) or not all(
            isinstance(c, list) and all(isinstance(x, int) for x in c) for c in classes):
        raise InputError("field 'divisor_classes' must be a list of integer lists")
    try:
        return abstract_class_group(factors, free_rank, classes)
    except ValueError as exc:
        raise InputError(str(exc)) from None


def load_sublattice(path: str, rank: int) -> Sublattice:
    data = _read_json(path, "sublattice")
    if isinstance(data, dict) and "sublattice" in data:
        data = data["sublattice"]
    if isinstance(data, dict):
        data = data.get("basis")
    if not isinstance(data, list) or not all(isinstance(r, list) for r in data):
        raise InputError("sublattice file must give 'basis' as a list of rows")
    try:
        M = IntMatrix.from_rows(data, rank)
    except ValueError as exc:
        raise InputError(f"sublattice basis: {exc}") from None
    if M.rows != rank:
        raise InputError(f"sublattice basis has {M.rows} rows, fan has rank {rank}")
    try:
        return Sublattice.from_generators(M)
    except ValueError as exc:
        raise InputError(f"sublattice basis: {exc}") from None


# ---------------------------------------------------------------------------
# report pieces


def group_doc(G: FgAbGroup) -> dict:
    return {"invariant_factors": G.invariant_factors, "free_rank": G.free_rank, "order": G.order()}


def cover_doc(c: CoverSpec) -> dict:
    return {
        "galois_group": group_doc(c.galois_group),
        "sublattice": {"basis": c.sublattice.basis.tolist(), "index": c.sublattice.index},
        "ramification_orders": list(c.ram_orders),
        "covering_fan_rays": [list(r) for r in c.covering_fan.rays],
    }


def abelian_doc(a: AbelianCoverData) -> dict:
    return {
        "galois_group": group_doc(a.group),
        "branch_elements": [list(g.key) for g in a.branch_elements],
        "ramification_orders": list(a.branch.orders),
        "totally_ramified": a.totally_ramified,
    }


def building_doc(cl: ClassGroupData, cover: AbelianCoverData) -> dict:
    bd = solve_building_data(cl, cover)
    check = verify_fundamental_relations(bd)
    return {
        "basis_dependent": True,
        "basis_character_orders": [chi.order() for chi in bd.basis_chars],
        "L_divisor_coords": [list(L.coords) for L in bd.L_classes],
        "L_invariant_coords": [list(L.key) for L in bd.L_classes],
        "fundamental_relations_ok": check.ok,
        "pairs_checked": check.pairs_checked,
        "violation": None if check.ok else [list(check.violation[0]), check.violation[1] and list(check.violation[1])],
    }


def existence_doc(cl: ClassGroupData, branch: BranchData) -> dict:
    rep = gmax(cl, branch)
    return {
        "orders": list(branch.orders),
        "k_min": group_doc(rep.k_min),
        "g_max": group_doc(rep.g_max),
        "per_divisor_injective": list(rep.per_divisor_injective),
        "torsion_condition_ok": rep.torsion_condition_ok,
        "exists": rep.exists,
        "diagnosis": [f"Z_{branch.orders[i]} -> G_max not injective at divisor {i}" for i in rep.offending],
    }


# ---------------------------------------------------------------------------
# commands


def _branch(cfg: JobConfig, n: int) -> BranchData:
    if cfg.orders is None:
        raise InputError(f"command '{cfg.command}' needs --orders")
    if len(cfg.orders) != n:
        raise InputError(f"--orders gives {len(cfg.orders)} orders but the input has {n} divisors")
    return BranchData(tuple(cfg.orders))


def _cmd_clgroup(cfg, fan, cl):
    doc = {"class_group": group_doc(cl.cl),
           "divisor_classes": [list(c.key) for c in cl.divisor_classes]}
    if fan is not None:
        t = torsion_check(fan)
        tc = torsion_cover(fan)
        doc["torsion"] = {"torsion_free": t.torsion_free,
                          "class_group_torsion": t.class_group_torsion,
                          "lattice_quotient": t.lattice_quotient}
        doc["torsion_cover"] = cover_doc(tc)
    return doc


def _cmd_exists(cfg, fan, cl):
    branch = _branch(cfg, cl.n)
    doc = existence_doc(cl, branch)
    if fan is not None:
        flags = existence_toric(fan, branch)
        doc["toric_primitive"] = flags
        doc["toric_exists"] = all(flags)
        ok = all(flags)
        doc["diagnosis"] = [f"Z_{branch.orders[i]} -> G_max not injective at divisor {i}"
                            for i, f in enumerate(flags) if not f]
    else:
        ok = doc["exists"]
    if not ok:
        doc["reason"] = "; ".join(doc["diagnosis"]) or "torsion condition Cl(Y)[d] = 0 fails"
        raise NotExists(doc)
    return doc


def _cmd_maxcover(cfg, fan, cl):
    branch = _branch(cfg, cl.n)
    doc = {"orders": list(branch.orders)}
    if fan is not None:
        try:
            doc.update(cover_doc(max_toric_cover(fan, branch)))
        except CoverDoesNotExist as exc:
            raise NotExists({"reason": str(exc), "divisors": exc.divisors}) from None
    rep = gmax(cl, branch)
    if not all(rep.per_divisor_injective):
        raise NotExists({"reason": "; ".join(existence_doc(cl, branch)["diagnosis"]),
                         "divisors": rep.offending})
    ab = max_abelian_cover(cl, branch)
    doc["abelian"] = abelian_doc(ab)
    if cl.cl.d_torsion_trivial(ab.group.exponent):
        doc["building_data"] = building_doc(cl, ab)
    else:
        doc["building_data"] = None
        doc["note"] = "Cl(Y)[d] != 0: building data not unique; use torsion-cover first"
    return doc


def _cmd_covers(cfg, fan, cl):
    branch = _branch(cfg, cl.n)
    try:
        if fan is not None:
            covers = [cover_doc(c) for c in enumerate_covers(fan, branch, cfg.bound)]
        else:
            covers = [abelian_doc(a) for a in abelian_covers(cl, branch, cfg.bound)]
    except CoverDoesNotExist as exc:
        raise NotExists({"reason": str(exc), "divisors": exc.divisors}) from None
    return {"orders": list(branch.orders), "count": len(covers), "covers": covers}


def _cmd_verify(cfg, fan, cl):
    if fan is not None and cfg.sublattice_path:
        cover = toric_cover(fan, load_sublattice(cfg.sublattice_path, fan.rank))
        doc = cover_doc(cover)
        if cfg.orders is not None:
            branch = _branch(cfg, fan.n)
            doc["orders_match"] = list(cover.ram_orders) == list(branch.orders)
            if not doc["orders_match"]:
                raise InputError(f"sublattice ramifies with {list(cover.ram_orders)}, "
                                 f"not the requested {list(branch.orders)}")
        G = cover.galois_group
        gs = tuple(G.elt(r) for r in fan.rays)
        ab = AbelianCoverData(G, gs, BranchData(tuple(element_order(g) for g in gs)))
    else:
        branch = _branch(cfg, cl.n)
        try:
            ab = max_abelian_cover(cl, branch)
        except CoverDoesNotExist as exc:
            raise NotExists({"reason": str(exc), "divisors": exc.divisors}) from None
        doc = {"orders": list(branch.orders)}
    doc["abelian"] = abelian_doc(ab)
    doc["building_data"] = building_doc(cl, ab)
    if not doc["building_data"]["fundamental_relations_ok"]:
        raise ConsistencyError("fundamental relations fail for the solved building data")
    return doc


def _cmd_torsion_cover(cfg, fan, cl):
    tc = torsion_cover(fan)
    return {"torsion_cover": cover_doc(tc),
            "covering_class_group": group_doc(class_group(tc.covering_fan).cl)}


def _cmd_crosscheck(cfg, fan, cl):
    branch = _branch(cfg, fan.n)
    try:
        rep = cross_check_abelian_toric(fan, branch, cfg.bound)
    except CoverDoesNotExist as exc:
        raise NotExists({"reason": str(exc), "divisors": exc.divisors}) from None
    doc = {"orders": list(branch.orders), "g_max": rep.g_max, "lattice_quotient": rep.lattice_quotient,
           "natural_map_iso": rep.natural_map_iso, "subgroup_count": rep.subgroup_count,
           "enumerated_count": rep.enumerated_count, "brute_force_count": rep.brute_force_count,
           "extra_sublattices": [list(map(list, k)) for k in rep.extra_sublattices],
           "building_data_ok": rep.building_data_ok, "ok": rep.ok}
    if not rep.ok:
        raise ConsistencyError("abelian and toric descriptions disagree: " + json.dumps(doc, sort_keys=True))
    return doc


_DISPATCH = {
    "clgroup": _cmd_clgroup,
    "exists": _cmd_exists,
    "maxcover": _cmd_maxcover,
    "covers": _cmd_covers,
    "verify": _cmd_verify,
    "torsion-cover": _cmd_torsion_cover,
    "crosscheck": _cmd_crosscheck,
}


# ---------------------------------------------------------------------------
# output


def _text_lines(doc, prefix=""):
    if isinstance(doc, dict):
        if set(doc) >= {"invariant_factors", "free_rank"}:
            g = FgAbGroup(IntMatrix.diag(doc["invariant_factors"],
                                         len(doc["invariant_factors"]) + doc["free_rank"],
                                         len(doc["invariant_factors"])))
            yield f"{prefix}: {describe(g)}  {doc['invariant_factors']} free_rank={doc['free_rank']}"
            return
        for k in sorted(doc):
            yield from _text_lines(doc[k], f"{prefix}.{k}" if prefix else k)
    elif isinstance(doc, list) and doc and all(isinstance(x, dict) for x in doc):
        for i, x in enumerate(doc):
            yield from _text_lines(x, f"{prefix}[{i}]")
    else:
        yield f"{prefix}: {json.dumps(doc)}"


def emit_report(doc: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(doc, sort_keys=True, indent=2)
    return "\n".join(_text_lines(doc))


# ---------------------------------------------------------------------------
# entry points


def run(cfg: JobConfig) -> tuple[int, str]:
    """Execute one job; returns (exit status, rendered report)."""
    if cfg.command not in COMMANDS:
        raise InputError(f"unknown command {cfg.command!r}")
    if cfg.bound < 1:
        raise InputError("--bound must be >= 1")
    fan: Optional[Fan] = None
    if cfg.mode == "toric":
        try:
            fan = load_fan(cfg.input_path)
        except FileNotFoundError:
            raise InputError(f"fan file not found: {cfg.input_path}") from None
        except json.JSONDecodeError as exc:
            raise InputError(f"fan file {cfg.input_path} is not valid JSON: {exc}") from None
        cl = class_group(fan)
    else:
        if cfg.command in TORIC_ONLY:
            raise InputError(f"command '{cfg.command}' needs --fan")
        cl = load_abstract(cfg.input_path)
    try:
        doc = _DISPATCH[cfg.command](cfg, fan, cl)
    except NotExists as exc:
        doc = dict(exc.report, exists=False)
        return 2, emit_report(doc, cfg.output_format)
    return 0, emit_report(doc, cfg.output_format)


def build_parser() -> argparse.ArgumentParser:
    env_bound = os.environ.get("COVERFORGE_BOUND")
    p = argparse.ArgumentParser(prog="coverforge", description="Abelian and toric covers with prescribed branching.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("command", choices=COMMANDS)
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--fan", help="fan JSON file (toric mode)")
    src.add_argument("--abstract", help="class group JSON file (abstract mode)")
    p.add_argument("--orders", help="branch orders: comma separated, or a JSON file")
    p.add_argument("--sublattice", help="sublattice JSON (e.g. maxcover output) for 'verify'")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--bound", type=int, default=int(env_bound) if env_bound else DEFAULT_BOUND,
                   help="capacity for subgroup enumeration (env COVERFORGE_BOUND)")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = JobConfig(
            command=args.command,
            mode="toric" if args.fan else "abstract",
            input_path=args.fan or args.abstract,
            orders=parse_orders(args.orders) if args.orders else None,
            output_format=args.format,
            bound=args.bound,
            sublattice_path=args.sublattice,
        )
        status, text = run(cfg)
    except (InputError, FanError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except CapacityError as exc:
        print(f"error: capacity exceeded: {exc}", file=sys.stderr)
        return 1
    except (PreconditionError, ConsistencyError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(text)
    return status


if __name__ == "__main__":
    sys.exit(main())
