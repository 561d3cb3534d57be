"""Command-line surface.

Exit codes: 0 success (for compare-*: isomorphic), 1 not isomorphic or
failed verification, 2 bad input, 3 resource limit.  Results go to
stdout as JSON (DOT for graphs with --out dot); progress lines go to
stderr.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import classify as classify_mod
from . import isomorph, joingraph, moebius, verify
from .config import ResourceLimitError, SpecError
from .corpus import DEFAULT_CORPUS_MAX_ORDER
from .groups import build, parse_spec
from .sublattice import (
    enumerate_subgroups,
    lattice_json,
    mi_lattice,
    min_trivial_intersection_family,
)

EXIT_OK = 0
EXIT_DIFFERENT = 1
EXIT_INPUT = 2
EXIT_RESOURCE = 3


def _emit(data: dict) -> None:
    json.dump(data, sys.stdout, indent=2, sort_keys=True)
    sys.stdout.write("\n")


def _build_lat(spec: str):
    g = build(spec)
    return g, enumerate_subgroups(g)


def cmd_group(args) -> int:
    g = build(args.spec)
    _emit(
        {
            "spec": g.spec,
            "order": g.order,
            "degree": g.degree,
            "abelian": g.is_abelian(),
            "generators": [list(p) for p in g.generators],
        }
    )
    return EXIT_OK


def cmd_subgroups(args) -> int:
    _, lat = _build_lat(args.spec)
    _emit(lattice_json(lat))
    return EXIT_OK


def cmd_delta(args) -> int:
    _, lat = _build_lat(args.spec)
    graph = joingraph.build_delta(lat)
    if args.out == "dot":
        sys.stdout.write(joingraph.to_dot(graph))
    else:
        _emit(joingraph.to_json_dict(graph))
    return EXIT_OK


def cmd_mlattice(args) -> int:
    _, lat = _build_lat(args.spec)
    mi = mi_lattice(lat)
    ids = mi.member_ids
    leq = mi.leq_matrix()
    _emit(
        {
            "order": lat.group.order,
            "members": [
                {"id": sid, "order": lat.subgroup_order(sid)} for sid in ids
            ],
            "leq": [
                [ids[i], ids[j]]
                for i in range(len(ids))
                for j in range(len(ids))
                if i != j and bool(leq[i, j])
            ],
            "bottom": mi.bottom_id,
            "top": mi.top_id,
        }
    )
    return EXIT_OK


def cmd_reconstruct(args) -> int:
    _, lat = _build_lat(args.spec)
    graph = joingraph.build_delta(lat)
    recon = joingraph.reconstruct_mi(graph)
    k = len(recon.classes)
    _emit(
        {
            "classes": recon.classes,
            "top": recon.top,
            "leq": [
                [i, j]
                for i in range(k + 1)
                for j in range(k + 1)
                if i != j and bool(recon.leq[i, j])
            ],
            "matches_mi_lattice": joingraph.reconstruction_matches(lat, graph),
        }
    )
    return EXIT_OK


def cmd_moebius(args) -> int:
    g, lat = _build_lat(args.spec)
    out: dict = {"method": args.method}
    if args.method in ("recursive", "both"):
        table = moebius.moebius_table(lat)
        out["mu_bottom"] = table.bottom_value
        out["table"] = {str(k): v for k, v in sorted(table.values.items())}
    if args.method in ("formula", "both"):
        try:
            value = moebius.mu_product_formula(g, lat)
        except moebius.NotSolubleError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_INPUT
        out["mu_formula"] = value
        if args.method == "formula":
            out["mu_bottom"] = value
    if args.method == "both":
        out["agree"] = out["mu_bottom"] == out["mu_formula"]
    _emit(out)
    return EXIT_OK


def cmd_classify(args) -> int:
    g, lat = _build_lat(args.spec)
    record = classify_mod.classification(g, lat)
    fam = (
        min_trivial_intersection_family(lat, check_uniform=False)
        if lat.count > 1
        else None
    )
    data = record.to_json_dict()
    data["min_trivial_intersection_family"] = fam.size if fam else 0
    _emit(data)
    return EXIT_OK


def cmd_partner(args) -> int:
    g, lat = _build_lat(args.spec)
    try:
        found = classify_mod.search_nilpotent_partner(
            g, lat, args.max_order, mode=args.mode
        )
    except classify_mod.FrattiniNotTrivialError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    _emit({"spec": g.spec, "mode": args.mode, "partner": found})
    return EXIT_OK


def _compare(args, kind: str) -> int:
    _, lat1 = _build_lat(args.spec1)
    _, lat2 = _build_lat(args.spec2)
    if kind == "delta":
        result = isomorph.graph_iso(
            joingraph.build_delta(lat1), joingraph.build_delta(lat2)
        )
    else:
        result = isomorph.poset_iso(mi_lattice(lat1), mi_lattice(lat2))
    if args.witness and result.witness is not None:
        _emit({"isomorphic": result.isomorphic, "witness": result.witness})
    else:
        _emit({"isomorphic": result.isomorphic})
    return EXIT_OK if result.isomorphic else EXIT_DIFFERENT


def cmd_verify(args) -> int:
    report = verify.run_suite(
        max_order=args.max_order,
        budget=args.budget,
        include_648=args.include_648,
        suite=args.suite,
    )
    for c in report.checks:
        line = f"{c.status.upper():<8} {c.check_id:<28} ({c.elapsed:.2f}s) {c.detail}"
        print(line, file=sys.stderr)
    _emit(report.to_json_dict())
    return report.exit_code


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="joinlat",
        description="join graphs, maximal-intersection lattices, and Moebius "
        "functions of small finite groups",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("group", help="basic facts about a group spec")
    p.add_argument("spec")
    p.add_argument("--info", action="store_true", help="accepted for symmetry")
    p.set_defaults(fn=cmd_group)

    p = sub.add_parser("subgroups", help="full subgroup lattice as JSON")
    p.add_argument("spec")
    p.set_defaults(fn=cmd_subgroups)

    p = sub.add_parser("delta", help="the generating-pair graph")
    p.add_argument("spec")
    p.add_argument("--out", choices=("json", "dot"), default="json")
    p.set_defaults(fn=cmd_delta)

    p = sub.add_parser("mlattice", help="the maximal-intersection lattice")
    p.add_argument("spec")
    p.set_defaults(fn=cmd_mlattice)

    p = sub.add_parser("reconstruct", help="rebuild the lattice from the graph")
    p.add_argument("spec")
    p.set_defaults(fn=cmd_reconstruct)

    p = sub.add_parser("moebius", help="Moebius function of the subgroup lattice")
    p.add_argument("spec")
    p.add_argument("--method", choices=("recursive", "formula", "both"), default="both")
    p.set_defaults(fn=cmd_moebius)

    p = sub.add_parser("classify", help="structural classification record")
    p.add_argument("spec")
    p.set_defaults(fn=cmd_classify)

    p = sub.add_parser("partner", help="search for a nilpotent partner group")
    p.add_argument("spec")
    p.add_argument("--max-order", type=int, default=DEFAULT_CORPUS_MAX_ORDER)
    p.add_argument("--mode", choices=("delta", "m"), default="delta")
    p.set_defaults(fn=cmd_partner)

    p = sub.add_parser("compare-delta", help="are two join graphs isomorphic?")
    p.add_argument("spec1")
    p.add_argument("spec2")
    p.add_argument("--witness", action="store_true")
    p.set_defaults(fn=lambda a: _compare(a, "delta"))

    p = sub.add_parser("compare-m", help="are two maximal-intersection lattices isomorphic?")
    p.add_argument("spec1")
    p.add_argument("spec2")
    p.add_argument("--witness", action="store_true")
    p.set_defaults(fn=lambda a: _compare(a, "m"))

    p = sub.add_parser("verify", help="run the verification suite")
    p.add_argument("--suite", default="paper")
    p.add_argument("--max-order", type=int, default=DEFAULT_CORPUS_MAX_ORDER)
    p.add_argument("--budget", type=float, default=None, help="seconds")
    p.add_argument("--include-648", action="store_true")
    p.set_defaults(fn=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = make_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        return args.fn(args)
    except SpecError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ResourceLimitError as exc:
        print(f"resource limit: {exc}", file=sys.stderr)
        return EXIT_RESOURCE


if __name__ == "__main__":
    raise SystemExit(main())
