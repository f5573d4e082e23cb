"""Command-line entry point.

Subcommands: howe, classify, census, construct, slice-check, verify.
Exit codes: 0 ok, 1 check failure, 2 usage or parse error.  Every stochastic
subcommand requires --seed and embeds (version, config, seed) in its output;
outputs are bit-identical for identical configs.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path

import gaugeorbits
from gaugeorbits import census, connections, construct, groups, howe, paths, slicelab, verify

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2


class CliError(Exception):
    """Input or validation problem; maps to exit code 2."""


def _load_spec(name: str) -> groups.GroupSpec:
    try:
        if name.endswith(".txt") or "/" in name:
            return groups.load_finite_table(name)
        return groups.group_by_name(name)
    except (ValueError, OSError) as exc:
        raise CliError(str(exc)) from exc


def _read_json(path: str) -> object:
    try:
        return json.loads(Path(path).read_text())
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise CliError(f"{path}: invalid JSON at line {exc.lineno}: {exc.msg}") from exc


def _emit(payload: dict, out: str | None) -> None:
    text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _with_meta(payload: dict, args: argparse.Namespace, keys: list[str]) -> dict:
    payload["version"] = gaugeorbits.__version__
    payload["config"] = {k: getattr(args, k.replace("-", "_")) for k in keys}
    return payload


# ---------------------------------------------------------------------------
# subcommands


def cmd_howe(args: argparse.Namespace) -> int:
    spec = _load_spec(args.group)
    poset = howe.enumerate_howe_types(spec)
    payload = _with_meta(poset.to_json(), args, ["group"])
    _emit(payload, args.out)
    return EXIT_OK


def cmd_classify(args: argparse.Namespace) -> int:
    spec = _load_spec(args.group)
    data = _read_json(args.input)
    try:
        conn = connections.connection_from_json(spec, data, Path(args.input).parent)
    except ValueError as exc:
        raise CliError(f"{args.input}: {exc}") from exc
    if not paths.is_connected(conn.graph):
        raise CliError("classification needs a connected graph")
    poset = howe.enumerate_howe_types(spec)
    gens = connections.holonomy_generators(conn)
    kept = groups.reduce_generators(spec, gens)
    z = groups.centralizer(spec, kept)
    t = connections.orbit_type(conn, poset)
    payload = _with_meta(
        {
            "group": spec.name,
            "holonomy_generators": [groups.element_to_literal(g) for g in gens],
            "reduced_generators": [groups.element_to_literal(g) for g in kept],
            "centralizer": groups.subgroup_to_json(z),
            "class_id": t.class_id,
            "label": t.label,
        },
        args,
        ["group", "input"],
    )
    _emit(payload, args.out)
    return EXIT_OK


def cmd_census(args: argparse.Namespace) -> int:
    spec = _load_spec(args.group)
    if args.exact == (args.samples is not None):
        raise CliError("choose exactly one of --exact or --samples")
    if args.exact:
        try:
            report = census.exact_census(spec, args.loops, budget=args.budget)
        except (TypeError, ValueError, census.CensusBudgetExceeded) as exc:
            raise CliError(str(exc)) from exc
    else:
        if args.seed is None:
            raise CliError("--samples needs --seed")
        report = census.mc_census(
            spec,
            args.loops,
            args.samples,
            seed=args.seed,
            chunk_size=args.chunk_size,
            workers=args.workers,
        )
    payload = _with_meta(
        report.to_json(), args, ["group", "loops", "samples", "seed", "exact"]
    )
    if args.csv:
        buffer = io.StringIO()
        writer = csv.writer(buffer)
        writer.writerows(report.csv_rows())
        Path(args.csv).write_text(buffer.getvalue())
    _emit(payload, args.out)
    return EXIT_OK


def cmd_construct(args: argparse.Namespace) -> int:
    spec = _load_spec(args.group)
    data = _read_json(args.input)
    try:
        conn = connections.connection_from_json(spec, data, Path(args.input).parent)
    except ValueError as exc:
        raise CliError(f"{args.input}: {exc}") from exc
    protected = [conn.graph]
    for p in args.protect or []:
        try:
            protected.append(paths.load_graph(p))
        except (OSError, ValueError, json.JSONDecodeError) as exc:
            raise CliError(f"{p}: {exc}") from exc
    poset = howe.enumerate_howe_types(spec)
    if not 0 <= args.target_type < len(poset):
        raise CliError(
            f"target type {args.target_type} out of range 0..{len(poset) - 1}"
        )
    target = poset.types[args.target_type]
    try:
        bigger = construct.realize_type(conn, protected, target)
    except construct.TypeNotReachable as exc:
        raise CliError(str(exc)) from exc
    got = connections.orbit_type(bigger, poset)
    kept_ok = True
    for g in protected:
        after = connections.restrict(bigger, g)
        reference = connections.restrict(conn, g)
        if any(
            not groups.element_equal(after.value(n), reference.value(n))
            for n in g.edge_names
        ):
            kept_ok = False
    report = _with_meta(
        {
            "group": spec.name,
            "target_type": target.class_id,
            "achieved_type": got.class_id,
            "achieved_label": got.label,
            "type_ok": got.class_id == target.class_id,
            "restrictions_ok": kept_ok,
            "added_edges": sorted(
                set(bigger.graph.edge_names) - set(conn.graph.edge_names)
            ),
        },
        args,
        ["group", "input", "target_type"],
    )
    Path(args.out).write_text(
        json.dumps(connections.connection_to_json(bigger), indent=2, sort_keys=True)
        + "\n"
    )
    _emit(report, args.report)
    return EXIT_OK if report["type_ok"] and report["restrictions_ok"] else EXIT_CHECK_FAILED


def cmd_slice_check(args: argparse.Namespace) -> int:
    spec = _load_spec(args.group)
    data = _read_json(args.base)
    if not isinstance(data, list):
        raise CliError(f"{args.base}: base point must be a JSON list of elements")
    try:
        base_tuple = [groups.element_from_literal(spec, lit) for lit in data]
    except ValueError as exc:
        raise CliError(f"{args.base}: {exc}") from exc
    base = slicelab.orbit_point(spec, base_tuple)
    report = slicelab.verify_slice_properties(
        base, trials=args.trials, noise=args.noise, seed=args.seed
    )
    payload = _with_meta(
        report.to_json(), args, ["group", "base", "trials", "noise", "seed"]
    )
    _emit(payload, args.out)
    return EXIT_OK if report.passed else EXIT_CHECK_FAILED


def cmd_verify(args: argparse.Namespace) -> int:
    _load_spec(args.group)  # fail early with exit 2 on unknown groups
    results = verify.run_group_suite(args.group, seed=args.seed)
    payload = _with_meta(
        {
            "group": args.group,
            "checks": [r.to_json() for r in results],
            "failures": [r.to_json() for r in results if not r.ok],
            "ok": all(r.ok for r in results),
        },
        args,
        ["group", "seed"],
    )
    _emit(payload, args.out)
    return EXIT_OK if payload["ok"] else EXIT_CHECK_FAILED


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gaugeorbits",
        description="Gauge orbit types, Howe posets and Haar censuses "
        "for lattice connections.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("howe", help="print the Howe type poset of a group")
    p.add_argument("group")
    p.add_argument("--out")
    p.set_defaults(func=cmd_howe)

    p = sub.add_parser("classify", help="orbit type of a connection file")
    p.add_argument("--group", required=True)
    p.add_argument("--input", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("census", help="stratum measures under product Haar")
    p.add_argument("--group", required=True)
    p.add_argument("--loops", type=int, required=True)
    p.add_argument("--samples", type=int)
    p.add_argument("--exact", action="store_true")
    p.add_argument("--seed", type=int)
    p.add_argument("--chunk-size", type=int, default=census.DEFAULT_CHUNK)
    p.add_argument("--workers", type=int)
    p.add_argument("--budget", type=int, default=census.DEFAULT_BUDGET)
    p.add_argument("--out")
    p.add_argument("--csv")
    p.set_defaults(func=cmd_census)

    p = sub.add_parser("construct", help="extend a connection to a target type")
    p.add_argument("--group", required=True)
    p.add_argument("--input", required=True)
    p.add_argument("--target-type", type=int, required=True)
    p.add_argument("--protect", nargs="*")
    p.add_argument("--out", required=True)
    p.add_argument("--report")
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("slice-check", help="verify slice properties at a base tuple")
    p.add_argument("--group", required=True)
    p.add_argument("--base", required=True)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--noise", type=float, default=1e-3)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_slice_check)

    p = sub.add_parser("verify", help="run every invariant suite for a group")
    p.add_argument("group")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(func=cmd_verify)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
