"""Command-line front end for knotres."""

import argparse
import json
import logging
import os
import sys
from concurrent.futures import ThreadPoolExecutor

from sympy import Rational

from knotres import exactlinalg
from knotres.diagram import parse_pd, to_json, to_pd_text, validate
from knotres.errors import InputNotFound, KnotresError, NotAccepted
from knotres.flype import apply_flype, find_flypes, make_tangle, verify_invariance
from knotres.invariants import alexander, alexander_raw, fp, report, resistance_matrix
from knotres.taitgraph import from_edge_list, laplacian, tait_graph, to_edge_list
from knotres.utils.data_loader import (
    get_data_dir,
    get_input_dirs,
    load_manifest,
    load_settings,
    load_tangle,
    read_text,
    resolve_path,
)
from knotres.utils.data_processor import (
    build_results_table,
    format_matrix,
    format_polynomial,
    format_rational,
    group_by_fp,
    matrix_to_text,
    polynomial_to_text,
    render_table,
    sort_results,
    to_json_text,
)

logger = logging.getLogger(__name__)


class UsageError(Exception):
    """Bad flag combination; exits with status 2."""


# --- input --------------------------------------------------------------------

def _guess_format(path, text):
    if path.endswith(".pd"):
        return "pd"
    if text.lstrip().startswith("{"):
        try:
            payload = json.loads(text)
        except json.JSONDecodeError:
            return "json"
        return "edge-list" if isinstance(payload, dict) and "edges" in payload else "json"
    return "pd"


def load_source(args):
    """("diagram", Diagram) or ("graph", TaitGraph) from whichever input flag was given."""
    if args.pd:
        return "diagram", parse_pd(args.pd)
    if args.edge_list:
        text = args.edge_list
        if not text.lstrip().startswith("{"):
            path = resolve_path(text, *get_input_dirs())
            if not os.path.exists(path):
                raise InputNotFound(f"edge list not found: {text}")
            text = read_text(path)
        return "graph", from_edge_list(text, strict=args.strict)
    if not args.input:
        raise UsageError("one of --input, --pd or --edge-list is required")

    path = resolve_path(args.input, *get_input_dirs())
    if not os.path.exists(path):
        raise InputNotFound(f"input file not found: {args.input}")
    text = read_text(path)
    fmt = args.format or _guess_format(path, text)
    logger.info(f"Reading {path} as {fmt}")
    if fmt == "edge-list":
        return "graph", from_edge_list(text, strict=args.strict)
    return "diagram", parse_pd(text)


def load_graph(args):
    kind, source = load_source(args)
    return source if kind == "graph" else tait_graph(source)


def load_diagram(args):
    kind, source = load_source(args)
    if kind != "diagram":
        raise UsageError(f"{args.command} needs a diagram input, not an edge list")
    return source


def emit(args, payload, table=None):
    if args.output == "table" and table is not None:
        print(table)
    else:
        print(to_json_text(payload))


# --- commands -------------------------------------------------------------------

def cmd_validate(args):
    d = load_diagram(args)
    result = validate(d)
    if not result.accepted:
        failures = result.failures()
        raise NotAccepted(
            f"diagram is not accepted: {', '.join(failures)}", code=failures[0], **result.to_dict()
        )
    table = "\n".join(f"{key}: {value}" for key, value in result.to_dict().items())
    emit(args, result.to_dict(), table)
    return 0


def cmd_tait(args):
    g = load_graph(args)
    payload = to_edge_list(g)
    payload["crossings"] = [crossing for _, _, _, crossing in g.edges]
    table = "\n".join(
        f"{crossing}: {tail} -> {head} ({format_rational(w)})" for tail, head, w, crossing in g.edges
    )
    emit(args, payload, table)
    return 0


def cmd_laplacian(args):
    L = laplacian(load_graph(args))
    emit(args, {"laplacian": format_matrix(L)}, matrix_to_text(L))
    return 0


def cmd_fp(args):
    value = fp(laplacian(load_graph(args)))
    emit(args, {"fp": format_rational(value)}, format_rational(value))
    return 0


def cmd_report(args):
    result = report(load_graph(args), delete=args.delete_vertex)
    payload = result.to_dict()
    table = "\n".join([
        f"n: {result.n}",
        f"omega: {payload['omega']}",
        f"FP: {payload['fp']}",
        f"rank: {result.rank_inv}",
        f"char poly: {polynomial_to_text(result.char_poly, 'x')}",
        f"alexander: {polynomial_to_text(result.alexander)}",
        f"checks: {', '.join(f'{k}={v}' for k, v in sorted(result.checks.items()))}",
        "resistance:",
        matrix_to_text(result.resistance),
    ])
    emit(args, payload, table)
    return 0


def cmd_alexander(args):
    L = laplacian(load_graph(args))
    delete = L.rows - 1 if args.delete_vertex is None else args.delete_vertex
    poly = alexander(L, delete)
    payload = {
        "alexander": format_polynomial(poly),
        "raw": format_polynomial(alexander_raw(L, delete)),
        "delete_vertex": delete,
        "text": polynomial_to_text(poly),
    }
    emit(args, payload, polynomial_to_text(poly))
    return 0


def cmd_charpoly(args):
    poly = exactlinalg.char_poly(laplacian(load_graph(args)))
    text = polynomial_to_text(poly, "x")
    emit(args, {"char_poly": format_polynomial(poly), "text": text}, text)
    return 0


def cmd_resistance(args):
    R = resistance_matrix(laplacian(load_graph(args)))
    emit(args, {"resistance": format_matrix(R)}, matrix_to_text(R))
    return 0


def cmd_flype_list(args):
    tangles = find_flypes(load_diagram(args))
    table = "\n".join(
        f"pivot {t.pivot}: crossings {list(t.crossings)}, arcs {list(t.boundary_arcs)}" for t in tangles
    )
    emit(args, {"flypes": [t.to_dict() for t in tangles]}, table or "(no flypes)")
    return 0


def _tangle_from_args(args, d):
    if args.tangle:
        path = resolve_path(args.tangle, *get_input_dirs())
        if not os.path.exists(path):
            raise InputNotFound(f"tangle file not found: {args.tangle}")
        spec = load_tangle(path)
        return make_tangle(d, spec["crossings"], spec["pivot"])
    if args.pivot is None or not args.crossings:
        raise UsageError("flype-apply needs --tangle, or --pivot with --crossings")
    try:
        crossings = [int(x) for x in args.crossings.split(",")]
    except ValueError:
        raise UsageError(f"--crossings must be comma-separated integers, got {args.crossings!r}")
    return make_tangle(d, crossings, args.pivot)


def cmd_flype_apply(args):
    d = load_diagram(args)
    flyped = apply_flype(d, _tangle_from_args(args, d))
    text = to_pd_text(flyped)
    emit(args, {"pd": text, "diagram": to_json(flyped)}, text)
    return 0


def cmd_orbit(args):
    result = verify_invariance(load_diagram(args), args.depth, budget=args.budget)
    payload = result.to_dict()
    table = "\n".join([
        f"orbit size: {result.orbit_size}",
        f"FP values: {', '.join(payload['fp_values'])}",
        f"char polys: {len(result.char_polys)} distinct",
        f"alexander: {'; '.join(polynomial_to_text(a) for a in result.alexander)}",
        f"budget exhausted: {result.budget_exhausted}",
        f"red flags: {len(result.red_flags)}",
    ])
    emit(args, payload, table)
    return 0


def cmd_export(args):
    payload = to_edge_list(tait_graph(load_diagram(args)))
    if args.dest:
        with open(args.dest, "w") as f:
            json.dump(payload, f, indent=2)
        logger.info(f"Wrote edge list to {args.dest}")
    emit(args, payload)
    return 0


def _batch_entry(entry):
    row = {
        "name": entry["name"],
        "file": os.path.basename(entry["file"]),
        "fp": None,
        "status": "failed",
        "expected_fp": entry["expected_fp"],
        "matches_expected": None,
        "error": None,
    }
    try:
        value = fp(laplacian(tait_graph(parse_pd(read_text(entry["file"])))))
    except KnotresError as e:
        logger.error(f"Error computing FP for {entry['name']}: {e}")
        row["error"] = e.code
        return row
    except OSError as e:
        logger.error(f"Error reading {entry['file']}: {e}")
        row["error"] = InputNotFound.code
        return row
    row["fp"] = format_rational(value)
    row["status"] = "ok"
    if entry["expected_fp"] is not None:
        row["matches_expected"] = bool(value == Rational(entry["expected_fp"]))
    return row


def cmd_batch(args):
    manifest = args.manifest or os.path.join(get_data_dir(), "manifest.yaml")
    entries = load_manifest(manifest)
    with ThreadPoolExecutor(max_workers=max(1, args.workers)) as executor:
        rows = list(executor.map(_batch_entry, entries))

    df = build_results_table(rows)
    groups = group_by_fp(df)
    payload = {
        "rows": sort_results(rows),
        "groups": [{"fp": fp_value, "names": list(names)} for fp_value, names in groups.itertuples(index=False)],
    }
    failed = sum(row["status"] != "ok" for row in rows)
    if failed:
        logger.warning(f"{failed} of {len(rows)} manifest entries failed")
    emit(args, payload, render_table(df))
    return 0


HANDLERS = {
    "validate": cmd_validate,
    "tait": cmd_tait,
    "laplacian": cmd_laplacian,
    "fp": cmd_fp,
    "report": cmd_report,
    "alexander": cmd_alexander,
    "charpoly": cmd_charpoly,
    "resistance": cmd_resistance,
    "flype-list": cmd_flype_list,
    "flype-apply": cmd_flype_apply,
    "orbit": cmd_orbit,
    "batch": cmd_batch,
    "export": cmd_export,
}


# --- parser -----------------------------------------------------------------------

def build_parser(settings):
    parser = argparse.ArgumentParser(
        prog="knotres",
        description="Exact FP invariant of special alternating diagrams from Tait-graph Laplacians.",
    )
    subparsers = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--output", choices=["json", "table"], default=settings["output"]["format"],
                        help="Result format (default: %(default)s)")
    common.add_argument("--log-level", default=None,
                        choices=["DEBUG", "INFO", "WARNING", "ERROR"], help="Logging level on stderr")

    source = argparse.ArgumentParser(add_help=False)
    group = source.add_mutually_exclusive_group()
    group.add_argument("--input", help="Diagram or edge-list file")
    group.add_argument("--pd", help="Inline PD code, e.g. 'X(1,4,2,5) X(3,6,4,1) X(5,2,6,3)'")
    group.add_argument("--edge-list", help="Inline edge-list JSON or a path to one")
    source.add_argument("--format", choices=["pd", "json", "edge-list"],
                        help="Format of --input (default: from file contents)")
    source.add_argument("--strict", action="store_true", help="Reject unbalanced edge lists")

    help_text = {
        "validate": "Check that a diagram is connected, reduced, alternating, special and uniformly signed",
        "tait": "Print the oriented Tait graph",
        "laplacian": "Print the Tait-graph Laplacian",
        "fp": "Compute FP = trace(L^T L^+)",
        "report": "All invariants with cross-checks",
        "alexander": "Alexander polynomial det(S - tS^T)",
        "charpoly": "Characteristic polynomial det(L - xI)",
        "resistance": "Effective resistance matrix",
        "flype-list": "List admissible flypes",
        "flype-apply": "Apply one flype and print the new PD code",
        "orbit": "Explore the flype orbit and compare invariants",
        "export": "Write the Tait edge list of a diagram",
    }
    for command, text in help_text.items():
        p = subparsers.add_parser(command, parents=[common, source], help=text)
        if command in ("alexander", "report"):
            p.add_argument("--delete-vertex", type=int, default=settings["alexander"]["delete_vertex"],
                           help="Vertex removed from L (default: the last one)")
        if command == "flype-apply":
            p.add_argument("--tangle", help="YAML file with 'pivot' and 'crossings'")
            p.add_argument("--pivot", type=int, help="Pivot crossing id")
            p.add_argument("--crossings", help="Comma-separated tangle crossing ids")
        if command == "orbit":
            p.add_argument("--depth", type=int, default=settings["orbit"]["depth"],
                           help="Maximum number of flypes (default: %(default)s)")
            p.add_argument("--budget", type=int, default=settings["orbit"]["budget"],
                           help="Maximum number of distinct diagrams (default: %(default)s)")
        if command == "export":
            p.add_argument("--dest", help="Also write the edge list to this path")

    p_batch = subparsers.add_parser("batch", parents=[common], help="FP table for every diagram in a manifest")
    p_batch.add_argument("--manifest", help="Manifest YAML (default: the bundled one)")
    p_batch.add_argument("--workers", type=int, default=settings["batch"]["workers"],
                         help="Concurrent entries (default: %(default)s)")
    return parser


def main(argv=None):
    """Run one command; returns the exit status (0 ok, 1 domain error, 2 usage error)."""
    settings = load_settings()
    parser = build_parser(settings)
    args = parser.parse_args(argv)

    if args.log_level:
        logging.getLogger().setLevel(args.log_level)

    if args.command == "orbit" and args.depth < 1:
        parser.print_usage(sys.stderr)
        print("knotres: error: --depth must be at least 1", file=sys.stderr)
        return 2

    try:
        return HANDLERS[args.command](args)
    except UsageError as e:
        parser.print_usage(sys.stderr)
        print(f"knotres: error: {e}", file=sys.stderr)
        return 2
    except KnotresError as e:
        logger.error(f"Error running {args.command}: {e}")
        print(to_json_text(e.to_dict()))
        return 1


if __name__ == "__main__":
    sys.exit(main())
