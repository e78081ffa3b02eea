"""Command-line front end.

Exit status: 0 on success, 1 for an invalid graph or an Invalid verdict,
2 for usage and parse errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Sequence

from . import serialize
from .enumeration import Caps, enumerate_flat_graphs
from .flatten import FlattenError, flatten
from .graph import DecoratedGraph, Level, validate
from .lg import potential_index_set
from .reduce import ReductionError, Verdict, certify_vanishing, certify_vanishing_nmsp
from .serialize import GraphFormatError, format_rat
from .vdim import ChainError, FormulaDomainError, vdim_breakdown
from .weights import WeightError, edge_tangent_weights, vertex_bundle_weights


class UsageError(Exception):
    pass


def _read_graph(path: str) -> DecoratedGraph:
    try:
        if path == "-":
            text = sys.stdin.read()
        else:
            with open(path, encoding="utf-8") as fh:
                text = fh.read()
    except OSError as exc:
        raise UsageError(f"{path}: {exc.strerror}") from None
    return serialize.loads(text)


def cmd_validate(args) -> int:
    graph = _read_graph(args.graph)
    problems = validate(graph)
    for p in problems:
        print(p)
    if args.emit and not problems:
        sys.stdout.write(serialize.dumps(graph))
    elif not problems:
        print("valid")
    return 1 if problems else 0


def cmd_flatten(args) -> int:
    graph = _read_graph(args.graph)
    problems = validate(graph)
    if problems:
        print(problems[0], file=sys.stderr)
        return 1
    sys.stdout.write(serialize.dumps(flatten(graph)))
    return 0


def cmd_weights(args) -> int:
    graph = _read_graph(args.graph)
    problems = validate(graph)
    if problems:
        print(problems[0], file=sys.stderr)
        return 1
    edges = []
    for e in graph.edges:
        row = {"edge": e.id, "class": e.cls.value}
        try:
            w = edge_tangent_weights(e)
            row.update(atLow=format_rat(w.at_low), atInfOrHigh=format_rat(w.at_inf_or_high))
        except WeightError as exc:
            row["error"] = str(exc)
        edges.append(row)
    levels = {}
    for lv in Level:
        b = vertex_bundle_weights(lv)
        levels[lv.value] = {
            "wL1": None if b.wL1 is None else format_rat(b.wL1),
            "wL2": format_rat(b.wL2),
            "wN": None if b.wN is None else format_rat(b.wN),
        }
    levels["inf"]["constraint"] = "wL1 + wN = -1"
    print(json.dumps({"edges": edges, "levels": levels}, indent=2))
    return 0


def cmd_vdim(args) -> int:
    graph = _read_graph(args.graph)
    problems = validate(graph)
    if problems:
        print(problems[0], file=sys.stderr)
        return 1
    try:
        b = vdim_breakdown(graph)
    except FormulaDomainError as exc:
        print(str(exc), file=sys.stderr)
        return 1
    if args.pretty:
        print(f"{format_rat(b.dimD)} {format_rat(b.chiMuNu)} {format_rat(b.chiFields)} "
              f"→ {format_rat(b.total)}")
    else:
        print(json.dumps({
            "dimD": format_rat(b.dimD), "chiMuNu": format_rat(b.chiMuNu),
            "chiFields": format_rat(b.chiFields), "total": format_rat(b.total),
        }))
    return 0


def certificate_to_dict(cert) -> dict:
    doc = {
        "verdict": cert.verdict.value,
        "terminal_vdims": [format_rat(x) for x in cert.terminal_vdims],
        "trace": [{"kind": s.kind, "elements": list(s.elements)} for s in cert.trace],
    }
    if cert.reason:
        doc["reason"] = cert.reason
    return doc


def cmd_certify(args) -> int:
    graph = _read_graph(args.graph)
    if args.hours is not None:
        try:
            cert = certify_vanishing_nmsp(graph, args.hours)
        except ValueError as exc:
            if isinstance(exc, ReductionError):
                raise
            print(str(exc), file=sys.stderr)
            return 1
    else:
        cert = certify_vanishing(graph)
    print(json.dumps(certificate_to_dict(cert), indent=None if args.compact else 2))
    return 1 if cert.verdict is Verdict.INVALID else 0


def _certify_line(line: str) -> str:
    return certify_vanishing(serialize.loads(line)).verdict.value


def cmd_enumerate(args) -> int:
    caps = Caps(args.max_genus, args.max_edges, args.max_legs, args.max_deg)
    lines = (serialize.dumps(g, compact=True) for g in enumerate_flat_graphs(caps))
    status = 0
    if not args.certify:
        for line in lines:
            print(line)
        return 0
    jobs = args.jobs or os.cpu_count() or 1
    if jobs > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(jobs) as pool:
            for line, verdict in zip_lines(lines, pool):
                print(f"{line} {verdict}")
                status |= verdict == Verdict.INVALID.value
    else:
        for line in lines:
            verdict = _certify_line(line)
            print(f"{line} {verdict}")
            status |= verdict == Verdict.INVALID.value
    return 1 if status else 0


def zip_lines(lines, pool, chunk: int = 256):
    """Certify in order-preserving batches on a process pool."""
    batch = []
    for line in lines:
        batch.append(line)
        if len(batch) == chunk:
            yield from zip(batch, pool.map(_certify_line, batch, chunksize=32))
            batch = []
    if batch:
        yield from zip(batch, pool.map(_certify_line, batch, chunksize=32))


def cmd_lg_index(args) -> int:
    rows = potential_index_set(args.genus, args.m_max, args.d_max)
    for m, d in rows:
        print(f"{args.genus} {m} {d}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="msploc", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("validate", help="check decoration constraints")
    s.add_argument("graph", help="graph file, or - for stdin")
    s.add_argument("--emit", action="store_true", help="re-emit the graph when valid")
    s.set_defaults(func=cmd_validate)

    s = sub.add_parser("flatten", help="flatten all T-balanced nodes")
    s.add_argument("graph")
    s.set_defaults(func=cmd_flatten)

    s = sub.add_parser("weights", help="tangent weights per edge and bundle weights per level")
    s.add_argument("graph")
    s.set_defaults(func=cmd_weights)

    s = sub.add_parser("vdim", help="three-part virtual dimension count")
    s.add_argument("graph")
    s.add_argument("--pretty", action="store_true", help='print "dimD chiMuNu chiFields -> total"')
    s.set_defaults(func=cmd_vdim)

    s = sub.add_parser("certify", help="vanishing certificate for a flat graph")
    s.add_argument("graph")
    s.add_argument("--hours", type=int, metavar="N", help="treat as N-MSP graph with hours in [1, N]")
    s.add_argument("--compact", action="store_true")
    s.set_defaults(func=cmd_certify)

    s = sub.add_parser("enumerate", help="stream flat graphs within caps")
    s.add_argument("--max-genus", type=int, default=0)
    s.add_argument("--max-edges", type=int, default=1)
    s.add_argument("--max-legs", type=int, default=0)
    s.add_argument("--max-deg", type=int, default=1)
    s.add_argument("--certify", action="store_true", help="append the verdict to each line")
    s.add_argument("--jobs", type=int, default=None, help="worker processes (default: cores)")
    s.set_defaults(func=cmd_enumerate)

    s = sub.add_parser("lg-index", help="(g, m, d') index table of the LG potential")
    s.add_argument("--genus", type=int, required=True)
    s.add_argument("--m-max", type=int, required=True)
    s.add_argument("--d-max", type=int, required=True)
    s.set_defaults(func=cmd_lg_index)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0) if exc.code in (0, None) else 2
    try:
        return args.func(args)
    except (GraphFormatError, UsageError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        if isinstance(exc, ReductionError) and str(exc) == "flatten first":
            print("error: graph is not flat; run `flatten` first", file=sys.stderr)
            return 1
        if isinstance(exc, (FlattenError, ChainError, FormulaDomainError, WeightError)):
            print(f"error: {exc}", file=sys.stderr)
            return 1
        if args.command == "enumerate":
            print(f"error: {exc}", file=sys.stderr)
            return 2
        raise


if __name__ == "__main__":
    sys.exit(main())
