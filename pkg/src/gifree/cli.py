"""Command-line entry point.

Exit status: 0 for yes-type answers, 1 for no-type answers (including an
Open classification), 2 for usage or input errors.
"""

from __future__ import annotations

import argparse
import contextlib
import json
import logging
import os
import sys
from collections.abc import Sequence

from . import classifier, cliquewidth, reductions, structure
from .catalog import CatalogError, make
from .formats import FormatError, from_edge_list, from_graph6, looks_like_graph6, to_graph6
from .generators import small_graphs
from .graph import Graph, GraphError
from .iso import are_isomorphic, canonical_form, canonical_graph
from .subiso import find_induced

EXIT_YES, EXIT_NO, EXIT_ERROR = 0, 1, 2


class UsageError(Exception):
    pass


def load_graph(arg: str) -> Graph:
    """A graph from an existing file (graph6 or edge list), a graph6
    string, or a catalog name, tried in that order."""
    if os.path.isfile(arg):
        with open(arg) as fh:
            text = fh.read()
        first = text.strip().splitlines()[0] if text.strip() else ""
        if first and len(text.strip().splitlines()) == 1 and looks_like_graph6(first):
            return from_graph6(first)
        return from_edge_list(text)
    if looks_like_graph6(arg):
        return from_graph6(arg)
    try:
        return make(arg)
    except CatalogError as exc:
        raise UsageError(f"cannot read graph {arg!r}: not a file, graph6 string or catalog name ({exc})") from None


def _map_text(f: Sequence[int]) -> str:
    return ",".join(f"{v}->{w}" for v, w in enumerate(f))


class Output:
    """Writes records as text, tsv (header then rows) or json-lines."""

    def __init__(self, fmt: str, stream):
        self.fmt = fmt
        self.stream = stream
        self.header_for: tuple[str, ...] | None = None

    def emit(self, record: dict, text: str) -> None:
        if self.fmt == "json-lines":
            print(json.dumps(record), file=self.stream)
        elif self.fmt == "tsv":
            keys = tuple(record)
            if keys != self.header_for:
                print("\t".join(keys), file=self.stream)
                self.header_for = keys
            print("\t".join(str(record[k]) for k in keys), file=self.stream)
        else:
            print(text, file=self.stream)


# --- verbs ----------------------------------------------------------------------


def cmd_iso(args, out: Output) -> int:
    G, H = load_graph(args.G), load_graph(args.H)
    f = are_isomorphic(G, H)
    if f is None:
        out.emit({"isomorphic": False, "map": ""}, "NON-ISOMORPHIC")
        return EXIT_NO
    out.emit({"isomorphic": True, "map": _map_text(f)}, f"ISOMORPHIC {_map_text(f)}")
    return EXIT_YES


def cmd_canon(args, out: Output) -> int:
    G = load_graph(args.G)
    c = canonical_form(G)
    g6 = to_graph6(canonical_graph(G))
    out.emit({"certificate": c.hex(), "canonical_graph6": g6}, c.hex())
    return EXIT_YES


def cmd_free_check(args, out: Output) -> int:
    G = load_graph(args.G)
    for name in args.forbid:
        H = load_graph(name)
        emb = find_induced(G, H)
        if emb is not None:
            out.emit(
                {"free": False, "forbidden": name, "embedding": _map_text(emb)},
                f"CONTAINS {name} {_map_text(emb)}",
            )
            return EXIT_NO
    out.emit({"free": True, "forbidden": "", "embedding": ""}, "FREE")
    return EXIT_YES


def cmd_reduce(args, out: Output) -> int:
    G = load_graph(args.G)
    gadget = reductions.hardness_instance(G, args.which) if args.hardness else reductions.reduce(G, args.which)
    g6 = to_graph6(gadget.graph)
    if args.sidecar:
        with open(args.sidecar, "w") as fh:
            fh.write(gadget.sidecar())
    out.emit({"graph6": g6, "n": gadget.graph.n, "m": gadget.graph.m}, g6)
    return EXIT_YES


def _verdict_record(kind: str, v: classifier.Verdict) -> dict:
    return {
        "kind": kind,
        "status": v.status,
        "rule": v.rule,
        "description": v.description,
        "witness_h1": to_graph6(v.witness.h2 if v.swapped else v.witness.h1),
        "witness_h2": to_graph6(v.witness.h1 if v.swapped else v.witness.h2),
        "operations": ";".join(v.witness.ops),
    }


def cmd_classify(args, out: Output) -> int:
    H1, H2 = load_graph(args.H1), load_graph(args.H2)
    v = classifier.classify_gi(H1, H2) if args.kind == "gi" else classifier.classify_cw(H1, H2)
    rec = _verdict_record(args.kind, v)
    text = f"{v.label()} {v.rule}"
    if args.explain:
        ops = ", ".join(v.witness.ops) or "none"
        text += (
            f"\nrule: {v.description}"
            f"\nwitness: H1={rec['witness_h1']} H2={rec['witness_h2']} (operations: {ops})"
        )
    out.emit(rec, text)
    return EXIT_NO if v.status == "Open" else EXIT_YES


def classify_all_rows(max_n: int):
    graphs = small_graphs(max_n)
    for i, a in enumerate(graphs):
        for b in graphs[i:]:
            gi = classifier.classify_gi(a, b)
            cw = classifier.classify_cw(a, b)
            yield (to_graph6(a), to_graph6(b), gi.status, gi.rule, cw.status, cw.rule)


def cmd_classify_all(args, out: Output) -> int:
    if args.max_n < 1 or args.max_n > 6:
        raise UsageError("--max-n must be between 1 and 6")
    header = ("h1", "h2", "gi_status", "gi_rule", "cw_status", "cw_rule")
    rows = list(classify_all_rows(args.max_n))
    if args.out:
        with open(args.out, "w") as fh:
            fh.write("\t".join(header) + "\n")
            for row in rows:
                fh.write("\t".join(row) + "\n")
        out.emit({"pairs": len(rows), "out": args.out}, f"wrote {len(rows)} pairs to {args.out}")
        return EXIT_YES
    for row in rows:
        out.emit(dict(zip(header, row)), "\t".join(row))
    return EXIT_YES


def cmd_cw(args, out: Output) -> int:
    G = load_graph(args.G)
    res = cliquewidth.exact_cliquewidth(G, limit=args.limit)
    if res.width is None:
        out.emit({"width": "", "limit": args.limit, "expression": ""}, f"CLIQUE-WIDTH > {args.limit}")
        return EXIT_NO
    expr = "" if res.expression is None else cliquewidth.expression_text(res.expression)
    out.emit({"width": res.width, "limit": args.limit, "expression": expr}, f"CLIQUE-WIDTH {res.width}\n{expr}".rstrip())
    return EXIT_YES


def cmd_cw_cert(args, out: Output) -> int:
    G = load_graph(args.G)
    with open(args.partition) as fh:
        mapping = cliquewidth.parse_partition(fh.read())
    cert = cliquewidth.certificate_from_mapping(mapping, args.m, args.n)
    try:
        bound = cliquewidth.verify_grid_certificate(G, cert)
    except cliquewidth.CertificateError as exc:
        out.emit({"verified": False, "bound": "", "premise": exc.premise, "reason": str(exc)}, f"REJECTED {exc}")
        return EXIT_NO
    out.emit({"verified": True, "bound": bound, "premise": "", "reason": ""}, f"VERIFIED clique-width >= {bound}")
    return EXIT_YES


def cmd_hn_prime(args, out: Output) -> int:
    G, cert = cliquewidth.build_hn_prime(args.n)
    g6 = to_graph6(G)
    if args.partition_out:
        with open(args.partition_out, "w") as fh:
            fh.write(cert.to_text())
    out.emit({"graph6": g6, "n": G.n, "grid": cert.n, "m": cert.m}, g6)
    return EXIT_YES


def cmd_solve_gi(args, out: Output) -> int:
    G, H = load_graph(args.G), load_graph(args.H)
    solve = structure.solve_gi_cohouse_p5 if args.cls == "cohouse-p5" else structure.solve_gi_cohouse_p2p3
    verdict, trace = solve(G, H)
    text = "ISOMORPHIC" if verdict else "NON-ISOMORPHIC"
    if args.trace:
        text += f"\nbranches: {', '.join(trace.branches)}"
        for call in trace.oracle_calls:
            text += f"\noracle: {call.reason} on {call.sizes[0]}/{call.sizes[1]} vertices -> {call.result} ({call.citation})"
        for t in trace.transformations:
            text += f"\ntransformation: {t}"
    out.emit(
        {
            "isomorphic": verdict,
            "branches": ";".join(trace.branches),
            "oracle_calls": len(trace.oracle_calls),
            "transformations": ";".join(trace.transformations),
        },
        text,
    )
    return EXIT_YES if verdict else EXIT_NO


def cmd_partition(args, out: Output) -> int:
    G = load_graph(args.G)
    if args.k:
        K = tuple(int(x) for x in args.k.split(","))
    else:
        K = structure.find_k5(G)
        if K is None:
            out.emit({"k": "", "p": 0, "A": "", "N": "", "B": ""}, "NO K5")
            return EXIT_NO
    P = structure.k5_extension_partition(G, K)

    def sets(xs):
        return "|".join(" ".join(map(str, s)) for s in xs)

    rec = {"k": " ".join(map(str, P.K)), "p": P.p, "A": sets(P.A), "N": sets(P.N), "B": " ".join(map(str, P.B))}
    lines = [f"K: {rec['k']}", f"p: {P.p}"]
    lines += [f"A{i + 1}: {' '.join(map(str, a))}  N{i + 1}: {' '.join(map(str, nn))}" for i, (a, nn) in enumerate(zip(P.A, P.N))]
    lines.append(f"B: {rec['B']}")
    out.emit(rec, "\n".join(lines))
    return EXIT_YES


# --- parser ----------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="gifree", description="Graph isomorphism and clique-width on (H1,H2)-free graphs.")
    p.add_argument("--format", choices=("text", "tsv", "json-lines"), default="text")
    p.add_argument("-v", "--verbose", action="store_true", help="log oracle routing to stderr")
    # the same options are accepted after the verb
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "tsv", "json-lines"), default=argparse.SUPPRESS)
    common.add_argument("-v", "--verbose", action="store_true", default=argparse.SUPPRESS)
    sub = p.add_subparsers(dest="verb", required=True)
    add = sub.add_parser

    def verb(name: str, **kw):
        return add(name, parents=[common], **kw)

    s = verb("iso", help="test isomorphism")
    s.add_argument("G")
    s.add_argument("H")
    s.set_defaults(func=cmd_iso)

    s = verb("canon", help="canonical certificate in hex")
    s.add_argument("G")
    s.set_defaults(func=cmd_canon)

    s = verb("free-check", help="test H-freeness")
    s.add_argument("G")
    s.add_argument("--forbid", action="append", required=True, metavar="H")
    s.set_defaults(func=cmd_free_check)

    s = verb("reduce", help="build a reduction gadget")
    s.add_argument("which", choices=reductions.REDUCTIONS)
    s.add_argument("G")
    s.add_argument("--hardness", action="store_true", help="add the dominating K4 where the construction needs it")
    s.add_argument("--sidecar", metavar="FILE", help="write 'vertex role class' lines")
    s.set_defaults(func=cmd_reduce)

    s = verb("classify", help="classify a forbidden pair")
    s.add_argument("kind", choices=("gi", "cw"))
    s.add_argument("H1")
    s.add_argument("H2")
    s.add_argument("--explain", action="store_true")
    s.set_defaults(func=cmd_classify)

    s = verb("classify-all", help="classify every pair of small graphs")
    s.add_argument("--max-n", type=int, default=5)
    s.add_argument("--out", metavar="FILE")
    s.set_defaults(func=cmd_classify_all)

    s = verb("cw", help="exact clique-width")
    s.add_argument("G")
    s.add_argument("--limit", type=int, default=cliquewidth.EXACT_CAP)
    s.set_defaults(func=cmd_cw)

    s = verb("cw-cert", help="verify a grid partition lower-bound certificate")
    s.add_argument("G")
    s.add_argument("partition", help="file of 'vertex i j' lines")
    s.add_argument("--m", type=int, default=1)
    s.add_argument("--n", type=int, default=None, help="grid size (default: largest index used)")
    s.set_defaults(func=cmd_cw_cert)

    s = verb("hn-prime", help="emit the complemented gem gadget of the n x n grid")
    s.add_argument("n", type=int)
    s.add_argument("--partition-out", metavar="FILE")
    s.set_defaults(func=cmd_hn_prime)

    s = verb("solve-gi", help="structural isomorphism driver")
    s.add_argument("--class", dest="cls", choices=("cohouse-p5", "cohouse-p2p3"), required=True)
    s.add_argument("G")
    s.add_argument("H")
    s.add_argument("--trace", action="store_true")
    s.set_defaults(func=cmd_solve_gi)

    s = verb("partition", help="K5-extension partition")
    s.add_argument("G")
    s.add_argument("--k", metavar="V,V,V,V,V", help="clique vertices (default: first K5)")
    s.set_defaults(func=cmd_partition)
    return p


def run(argv: Sequence[str] | None = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        with contextlib.redirect_stdout(stdout), contextlib.redirect_stderr(stderr):
            args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_ERROR if exc.code else EXIT_YES
    if args.verbose:
        logging.basicConfig(level=logging.DEBUG, stream=stderr, format="%(name)s: %(message)s")
    try:
        return args.func(args, Output(args.format, stdout))
    except (UsageError, GraphError, FormatError, OSError) as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_ERROR


def main() -> None:
    sys.exit(run())
