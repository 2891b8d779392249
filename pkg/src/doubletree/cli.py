"""Command-line interface.

Subcommands: recognize, factor, dist, median, polygon (dist|network), gen,
check.  Exit codes: 0 success/yes/agree, 1 no-instance or point outside,
2 input or usage errors.  Output is plain text (or `--json` where offered)
and byte-identical across runs for identical inputs and seeds.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import asdict

from .errors import (
    DoubletreeError,
    NotPartialDoubleTreeError,
    ParseError,
    PointOutsideError,
    TooLargeError,
)
from .factorization import embed_from_report, format_coords_file, format_tree_file
from .graph import format_graph, parse_graph_with_map
from .oracle import build_oracle
from .polygon import format_polygon, geodesic_dist, grid_network, parse_polygon
from .recognition import recognize, verify_witness
from .reference import MAX_REFERENCE_VERTICES, reference_recognizer

GEN_KINDS = (
    "path", "cycle", "grid", "hypercube", "tree", "cogwheel",
    "simplex", "iterated-simplex", "staircase", "asym-tree7",
)


def _read(path: str) -> str:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from None


def _witness_text(witness) -> str:
    fields = asdict(witness)
    parts = " ".join(f"{k}={v}" for k, v in fields.items())
    return f"{witness.kind} {parts}".strip()


def _witness_json(witness):
    return {"kind": witness.kind, **asdict(witness)}


def cmd_recognize(args) -> int:
    g, _ = parse_graph_with_map(_read(args.file))
    report = recognize(g, order_mode=args.order_mode)
    if args.json:
        payload = {"verdict": "yes" if report.accepted else "no"}
        if report.witness is not None:
            payload["witness"] = _witness_json(report.witness)
        print(json.dumps(payload, sort_keys=True))
    elif report.accepted:
        print("YES")
    else:
        print(f"NO {_witness_text(report.witness)}")
    if not report.accepted and args.order_mode == "lexbfs":
        if not verify_witness(g, report.witness):
            print("warning: witness failed re-validation", file=sys.stderr)
    return 0 if report.accepted else 1


def cmd_factor(args) -> int:
    g, _ = parse_graph_with_map(_read(args.file))
    report = recognize(g)
    if not report.accepted:
        print(f"NO {_witness_text(report.witness)}", file=sys.stderr)
        return 1
    emb = embed_from_report(g, report)
    paths = (
        (f"{args.out_prefix}.t1", format_tree_file(emb.tree1)),
        (f"{args.out_prefix}.t2", format_tree_file(emb.tree2)),
        (f"{args.out_prefix}.coords", format_coords_file(emb)),
    )
    for path, payload in paths:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(payload)
        print(path)
    return 0


def _oracle_for_file(path: str):
    g, mapping = parse_graph_with_map(_read(path))
    report = recognize(g)
    if not report.accepted:
        return None, None, report
    emb = embed_from_report(g, report)
    return build_oracle(emb), mapping, report


def cmd_dist(args) -> int:
    if args.pairs_file is not None:
        tokens = _read(args.pairs_file).split()
    else:
        tokens = args.ids
    if not tokens or len(tokens) % 2 != 0:
        print("error: expected an even list of vertex ids", file=sys.stderr)
        return 2
    try:
        ids = [int(t) for t in tokens]
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    oracle, mapping, report = _oracle_for_file(args.file)
    if oracle is None:
        print(f"NO {_witness_text(report.witness)}", file=sys.stderr)
        return 1
    out = []
    for u, v in zip(ids[::2], ids[1::2]):
        if u not in mapping or v not in mapping:
            print(f"error: unknown vertex id in pair ({u}, {v})", file=sys.stderr)
            return 2
        out.append(str(oracle.dist(mapping[u], mapping[v])))
    print("\n".join(out))
    return 0


def cmd_median(args) -> int:
    oracle, mapping, report = _oracle_for_file(args.file)
    if oracle is None:
        print(f"NO {_witness_text(report.witness)}", file=sys.stderr)
        return 1
    back = {compact: orig for orig, compact in mapping.items()}
    try:
        triple = [mapping[x] for x in (args.x, args.y, args.z)]
    except KeyError as exc:
        print(f"error: unknown vertex id {exc.args[0]}", file=sys.stderr)
        return 2
    print(back[oracle.median(*triple)])
    return 0


def cmd_polygon(args) -> int:
    poly = parse_polygon(_read(args.file))
    if args.scale != 1:
        poly = poly.scaled(args.scale)
    if args.action == "dist":
        d = geodesic_dist(poly, (args.sx, args.sy), (args.tx, args.ty))
        print(d)
        return 0
    arr = grid_network(poly)
    graph_path = f"{args.out}.graph"
    geom_path = f"{args.out}.geom"
    with open(graph_path, "w", encoding="utf-8") as fh:
        fh.write(format_graph(arr.network))
    with open(geom_path, "w", encoding="utf-8") as fh:
        fh.writelines(f"{v} {x} {y}\n" for v, (x, y) in enumerate(arr.coords))
    print(graph_path)
    print(geom_path)
    return 0


def cmd_gen(args) -> int:
    from . import generators as gen

    kind = args.kind
    params = args.params

    def need(count):
        if len(params) != count:
            raise ValueError(f"{kind} takes {count} parameter(s), got {len(params)}")

    def num(i):
        return int(params[i])

    if kind in ("tree", "staircase") and args.seed is None:
        print(f"error: gen {kind} requires an explicit --seed", file=sys.stderr)
        return 2
    try:
        if kind == "path":
            need(1)
            out = format_graph(gen.gen_path(num(0)))
        elif kind == "cycle":
            need(1)
            out = format_graph(gen.gen_cycle(num(0)))
        elif kind == "grid":
            need(2)
            out = format_graph(gen.gen_grid(num(0), num(1)))
        elif kind == "hypercube":
            need(1)
            out = format_graph(gen.gen_hypercube(num(0)))
        elif kind == "tree":
            need(1)
            out = format_graph(gen.gen_random_tree(num(0), args.seed))
        elif kind == "cogwheel":
            need(1)
            out = format_graph(gen.cogwheel(num(0)))
        elif kind == "simplex":
            need(1)
            base, _ = parse_graph_with_map(_read(params[0]))
            out = format_graph(gen.simplex_graph(base)[0])
        elif kind == "iterated-simplex":
            need(1)
            base, _ = parse_graph_with_map(_read(params[0]))
            out = format_graph(gen.iterated_simplex(base))
        elif kind == "staircase":
            need(1)
            out = format_polygon(
                gen.gen_staircase_polygon(
                    num(0), args.seed, min_step=args.min_step, max_step=args.max_step
                )
            )
        elif kind == "asym-tree7":
            need(0)
            out = format_graph(gen.asymmetric_tree7())
        else:  # pragma: no cover - argparse restricts choices
            raise ValueError(f"unknown kind {kind}")
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    sys.stdout.write(out)
    return 0


def cmd_check(args) -> int:
    g, _ = parse_graph_with_map(_read(args.file))
    if g.n > MAX_REFERENCE_VERTICES:
        print(
            f"error: {g.n} vertices exceeds the reference limit "
            f"of {MAX_REFERENCE_VERTICES}",
            file=sys.stderr,
        )
        return 2
    fast = recognize(g).accepted
    try:
        ref = reference_recognizer(g)
    except TooLargeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if fast == ref:
        print(f"AGREE {'YES' if fast else 'NO'}")
        return 0
    print(f"DISAGREE fast={'YES' if fast else 'NO'} reference={'YES' if ref else 'NO'}")
    return 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="doubletree",
        description=(
            "Recognize graphs embeddable into a product of two trees, factor "
            "them, and answer exact distance queries."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("recognize", help="decide whether a graph file is a partial double tree")
    p.add_argument("file")
    p.add_argument("--json", action="store_true", help="machine-readable report")
    p.add_argument("--order-mode", choices=("lexbfs", "bfs"), default="lexbfs")
    p.set_defaults(func=cmd_recognize)

    p = sub.add_parser("factor", help="write the two tree factors and coordinates")
    p.add_argument("file")
    p.add_argument("out_prefix")
    p.set_defaults(func=cmd_factor)

    p = sub.add_parser("dist", help="answer distance queries over a graph file")
    p.add_argument("file")
    p.add_argument("ids", nargs="*", help="flat list of vertex pairs: u v [u v ...]")
    p.add_argument("--pairs-file", help="file of whitespace-separated vertex pairs")
    p.set_defaults(func=cmd_dist)

    p = sub.add_parser("median", help="median vertex of a triple")
    p.add_argument("file")
    p.add_argument("x", type=int)
    p.add_argument("y", type=int)
    p.add_argument("z", type=int)
    p.set_defaults(func=cmd_median)

    p = sub.add_parser("polygon", help="polygon geodesics and grid networks")
    psub = p.add_subparsers(dest="action", required=True)
    pd = psub.add_parser("dist", help="geodesic distance between two points")
    pd.add_argument("file")
    pd.add_argument("sx", type=int)
    pd.add_argument("sy", type=int)
    pd.add_argument("tx", type=int)
    pd.add_argument("ty", type=int)
    pd.add_argument("--scale", type=int, default=1)
    pd.set_defaults(func=cmd_polygon)
    pn = psub.add_parser("network", help="emit the grid network and geometry sidecar")
    pn.add_argument("file")
    pn.add_argument("--out", required=True, help="output prefix for .graph and .geom")
    pn.add_argument("--scale", type=int, default=1)
    pn.set_defaults(func=cmd_polygon)

    p = sub.add_parser("gen", help="emit a named instance on stdout")
    p.add_argument("kind", choices=GEN_KINDS)
    p.add_argument("params", nargs="*")
    p.add_argument("--seed", type=int)
    p.add_argument("--min-step", type=int, default=1)
    p.add_argument("--max-step", type=int, default=6)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("check", help="differential test: fast vs reference recognizer")
    p.add_argument("file")
    p.set_defaults(func=cmd_check)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except PointOutsideError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except NotPartialDoubleTreeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except TooLargeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except DoubletreeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
