"""Command-line driver: a thin client over the exploration engine.

Subcommands mirror the service endpoints and write the same canonical
JSON artifacts, plus CSV companions for the curve and feature tables.

Exit codes: 0 success, 2 bad parameters, 3 parse failure, 4 I/O failure,
1 internal error.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from . import serialize
from .engine import Explorer
from .graph import ParameterError, ParseError, load_graph

EXIT_OK = 0
EXIT_INTERNAL = 1
EXIT_PARAMETER = 2
EXIT_PARSE = 3
EXIT_IO = 4


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--edges", required=True, help="edge list file (triple, sociopatterns, csv-header)")
    p.add_argument("--labels", help="node,label CSV")
    p.add_argument("--format", default="auto", choices=["auto", "triple", "sociopatterns", "csv-header"])
    p.add_argument("--max-time", type=int, default=None, help="truncate events after this tick")
    p.add_argument("--method", default="sliding", choices=["sliding", "partition"])
    p.add_argument("--out", default=".", help="output directory for artifacts")
    p.add_argument("--workers", type=int, default=1, help="parallel barcode workers")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="resoscope", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    s = sub.add_parser("suggest", help="suggest temporal resolutions")
    _add_common(s)
    s.add_argument("--metric", default="bottleneck", choices=["bottleneck", "wasserstein"])
    s.add_argument("--order", type=float, default=1.0, help="wasserstein order")
    s.add_argument("--max-r", type=int, default=None, help="largest candidate resolution")
    s.add_argument("-m", type=int, default=5, help="number of suggestions")

    s = sub.add_parser("barcode", help="colored barcode at one resolution")
    _add_common(s)
    s.add_argument("-r", type=int, required=True)
    s.add_argument("--members", action="store_true", help="include node ids per timestamp")

    s = sub.add_parser("layout", help="renderable barcode layout")
    _add_common(s)
    s.add_argument("-r", type=int, required=True)
    s.add_argument("--ordering", default="bottom", choices=["bottom", "center"])
    s.add_argument("--min-nodes", type=int, default=0)
    s.add_argument("--min-duration", type=int, default=0)

    s = sub.add_parser("explain", help="witness for the gap between two resolutions")
    _add_common(s)
    s.add_argument("--r1", type=int, required=True)
    s.add_argument("--r2", type=int, required=True)

    s = sub.add_parser("features", help="quantitative features per resolution")
    _add_common(s)
    s.add_argument("--resolutions", required=True, help="comma-separated resolutions")
    s.add_argument("--mds", action="store_true", help="include 1-D scaling of the distance matrix")

    s = sub.add_parser("snapshot", help="node-link payload near a timestamp")
    _add_common(s)
    s.add_argument("-r", type=int, required=True)
    s.add_argument("-t", type=float, required=True)

    s = sub.add_parser("serve", help="run the HTTP service")
    _add_common(s)
    s.add_argument("--port", type=int, default=None, help="overrides RESOSCOPE_PORT")
    s.add_argument("--host", default="127.0.0.1")
    s.add_argument("--frontend", default=None, help="directory with built UI assets")

    return parser


def _load(args) -> Explorer:
    graph = load_graph(args.edges, args.labels, args.format, args.max_time)
    return Explorer(graph, name=Path(args.edges).stem, workers=args.workers)


def _write(out_dir: str, name: str, data) -> Path:
    path = Path(out_dir) / name
    path.parent.mkdir(parents=True, exist_ok=True)
    if isinstance(data, bytes):
        path.write_bytes(data)
    else:
        path.write_text(data)
    return path


def run(args) -> int:
    explorer = _load(args)
    out = args.out

    if args.command == "suggest":
        curve = explorer.suggest(args.method, args.metric, args.max_r, args.m, args.order)
        _write(out, "curve.csv", serialize.curve_csv(curve))
        _write(out, "suggestions.json", serialize.canonical_json(serialize.suggestions_dict(curve)))
        print(" ".join(str(s.resolution) for s in curve.peaks))
        return EXIT_OK

    if args.command == "barcode":
        result = explorer.barcode(args.method, args.r, "colored")
        payload = serialize.barcode_dict(result, include_members=args.members)
        path = _write(out, f"barcode_{args.method}_r{args.r}.json", serialize.canonical_json(payload))
        print(f"{len(result.bars)} bars -> {path}")
        return EXIT_OK

    if args.command == "layout":
        spec = explorer.layout(args.method, args.r, args.ordering, args.min_nodes, args.min_duration)
        path = _write(
            out,
            f"layout_{args.method}_r{args.r}_{args.ordering}.json",
            serialize.canonical_json(serialize.layout_dict(spec)),
        )
        print(f"{spec.tracks} tracks, {len(spec.bars)} bars -> {path}")
        return EXIT_OK

    if args.command == "explain":
        exp = explorer.explain(args.method, min(args.r1, args.r2), max(args.r1, args.r2))
        payload = serialize.explanation_dict(exp, explorer.graph.node_names)
        path = _write(
            out,
            f"explain_{args.method}_{exp.r_low}_{exp.r_high}.json",
            serialize.canonical_json(payload),
        )
        print(f"distance {float(exp.distance):g} ({exp.witness.kind}) -> {path}")
        return EXIT_OK

    if args.command == "features":
        resolutions = sorted({int(x) for x in args.resolutions.split(",") if x.strip()})
        if not resolutions:
            raise ParameterError("empty resolution list")
        gf = explorer.global_features(args.method, resolutions, with_mds=args.mds)
        _write(out, "global_features.csv", serialize.global_features_csv(gf))
        _write(out, "global_features.json", serialize.canonical_json(serialize.global_features_dict(gf)))
        if len(resolutions) >= 2:
            fc = explorer.feature_curves(args.method, resolutions)
            _write(out, "mean_features.csv", serialize.feature_curves_csv(fc))
        print(f"features for {len(resolutions)} resolutions -> {out}")
        return EXIT_OK

    if args.command == "snapshot":
        snap = explorer.snapshot(args.method, args.r, args.t)
        payload = serialize.snapshot_dict(snap)
        path = _write(
            out,
            f"snapshot_{args.method}_r{args.r}_t{int(args.t)}.json",
            serialize.canonical_json(payload),
        )
        print(f"{len(snap.nodes)} nodes, {len(snap.edges)} edges -> {path}")
        return EXIT_OK

    if args.command == "serve":
        import uvicorn

        from .server import create_app

        port = args.port or int(os.environ.get("RESOSCOPE_PORT", "8040"))
        app = create_app(explorer, frontend_dir=args.frontend)
        uvicorn.run(app, host=args.host, port=port, log_level="warning")
        return EXIT_OK

    raise ParameterError(f"unknown command {args.command!r}")


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return run(args)
    except ParameterError as exc:
        print(f"parameter error: {exc}", file=sys.stderr)
        return EXIT_PARAMETER
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO
    except Exception as exc:  # pragma: no cover - defensive
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
