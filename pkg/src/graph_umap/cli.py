"""Command-line front end: layout, metrics, sparsify, knn, bench, synth."""

import argparse
import os
import sys

from .bench import BenchSuite, load_graph, run_suite
from .generators import synth_graph
from .io import read_layout_csv, render_svg, write_layout_csv
from .layout import DRIVERS, OptimizerConfig, make_sparsifier
from .metrics import compute_metrics
from .neighbors import partial_bfs, smooth_knn_weights

ENV_OUTPUT_DIR = "GRAPH_UMAP_OUTPUT_DIR"


def _default_outdir():
    return os.environ.get(ENV_OUTPUT_DIR, ".")


def _add_optimizer_flags(p):
    p.add_argument("--k", type=int, default=15, help="kNN neighborhood size")
    p.add_argument("--iters", type=int, default=500, help="SGD iterations")
    p.add_argument("--samp-exp", type=float, default=0.9,
                   help="window exponent for the sampled optimizer")
    p.add_argument("--neg", type=int, default=5, help="negative samples per edge")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--min-dist", type=float, default=0.1)
    p.add_argument("--spread", type=float, default=1.0)


def _cfg_from_args(args):
    return OptimizerConfig(
        iterations=args.iters, k=args.k, samp=args.samp_exp,
        min_dist=args.min_dist, spread=args.spread,
        negative_sample_count=args.neg, seed=args.seed,
    )


def build_parser():
    parser = argparse.ArgumentParser(
        prog="graph-umap",
        description="UMAP-based graph drawing and its fast variants",
    )
    parser.add_argument("--config", default=None,
                        help="key=value file; explicit flags override it")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("layout", help="compute a drawing")
    p.add_argument("graph", help="edge list or .mtx file")
    p.add_argument("--algo", choices=sorted(DRIVERS), default="gumap")
    _add_optimizer_flags(p)
    p.add_argument("--out", default=None, help="layout CSV (default <graph>.layout.csv)")
    p.add_argument("--render", default=None, help="also write an SVG here")
    p.add_argument("--keep-disconnected", action="store_true")
    p.add_argument("--resistance-method", choices=("auto", "exact", "approx"),
                   default="auto")

    p = sub.add_parser("metrics", help="score a drawing against its graph")
    p.add_argument("graph")
    p.add_argument("layout", help="layout CSV")
    p.add_argument("--r", type=int, default=2, help="hop radius for preservation")
    p.add_argument("--shape-variant", choices=("rng", "drng"), default="rng")
    p.add_argument("--out", default=None, help="write the one-row CSV here")
    p.add_argument("--keep-disconnected", action="store_true")

    p = sub.add_parser("sparsify", help="emit the spectral sparsifier edge list")
    p.add_argument("graph")
    p.add_argument("--out", default=None)
    p.add_argument("--method", choices=("auto", "exact", "approx"), default="auto")
    p.add_argument("--epsilon", type=float, default=0.5)
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("knn", help="emit the weighted kNN edge list (i,j,d,h)")
    p.add_argument("graph")
    p.add_argument("--k", type=int, default=15)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None)

    p = sub.add_parser("bench", help="timed comparison across algorithms")
    p.add_argument("graphs", nargs="+", help="graph files (name taken from filename)")
    p.add_argument("--algos", default="gumap,ss,sl,sssl")
    p.add_argument("--runs", type=int, default=5)
    p.add_argument("--metrics", default="np,stress,crossings,shape",
                   help="comma list; empty string disables metrics")
    p.add_argument("--out-dir", default=None,
                   help=f"report directory (default ${ENV_OUTPUT_DIR} or .)")
    p.add_argument("--parallel-graphs", type=int, default=1,
                   help="worker processes across graphs; invalidates runtime "
                        "comparisons")
    _add_optimizer_flags(p)  # --seed doubles as the bench base seed

    p = sub.add_parser("synth", help="write a synthetic graph edge list")
    p.add_argument("kind", choices=("grid", "scale_free", "random_regular"))
    p.add_argument("n", type=int)
    p.add_argument("--m0", type=int, default=2, help="edges per vertex (scale_free)")
    p.add_argument("--degree", type=int, default=3, help="degree (random_regular)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None)
    return parser


def _apply_config_file(parser, argv):
    """Load --config key=value pairs as parser defaults (flags still win)."""
    probe = argparse.ArgumentParser(add_help=False)
    probe.add_argument("--config", default=None)
    known, _ = probe.parse_known_args(argv)
    if not known.config:
        return
    defaults = {}
    with open(known.config, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ValueError(f"{known.config}: line {lineno}: expected key=value")
            key, value = (part.strip() for part in line.split("=", 1))
            defaults[key.replace("-", "_")] = value
    coerced = {}
    actions = {a.dest: a for a in parser._actions}
    for sp in parser._subparsers._group_actions[0].choices.values():
        for a in sp._actions:
            actions.setdefault(a.dest, a)
    for key, value in defaults.items():
        action = actions.get(key)
        if action is not None and action.type is not None:
            coerced[key] = action.type(value)
        elif action is not None and isinstance(action.const, bool):
            coerced[key] = value.lower() in ("1", "true", "yes")
        else:
            coerced[key] = value
    parser.set_defaults(**coerced)
    for sp in parser._subparsers._group_actions[0].choices.values():
        sp.set_defaults(**{k: v for k, v in coerced.items()
                           if any(a.dest == k for a in sp._actions)})


def _cmd_layout(args):
    g = load_graph(args.graph, keep_disconnected=args.keep_disconnected)
    cfg = _cfg_from_args(args)
    driver = DRIVERS[args.algo]
    if args.algo in ("ss", "sssl"):
        layout, report = driver(g, cfg, resistance_method=args.resistance_method)
    else:
        layout, report = driver(g, cfg)
    out = args.out or (os.path.basename(args.graph) + f".{args.algo}.layout.csv")
    write_layout_csv(layout, out, labels=g.labels)
    if args.render:
        render_svg(g, layout, args.render)
    print(
        f"{args.algo}: n={g.n} m={g.m} "
        f"C0={report.c0_ms:.1f}ms C1={report.c1_ms:.1f}ms C2={report.c2_ms:.1f}ms "
        f"-> {out}"
    )
    return 0


def _cmd_metrics(args):
    g = load_graph(args.graph, keep_disconnected=args.keep_disconnected)
    labels, coords = read_layout_csv(args.layout)
    if coords.shape[0] != g.n:
        print(f"layout has {coords.shape[0]} vertices, graph has {g.n}",
              file=sys.stderr)
        return 1
    from .graph import Layout

    layout = Layout(coords=coords)
    report = compute_metrics(g, layout, r=args.r, shape_variant=args.shape_variant)
    header = "np,stress,crossings,shape"
    row = (
        f"{report.neighborhood_preservation:.10g},{report.stress:.10g},"
        f"{report.crossings},{report.shape_jaccard:.10g}"
    )
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(header + "\n" + row + "\n")
    else:
        print(header)
        print(row)
    print()
    print(f"{'metric':<28}{'value':>14}")
    print(f"{'neighborhood preservation':<28}{report.neighborhood_preservation:>14.6f}")
    print(f"{'stress':<28}{report.stress:>14.6f}")
    print(f"{'crossings':<28}{report.crossings:>14d}")
    print(f"{'shape (RNG jaccard)':<28}{report.shape_jaccard:>14.6f}")
    return 0


def _cmd_sparsify(args):
    g = load_graph(args.graph)
    g_prime = make_sparsifier(g, method=args.method, epsilon=args.epsilon,
                              seed=args.seed)
    out = args.out or (os.path.basename(args.graph) + ".sparsified.edges")
    labels = g_prime.labels or tuple(range(g_prime.n))
    with open(out, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(f"# spectral sparsifier: {g_prime.m} of {g.m} edges\n")
        for u, v in g_prime.edges:
            fh.write(f"{labels[u]} {labels[v]}\n")
    print(f"kept {g_prime.m}/{g.m} edges -> {out}")
    return 0


def _cmd_knn(args):
    g = load_graph(args.graph)
    _, knn = partial_bfs(g, args.k, seed=args.seed)
    g_k = smooth_knn_weights(knn)
    u, v, d, h = g_k.undirected_edges()
    out = args.out or (os.path.basename(args.graph) + ".knn.csv")
    with open(out, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("i,j,d,h\n")
        for i in range(u.shape[0]):
            fh.write(f"{u[i]},{v[i]},{d[i]},{h[i]:.10g}\n")
    print(f"{u.shape[0]} weighted kNN edges -> {out}")
    return 0


def _cmd_bench(args):
    metric_list = tuple(m for m in args.metrics.split(",") if m)
    suite = BenchSuite(
        graphs=[(os.path.basename(p), p) for p in args.graphs],
        runs_per_graph=args.runs,
        algorithms=tuple(args.algos.split(",")),
        base_seed=args.seed,
        config=_cfg_from_args(args),
        metrics=metric_list,
        output_dir=args.out_dir or _default_outdir(),
        parallel_graphs=args.parallel_graphs,
    )
    _, summaries = run_suite(suite)
    cols = ("graph", "algo", "total_ms", "imp_total", "np", "stress")
    print(",".join(cols))
    for row in summaries:
        print(",".join(_fmt(row.get(c)) for c in cols))
    print(f"reports written to {suite.output_dir}")
    return 0


def _fmt(value):
    if value is None:
        return ""
    if isinstance(value, float):
        return f"{value:.6g}"
    return str(value)


def _cmd_synth(args):
    params = {}
    if args.kind == "scale_free":
        params["m0"] = args.m0
    if args.kind == "random_regular":
        params["d"] = args.degree
    g = synth_graph(args.kind, args.n, seed=args.seed, **params)
    out = args.out or f"{args.kind}_{args.n}.edges"
    with open(out, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(f"# synthetic {args.kind} n={g.n} m={g.m} seed={args.seed}\n")
        for u, v in g.edges:
            fh.write(f"{u} {v}\n")
    print(f"{args.kind}: n={g.n} m={g.m} -> {out}")
    return 0


_COMMANDS = {
    "layout": _cmd_layout,
    "metrics": _cmd_metrics,
    "sparsify": _cmd_sparsify,
    "knn": _cmd_knn,
    "bench": _cmd_bench,
    "synth": _cmd_synth,
}


def main(argv=None):
    argv = sys.argv[1:] if argv is None else list(argv)
    parser = build_parser()
    try:
        _apply_config_file(parser, argv)
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except BrokenPipeError:
        return 1
    except Exception as exc:  # module errors -> nonzero exit with message
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
