"""Command-line entry point: ``modeclust <subcommand> ...``.

Exit codes: 0 success, 2 invalid input, 3 numerical failure, 4 I/O error.
"""

import argparse
import json
import logging
import os
import sys

import numpy as np

from . import (
    artifacts,
    bandwidth,
    connectivity,
    dataset,
    denoise,
    evaluation,
    kde,
    layout,
    pipeline,
    softassign,
    synth,
)
from .errors import InvalidInput, IoError, ModeClusterError, NumericalError

logger = logging.getLogger("modeclust")

EXIT_OK, EXIT_INPUT, EXIT_NUMERIC, EXIT_IO = 0, 2, 3, 4


def exit_code(exc):
    if isinstance(exc, pipeline.StageError):
        exc = exc.cause
    if isinstance(exc, NumericalError):
        return EXIT_NUMERIC
    if isinstance(exc, (IoError, OSError)) and not isinstance(exc, InvalidInput):
        return EXIT_IO
    return EXIT_INPUT


def _data_args(p, required=True):
    p.add_argument("--input", required=required, metavar="PATH", help="CSV file of observations")
    p.add_argument("--label-col", metavar="NAME", help="column holding ground-truth labels (excluded from features)")
    p.add_argument("--no-standardize", action="store_true", help="cluster raw coordinates instead of z-scores")
    p.add_argument("--drop-col", action="append", default=[], metavar="NAME", help="non-feature column to ignore (repeatable)")


def _emit(text, path):
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        try:
            with open(path, "w", encoding="utf-8") as fh:
                fh.write(text)
        except OSError as exc:
            raise IoError(f"cannot write {path}: {exc}") from exc


def _emit_json(obj, path):
    if path is None or path == "-":
        sys.stdout.write(json.dumps(artifacts._round_reals(obj), indent=2) + "\n")
    else:
        artifacts.write_json(path, obj)


def _load(args, standardize=None, drop=None):
    dm = dataset.load_csv(args.input, args.label_col, args.drop_col or drop or ())
    if standardize is None:
        standardize = not args.no_standardize
    return dataset.standardize(dm) if standardize else dm


def _config(args, **extra):
    return pipeline.RunConfig(
        input=args.input,
        label_column=args.label_col,
        drop_columns=tuple(args.drop_col),
        standardize=not args.no_standardize,
        **extra,
    )


def cmd_cluster(args):
    dm = _load(args)
    res = pipeline.cluster_data(dm, args.h, args.n0, not args.no_denoise)
    cfg = _config(args, h=args.h, n0=args.n0, denoise=not args.no_denoise)
    _emit_json(pipeline.clusters_doc(res, cfg), args.out)


def cmd_scplot(args):
    if args.clusters:
        doc = artifacts.load_clusters(args.clusters)
        sizes = doc.get("pre_denoise_sizes") or doc.get("sizes")
        if sizes is None:
            sizes = np.bincount(doc["labels"]).tolist()
        n0 = args.n0 if args.n0 is not None else doc.get("n0")
        if n0 is None:
            raise InvalidInput("no n0 in the clusters file; pass --n0")
        sc = denoise.SCPlotData(tuple(sorted((int(s) for s in sizes), reverse=True)), float(n0))
    else:
        if not args.input:
            raise InvalidInput("give --clusters or --input")
        dm = _load(args)
        res = pipeline.cluster_data(dm, args.h, args.n0, do_denoise=False)
        sc = denoise.sc_plot(res.raw_assign, res.n0)
    csv_text = "rank,size\n" + "".join(f"{i + 1},{s}\n" for i, s in enumerate(sc.sorted_sizes))
    _emit(csv_text, args.csv)
    if args.svg:
        _emit(layout.scplot_svg(sc), args.svg)
    logger.info("n0 = %.4f; %d significant cluster(s)", sc.threshold, sc.n_significant)


def _model_from_clusters(args, doc):
    dm = _load(args, standardize=doc.get("standardize", not args.no_standardize), drop=doc.get("drop_columns"))
    h = doc.get("h")
    if h is None:
        h = bandwidth.normal_reference_h(dm.n, dm.d, dm.mean_sd())
    if doc["labels"].shape[0] != dm.n:
        raise InvalidInput(f"clusters file has {doc['labels'].shape[0]} labels but the data have {dm.n} rows")
    return dm, kde.DensityModel(dm.x, h)


def cmd_soft(args):
    doc = artifacts.load_clusters(args.clusters)
    _, model = _model_from_clusters(args, doc)
    sa = softassign.soft_assign(model, doc["modes"])
    if args.out is None or args.out == "-":
        import io
        import csv

        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(artifacts.soft_header(sa.a.shape[1]))
        w.writerows([[f"{v:.6f}" for v in row] for row in sa.a])
        sys.stdout.write(buf.getvalue())
    else:
        artifacts.write_matrix_csv(args.out, sa.a, artifacts.soft_header(sa.a.shape[1]))


def cmd_connect(args):
    a = artifacts.read_matrix_csv(args.soft)
    doc = artifacts.load_clusters(args.clusters)
    omega0 = args.omega0 if args.omega0 is not None else bandwidth.default_omega0(a.shape[1])
    cm = connectivity.connectivity_matrix(a, doc["labels"], omega0)
    if args.csv:
        artifacts.write_matrix_csv(args.csv, cm.omega, artifacts.soft_header(a.shape[1]))
    else:
        for row in cm.omega:
            sys.stdout.write(",".join(f"{v:.6f}" for v in row) + "\n")
    _emit_json(artifacts.edges_to_json(cm.edges), args.edges)


def cmd_viz(args):
    doc = artifacts.load_clusters(args.clusters)
    dm, model = _model_from_clusters(args, doc)
    k = doc["modes"].shape[0]
    omega0 = args.omega0 if args.omega0 is not None else bandwidth.default_omega0(k)
    if args.omega:
        omega = artifacts.read_matrix_csv(args.omega)
        cm = connectivity.ConnectivityMatrix(omega=omega, edges=tuple(connectivity.edge_set(omega, omega0)))
    else:
        sa = softassign.soft_assign(model, doc["modes"])
        cm = connectivity.connectivity_matrix(sa, doc["labels"], omega0)
    lay = layout.two_stage_layout(doc["modes"], doc["labels"], cm, args.rho0, dm.x)
    color = None
    if args.color_by == "label":
        if dm.labels is None:
            raise InvalidInput("--color-by label needs --label-col")
        color = dm.labels
    if args.svg:
        _emit(layout.layout_svg(lay, doc["labels"], color), args.svg)
    if args.json or not args.svg:
        _emit_json(pipeline.layout_doc(lay), args.json)


def cmd_eval(args):
    if not args.label_col:
        raise InvalidInput("eval needs --label-col naming the ground-truth column")
    dm = dataset.load_csv(args.input, args.label_col, args.drop_col)
    doc = artifacts.load_clusters(args.clusters)
    pred = (doc["labels"] + 1).tolist()
    if len(pred) != dm.n:
        raise InvalidInput(f"clusters file has {len(pred)} labels but the data have {dm.n} rows")
    table = evaluation.confusion(dm.labels, pred)
    ari = evaluation.adjusted_rand(dm.labels, pred)
    print(table.to_text())
    print()
    print(table.to_csv(), end="")
    print()
    print(f"ARI = {ari:.3f}")
    if args.csv:
        _emit(table.to_csv(), args.csv)


def cmd_synth(args):
    if args.which == "five_cluster_10d":
        dm = synth.gen_five_cluster(args.seed, literal_c4=args.literal_c4)
    else:
        dm = synth.generate(args.which, args.seed, args.n)
    if args.out is None or args.out == "-":
        import io
        import csv

        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(list(dm.columns) + ["label"])
        for row, lab in zip(dm.x, dm.labels):
            w.writerow([repr(float(v)) for v in row] + [lab])
        sys.stdout.write(buf.getvalue())
    else:
        dataset.write_csv(args.out, dm.x, dm.labels, dm.columns)


def cmd_run(args):
    if args.from_manifest:
        cfg = pipeline.config_from_manifest(artifacts.read_json(args.from_manifest), args.out)
    else:
        cfg = pipeline.RunConfig(
            input=args.input,
            label_column=args.label_col,
            drop_columns=tuple(args.drop_col),
            standardize=not args.no_standardize,
            h=args.h,
            n0=args.n0,
            rho0=args.rho0,
            omega0=args.omega0,
            output_dir=args.out,
            seed=args.seed,
            synth=args.synth,
            denoise=not args.no_denoise,
            color_by=args.color_by,
        )
    manifest = pipeline.run_pipeline(cfg)
    r = manifest["result"]
    p = manifest["parameters"]
    print(f"h={p['h']:.4g} n0={p['n0']:.4g} rho0={p['rho0']:g} omega0={p['omega0']:.3g}")
    print(f"{r['k']} cluster(s), sizes {[int(s) for s in r['sizes']]}; {len(r['edges'])} edge(s)")
    print(f"artifacts written to {cfg.output_dir}")


def build_parser():
    parser = argparse.ArgumentParser(prog="modeclust", description=__doc__.splitlines()[0])
    parser.add_argument("--threads", type=int, default=None, help="cap on BLAS worker threads (env MODECLUSTER_THREADS)")
    parser.add_argument("-v", "--verbose", action="count", default=0)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("cluster", help="mean-shift mode clustering (+ denoising)")
    _data_args(p)
    p.add_argument("--h", type=float, help="bandwidth (default: normal reference rule)")
    p.add_argument("--n0", type=float, help="significant-cluster size threshold (default: reference rule)")
    p.add_argument("--no-denoise", action="store_true")
    p.add_argument("--out", metavar="PATH", help="JSON output (default stdout)")
    p.set_defaults(func=cmd_cluster)

    p = sub.add_parser("scplot", help="ordered cluster sizes (CSV + SVG)")
    _data_args(p, required=False)
    p.add_argument("--clusters", metavar="PATH", help="clusters.json or run directory")
    p.add_argument("--h", type=float)
    p.add_argument("--n0", type=float)
    p.add_argument("--csv", metavar="PATH")
    p.add_argument("--svg", metavar="PATH")
    p.set_defaults(func=cmd_scplot)

    p = sub.add_parser("soft", help="absorbing-chain soft assignment matrix")
    _data_args(p)
    p.add_argument("--clusters", required=True, metavar="PATH")
    p.add_argument("--out", metavar="PATH", help="CSV output (default stdout)")
    p.set_defaults(func=cmd_soft)

    p = sub.add_parser("connect", help="cluster connectivity matrix and edges")
    p.add_argument("--soft", required=True, metavar="PATH")
    p.add_argument("--clusters", required=True, metavar="PATH")
    p.add_argument("--omega0", type=float)
    p.add_argument("--csv", metavar="PATH")
    p.add_argument("--edges", metavar="PATH")
    p.set_defaults(func=cmd_connect)

    p = sub.add_parser("viz", help="two-stage MDS layout (SVG/JSON)")
    _data_args(p)
    p.add_argument("--clusters", required=True, metavar="PATH")
    p.add_argument("--omega", metavar="PATH", help="omega.csv (default: recompute)")
    p.add_argument("--rho0", type=float, default=bandwidth.DEFAULT_RHO0)
    p.add_argument("--omega0", type=float)
    p.add_argument("--color-by", choices=("cluster", "label"), default="cluster")
    p.add_argument("--svg", metavar="PATH")
    p.add_argument("--json", metavar="PATH")
    p.set_defaults(func=cmd_viz)

    p = sub.add_parser("eval", help="confusion table and adjusted Rand index")
    p.add_argument("--input", required=True, metavar="PATH")
    p.add_argument("--label-col", metavar="NAME")
    p.add_argument("--drop-col", action="append", default=[], metavar="NAME")
    p.add_argument("--clusters", required=True, metavar="PATH")
    p.add_argument("--csv", metavar="PATH")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("synth", help="write a synthetic benchmark dataset")
    p.add_argument("--which", choices=synth.GENERATORS, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--n", type=int, help="sample size (two_gaussian_1d only)")
    p.add_argument("--literal-c4", action="store_true", help="five_cluster_10d: C4 on the 4th axis")
    p.add_argument("--out", metavar="PATH")
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("run", help="full pipeline into an output directory")
    _data_args(p, required=False)
    p.add_argument("--synth", choices=synth.GENERATORS, help="generate data instead of --input")
    p.add_argument("--seed", type=int)
    p.add_argument("--h", type=float)
    p.add_argument("--n0", type=float)
    p.add_argument("--rho0", type=float, default=bandwidth.DEFAULT_RHO0)
    p.add_argument("--omega0", type=float)
    p.add_argument("--no-denoise", action="store_true")
    p.add_argument("--color-by", choices=("cluster", "label"), default="cluster")
    p.add_argument("--from-manifest", metavar="PATH", help="rerun with a previous run's parameters")
    p.add_argument("--out", default="modeclust-out", metavar="DIR")
    p.set_defaults(func=cmd_run)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    level = logging.WARNING - 10 * min(args.verbose, 2)
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")

    threads = args.threads
    if threads is None and os.environ.get("MODECLUSTER_THREADS"):
        threads = int(os.environ["MODECLUSTER_THREADS"])
    try:
        if threads:
            from threadpoolctl import threadpool_limits

            with threadpool_limits(limits=threads):
                args.func(args)
        else:
            args.func(args)
    except ModeClusterError as exc:
        print(f"modeclust: error: {exc}", file=sys.stderr)
        return exit_code(exc)
    except OSError as exc:
        print(f"modeclust: error: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
