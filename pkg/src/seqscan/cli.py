"""Command-line interface.

Exit status: 0 success, 1 usage error, 2 unreadable input, 3 invalid
parameters or data that break an invariant.
"""

from __future__ import annotations

import argparse
import csv
import sys
from typing import Optional, Sequence

import numpy as np

from . import analysis, periodicity
from .core import Params
from .evaluation import NO_LOCAL_NOISE, WITH_LOCAL_NOISE, Labeling, UndefinedMetricError, evaluate, resample_indices
from .fixtures import FixtureSpec, generate_fixture
from .io import UNITS, ParseError, format_float, parse_quantity, parse_trajectory, write_regions, write_segmentation, write_trajectory
from .segmentation import seqscan

EXIT_OK, EXIT_USAGE, EXIT_PARSE, EXIT_INVALID = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


def _quantity(text):
    try:
        return parse_quantity(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _read(path):
    if path == "-":
        return parse_trajectory(sys.stdin.buffer.read())
    try:
        with open(path, "rb") as fh:
            data = fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    try:
        return parse_trajectory(data)
    except ParseError as exc:
        err = ParseError(f"{path}: {exc}")
        err.line = exc.line
        raise err from None


def _params(args):
    presence, unit = args.presence if args.presence is not None else (0.0, "s")
    return Params(args.eps, args.min_pts, presence), (args.unit or unit)


def _add_scan_args(p, presence=True):
    p.add_argument("input", help="trajectory CSV (id,t,x,y[,label]); '-' reads stdin")
    p.add_argument("--eps", type=float, required=True, help="neighbourhood radius in meters")
    p.add_argument("--min-pts", type=int, required=True, help="minimum neighbourhood size of a core point")
    if presence:
        p.add_argument("--presence", type=_quantity, default=None, help="minimum presence, e.g. 20d, 12h, 30min, 45s")
    p.add_argument("--unit", choices=sorted(UNITS), default=None, help="unit for reported durations")


def _segment_all(args):
    traj, labels = _read(args.input)
    params, unit = _params(args)
    return traj, labels, seqscan(traj, params), params, unit


def cmd_segment(args, out):
    traj, _, seg, _, unit = _segment_all(args)
    if args.out_dir:
        write_segmentation(seg, traj, args.out_dir, unit)
    write_regions(out, seg, traj, unit)


def cmd_sweep(args, out):
    traj, _ = _read(args.input)
    theta, unit = args.theta if args.theta is not None else (None, "s")
    unit = args.unit or unit
    table = analysis.f_table(traj, args.eps, args.min_pts, theta)
    scale = UNITS[unit]
    w = csv.writer(out, lineterminator="\n")
    w.writerow(("delta_lo", "delta_hi", "regions", "unit"))
    for row in table:
        w.writerow((format_float(row.lo / scale), format_float(row.hi / scale), row.count, unit))


def _zone_pipeline(args):
    traj, _, seg, params, unit = _segment_all(args)
    sims = analysis.similarity_matrix(seg.regions, traj, params)
    classes = analysis.similarity_classes(seg.regions, args.psi, traj, params, matrix=sims)
    zone_list = analysis.zones(classes, seg.regions, traj)
    st = analysis.symbolic_trajectory(seg, zone_list, traj) if seg.regions else None
    return traj, seg, sims, zone_list, st, unit


def cmd_zones(args, out):
    traj, seg, sims, zone_list, st, unit = _zone_pipeline(args)
    scale = UNITS[unit]
    ids = [r.id for r in seg.regions]
    w = csv.writer(out, lineterminator="\n")
    out.write("# similarity\n")
    w.writerow(["region"] + ids)
    for rid, row in zip(ids, sims):
        w.writerow([rid] + [format_float(v) for v in row])
    out.write("\n# zones\n")
    w.writerow(("region", "zone"))
    for z in zone_list:
        for rid in z.members:
            w.writerow((rid, z.id))
    out.write("\n# symbolic trajectory\n")
    w.writerow(("start", "end", "symbol", "unit"))
    for e in st or ():
        symbol = "T" if e.symbol == analysis.TRANSITION_SYMBOL else e.symbol
        w.writerow((format_float(e.start / scale), format_float(e.end / scale), symbol, unit))


def cmd_period(args, out):
    _, _, _, zone_list, st, _ = _zone_pipeline(args)
    if st is None:
        raise ValueError("no stay regions, nothing to analyse")
    res, unit = args.resolution
    if args.zone is not None:
        if args.zone not in {z.id for z in zone_list}:
            raise ValueError(f"no zone {args.zone}; zones are 1..{len(zone_list)}")
        series = periodicity.build_series(st, res, periodicity.PER_ZONE, zone=args.zone)
    else:
        series = periodicity.build_series(st, res, periodicity.FULL_BEHAVIOR)
    report = periodicity.warp(series)
    best = periodicity.best_period(report, args.min_confidence)
    w = csv.writer(out, lineterminator="\n")
    w.writerow(("period", "confidence"))
    for row in report:
        w.writerow((row.period, format_float(row.confidence)))
    if best is None:
        out.write(f"# best period: none reaches confidence {args.min_confidence}\n")
    else:
        length = best.period * res / UNITS[unit]
        out.write(f"# best period: {best.period} slots ({length:g}{unit}), confidence {best.confidence:.6g}\n")


def cmd_eval(args, out):
    truth_traj, truth = _read(args.truth)
    if truth is None:
        raise ParseError(f"{args.truth}: no label column")
    if args.result is not None:
        res_traj, result = _read(args.result)
        if result is None:
            raise ParseError(f"{args.result}: no label or class column")
        if len(res_traj) != len(truth_traj) or not np.array_equal(res_traj.t, truth_traj.t):
            raise ValueError("truth and result cover different points")
    else:
        if args.eps is None or args.min_pts is None:
            raise UsageError("eval without a result file needs --eps and --min-pts")
        presence = args.presence[0] if args.presence else 0.0
        result = Labeling.from_segmentation(seqscan(truth_traj, Params(args.eps, args.min_pts, presence)))
    reports = {mode: evaluate(truth, result, mode) for mode in (WITH_LOCAL_NOISE, NO_LOCAL_NOISE)}
    w = csv.writer(out, lineterminator="\n")
    w.writerow(("metric", WITH_LOCAL_NOISE, NO_LOCAL_NOISE))
    for name in ("purity", "inv_purity", "h_purity", "pairwise_precision", "pairwise_recall", "pairwise_f", "diff"):
        vals = [getattr(reports[m], name) for m in (WITH_LOCAL_NOISE, NO_LOCAL_NOISE)]
        w.writerow([name] + [v if isinstance(v, int) else format_float(v) for v in vals])


def cmd_resample(args, out):
    traj, labels = _read(args.input)
    keep = resample_indices(traj, args.interval[0])
    write_trajectory(out, traj.subset(keep), labels.subset(keep) if labels is not None else None)


def cmd_synth(args, out):
    spec = FixtureSpec(
        cluster_count=args.clusters,
        points_per_cluster=args.points,
        radius=args.radius,
        spacing=args.spacing,
        sampling_interval=args.interval[0],
        noise_rate=args.noise,
        transition_length=args.transition,
        eps=args.eps,
        dwell=args.dwell[0] if args.dwell else None,
        seed=args.seed,
    )
    traj, labels = generate_fixture(spec)
    write_trajectory(out, traj, labels)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="seqscan", description="Stay-region segmentation of movement trajectories.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("segment", help="segment a trajectory into stay regions")
    _add_scan_args(p)
    p.add_argument("--out-dir", help="also write points.csv, regions.csv and regions.geojson here")
    p.set_defaults(func=cmd_segment)

    p = sub.add_parser("sweep", help="number of stay regions as a function of the presence threshold")
    _add_scan_args(p, presence=False)
    p.add_argument("--theta", type=_quantity, default=None, help="step past each breakpoint (default duration/1000)")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("zones", help="region similarity, zones and the symbolic trajectory")
    _add_scan_args(p)
    p.add_argument("--psi", type=float, default=0.0, help="similarity threshold in [0, 1]")
    p.set_defaults(func=cmd_zones)

    p = sub.add_parser("period", help="candidate periods of the zone sequence")
    _add_scan_args(p)
    p.add_argument("--psi", type=float, default=0.0)
    p.add_argument("--resolution", type=_quantity, required=True, help="slot length, e.g. 7d")
    p.add_argument("--zone", type=int, default=None, help="binary series of one zone instead of the full behaviour")
    p.add_argument("--min-confidence", type=float, default=0.0)
    p.set_defaults(func=cmd_period)

    p = sub.add_parser("eval", help="compare a segmentation with labelled ground truth")
    p.add_argument("truth", help="CSV with a label column")
    p.add_argument("result", nargs="?", help="per-point output of 'segment' or a labelled CSV")
    p.add_argument("--eps", type=float)
    p.add_argument("--min-pts", type=int)
    p.add_argument("--presence", type=_quantity, default=None)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("resample", help="thin a trajectory to a coarser sampling interval")
    p.add_argument("input")
    p.add_argument("--interval", type=_quantity, required=True)
    p.set_defaults(func=cmd_resample)

    p = sub.add_parser("synth", help="write a labelled synthetic trajectory")
    p.add_argument("--clusters", type=int, default=2)
    p.add_argument("--points", type=int, default=100, help="points per cluster")
    p.add_argument("--radius", type=float, default=50.0)
    p.add_argument("--spacing", type=float, default=1000.0)
    p.add_argument("--interval", type=_quantity, default=(60.0, "s"), help="sampling interval")
    p.add_argument("--dwell", type=_quantity, default=None, help="dwell duration per cluster")
    p.add_argument("--noise", type=float, default=0.0, help="local noise rate in [0, 1)")
    p.add_argument("--transition", type=int, default=5, help="points per transition")
    p.add_argument("--eps", type=float, default=50.0, help="eps the fixture must stay separable at")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_synth)
    return parser


def main(argv: Optional[Sequence[str]] = None, stdout=None) -> int:
    out = stdout if stdout is not None else sys.stdout
    try:
        args = build_parser().parse_args(argv)
        args.func(args, out)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except ParseError as exc:
        print(f"seqscan: parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except UndefinedMetricError as exc:
        print(f"seqscan: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except (ValueError, OSError) as exc:
        print(f"seqscan: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
