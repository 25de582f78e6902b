"""Command-line front end.

Subcommands:
  fuse        fuse two PGM images
  eval        score a fused image against its sources (and ground truth)
  bench       complementary-blur benchmark over a directory of references
  hwsim       run the hardware datapath model on an image pair
  throughput  pixel-rate feasibility for a video format
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import bench, hwmodel, metrics
from .fusion import FusionOptions, fuse, fuse_coefficients
from .measures import DEFAULT_AC_THRESHOLD, MEASURES
from .pgmio import read_pgm, write_pgm


def _decision_map_image(labels: np.ndarray) -> np.ndarray:
    """255 where the first source won, 0 where the second did."""
    return np.where(labels > 0, 255, 0).astype(np.uint8)


def _add_fuse_opts(p: argparse.ArgumentParser):
    p.add_argument("--measure", choices=MEASURES, default="ampmax")
    p.add_argument("--cv", action="store_true",
                   help="consistency verification (majority filter)")
    p.add_argument("--arithmetic", choices=("float", "fixed"), default="float")
    p.add_argument("--ac-threshold", type=float, default=DEFAULT_AC_THRESHOLD,
                   help="magnitude threshold for the acmax measure")


def _options_from(args) -> FusionOptions:
    return FusionOptions(measure=args.measure,
                         consistency_verification=args.cv,
                         arithmetic=args.arithmetic,
                         ac_threshold=args.ac_threshold)


def cmd_fuse(args) -> int:
    a = read_pgm(args.a)
    b = read_pgm(args.b)
    opts = _options_from(args)
    fused, labels, report = fuse(a, b, opts)
    write_pgm(args.output, fused)
    if args.map:
        write_pgm(args.map, _decision_map_image(labels))
    if args.counts:
        Path(args.counts).write_text(json.dumps(report.counts_dict(), indent=2) + "\n")
    if args.coeffs:
        coeffs, _, _ = fuse_coefficients(a, b, opts)
        np.save(args.coeffs, coeffs)
    print(f"fused {args.a} + {args.b} -> {args.output} "
          f"({report.blocks_x}x{report.blocks_y} blocks, measure={report.measure})")
    return 0


def cmd_eval(args) -> int:
    fused = read_pgm(args.fused)
    a = read_pgm(args.a)
    b = read_pgm(args.b)
    ref = read_pgm(args.ref) if args.ref else None
    report = metrics.evaluate(fused, a, b, reference=ref)
    header = ",".join(metrics.MetricReport.CSV_COLUMNS)
    line = ",".join(report.csv_values())
    text = header + "\n" + line + "\n"
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_bench(args) -> int:
    refs = sorted(Path(args.refs).glob("*.pgm"))
    if not refs:
        print(f"error: no .pgm references in {args.refs}", file=sys.stderr)
        return 2
    spec = bench.BenchSpec(references=tuple(str(r) for r in refs),
                           blur_kernel=args.kernel, pairs=args.pairs,
                           split=args.split, seed=args.seed)
    methods = tuple(m.strip() for m in args.methods.split(",") if m.strip())
    rows = bench.run_bench(spec, methods=methods, cv=args.cv)
    Path(args.output).write_text(bench.bench_rows_to_csv(rows))
    for r in rows:
        if r["pair"] == "mean":
            print(f"{r['method']:>9s}: ssim={r['ssim']:.4f} psnr={r['psnr']:.4f} "
                  f"mse={r['mse']:.4f} mi={r['mi']:.4f} uiqi={r['uiqi']:.4f}")
    return 0


def cmd_hwsim(args) -> int:
    a = read_pgm(args.a)
    b = read_pgm(args.b)
    cfg = hwmodel.DatapathConfig(clock_hz=args.clock, fifo_depth=args.fifo_depth)
    opts = FusionOptions(measure="ampmax", consistency_verification=args.cv,
                         arithmetic="fixed")
    coeffs, labels, stats = hwmodel.simulate_pair(a, b, opts, cfg,
                                                  trace_path=args.trace)
    fused = hwmodel.reconstruct_stream(coeffs, a.shape[1], a.shape[0])
    write_pgm(args.output, fused)
    if args.stats:
        Path(args.stats).write_text(json.dumps(stats.as_dict(), indent=2) + "\n")
    print(f"simulated {stats.blocks_processed} block pairs in "
          f"{stats.total_cycles} cycles "
          f"({stats.achieved_pixels_per_second / 1e6:.1f} Mpx/s)")
    return 0


def cmd_throughput(args) -> int:
    cfg = hwmodel.DatapathConfig(clock_hz=args.clock)
    rep = hwmodel.throughput_report(cfg, args.width, args.height,
                                    args.fps, streams=args.streams)
    verdict = "feasible" if rep.feasible else "NOT feasible"
    print(f"{args.width}x{args.height} @ {args.fps} fps x {args.streams} streams: "
          f"{verdict}")
    print(f"  required : {rep.required_pixels_per_second:,.0f} px/s")
    print(f"  capacity : {rep.capacity_pixels_per_second:,.0f} px/s "
          f"({args.clock / 1e6:.1f} MHz x {rep.pixels_per_clock} px/clk)")
    print(f"  margin   : {rep.margin:.3f}x")
    print(f"  min clock: {rep.min_clock_hz / 1e6:.1f} MHz")
    if args.json:
        Path(args.json).write_text(json.dumps(rep.as_dict(), indent=2) + "\n")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="dctfuse",
                                     description="DCT-domain multi-focus image fusion")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("fuse", help="fuse two PGM images")
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("-o", "--output", required=True)
    _add_fuse_opts(p)
    p.add_argument("--map", help="write the decision map as a PGM")
    p.add_argument("--counts", help="write operation counts as JSON")
    p.add_argument("--coeffs", help="export the fused DCT coefficient stream "
                                    "(.npy), the payload a JPEG coder would take")
    p.set_defaults(func=cmd_fuse)

    p = sub.add_parser("eval", help="compute fusion quality metrics")
    p.add_argument("--fused", required=True)
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)
    p.add_argument("--ref", help="ground-truth image for reference metrics")
    p.add_argument("-o", "--output", help="CSV output path (default stdout)")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("bench", help="run the blurred-pair benchmark")
    p.add_argument("--refs", required=True, help="directory of reference PGMs")
    p.add_argument("--pairs", type=int, default=50)
    p.add_argument("--kernel", type=int, default=3)
    p.add_argument("--split", choices=bench.SPLITS, default="vertical")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--methods", default="ampmax,variance,sf,acmax",
                   help="comma-separated measures to benchmark")
    p.add_argument("--cv", action="store_true")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("hwsim", help="simulate the hardware datapath")
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("--clock", type=float, default=200e6)
    p.add_argument("--fifo-depth", type=int, default=4)
    p.add_argument("--cv", action="store_true")
    p.add_argument("--trace", help="write a cycle trace to this file")
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--stats", help="write cycle statistics as JSON")
    p.set_defaults(func=cmd_hwsim)

    p = sub.add_parser("throughput", help="pixel-rate feasibility check")
    p.add_argument("--width", type=int, required=True)
    p.add_argument("--height", type=int, required=True)
    p.add_argument("--fps", type=float, required=True)
    p.add_argument("--streams", type=int, default=2)
    p.add_argument("--clock", type=float, default=200e6)
    p.add_argument("--json", help="also write the report as JSON")
    p.set_defaults(func=cmd_throughput)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
