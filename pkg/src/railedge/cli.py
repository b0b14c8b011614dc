"""Command-line interface: ``railedge {edge-extract,smooth,run}``.

Exit codes: 0 success, 2 unreadable or malformed input file, 64 usage error,
65 invalid data or manifest, 70 training divergence.
"""

import argparse
import logging
import os
import sys

from .edges import EdgeOperator, extract_edges
from .exceptions import TrainingError, ValidationError
from .grid import PaddingMode
from .gt import GtConfig, prepare_gt
from .manifest import default_manifest, load_manifest, validate_manifest
from .metrics import jaggedness
from .pgm import PGMError, read_pgm, write_pgm
from .runner import run_experiment

EX_OK = 0
EX_NOINPUT = 2
EX_USAGE = 64
EX_DATAERR = 65
EX_SOFTWARE = 70


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _odd_int(text):
    value = int(text)
    if value < 1 or value % 2 == 0:
        raise argparse.ArgumentTypeError(f"must be an odd positive integer, got {value}")
    return value


def build_parser():
    parser = _Parser(prog="railedge", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    edge = sub.add_parser("edge-extract", help="write the normalized edge map of a mask")
    edge.add_argument("input")
    edge.add_argument("output")
    edge.add_argument("--operator", choices=[o.value for o in EdgeOperator],
                      default=EdgeOperator.LAPLACIAN.value)
    edge.add_argument("--padding", choices=[p.value for p in PaddingMode],
                      default=PaddingMode.REPLICATE.value)
    edge.add_argument("--plain", action="store_true", help="write P2 instead of P5")

    smooth = sub.add_parser("smooth", help="downscale and box-filter a binary mask")
    smooth.add_argument("input")
    smooth.add_argument("output")
    smooth.add_argument("--source-size", nargs=2, type=int, metavar=("H", "W"),
                        help="expected input size (default: the input's own size)")
    smooth.add_argument("--target-size", nargs=2, type=int, metavar=("H", "W"),
                        default=[200, 200])
    smooth.add_argument("-m", "--box-size", type=_odd_int, default=3)
    smooth.add_argument("--padding", choices=[p.value for p in PaddingMode],
                        default=PaddingMode.REPLICATE.value)
    smooth.add_argument("--plain", action="store_true", help="write P2 instead of P5")

    run = sub.add_parser("run", help="run the three-arm ablation from a manifest")
    run.add_argument("manifest", nargs="?",
                     help="manifest JSON path (default: the bundled 8-trapezoid manifest)")
    run.add_argument("--output-dir", help="override the manifest's output_dir")
    run.add_argument("--parallel", action="store_true", help="run arms in parallel processes")
    return parser


def _edge_extract(args):
    mask = read_pgm(args.input)
    write_pgm(args.output, extract_edges(mask, args.operator, args.padding),
              binary=not args.plain)
    return EX_OK


def _smooth(args):
    mask = read_pgm(args.input)
    source = tuple(args.source_size) if args.source_size else mask.shape
    cfg = GtConfig(source_size=source, target_size=tuple(args.target_size),
                   box_size=args.box_size, padding=args.padding)
    label = prepare_gt(mask, cfg)
    write_pgm(args.output, label.mask_smoothed, binary=not args.plain)
    print(f"{jaggedness(label.mask_raw):.6f} {jaggedness(label.mask_smoothed):.6f}")
    return EX_OK


def _run(args):
    if args.manifest:
        doc = load_manifest(args.manifest)
        base_dir = os.path.dirname(os.path.abspath(args.manifest))
    else:
        doc = validate_manifest(default_manifest())
        base_dir = "."
    results = run_experiment(doc, base_dir, out_dir=args.output_dir, parallel=args.parallel)
    for name, metrics in results.items():
        mean = metrics["mean"]
        print(f"{name}: iou={mean['iou']:.4f} boundary_f1={mean['boundary_f1']:.4f} "
              f"jaggedness={mean['jaggedness']:.4f}")
    return EX_OK


COMMANDS = {"edge-extract": _edge_extract, "smooth": _smooth, "run": _run}


def main(argv=None):
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        print(f"railedge: error: {exc}", file=sys.stderr)
        return EX_USAGE
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return COMMANDS[args.command](args)
    except (OSError, PGMError) as exc:
        print(f"railedge: I/O error: {exc}", file=sys.stderr)
        return EX_NOINPUT
    except ValidationError as exc:
        print(f"railedge: invalid data: {exc}", file=sys.stderr)
        return EX_DATAERR
    except TrainingError as exc:
        arm = getattr(exc, "arm", "?")
        print(f"railedge: training diverged in arm {arm} at step {exc.step}", file=sys.stderr)
        return EX_SOFTWARE


if __name__ == "__main__":
    sys.exit(main())
