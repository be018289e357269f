"""Command-line front end: ``enhance``, ``sweep``, ``verify`` and ``gen``.

Exit codes: 0 success, 1 verification failure, 2 usage or parameter
error, 3 I/O error.
"""

from __future__ import annotations

import argparse
import sys
import time
from collections import Counter
from pathlib import Path

from . import _kernels, bench
from .equalization import fhe_curve, he_curve
from .imageio import ColorImage, extract_luminance, recombine_luminance, write_image
from .mapping import write_lut_csv
from .ranking import DEFAULT_ALPHA, fsmirank_trace, smirank_trace, write_trace_csv
from .sampling import DEFAULT_GRID, bin_shift
from .synthetic import KINDS, generate_synthetic

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_IO = 0, 1, 2, 3


def _power_of_two(text: str) -> int:
    try:
        value = int(text)
        bin_shift(value)
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"n_g must be a power of two in [2, 256], got {text}"
        ) from None
    return value


def _positive(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def _alpha(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a number, got {text}") from None
    if not 0.0 <= value < 1.0:
        raise argparse.ArgumentTypeError(f"alpha must satisfy 0 <= alpha < 1, got {text}")
    return value


def _pair(text: str, what: str) -> tuple[int, int]:
    parts = text.lower().split("x")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"{what} must look like AxB, got {text}")
    a, b = (_positive(p) for p in parts)
    return a, b


def _grid(text: str) -> tuple[int, int]:
    return _pair(text, "grid")


def _size(text: str) -> tuple[int, int]:
    return _pair(text, "size")


def _list_of(conv):
    def parse(text: str) -> list:
        return [conv(t) for t in text.split(",") if t.strip()]

    return parse


def _algo_list(text: str) -> list[str]:
    names = [t.strip() for t in text.split(",") if t.strip()]
    for name in names:
        if name not in bench.ALGORITHMS:
            raise argparse.ArgumentTypeError(f"unknown algorithm {name!r}")
    return names


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fastce", description="Fast histogram-based contrast enhancement."
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("enhance", help="enhance one image")
    p.add_argument("input")
    p.add_argument("output")
    p.add_argument("--algo", choices=bench.ALGORITHMS, default="fhe")
    p.add_argument("--s", type=_positive, default=8)
    p.add_argument("--ng", type=_power_of_two, default=64)
    p.add_argument("--alpha", type=_alpha, default=DEFAULT_ALPHA)
    p.add_argument("--grid", type=_grid, default=DEFAULT_GRID, help="blocks as BYxBX")
    p.add_argument("--debug-dir", help="write the LUT (and SMIRANK intermediates) as CSV here")

    p = sub.add_parser("sweep", help="time (s, n_g) settings over a corpus")
    p.add_argument("--corpus", help="directory of images; synthetic images if omitted")
    p.add_argument("--count", type=_positive, default=8, help="synthetic image count")
    p.add_argument("--size", type=_size, default=(1024, 768), help="synthetic WxH")
    p.add_argument("--algo", type=_algo_list, default=list(bench.ALGORITHMS))
    p.add_argument("--s", type=_list_of(_positive), default=[1, 4, 8, 16])
    p.add_argument("--ng", type=_list_of(_power_of_two), default=[256, 128, 64, 32])
    p.add_argument("--alpha", type=_alpha, default=DEFAULT_ALPHA)
    p.add_argument("--grid", type=_grid, default=DEFAULT_GRID)
    p.add_argument("--reps", type=int, default=5)
    p.add_argument("--warmup", type=int, default=2)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--csv", required=True, help="output CSV path")

    p = sub.add_parser("verify", help="check oracle equivalences and invariants")
    p.add_argument("corpus", nargs="?", help="directory of images; synthetic images if omitted")
    p.add_argument("--count", type=_positive, default=12)
    p.add_argument("--size", type=_size, default=(160, 120))
    p.add_argument("--alpha", type=_alpha, default=DEFAULT_ALPHA)
    p.add_argument("--grid", type=_grid, default=DEFAULT_GRID)
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("gen", help="write a synthetic test image")
    p.add_argument("output")
    p.add_argument("--kind", choices=KINDS, default="two-peak")
    p.add_argument("--width", type=_positive, default=512)
    p.add_argument("--height", type=_positive, default=512)
    p.add_argument("--seed", type=int, default=0)
    return parser


def _err(message: str) -> None:
    print(f"fastce: {message}", file=sys.stderr)


def cmd_enhance(args) -> int:
    try:
        img = bench.load_any(args.input)
    except (OSError, ValueError) as exc:
        _err(str(exc))
        return EXIT_IO
    gray = extract_luminance(img) if isinstance(img, ColorImage) else img
    _kernels.warmup()
    start = time.perf_counter()
    try:
        out = bench.run_algorithm(args.algo, gray, args.s, args.ng, args.alpha, args.grid)
    except ValueError as exc:
        _err(str(exc))
        return EXIT_USAGE
    elapsed = time.perf_counter() - start
    result = recombine_luminance(img, out) if isinstance(img, ColorImage) else out
    try:
        _save(result, args.output)
        if args.debug_dir:
            _dump_debug(args, gray)
    except OSError as exc:
        _err(str(exc))
        return EXIT_IO
    params = f"algo={args.algo}"
    if args.algo in ("fhe", "fsmirank"):
        params += f" s={args.s} ng={args.ng}"
    if args.algo in ("smirank", "fsmirank"):
        params += f" alpha={args.alpha} grid={args.grid[0]}x{args.grid[1]}"
    print(f"{params} size={gray.width}x{gray.height} time={elapsed * 1e3:.2f}ms", file=sys.stderr)
    return EXIT_OK


def _save(img, path: str) -> None:
    if Path(path).suffix.lower() in bench.NETPBM_SUFFIXES:
        write_image(img, path)
        return
    try:
        from PIL import Image
    except ImportError:
        raise OSError(f"{path}: only PGM/PPM output is supported without Pillow") from None
    Image.fromarray(img.pixels).save(path)


def _dump_debug(args, gray) -> None:
    out = Path(args.debug_dir)
    out.mkdir(parents=True, exist_ok=True)
    if args.algo == "he":
        lut = he_curve(gray)
    elif args.algo == "fhe":
        lut = fhe_curve(gray, args.s, args.ng)
    else:
        trace = (
            smirank_trace(gray, args.alpha, args.grid)
            if args.algo == "smirank"
            else fsmirank_trace(gray, args.s, args.ng, args.alpha, args.grid)
        )
        write_trace_csv(trace, out)
        lut = trace.lut
    write_lut_csv(lut, out / "lut.csv")


def _images(args, synthetic_size):
    if args.corpus:
        return bench.load_corpus(args.corpus)
    w, h = synthetic_size
    return bench.synthetic_corpus(args.count, w, h, args.seed)


def cmd_sweep(args) -> int:
    try:
        config = bench.SweepConfig(
            s_values=args.s,
            n_g_values=args.ng,
            algorithms=args.algo,
            repetitions=args.reps,
            warmup=args.warmup,
            alpha=args.alpha,
            grid=args.grid,
            corpus=args.corpus,
            seed=args.seed,
        )
    except ValueError as exc:
        _err(str(exc))
        return EXIT_USAGE
    try:
        images = _images(args, args.size)
    except (OSError, ValueError) as exc:
        _err(str(exc))
        return EXIT_IO
    try:
        records = bench.run_sweep(config, images)
    except ValueError as exc:
        _err(str(exc))
        return EXIT_USAGE
    try:
        bench.write_csv(records, args.csv)
    except OSError as exc:
        _err(str(exc))
        return EXIT_IO
    print(f"{'algorithm':<9} {'s':>3} {'ng':>4} {'images':>6} {'mean_us':>10} "
          f"{'mean_diff':>9} {'max_diff':>8} {'speedup':>8} {'med_spd':>8}")
    for row in bench.summarize(records):
        spd = "-" if row.speedup is None else f"{row.speedup:.2f}"
        med = "-" if row.median_speedup is None else f"{row.median_speedup:.2f}"
        print(f"{row.algorithm:<9} {row.s:>3} {row.n_g:>4} {row.images:>6} "
              f"{row.mean_time_us:>10.1f} {row.mean_abs_diff:>9.3f} {row.max_abs_diff:>8} "
              f"{spd:>8} {med:>8}")
    for warning in bench.trend_warnings(records):
        _err(f"warning: {warning}")
    return EXIT_OK


def cmd_verify(args) -> int:
    try:
        images = _images(args, args.size)
    except (OSError, ValueError) as exc:
        _err(str(exc))
        return EXIT_IO
    results = bench.run_verification(images, args.alpha, args.grid)
    passed, failed = Counter(), Counter()
    order = []
    for r in results:
        if r.name not in order:
            order.append(r.name)
        (passed if r.passed else failed)[r.name] += 1
    width = max(len(n) for n in order)
    for name in order:
        status = "PASS" if not failed[name] else "FAIL"
        print(f"{name:<{width}}  {status}  {passed[name]}/{passed[name] + failed[name]}")
    first = next((r for r in results if not r.passed), None)
    if first is not None:
        _err(f"verification failed: image {first.image_id}: {first.name} ({first.detail})")
        return EXIT_FAIL
    print(f"all {len(results)} checks passed on {len(images)} images")
    return EXIT_OK


def cmd_gen(args) -> int:
    img = generate_synthetic(args.kind, args.width, args.height, args.seed)
    try:
        write_image(img, args.output)
    except OSError as exc:
        _err(str(exc))
        return EXIT_IO
    return EXIT_OK


COMMANDS = {"enhance": cmd_enhance, "sweep": cmd_sweep, "verify": cmd_verify, "gen": cmd_gen}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return COMMANDS[args.command](args)


if __name__ == "__main__":
    sys.exit(main())
