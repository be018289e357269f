"""Benchmark sweeps and end-to-end invariant verification."""

from __future__ import annotations

import csv
import itertools
import logging
import os
import statistics
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Iterable, Sequence

import numpy as np

from . import _kernels, ranking
from .equalization import cdf, fhe, fhe_curve, he, he_curve
from .imageio import ColorImage, GrayImage, extract_luminance, read_image
from .mapping import PartialCurve, calibrate, naive_upsample_scheme1
from .ranking import DEFAULT_ALPHA, fsmirank, fsmirank_trace, smirank, smirank_trace
from .sampling import (
    DEFAULT_GRID,
    bin_shift,
    block_histograms,
    histogram,
    spatial_downsample,
)
from .synthetic import KINDS, generate_synthetic

log = logging.getLogger(__name__)

ALGORITHMS = ("he", "fhe", "smirank", "fsmirank")
NAIVE_OF = {"fhe": "he", "fsmirank": "smirank"}
CSV_HEADER = [
    "algorithm",
    "s",
    "ng",
    "alpha",
    "image_id",
    "width",
    "height",
    "wall_time_us",
    "mean_abs_diff",
    "max_abs_diff",
]
NETPBM_SUFFIXES = {".pgm", ".ppm", ".pnm"}


def run_algorithm(
    name: str,
    x: GrayImage,
    s: int = 8,
    n_g: int = 64,
    alpha: float = DEFAULT_ALPHA,
    grid: tuple[int, int] = DEFAULT_GRID,
) -> GrayImage:
    """Dispatch by algorithm name; naive algorithms ignore ``s`` and ``n_g``."""
    if name == "he":
        return he(x)
    if name == "fhe":
        return fhe(x, s, n_g)
    if name == "smirank":
        return smirank(x, alpha, grid)
    if name == "fsmirank":
        return fsmirank(x, s, n_g, alpha, grid)
    raise ValueError(f"unknown algorithm {name!r}; expected one of {ALGORITHMS}")


def median_time(fn: Callable[[], object], repetitions: int = 5, warmup: int = 2) -> float:
    """Median wall time of ``fn`` in seconds after ``warmup`` untimed calls."""
    for _ in range(warmup):
        fn()
    samples = []
    for _ in range(repetitions):
        start = time.perf_counter_ns()
        fn()
        samples.append(time.perf_counter_ns() - start)
    return statistics.median(samples) * 1e-9


def abs_diff(a: GrayImage, b: GrayImage) -> tuple[float, int]:
    d = np.abs(a.pixels.astype(np.int32) - b.pixels.astype(np.int32))
    return float(d.mean()), int(d.max())


# -- corpora ---------------------------------------------------------------


def as_luminance(img: GrayImage | ColorImage) -> GrayImage:
    return extract_luminance(img) if isinstance(img, ColorImage) else img


def load_any(path: str | os.PathLike) -> GrayImage | ColorImage:
    """Read netpbm natively; other formats need Pillow."""
    path = Path(path)
    with open(path, "rb") as fh:
        magic = fh.read(2)
    if magic in (b"P5", b"P6") or path.suffix.lower() in NETPBM_SUFFIXES:
        return read_image(path)
    try:
        from PIL import Image
    except ImportError:
        raise ValueError(f"{path.name}: only PGM/PPM are supported without Pillow") from None
    with Image.open(path) as im:
        if im.mode in ("L", "1"):
            return GrayImage(np.asarray(im.convert("L")))
        return ColorImage(np.asarray(im.convert("RGB")))


def load_corpus(directory: str | os.PathLike) -> list[tuple[str, GrayImage]]:
    """Luminance of every image in ``directory``, sorted by file name."""
    root = Path(directory)
    if not root.is_dir():
        raise FileNotFoundError(f"corpus directory not found: {root}")
    images = []
    for path in sorted(p for p in root.iterdir() if p.is_file()):
        if path.suffix.lower() not in NETPBM_SUFFIXES:
            try:
                import PIL  # noqa: F401
            except ImportError:
                continue
        try:
            images.append((path.name, as_luminance(load_any(path))))
        except (ValueError, OSError) as exc:
            if path.suffix.lower() in NETPBM_SUFFIXES:
                raise
            log.warning("skipping %s: %s", path.name, exc)
    if not images:
        raise ValueError(f"no readable images in {root}")
    return images


def synthetic_corpus(
    count: int, width: int, height: int, seed: int = 0, kinds: Sequence[str] = KINDS
) -> list[tuple[str, GrayImage]]:
    """``count`` images cycling through ``kinds`` with consecutive seeds."""
    out = []
    for i in range(count):
        kind = kinds[i % len(kinds)]
        out.append((f"{kind}-{seed + i}", generate_synthetic(kind, width, height, seed + i)))
    return out


# -- sweeps ----------------------------------------------------------------


@dataclass
class BenchRecord:
    algorithm: str
    s: int
    n_g: int
    alpha: float
    image_id: str
    width: int
    height: int
    wall_time_us: float
    mean_abs_diff: float
    max_abs_diff: int

    def row(self) -> list:
        return [
            self.algorithm,
            self.s,
            self.n_g,
            self.alpha,
            self.image_id,
            self.width,
            self.height,
            f"{self.wall_time_us:.1f}",
            f"{self.mean_abs_diff:.6f}",
            self.max_abs_diff,
        ]


@dataclass
class SweepConfig:
    s_values: list[int] = field(default_factory=lambda: [1, 4, 8, 16])
    n_g_values: list[int] = field(default_factory=lambda: [256, 128, 64, 32])
    algorithms: list[str] = field(default_factory=lambda: list(ALGORITHMS))
    repetitions: int = 5
    warmup: int = 2
    alpha: float = DEFAULT_ALPHA
    grid: tuple[int, int] = DEFAULT_GRID
    corpus: str | None = None
    seed: int = 0

    def __post_init__(self):
        if self.repetitions < 3:
            raise ValueError("repetitions must be at least 3")
        if self.warmup < 0:
            raise ValueError("warmup must be non-negative")
        for s in self.s_values:
            if s < 1:
                raise ValueError(f"s must be >= 1, got {s}")
        for n_g in self.n_g_values:
            bin_shift(n_g)
        for name in self.algorithms:
            if name not in ALGORITHMS:
                raise ValueError(f"unknown algorithm {name!r}")
        # Every fast algorithm is benchmarked against its naive counterpart.
        wanted = set(self.algorithms) | {NAIVE_OF[a] for a in self.algorithms if a in NAIVE_OF}
        self.algorithms = [a for a in ALGORITHMS if a in wanted]


def run_sweep(
    config: SweepConfig, images: Iterable[tuple[str, GrayImage]]
) -> list[BenchRecord]:
    """Time every (algorithm, s, n_g, image) combination.

    Naive algorithms do not depend on ``s`` or ``n_g``; they are timed once
    per image and that measurement is repeated on each of their rows.
    """
    images = list(images)
    _kernels.warmup()
    naive_out: dict[tuple[str, str], GrayImage] = {}
    naive_time: dict[tuple[str, str], float] = {}
    for name in config.algorithms:
        if name in NAIVE_OF:
            continue
        for image_id, x in images:
            fn = lambda: run_algorithm(name, x, alpha=config.alpha, grid=config.grid)  # noqa: E731
            naive_out[name, image_id] = fn()
            naive_time[name, image_id] = median_time(fn, config.repetitions, config.warmup)

    records = []
    for name, s, n_g in itertools.product(config.algorithms, config.s_values, config.n_g_values):
        for image_id, x in images:
            if name in NAIVE_OF:
                fn = lambda: run_algorithm(name, x, s, n_g, config.alpha, config.grid)  # noqa: E731
                out = fn()
                elapsed = median_time(fn, config.repetitions, config.warmup)
                mean_d, max_d = abs_diff(out, naive_out[NAIVE_OF[name], image_id])
            else:
                elapsed = naive_time[name, image_id]
                mean_d, max_d = 0.0, 0
            records.append(
                BenchRecord(
                    name, s, n_g, config.alpha, image_id, x.width, x.height,
                    elapsed * 1e6, mean_d, max_d,
                )
            )
    return records


def write_csv(records: Iterable[BenchRecord], path: str | os.PathLike) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(CSV_HEADER)
        for rec in records:
            writer.writerow(rec.row())


@dataclass
class ConfigSummary:
    algorithm: str
    s: int
    n_g: int
    images: int
    mean_time_us: float
    mean_abs_diff: float
    max_abs_diff: int
    speedup: float | None
    median_speedup: float | None


def summarize(records: Sequence[BenchRecord]) -> list[ConfigSummary]:
    """Per-configuration means and speedups against the naive counterpart.

    ``speedup`` is mean naive time over mean fast time; ``median_speedup``
    is the median of per-image ratios.
    """
    by_key: dict[tuple[str, int, int], list[BenchRecord]] = {}
    for rec in records:
        by_key.setdefault((rec.algorithm, rec.s, rec.n_g), []).append(rec)
    out = []
    for (name, s, n_g), recs in by_key.items():
        speedup = median_speedup = None
        if name in NAIVE_OF:
            base = {r.image_id: r.wall_time_us for r in by_key.get((NAIVE_OF[name], s, n_g), [])}
            pairs = [(base[r.image_id], r.wall_time_us) for r in recs if r.image_id in base]
            if pairs:
                speedup = statistics.mean(b for b, _ in pairs) / statistics.mean(f for _, f in pairs)
                median_speedup = statistics.median(b / f for b, f in pairs)
        out.append(
            ConfigSummary(
                name, s, n_g, len(recs),
                statistics.mean(r.wall_time_us for r in recs),
                statistics.mean(r.mean_abs_diff for r in recs),
                max(r.max_abs_diff for r in recs),
                speedup, median_speedup,
            )
        )
    return out


def trend_warnings(
    records: Sequence[BenchRecord], algorithm: str = "fsmirank", min_pixels: int = 512 * 512
) -> list[str]:
    """Flag settings where mean time rises as ``n_g`` falls at a fixed ``s``.

    Only images of at least ``min_pixels`` are considered; timing noise makes
    this advisory.
    """
    times: dict[int, dict[int, list[float]]] = {}
    for r in records:
        if r.algorithm == algorithm and r.width * r.height >= min_pixels:
            times.setdefault(r.s, {}).setdefault(r.n_g, []).append(r.wall_time_us)
    warnings = []
    for s, per_ng in sorted(times.items()):
        ordered = sorted(per_ng, reverse=True)
        for hi, lo in zip(ordered, ordered[1:]):
            t_hi, t_lo = statistics.mean(per_ng[hi]), statistics.mean(per_ng[lo])
            if t_lo > t_hi:
                warnings.append(
                    f"{algorithm} s={s}: time rose from {t_hi:.0f}us at ng={hi} "
                    f"to {t_lo:.0f}us at ng={lo}"
                )
    return warnings


# -- verification ----------------------------------------------------------


@dataclass
class CheckResult:
    image_id: str
    name: str
    passed: bool
    detail: str = ""


def _lut_monotone(lut: np.ndarray) -> bool:
    return bool(np.all(np.diff(lut.astype(np.int64)) >= 0))


def _pixel_order_preserved(x: GrayImage, y: GrayImage) -> bool:
    order = np.argsort(x.pixels, axis=None, kind="stable")
    return bool(np.all(np.diff(y.pixels.ravel()[order].astype(np.int64)) >= 0))


def image_checks(
    x: GrayImage, alpha: float = DEFAULT_ALPHA, grid: tuple[int, int] = DEFAULT_GRID
) -> list[tuple[str, bool, str]]:
    """Evaluate every library invariant on one image.

    Returns ``(name, passed, detail)`` triples; oracle equivalences first.
    """
    checks: list[tuple[str, bool, str]] = []

    def add(name, ok, detail=""):
        checks.append((name, bool(ok), "" if ok else detail))

    top = x.max_level
    full = x.levels
    grid_fits = grid[0] <= x.height and grid[1] <= x.width

    base_he = he(x)
    diff = int(np.count_nonzero(fhe(x, 1, full).pixels != base_he.pixels))
    add("fhe-he-equivalence", diff == 0, f"{diff} pixels differ")

    if grid_fits:
        naive = smirank_trace(x, alpha, grid)
        diff = int(np.count_nonzero(
            fsmirank(x, 1, full, alpha, grid).pixels != smirank(x, alpha, grid).pixels
        ))
        add("fsmirank-smirank-equivalence", diff == 0, f"{diff} pixels differ")

    # sampling
    h = histogram(x, full)
    add("histogram-mass", h.bins.sum() == h.total == x.size, f"sum {h.bins.sum()} != {x.size}")
    ok = True
    for n_g in (128, 64, 32, 16, 8, 4, 2):
        if n_g > full:
            continue
        coarse = histogram(x, n_g)
        ok &= np.array_equal(coarse.bins, h.bins.reshape(n_g, -1).sum(axis=1))
    add("histogram-coarsening", ok, "coarse bins differ from grouped fine bins")
    m4, n4 = x.height // 4 * 4, x.width // 4 * 4
    if m4 and n4:
        crop = GrayImage(x.pixels[:m4, :n4], x.bit_depth)
        once = spatial_downsample(crop, 4)
        twice = spatial_downsample(spatial_downsample(crop, 2), 2)
        add("downsample-composition", once == twice, "s=4 differs from s=2 applied twice")
    if grid_fits:
        blocks = block_histograms(x, 64, grid)
        add("block-normalization", abs(blocks.entries.sum() - 1) <= 1e-9,
            f"total mass {blocks.entries.sum()!r}")
        single = block_histograms(x, full, (1, 1)).entries[0]
        add("block-global-consistency",
            np.allclose(single, h.bins / h.total, rtol=0, atol=1e-15),
            "1x1 grid differs from normalized histogram")

    # mapping
    c = cdf(histogram(x, 64))
    curve = PartialCurve.from_bins(top * c.values, c.delta)
    lut2 = calibrate(curve, x.bit_depth).lut
    add("calibration-monotone", _lut_monotone(lut2), "calibrated LUT decreases")
    hit = lut2[curve.x].astype(np.float64)
    add("calibration-exactness", np.all(np.abs(hit - curve.y) <= 0.5),
        "LUT misses a defined point")
    add("lut-range", lut2.min() >= 0 and lut2.max() <= top, "LUT outside range")
    lut1 = naive_upsample_scheme1(curve, x.bit_depth).lut
    n1, n2 = np.unique(lut1).size, np.unique(lut2).size
    add("scheme1-stratification", n1 <= 64 and n2 >= n1, f"scheme1 {n1} levels, scheme2 {n2}")

    # he
    add("he-output-range", base_he.pixels.max() <= top, "output exceeds max level")
    add("he-pixel-order", _lut_monotone(he_curve(x).lut) and _lut_monotone(fhe_curve(x).lut),
        "equalization LUT decreases")
    tiled = GrayImage(np.tile(x.pixels, (2, 2)), x.bit_depth)
    add("he-proportionality", np.array_equal(he_curve(tiled).lut, he_curve(x).lut),
        "scaling the histogram changed the mapping")

    # smirank
    if grid_fits:
        mi = naive.info.entries
        add("mi-symmetry", np.allclose(mi, mi.T, rtol=0, atol=1e-12), "I is not symmetric")
        add("mi-nonnegative", mi.min() >= -1e-12, f"min entry {mi.min()!r}")
        g = ranking.transition_matrix(naive.info, alpha)
        add("transition-columns", np.allclose(g.sum(axis=0), 1, rtol=0, atol=1e-12),
            "G columns do not sum to 1")
        k = naive.stochastic.shape[0]
        r = naive.rank.values
        resid = (np.eye(k) - alpha * naive.stochastic) @ r - (1 - alpha) / k
        add("rank-residual", np.abs(resid).max() <= 1e-9, f"residual {np.abs(resid).max()!r}")
        add("rank-sum", abs(r.sum() - 1) <= 1e-9, f"sum {r.sum()!r}")
        y = naive.curve.y
        if k >= 2:
            ends = y[0] == 0 and abs(y[-1] - top) <= 1e-6 and np.all(np.diff(y) > 0)
        else:
            ends = naive.curve.degenerate and y[0] == top
        add("mapping-endpoints", ends, f"curve runs {y[0]!r}..{y[-1]!r}")
        monotone = _lut_monotone(naive.lut.lut)
        if x.height // 8 >= grid[0] and x.width // 8 >= grid[1]:
            monotone &= _lut_monotone(fsmirank_trace(x, 8, 64, alpha, grid).lut.lut)
        add("smirank-pixel-order", monotone, "rank LUT decreases")
        info2 = ranking.mutual_information(naive.blocks, base=2.0)
        r2 = ranking.rank_vector(ranking.stochastic_matrix(info2), alpha)
        lut_b2 = calibrate(ranking.rank_to_mapping(r2, info2.support, x.bit_depth), x.bit_depth)
        add("log-base-invariance", np.array_equal(lut_b2.lut, naive.lut.lut),
            "log base changed the mapping")
    return checks


def run_verification(
    images: Iterable[tuple[str, GrayImage]],
    alpha: float = DEFAULT_ALPHA,
    grid: tuple[int, int] = DEFAULT_GRID,
) -> list[CheckResult]:
    results = []
    for image_id, x in images:
        for name, ok, detail in image_checks(x, alpha, grid):
            results.append(CheckResult(image_id, name, ok, detail))
    return results
