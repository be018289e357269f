"""Gray-level ranking by spatial mutual information and PageRank.

The enhancer builds blockwise histograms, measures how strongly each pair
of occupied gray levels co-occurs across blocks, ranks the levels with a
damped random walk over that affinity graph, and spaces the output levels
according to their ranks. The fast variant runs the same stages on a
decimated image with a coarse histogram and calibrates the result.
"""

from __future__ import annotations

import csv
import os
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import sampling
from .imageio import GrayImage
from .mapping import CalibratedCurve, PartialCurve, apply_curve, calibrate
from .sampling import DEFAULT_GRID, BlockHistogramMatrix

__all__ = [
    "DEFAULT_ALPHA",
    "MutualInfoMatrix",
    "RankVector",
    "SmirankTrace",
    "mutual_information",
    "stochastic_matrix",
    "transition_matrix",
    "rank_vector",
    "rank_to_mapping",
    "smirank_trace",
    "smirank",
    "fsmirank_trace",
    "fsmirank",
    "write_trace_csv",
]

DEFAULT_ALPHA = 0.9

# Upper bound on elements in one (blocks, K, K) temporary.
_CHUNK_ELEMENTS = 1 << 18


@dataclass(frozen=True, eq=False)
class MutualInfoMatrix:
    """Pairwise mutual spatial information over the occupied bins.

    ``entries[i, j]`` relates bins ``support[i]`` and ``support[j]``.
    """

    entries: np.ndarray
    support: np.ndarray

    @property
    def dim(self) -> int:
        return self.support.size


@dataclass(frozen=True, eq=False)
class RankVector:
    values: np.ndarray
    alpha: float


def mutual_information(h: BlockHistogramMatrix, base: float | None = None) -> MutualInfoMatrix:
    """Mutual spatial information between every pair of occupied bins.

    For bins k, l and per-block masses a = h_b(k), b = h_b(l) the block
    contributes ``min(a, b) * log(min(a, b) / (a * b))``, which equals
    ``-min(a, b) * max(log a, log b)``; blocks where either mass is zero
    contribute nothing. ``base`` selects the logarithm (natural by default).
    """
    entries = np.asarray(h.entries, dtype=np.float64)
    if entries.ndim != 2:
        raise ValueError("block histogram matrix must be 2-D")
    support = np.flatnonzero(entries.sum(axis=0) > 0)
    if support.size == 0:
        raise ValueError("block histogram matrix has no mass")
    mass = entries[:, support]
    k = support.size
    with np.errstate(divide="ignore"):
        logs = np.where(mass > 0, np.log(mass), 0.0)
    info = np.zeros((k, k))
    chunk = max(1, _CHUNK_ELEMENTS // (k * k))
    for start in range(0, mass.shape[0], chunk):
        a = mass[start : start + chunk]
        la = logs[start : start + chunk]
        shared = np.minimum(a[:, :, None], a[:, None, :])
        info -= (shared * np.maximum(la[:, :, None], la[:, None, :])).sum(axis=0)
    if base is not None:
        info /= np.log(base)
    return MutualInfoMatrix(info, support)


def stochastic_matrix(info: MutualInfoMatrix | np.ndarray) -> np.ndarray:
    """Column-normalize ``info``; all-zero columns become uniform."""
    m = np.asarray(getattr(info, "entries", info), dtype=np.float64)
    k = m.shape[0]
    if k == 0:
        raise ValueError("empty mutual information matrix")
    sums = m.sum(axis=0)
    dangling = sums <= 0
    s = m / np.where(dangling, 1.0, sums)
    s[:, dangling] = 1.0 / k
    return s


def transition_matrix(info: MutualInfoMatrix | np.ndarray, alpha: float = DEFAULT_ALPHA) -> np.ndarray:
    """Damped transition matrix ``alpha * S + (1 - alpha) * o v^T``."""
    if not 0.0 <= alpha <= 1.0:
        raise ValueError(f"alpha must be in [0, 1], got {alpha}")
    s = stochastic_matrix(info)
    k = s.shape[0]
    return alpha * s + (1.0 - alpha) / k


def rank_vector(s: np.ndarray, alpha: float = DEFAULT_ALPHA) -> RankVector:
    """Stationary vector of the damped walk on column-stochastic ``s``.

    Solves ``(E - alpha S) r = (1 - alpha) v`` with ``v`` uniform, which
    requires ``alpha < 1``.
    """
    if not 0.0 <= alpha < 1.0:
        raise ValueError(
            f"alpha must satisfy 0 <= alpha < 1 for the closed-form rank, got {alpha}"
        )
    s = np.asarray(s, dtype=np.float64)
    k = s.shape[0]
    if s.shape != (k, k) or k == 0:
        raise ValueError(f"expected a non-empty square matrix, got shape {s.shape}")
    rhs = np.full(k, (1.0 - alpha) / k)
    # LAPACK gesv: LU with partial pivoting.
    r = np.linalg.solve(np.eye(k) - alpha * s, rhs)
    return RankVector(r, alpha)


def rank_to_mapping(
    r: RankVector | np.ndarray, support, bit_depth: int = 8, delta: int = 1
) -> PartialCurve:
    """Space the occupied levels by rank.

    Output levels start at 0 and step by
    ``((r[k-1] + r[k]) / 2 + (r[0] + r[-1]) / (2 (K - 1))) * (2**B - 1)``,
    which for ``sum(r) == 1`` ends at exactly ``2**B - 1``. With a single
    occupied level the curve is the constant ``2**B - 1`` and is flagged
    ``degenerate``.
    """
    r = np.asarray(getattr(r, "values", r), dtype=np.float64)
    support = np.asarray(support, dtype=np.int64)
    if r.size != support.size:
        raise ValueError(f"{r.size} ranks for {support.size} levels")
    top = (1 << bit_depth) - 1
    k = r.size
    if k < 2:
        return PartialCurve.on_support(support, [float(top)] * k, delta, degenerate=True)
    steps = (r[:-1] + r[1:]) / 2.0 + (r[0] + r[-1]) / (2.0 * (k - 1))
    y = np.concatenate(([0.0], np.cumsum(steps * top)))
    return PartialCurve.on_support(support, y, delta)


@dataclass(frozen=True, eq=False)
class SmirankTrace:
    """Intermediate results of one SMIRANK run, kept for inspection."""

    blocks: BlockHistogramMatrix
    info: MutualInfoMatrix
    stochastic: np.ndarray
    rank: RankVector
    curve: PartialCurve
    lut: CalibratedCurve


def _rank_curve(
    blocks: BlockHistogramMatrix, alpha: float, bit_depth: int
) -> SmirankTrace:
    info = mutual_information(blocks)
    s = stochastic_matrix(info)
    r = rank_vector(s, alpha)
    curve = rank_to_mapping(r, info.support, bit_depth, blocks.delta)
    return SmirankTrace(blocks, info, s, r, curve, calibrate(curve, bit_depth))


def smirank_trace(
    x: GrayImage, alpha: float = DEFAULT_ALPHA, grid: tuple[int, int] = DEFAULT_GRID
) -> SmirankTrace:
    if x.size == 0:
        raise ValueError("empty image")
    blocks = sampling.block_histograms(x, x.levels, grid)
    return _rank_curve(blocks, alpha, x.bit_depth)


def smirank(
    x: GrayImage, alpha: float = DEFAULT_ALPHA, grid: tuple[int, int] = DEFAULT_GRID
) -> GrayImage:
    """Full-resolution SMIRANK over all ``2**B`` gray levels."""
    return apply_curve(x, smirank_trace(x, alpha, grid).lut)


def fsmirank_trace(
    x: GrayImage,
    s: int = 8,
    n_g: int = 64,
    alpha: float = DEFAULT_ALPHA,
    grid: tuple[int, int] = DEFAULT_GRID,
) -> SmirankTrace:
    if x.size == 0:
        raise ValueError("empty image")
    small = sampling.spatial_downsample(x, s)
    blocks = sampling.block_histograms(small, n_g, grid)
    return _rank_curve(blocks, alpha, x.bit_depth)


def fsmirank(
    x: GrayImage,
    s: int = 8,
    n_g: int = 64,
    alpha: float = DEFAULT_ALPHA,
    grid: tuple[int, int] = DEFAULT_GRID,
) -> GrayImage:
    """Fast SMIRANK.

    Ranks ``n_g`` gray-level bins of every ``s``-th pixel, then linearly
    completes the curve over bins that were not observed and upsamples it
    to ``2**B`` levels before mapping the original image. With ``s=1`` and
    ``n_g=2**B`` the output equals :func:`smirank`.
    """
    return apply_curve(x, fsmirank_trace(x, s, n_g, alpha, grid).lut)


def write_trace_csv(trace: SmirankTrace, directory: str | os.PathLike) -> None:
    """Write ``mi.csv``, ``stochastic.csv`` and ``rank.csv`` into ``directory``."""
    out = Path(directory)
    out.mkdir(parents=True, exist_ok=True)
    levels = (trace.info.support * trace.blocks.delta).tolist()
    for name, matrix in (("mi.csv", trace.info.entries), ("stochastic.csv", trace.stochastic)):
        with open(out / name, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["level"] + levels)
            for level, row in zip(levels, matrix.tolist()):
                writer.writerow([level] + [repr(v) for v in row])
    with open(out / "rank.csv", "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["level", "rank", "output"])
        for level, rank, y in zip(levels, trace.rank.values.tolist(), trace.curve.y.tolist()):
            writer.writerow([level, repr(rank), repr(y)])
