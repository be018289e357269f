"""Spatial decimation and quantized (global and blockwise) histograms."""

from __future__ import annotations

import numbers
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .imageio import GrayImage

__all__ = [
    "Histogram",
    "BlockHistogramMatrix",
    "DEFAULT_GRID",
    "bin_shift",
    "spatial_downsample",
    "histogram",
    "block_histograms",
]

DEFAULT_GRID = (8, 8)


@dataclass(frozen=True)
class Histogram:
    """Bin counts at quantization step ``delta`` (``n_g * delta == 2**B``)."""

    bins: np.ndarray
    delta: int
    total: int

    @property
    def n_g(self) -> int:
        return len(self.bins)


@dataclass(frozen=True)
class BlockHistogramMatrix:
    """Blockwise histograms, one row per block, normalized to unit total mass.

    ``entries[b, k]`` is the count of bin ``k`` in block ``b`` divided by the
    pixel count of the whole image. Blocks are ordered row-major over
    ``grid = (blocks_y, blocks_x)``.
    """

    entries: np.ndarray
    grid: tuple[int, int]
    delta: int

    @property
    def n_blocks(self) -> int:
        return self.entries.shape[0]

    @property
    def n_g(self) -> int:
        return self.entries.shape[1]


def bin_shift(n_g: int, bit_depth: int = 8) -> int:
    """Return log2 of the quantization step for ``n_g`` bins.

    Raises ``ValueError`` unless ``n_g`` is a power of two in ``[2, 2**B]``.
    """
    if (
        isinstance(n_g, bool)
        or not isinstance(n_g, numbers.Integral)
        or n_g < 2
        or n_g & (n_g - 1)
    ):
        raise ValueError(f"n_g must be a power of two >= 2, got {n_g!r}")
    if n_g > (1 << bit_depth):
        raise ValueError(f"n_g must not exceed 2**{bit_depth}, got {n_g}")
    return bit_depth - (int(n_g).bit_length() - 1)


def _check_step(s) -> int:
    if isinstance(s, bool) or not isinstance(s, numbers.Integral):
        raise TypeError(f"sampling step must be an integer, got {s!r}")
    if s < 1:
        raise ValueError(f"sampling step must be >= 1, got {s}")
    return int(s)


def spatial_downsample(x: GrayImage, s: int) -> GrayImage:
    """Keep every ``s``-th pixel along both axes, starting at (0, 0).

    The output is ``floor(M/s) x floor(N/s)``; trailing rows and columns
    that do not fill a full step are dropped.
    """
    s = _check_step(s)
    m, n = x.height // s, x.width // s
    if m < 1 or n < 1:
        raise ValueError(f"step {s} leaves an empty image for {x.width}x{x.height} input")
    if s == 1:
        return x
    return GrayImage._wrap(x.pixels[: m * s : s, : n * s : s], x.bit_depth)


def histogram(x: GrayImage, n_g: int) -> Histogram:
    shift = bin_shift(n_g, x.bit_depth)
    if x.size == 0:
        bins = np.zeros(n_g, dtype=np.int64)
    else:
        bins = _kernels.count_levels(x.pixels, shift, n_g)
    return Histogram(bins=bins, delta=1 << shift, total=x.size)


def block_histograms(
    x: GrayImage, n_g: int, grid: tuple[int, int] = DEFAULT_GRID
) -> BlockHistogramMatrix:
    """Quantized histograms over a non-overlapping ``grid`` of blocks.

    Each axis is cut into equal blocks of ``size // blocks`` pixels; the
    leftover pixels join the last block of that axis, so every pixel is
    counted once and the matrix sums to one.
    """
    shift = bin_shift(n_g, x.bit_depth)
    blocks_y, blocks_x = (int(g) for g in grid)
    if blocks_y < 1 or blocks_x < 1:
        raise ValueError(f"block grid must be positive, got {grid}")
    if blocks_y > x.height or blocks_x > x.width:
        raise ValueError(
            f"block grid {blocks_y}x{blocks_x} does not fit a {x.width}x{x.height} image"
        )
    counts = _kernels.count_levels_blockwise(x.pixels, shift, n_g, blocks_y, blocks_x)
    return BlockHistogramMatrix(
        entries=counts / x.size, grid=(blocks_y, blocks_x), delta=1 << shift
    )
