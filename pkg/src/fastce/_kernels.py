"""Single-threaded pixel loops compiled with numba.

These are the only O(M*N) passes in the package: histogram counting and
lookup-table gathers. Everything downstream operates on histograms.
"""

from __future__ import annotations

import numpy as np
from numba import njit


@njit(cache=True, nogil=True)
def count_levels(img, shift, n_bins):
    # Four interleaved banks: with few bins, neighbouring pixels keep hitting
    # the same counter and a single bank serializes on that memory slot.
    banks = np.zeros((4, n_bins), dtype=np.int64)
    rows, cols = img.shape
    quad = cols & ~3
    for i in range(rows):
        for j in range(0, quad, 4):
            banks[0, img[i, j] >> shift] += 1
            banks[1, img[i, j + 1] >> shift] += 1
            banks[2, img[i, j + 2] >> shift] += 1
            banks[3, img[i, j + 3] >> shift] += 1
        for j in range(quad, cols):
            banks[0, img[i, j] >> shift] += 1
    counts = np.zeros(n_bins, dtype=np.int64)
    for b in range(4):
        for k in range(n_bins):
            counts[k] += banks[b, k]
    return counts


@njit(cache=True, nogil=True)
def count_levels_blockwise(img, shift, n_bins, blocks_y, blocks_x):
    # Remainder rows/cols fall into the last block of each axis.
    rows, cols = img.shape
    bh = rows // blocks_y
    bw = cols // blocks_x
    col_block = np.empty(cols, dtype=np.int64)
    for j in range(cols):
        col_block[j] = min(j // bw, blocks_x - 1)
    counts = np.zeros((blocks_y * blocks_x, n_bins), dtype=np.int64)
    for i in range(rows):
        row_base = min(i // bh, blocks_y - 1) * blocks_x
        for j in range(cols):
            counts[row_base + col_block[j], img[i, j] >> shift] += 1
    return counts


@njit(cache=True, nogil=True)
def gather(img, lut):
    rows, cols = img.shape
    out = np.empty((rows, cols), dtype=lut.dtype)
    for i in range(rows):
        for j in range(cols):
            out[i, j] = lut[img[i, j]]
    return out


@njit(cache=True, nogil=True)
def pair_table(lut):
    # Entry (a << 8) | b maps both bytes at once. The same formula is correct
    # for either byte order since each byte is looked up independently.
    low = np.empty(256, dtype=np.uint16)
    for b in range(256):
        low[b] = lut[b]
    table = np.empty(65536, dtype=np.uint16)
    for a in range(256):
        high = low[a] << 8
        row = table[a << 8 : (a + 1) << 8]
        for b in range(256):
            row[b] = high | low[b]
    return table


@njit(cache=True, nogil=True)
def gather_pairs(pairs, table, out):
    for i in range(pairs.size):
        out[i] = table[pairs[i]]


def gather_u8(img: np.ndarray, lut: np.ndarray) -> np.ndarray:
    """LUT gather for 8-bit images, two pixels per lookup."""
    if not img.flags.c_contiguous or img.size < 2:
        return gather(img, lut)
    flat = img.reshape(-1)
    even = flat.size & ~1
    out = np.empty(flat.size, dtype=np.uint8)
    gather_pairs(flat[:even].view(np.uint16), pair_table(lut), out[:even].view(np.uint16))
    if even != flat.size:
        out[-1] = lut[flat[-1]]
    return out.reshape(img.shape)


@njit(cache=True, nogil=True)
def interpolate_levels(xs, ys, n_levels):
    """Piecewise-linear curve through (xs, ys) sampled at 0..n_levels-1.

    Constant beyond both ends; exact at every knot.
    """
    out = np.empty(n_levels, dtype=np.float64)
    last = xs.size - 1
    j = 0
    for level in range(n_levels):
        if level <= xs[0]:
            out[level] = ys[0]
            continue
        if level >= xs[last]:
            out[level] = ys[last]
            continue
        while xs[j + 1] <= level:
            j += 1
        if level == xs[j]:
            out[level] = ys[j]
            continue
        y0 = ys[j]
        y1 = ys[j + 1]
        v = y0 + (y1 - y0) * ((level - xs[j]) / (xs[j + 1] - xs[j]))
        # Rounding must not carry a value past either end of its segment.
        lo = min(y0, y1)
        hi = max(y0, y1)
        out[level] = min(max(v, lo), hi)
    return out


def warmup() -> None:
    """Trigger compilation for the common uint8 signatures."""
    img = np.zeros((2, 2), dtype=np.uint8)
    count_levels(img, 0, 256)
    count_levels(img[::2, ::2], 0, 256)
    count_levels_blockwise(img, 0, 256, 1, 1)
    count_levels_blockwise(img[::2, ::2], 0, 256, 1, 1)
    gather(img, np.zeros(256, dtype=np.uint8))
    gather_u8(img, np.zeros(256, dtype=np.uint8))
    interpolate_levels(np.array([0, 255]), np.array([0.0, 255.0]), 256)
