"""Seeded synthetic test images.

The kinds cover the cases that matter for coarse-histogram enhancement:
flat histograms, sharp histogram peaks, large smooth regions and a
heavily skewed high-dynamic-range look.
"""

from __future__ import annotations

import numpy as np

from .imageio import GrayImage

__all__ = ["KINDS", "TWO_PEAK_BANDS", "generate_synthetic"]

KINDS = ("uniform-noise", "two-peak", "smooth-gradient", "hdr-peaky")

# Inclusive level bands holding the mass of "two-peak" images.
TWO_PEAK_BANDS = ((56, 72), (168, 184))
_TWO_PEAK_NOISE = 0.1


def _smooth_field(rng: np.random.Generator, height: int, width: int) -> np.ndarray:
    """Sum of a few random low-frequency plane waves, scaled to [0, 1]."""
    yy, xx = np.mgrid[0:height, 0:width].astype(np.float64)
    field = np.zeros((height, width))
    for _ in range(4):
        fy, fx = rng.uniform(0.5, 3.0, size=2) * 2 * np.pi
        phase = rng.uniform(0, 2 * np.pi)
        field += np.sin(fy * yy / max(height, 1) + fx * xx / max(width, 1) + phase)
    lo, hi = field.min(), field.max()
    return (field - lo) / (hi - lo) if hi > lo else np.zeros_like(field)


def generate_synthetic(kind: str, width: int, height: int, seed: int = 0) -> GrayImage:
    """Deterministic 8-bit test image of the given ``kind``.

    ``smooth-gradient`` is a horizontal ramp from 0 to 255 (pixel ``j`` has
    value ``j`` when the width is 256) and ignores the seed.
    """
    if width < 1 or height < 1:
        raise ValueError(f"dimensions must be positive, got {width}x{height}")
    rng = np.random.default_rng(seed)
    if kind == "uniform-noise":
        img = rng.integers(0, 256, size=(height, width))
    elif kind == "smooth-gradient":
        span = max(width - 1, 1)
        ramp = (np.arange(width) * 255 + span // 2) // span
        img = np.broadcast_to(ramp, (height, width))
    elif kind == "two-peak":
        (a_lo, a_hi), (b_lo, b_hi) = TWO_PEAK_BANDS
        region = _smooth_field(rng, height, width) > 0.5
        img = np.where(
            region,
            rng.integers(b_lo, b_hi + 1, size=(height, width)),
            rng.integers(a_lo, a_hi + 1, size=(height, width)),
        )
        noisy = rng.random((height, width)) < _TWO_PEAK_NOISE
        img = np.where(noisy, rng.integers(0, 256, size=(height, width)), img)
    elif kind == "hdr-peaky":
        # Mostly deep shadow with a long tail of highlights.
        base = _smooth_field(rng, height, width) ** 4
        grain = rng.normal(0.0, 0.01, size=(height, width))
        img = np.clip(np.rint(255.0 * np.clip(base + grain, 0.0, 1.0)), 0, 255)
    else:
        raise ValueError(f"unknown synthetic kind {kind!r}; expected one of {KINDS}")
    return GrayImage(np.asarray(img, dtype=np.uint8))
