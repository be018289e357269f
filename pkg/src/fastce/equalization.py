"""Histogram equalization: the full-resolution baseline and its fast variant."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import sampling
from .imageio import GrayImage
from .mapping import CalibratedCurve, PartialCurve, apply_curve, calibrate, to_levels
from .sampling import Histogram

__all__ = ["CdfCurve", "cdf", "he_curve", "he", "fhe_curve", "fhe"]


@dataclass(frozen=True)
class CdfCurve:
    values: np.ndarray
    delta: int = 1

    @property
    def n_g(self) -> int:
        return len(self.values)


def cdf(h: Histogram) -> CdfCurve:
    """Cumulative distribution of ``h``; ends at exactly 1."""
    if h.total <= 0:
        raise ValueError("cannot take the CDF of an empty histogram")
    return CdfCurve(np.cumsum(h.bins) / h.total, h.delta)


def he_curve(x: GrayImage) -> CalibratedCurve:
    """Lookup table of plain histogram equalization, ``[(2**B - 1) * c(level)]``."""
    if x.size == 0:
        raise ValueError("empty image")
    c = cdf(sampling.histogram(x, x.levels))
    return CalibratedCurve(to_levels(x.max_level * c.values, x.bit_depth), x.bit_depth)


def he(x: GrayImage) -> GrayImage:
    return apply_curve(x, he_curve(x))


def fhe_curve(x: GrayImage, s: int = 8, n_g: int = 64) -> CalibratedCurve:
    """Equalization curve estimated from a decimated, coarsened histogram.

    The CDF is computed on every ``s``-th pixel with ``n_g`` bins, then
    linearly upsampled to all ``2**B`` levels.
    """
    h = sampling.histogram(sampling.spatial_downsample(x, s), n_g)
    c = cdf(h)
    curve = PartialCurve.from_bins(x.max_level * c.values, c.delta)
    return calibrate(curve, x.bit_depth)


def fhe(x: GrayImage, s: int = 8, n_g: int = 64) -> GrayImage:
    """Fast histogram equalization.

    Parameters
    ----------
    x : GrayImage
        Input image; the curve is applied to it at full resolution.
    s : int
        Spatial sampling step for histogram estimation.
    n_g : int
        Number of histogram bins, a power of two up to ``2**B``.

    With ``s=1`` and ``n_g=2**B`` the result equals :func:`he` exactly.
    """
    return apply_curve(x, fhe_curve(x, s, n_g))
