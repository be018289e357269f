"""Mapping-curve calibration and lookup-table application.

A histogram-based enhancer computed on a coarse histogram yields a curve
defined on only a few gray levels. :func:`calibrate` completes it by
linear interpolation to every level in ``[0, 2**B - 1]`` so it can be
applied to the full-resolution image.
"""

from __future__ import annotations

import csv
import enum
import os
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .imageio import GrayImage

__all__ = [
    "CurveDomain",
    "PartialCurve",
    "CalibratedCurve",
    "to_levels",
    "calibrate",
    "naive_upsample_scheme1",
    "apply_curve",
    "write_lut_csv",
]


class CurveDomain(enum.Enum):
    BIN_INDEXED = "bin"
    SUPPORT_INDEXED = "support"


@dataclass(frozen=True, eq=False)
class PartialCurve:
    """Output values known only at a strictly increasing set of gray levels.

    Parameters
    ----------
    x : int array
        Gray levels (not bin indices) at which the curve is defined.
    y : float array
        Output gray values at ``x``; not yet rounded.
    delta : int
        Quantization step of the histogram the curve came from.
    domain : CurveDomain
        ``BIN_INDEXED`` when every bin has a value, ``SUPPORT_INDEXED`` when
        only occupied bins do.
    degenerate : bool
        Set when the producing algorithm fell back to a constant map.
    """

    x: np.ndarray
    y: np.ndarray
    delta: int = 1
    domain: CurveDomain = CurveDomain.BIN_INDEXED
    degenerate: bool = False

    def __post_init__(self):
        x = np.asarray(self.x, dtype=np.int64).ravel()
        y = np.asarray(self.y, dtype=np.float64).ravel()
        if x.size == 0:
            raise ValueError("curve has no points")
        if x.shape != y.shape:
            raise ValueError(f"{x.size} levels but {y.size} values")
        if np.any(np.diff(x) <= 0):
            raise ValueError("curve levels must be strictly increasing")
        if x[0] < 0:
            raise ValueError("curve levels must be non-negative")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)

    @classmethod
    def from_bins(cls, values, delta: int = 1) -> "PartialCurve":
        """Curve with one value per histogram bin, placed at ``k * delta``."""
        values = np.asarray(values, dtype=np.float64)
        return cls(np.arange(values.size) * delta, values, delta, CurveDomain.BIN_INDEXED)

    @classmethod
    def on_support(cls, bins, values, delta: int = 1, degenerate: bool = False) -> "PartialCurve":
        """Curve defined only on the occupied bins ``bins``."""
        bins = np.asarray(bins, dtype=np.int64)
        return cls(bins * delta, values, delta, CurveDomain.SUPPORT_INDEXED, degenerate)

    def __len__(self):
        return self.x.size


@dataclass(frozen=True, eq=False)
class CalibratedCurve:
    """Full-range lookup table, ``lut[level]`` for every level of a B-bit image."""

    lut: np.ndarray
    bit_depth: int = 8

    def __post_init__(self):
        lut = np.asarray(self.lut)
        if lut.shape != (1 << self.bit_depth,):
            raise ValueError(f"lut must have {1 << self.bit_depth} entries, got {lut.shape}")
        object.__setattr__(self, "lut", lut)

    def is_monotone(self) -> bool:
        return bool(np.all(np.diff(self.lut.astype(np.int64)) >= 0))


def to_levels(values, bit_depth: int = 8) -> np.ndarray:
    """Round half up and clamp real values to unsigned B-bit integers."""
    dtype = np.uint8 if bit_depth <= 8 else np.uint16
    out = np.floor(np.asarray(values, dtype=np.float64) + 0.5)
    return np.clip(out, 0, (1 << bit_depth) - 1).astype(dtype)


def calibrate(curve: PartialCurve, bit_depth: int = 8) -> CalibratedCurve:
    """Complete and upsample ``curve`` to a ``2**bit_depth`` entry lookup table.

    Levels between two defined points are linearly interpolated; levels
    outside the defined range take the nearest end value.
    """
    values = _kernels.interpolate_levels(curve.x, curve.y, 1 << bit_depth)
    return CalibratedCurve(to_levels(values, bit_depth), bit_depth)


def naive_upsample_scheme1(curve: PartialCurve, bit_depth: int = 8) -> CalibratedCurve:
    """Nearest-bin expansion ``lut[x] = m(x // delta)``.

    Only meaningful when every bin carries a value; produces the banded
    (stratified) output that :func:`calibrate` avoids. Kept for comparison.
    """
    if curve.domain is not CurveDomain.BIN_INDEXED:
        raise ValueError("scheme 1 is undefined for curves missing gray levels")
    n_g = (1 << bit_depth) // curve.delta
    if curve.x.size != n_g or np.any(curve.x != np.arange(n_g) * curve.delta):
        raise ValueError(f"scheme 1 needs a value for each of the {n_g} bins")
    bins = np.arange(1 << bit_depth) // curve.delta
    return CalibratedCurve(to_levels(curve.y[bins], bit_depth), bit_depth)


def apply_curve(x: GrayImage, curve: CalibratedCurve) -> GrayImage:
    if curve.bit_depth != x.bit_depth:
        raise ValueError(
            f"lut covers {1 << curve.bit_depth} levels, image has {x.levels}"
        )
    if curve.lut.dtype == np.uint8 and x.pixels.dtype == np.uint8:
        out = _kernels.gather_u8(x.pixels, curve.lut)
    else:
        out = _kernels.gather(x.pixels, curve.lut)
    return GrayImage._wrap(out, x.bit_depth)


def write_lut_csv(curve: CalibratedCurve, path: str | os.PathLike) -> None:
    """Dump ``(x, lut[x])`` pairs for plotting."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["x", "lut"])
        writer.writerows(enumerate(curve.lut.tolist()))
