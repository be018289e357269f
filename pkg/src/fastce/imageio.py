"""Image containers, binary PGM/PPM I/O and luminance decomposition."""

from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Union

import numpy as np

__all__ = [
    "GrayImage",
    "ColorImage",
    "ImageFormatError",
    "read_image",
    "write_image",
    "extract_luminance",
    "recombine_luminance",
]

PathLike = Union[str, "os.PathLike[str]"]


class ImageFormatError(ValueError):
    """Raised when a PGM/PPM file cannot be decoded.

    ``field`` names the header field or section that failed
    (``magic``, ``width``, ``height``, ``maxval`` or ``payload``).
    """

    def __init__(self, field: str, message: str):
        super().__init__(f"{field}: {message}")
        self.field = field


def _dtype_for(bit_depth: int) -> np.dtype:
    return np.dtype(np.uint8) if bit_depth <= 8 else np.dtype(np.uint16)


@dataclass(frozen=True, eq=False)
class GrayImage:
    """A B-bit grayscale image stored as a read-only (height, width) array."""

    pixels: np.ndarray
    bit_depth: int = 8

    def __post_init__(self):
        if not 1 <= self.bit_depth <= 16:
            raise ValueError(f"bit_depth must be in [1, 16], got {self.bit_depth}")
        arr = np.asarray(self.pixels)
        if arr.ndim != 2:
            raise ValueError(f"GrayImage needs a 2-D array, got shape {arr.shape}")
        if arr.size and not np.issubdtype(arr.dtype, np.integer):
            raise TypeError(f"GrayImage needs integer pixels, got {arr.dtype}")
        if arr.size and (arr.min() < 0 or arr.max() > self.max_level):
            raise ValueError(f"pixel values must lie in [0, {self.max_level}]")
        arr = np.array(arr, dtype=_dtype_for(self.bit_depth), copy=True, order="C")
        arr.setflags(write=False)
        object.__setattr__(self, "pixels", arr)

    @classmethod
    def _wrap(cls, arr: np.ndarray, bit_depth: int = 8) -> "GrayImage":
        # Internal: skip validation and copying for arrays produced by LUTs.
        arr.setflags(write=False)
        img = object.__new__(cls)
        object.__setattr__(img, "pixels", arr)
        object.__setattr__(img, "bit_depth", bit_depth)
        return img

    @property
    def height(self) -> int:
        return self.pixels.shape[0]

    @property
    def width(self) -> int:
        return self.pixels.shape[1]

    @property
    def levels(self) -> int:
        return 1 << self.bit_depth

    @property
    def max_level(self) -> int:
        return (1 << self.bit_depth) - 1

    @property
    def size(self) -> int:
        return self.pixels.size

    def __eq__(self, other):
        if not isinstance(other, GrayImage):
            return NotImplemented
        return self.bit_depth == other.bit_depth and np.array_equal(self.pixels, other.pixels)

    def __repr__(self):
        return f"GrayImage({self.width}x{self.height}, bit_depth={self.bit_depth})"


@dataclass(frozen=True, eq=False)
class ColorImage:
    """An 8-bit RGB image stored as a read-only (height, width, 3) array."""

    pixels: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.pixels)
        if arr.ndim != 3 or arr.shape[2] != 3:
            raise ValueError(f"ColorImage needs a (H, W, 3) array, got shape {arr.shape}")
        if arr.size and (arr.min() < 0 or arr.max() > 255):
            raise ValueError("channel values must lie in [0, 255]")
        arr = np.array(arr, dtype=np.uint8, copy=True, order="C")
        arr.setflags(write=False)
        object.__setattr__(self, "pixels", arr)

    @property
    def height(self) -> int:
        return self.pixels.shape[0]

    @property
    def width(self) -> int:
        return self.pixels.shape[1]

    def __eq__(self, other):
        if not isinstance(other, ColorImage):
            return NotImplemented
        return np.array_equal(self.pixels, other.pixels)

    def __repr__(self):
        return f"ColorImage({self.width}x{self.height})"


def _header_tokens(buf: bytes, count: int):
    """Read ``count`` whitespace-separated header tokens, skipping comments.

    Returns the tokens and the offset of the byte after the single
    whitespace that terminates the last token.
    """
    tokens = []
    pos = 0
    n = len(buf)
    while len(tokens) < count:
        while pos < n and buf[pos : pos + 1].isspace():
            pos += 1
        if pos < n and buf[pos : pos + 1] == b"#":
            while pos < n and buf[pos : pos + 1] not in (b"\n", b"\r"):
                pos += 1
            continue
        if pos >= n:
            break
        start = pos
        while pos < n and not buf[pos : pos + 1].isspace() and buf[pos : pos + 1] != b"#":
            pos += 1
        tokens.append(buf[start:pos])
    if len(tokens) == count:
        if pos >= n or not buf[pos : pos + 1].isspace():
            return tokens, None
        pos += 1
    return tokens, pos


def _parse_dim(token: bytes | None, field: str) -> int:
    if token is None:
        raise ImageFormatError(field, "missing from header")
    try:
        value = int(token)
    except ValueError:
        raise ImageFormatError(field, f"not an integer: {token!r}") from None
    if value < 0:
        raise ImageFormatError(field, f"negative value {value}")
    return value


def decode_netpbm(buf: bytes) -> GrayImage | ColorImage:
    """Decode an in-memory binary PGM (P5) or PPM (P6) file."""
    if buf[:2] not in (b"P5", b"P6"):
        raise ImageFormatError("magic", f"expected P5 or P6, got {buf[:2]!r}")
    channels = 1 if buf[:2] == b"P5" else 3
    body = buf[2:]
    if body[:1] and not (body[:1].isspace() or body[:1] == b"#"):
        raise ImageFormatError("magic", "magic number must be followed by whitespace")
    tokens, offset = _header_tokens(body, 3)
    padded = tokens + [None] * (3 - len(tokens))
    width = _parse_dim(padded[0], "width")
    height = _parse_dim(padded[1], "height")
    maxval = _parse_dim(padded[2], "maxval")
    if maxval != 255:
        raise ImageFormatError("maxval", f"unsupported maxval {maxval} (only 255)")
    if offset is None:
        raise ImageFormatError("payload", "header not terminated by whitespace")
    expected = width * height * channels
    payload = body[offset : offset + expected]
    if len(payload) < expected:
        raise ImageFormatError(
            "payload", f"truncated: expected {expected} bytes, found {len(payload)}"
        )
    data = np.frombuffer(payload, dtype=np.uint8)
    if channels == 1:
        return GrayImage(data.reshape(height, width))
    return ColorImage(data.reshape(height, width, 3))


def encode_netpbm(img: GrayImage | ColorImage) -> bytes:
    if img.width == 0 or img.height == 0:
        raise ValueError("empty image")
    if isinstance(img, GrayImage):
        if img.bit_depth != 8:
            raise ValueError("only 8-bit images can be written as PGM")
        magic = b"P5"
    elif isinstance(img, ColorImage):
        magic = b"P6"
    else:
        raise TypeError(f"cannot encode {type(img).__name__}")
    header = magic + b"\n%d %d\n255\n" % (img.width, img.height)
    return header + np.ascontiguousarray(img.pixels).tobytes()


def read_image(path: PathLike) -> GrayImage | ColorImage:
    """Read a binary PGM or PPM file with maxval 255."""
    with open(path, "rb") as fh:
        return decode_netpbm(fh.read())


def write_image(img: GrayImage | ColorImage, path: PathLike) -> None:
    """Write ``img`` as P5 (gray) or P6 (color)."""
    data = encode_netpbm(img)
    with open(path, "wb") as fh:
        fh.write(data)


def extract_luminance(img: ColorImage) -> GrayImage:
    """HSV value channel, ``max(R, G, B)`` per pixel."""
    return GrayImage(img.pixels.max(axis=2))


def recombine_luminance(img: ColorImage, new_v: GrayImage) -> ColorImage:
    """Replace the value channel of ``img`` with ``new_v``.

    Channels are scaled uniformly by ``new_v / V`` (round half up, then
    clamped), which leaves hue and saturation untouched. Black pixels
    (V == 0) become neutral gray at ``new_v``.
    """
    if (new_v.height, new_v.width) != (img.height, img.width):
        raise ValueError(
            f"luminance is {new_v.width}x{new_v.height}, image is {img.width}x{img.height}"
        )
    rgb = img.pixels.astype(np.float64)
    v = rgb.max(axis=2, keepdims=True)
    nv = new_v.pixels.astype(np.float64)[..., None]
    with np.errstate(divide="ignore", invalid="ignore"):
        scaled = np.floor(rgb * nv / v + 0.5)
    out = np.where(v > 0, scaled, np.broadcast_to(nv, rgb.shape))
    return ColorImage(np.clip(out, 0, 255).astype(np.uint8))
