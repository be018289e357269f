import numpy as np
import pytest

from fastce import generate_synthetic
from fastce.synthetic import KINDS, TWO_PEAK_BANDS


@pytest.mark.parametrize("kind", KINDS)
def test_deterministic(kind):
    a = generate_synthetic(kind, 64, 48, seed=5)
    b = generate_synthetic(kind, 64, 48, seed=5)
    assert a == b
    assert (a.width, a.height) == (64, 48)
    assert a.pixels.dtype == np.uint8


@pytest.mark.parametrize("kind", ["uniform-noise", "two-peak", "hdr-peaky"])
def test_seed_matters(kind):
    assert generate_synthetic(kind, 32, 32, 1) != generate_synthetic(kind, 32, 32, 2)


def test_gradient_row():
    img = generate_synthetic("smooth-gradient", 256, 1)
    np.testing.assert_array_equal(img.pixels[0], np.arange(256))


def test_gradient_is_horizontal():
    img = generate_synthetic("smooth-gradient", 100, 7)
    assert (img.pixels == img.pixels[0]).all()
    assert img.pixels[0, 0] == 0 and img.pixels[0, -1] == 255
    assert np.all(np.diff(img.pixels[0].astype(int)) >= 0)


@pytest.mark.parametrize("seed", range(5))
def test_two_peak_mass(seed):
    px = generate_synthetic("two-peak", 128, 96, seed).pixels
    inside = np.zeros_like(px, dtype=bool)
    for lo, hi in TWO_PEAK_BANDS:
        inside |= (px >= lo) & (px <= hi)
    assert inside.mean() >= 0.8


def test_hdr_is_dark_heavy():
    px = generate_synthetic("hdr-peaky", 128, 128, 0).pixels
    assert np.median(px) < 64 and px.max() > 128


def test_bad_inputs():
    with pytest.raises(ValueError):
        generate_synthetic("stripes", 4, 4)
    with pytest.raises(ValueError):
        generate_synthetic("two-peak", 0, 4)
