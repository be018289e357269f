"""Why the coarse curve is interpolated rather than expanded bin by bin.

A 64-bin equalization curve expanded piecewise-constantly maps each run of
four input levels to one output level, which shows up as bands on smooth
ramps. Linear upsampling keeps neighbouring levels distinct.

Run: python3 demos/03_stratification.py
"""

import numpy as np

from _common import out_path
from fastce import (
    PartialCurve,
    apply_curve,
    calibrate,
    cdf,
    generate_synthetic,
    histogram,
    naive_upsample_scheme1,
    write_image,
)

x = generate_synthetic("smooth-gradient", 256, 64)
c = cdf(histogram(x, 64))
curve = PartialCurve.from_bins(255 * c.values, c.delta)

banded = apply_curve(x, naive_upsample_scheme1(curve))
smooth = apply_curve(x, calibrate(curve))
write_image(banded, out_path("gradient_scheme1.pgm"))
write_image(smooth, out_path("gradient_scheme2.pgm"))

print(f"input levels:          {np.unique(x.pixels).size}")
print(f"piecewise-constant:    {np.unique(banded.pixels).size}")
print(f"linear interpolation:  {np.unique(smooth.pixels).size}")

row = banded.pixels[0].astype(int)
print("first row, piecewise-constant:", row[:12].tolist(), "...")
print("first row, interpolated:      ", smooth.pixels[0, :12].tolist(), "...")
