"""Enhance a colour image through its HSV value channel.

Hue and saturation stay fixed because all three channels are scaled by the
same factor newV / V.

Run: python3 demos/04_color.py
"""

import numpy as np

from _common import out_path
from fastce import (
    ColorImage,
    extract_luminance,
    fhe,
    generate_synthetic,
    recombine_luminance,
    write_image,
)

# Tint a dull synthetic image so the colour handling is visible.
v = generate_synthetic("two-peak", 320, 240, seed=5).pixels.astype(float)
tint = np.array([1.0, 0.7, 0.4])
img = ColorImage(np.clip(np.rint(v[..., None] * tint), 0, 255).astype(np.uint8))
write_image(img, out_path("tinted.ppm"))

value = extract_luminance(img)
enhanced = recombine_luminance(img, fhe(value))
write_image(enhanced, out_path("tinted_fhe.ppm"))

before = img.pixels.reshape(-1, 3).astype(float)
after = enhanced.pixels.reshape(-1, 3).astype(float)
bright = before[:, 0] > 100
print("channel ratios G/R before:", np.round((before[bright, 1] / before[bright, 0]).mean(), 3))
print("channel ratios G/R after: ", np.round((after[bright, 1] / after[bright, 0]).mean(), 3))
print(f"value channel range {value.pixels.min()}..{value.pixels.max()} -> "
      f"{extract_luminance(enhanced).pixels.min()}..{extract_luminance(enhanced).pixels.max()}")
