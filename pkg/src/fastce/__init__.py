"""Fast histogram-based contrast enhancement.

Histogram equalization (:func:`he`, :func:`fhe`) and SMIRANK
(:func:`smirank`, :func:`fsmirank`), each in a full-resolution form and a
fast form that estimates its mapping curve from a decimated image with a
coarse histogram, then calibrates the curve back to every gray level.
"""

from .equalization import cdf, fhe, he
from .imageio import (
    ColorImage,
    GrayImage,
    ImageFormatError,
    extract_luminance,
    read_image,
    recombine_luminance,
    write_image,
)
from .mapping import (
    CalibratedCurve,
    CurveDomain,
    PartialCurve,
    apply_curve,
    calibrate,
    naive_upsample_scheme1,
)
from .sampling import (
    BlockHistogramMatrix,
    Histogram,
    block_histograms,
    histogram,
    spatial_downsample,
)
from .ranking import (
    fsmirank,
    mutual_information,
    rank_to_mapping,
    rank_vector,
    smirank,
    transition_matrix,
)
from .synthetic import generate_synthetic

__version__ = "0.1.0"
