"""Offline signature preprocessing.

A scanned signature (color or grayscale, dark ink on light paper) is turned
into the normalized 512 x 512 binary raster the quadtree features consume:
grayscale conversion, Otsu binarization, minimum-bounding-box crop of the
ink, then nearest-neighbor resize so the result stays in {0, 1}.
"""

from __future__ import annotations

import numpy as np

from . import imaging

SIGNATURE_SIDE = 512


def ink_bbox(binary: np.ndarray) -> tuple[int, int, int, int]:
    """Inclusive (x_min, x_max, y_min, y_max) bounds of the ink pixels."""
    rows, cols = np.nonzero(binary)
    if rows.size == 0:
        raise ValueError("blank signature")
    return int(cols.min()), int(cols.max()), int(rows.min()), int(rows.max())


def preprocess_signature(img: np.ndarray) -> np.ndarray:
    """Normalize a signature scan to a 512 x 512 binary image with ink = 1."""
    a = np.asarray(img)
    gray = imaging.to_gray(a) if a.ndim == 3 else a
    binary = imaging.otsu_binarize(gray)
    x_min, x_max, y_min, y_max = ink_bbox(binary)
    cropped = binary[y_min : y_max + 1, x_min : x_max + 1]
    return imaging.resize_nearest(cropped, SIGNATURE_SIDE)
