"""Raw moments, central moments, and the three second-order Hu invariants.

Moments operate on a mass image: a 2-D array of non-negative per-pixel
mass. Binary rasters contribute mass in {0, 1}; grayscale rasters are
normalized to intensity/255 so double precision survives 512 x 512 sums.
Index convention: i is the 0-based row, j the 0-based column.
"""

from __future__ import annotations

import enum

import numpy as np


class MomentKind(str, enum.Enum):
    A = "A"
    B = "B"
    C = "C"


def gray_mass(img: np.ndarray) -> np.ndarray:
    """Per-pixel mass of a grayscale image, normalized to [0, 1]."""
    return np.asarray(img, dtype=np.float64) / 255.0


def binary_mass(bw: np.ndarray) -> np.ndarray:
    """Per-pixel mass of a binary image."""
    return np.asarray(bw, dtype=np.float64)


def _axes(mass: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    i = np.arange(mass.shape[0], dtype=np.float64)[:, None]
    j = np.arange(mass.shape[1], dtype=np.float64)[None, :]
    return i, j


def raw_moment(mass: np.ndarray, p: int, q: int) -> float:
    """Sum of mass(i, j) * i^p * j^q over all pixels."""
    m = np.asarray(mass, dtype=np.float64)
    if m.ndim != 2:
        raise ValueError("mass image must be 2-D")
    i, j = _axes(m)
    return float((m * i**p * j**q).sum())


def centroid(mass: np.ndarray) -> tuple[float, float]:
    """Center of mass (a, b) = (m10/m00, m01/m00)."""
    m00 = raw_moment(mass, 0, 0)
    if m00 == 0.0:
        raise ValueError("massless region")
    return raw_moment(mass, 1, 0) / m00, raw_moment(mass, 0, 1) / m00


def central_moment(mass: np.ndarray, p: int, q: int) -> float:
    """Sum of mass(i, j) * (i - a)^p * (j - b)^q about the centroid."""
    a, b = centroid(mass)
    m = np.asarray(mass, dtype=np.float64)
    i, j = _axes(m)
    return float((m * (i - a) ** p * (j - b) ** q).sum())


def _second_order(mass: np.ndarray) -> tuple[float, float, float, float]:
    m = np.asarray(mass, dtype=np.float64)
    if m.ndim != 2:
        raise ValueError("mass image must be 2-D")
    m00 = float(m.sum())
    if m00 == 0.0:
        raise ValueError("massless region")
    i, j = _axes(m)
    a = float((m * i).sum()) / m00
    b = float((m * j).sum()) / m00
    di = i - a
    dj = j - b
    mu20 = float((m * di * di).sum())
    mu02 = float((m * dj * dj).sum())
    mu11 = float((m * di * dj).sum())
    return m00, mu20, mu02, mu11


def hu_moment(mass: np.ndarray, kind: MomentKind) -> float:
    """One of the three second-order invariants of a mass image.

    A = (M20 + M02) / m00^2
    B = ((M20 - M02)^2 + 4 M11^2) / m00^2
    C = (M20 M02 - M11^2) / m00^4

    B's normalization is kept as published even though it leaves B
    scale-dependent (it grows ~k^4 under k-fold upsampling).
    """
    m00, mu20, mu02, mu11 = _second_order(mass)
    kind = MomentKind(kind)
    if kind is MomentKind.A:
        return (mu20 + mu02) / m00**2
    if kind is MomentKind.B:
        return ((mu20 - mu02) ** 2 + 4.0 * mu11**2) / m00**2
    return (mu20 * mu02 - mu11**2) / m00**4
