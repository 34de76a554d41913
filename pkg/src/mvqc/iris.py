"""Pupil detection and Pupil Iris Frame (PIF) extraction.

The pupil is located as the largest 8-connected component of the pixels at
or below the histogram-peak gray level. A square window derived from the
pupil geometry plus configurable offsets is cropped and resized to the
fixed 512 x 512 PIF raster that the quadtree features consume.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import imaging

PIF_SIDE = 512

# Window offsets (offset_1, offset_2) known to work per database. Unknown
# databases must supply offsets explicitly.
DATABASE_WINDOWS: dict[str, tuple[int, int]] = {
    "casia": (20, 40),
    "ice": (6, 12),
    "mmu": (20, 40),
    "synthetic": (96, 192),
}


@dataclass(frozen=True)
class PupilGeometry:
    """Pupil center and half-extents, in integer pixels.

    x indexes columns and y indexes rows; radius_1 is the half-extent along
    x, radius_2 along y.
    """

    x_c: int
    y_c: int
    radius_1: int
    radius_2: int

    @property
    def radius(self) -> int:
        return max(self.radius_1, self.radius_2)


@dataclass(frozen=True)
class WindowSpec:
    """Window offsets: offset_1 shifts the corner, offset_2 grows the side."""

    offset_1: int
    offset_2: int

    def __post_init__(self) -> None:
        if self.offset_1 < 0 or self.offset_2 < 0:
            raise ValueError("window offsets must be non-negative")


def window_for_database(name: str) -> WindowSpec:
    try:
        o1, o2 = DATABASE_WINDOWS[name.lower()]
    except KeyError:
        raise ValueError(
            "no default window offsets for database %r; pass offsets explicitly" % name
        ) from None
    return WindowSpec(o1, o2)


def detect_pupil(eye: np.ndarray) -> PupilGeometry:
    """Locate the pupil from the dark histogram peak and component areas.

    Raises ValueError("pupil not found") when no foreground component
    survives thresholding.
    """
    hist = imaging.histogram(eye)
    peak = imaging.histogram_peak(hist)
    bw = imaging.threshold_below(eye, peak)
    lm = imaging.label_components(bw)
    if lm.num == 0:
        raise ValueError("pupil not found")
    areas = imaging.component_areas(lm)
    label = imaging.largest_component(areas)
    x_min, x_max, y_min, y_max = imaging.component_bbox(lm, label)
    return PupilGeometry(
        x_c=(x_max + x_min) // 2,
        y_c=(y_max + y_min) // 2,
        radius_1=(x_max - x_min) // 2,
        radius_2=(y_max - y_min) // 2,
    )


def window_rect(
    g: PupilGeometry, w: WindowSpec, swap_axes: bool = True
) -> tuple[int, int, int, int]:
    """Square crop rectangle (x, y, width, height) around the pupil.

    With swap_axes (the default) the corner is (y_c - radius - offset_1,
    x_c - radius - offset_1), i.e. the center coordinates swap roles when
    positioning the window; swap_axes=False uses the orthodox orientation.
    """
    r = g.radius
    side = 2 * r + w.offset_2
    if swap_axes:
        x = g.y_c - r - w.offset_1
        y = g.x_c - r - w.offset_1
    else:
        x = g.x_c - r - w.offset_1
        y = g.y_c - r - w.offset_1
    return x, y, side, side


def extract_pif(eye: np.ndarray, w: WindowSpec, swap_axes: bool = True) -> np.ndarray:
    """Crop the pupil window and resize it to the 512 x 512 PIF image."""
    g = detect_pupil(eye)
    x, y, width, height = window_rect(g, w, swap_axes=swap_axes)
    return imaging.resize(imaging.crop(eye, x, y, width, height), PIF_SIDE)
