"""Raster primitives shared by the iris and signature pipelines.

Images are plain numpy arrays: grayscale rasters are 2-D uint8 in [0, 255],
binary rasters are 2-D uint8 with values in {0, 1}, and color inputs are
(H, W, 3) uint8. All operations are pure functions of their inputs.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy import ndimage

GRAY_LEVELS = 256

# 8-neighborhood: a pixel is connected to all pixels touching it, diagonals
# included.
_EIGHT_CONNECTED = np.ones((3, 3), dtype=int)


@dataclass(frozen=True)
class LabelMap:
    """Connected-component labeling of a binary image.

    ``labels`` holds one integer per pixel, 0 for background; component
    labels form the contiguous set 1..num in raster order of first
    encounter.
    """

    labels: np.ndarray
    num: int

    @property
    def width(self) -> int:
        return self.labels.shape[1]

    @property
    def height(self) -> int:
        return self.labels.shape[0]


def _as_gray(img: np.ndarray) -> np.ndarray:
    a = np.asarray(img)
    if a.ndim != 2:
        raise ValueError("expected a 2-D grayscale image, got shape %r" % (a.shape,))
    return a


def histogram(img: np.ndarray) -> np.ndarray:
    """Count pixels at each of the 256 gray levels."""
    a = _as_gray(img)
    if a.size == 0:
        raise ValueError("empty input")
    return np.bincount(a.ravel().astype(np.int64), minlength=GRAY_LEVELS)


def histogram_peak(hist: np.ndarray) -> int:
    """Gray level with the maximal count; ties go to the lowest level."""
    h = np.asarray(hist)
    if h.size != GRAY_LEVELS:
        raise ValueError("histogram must have %d bins" % GRAY_LEVELS)
    return int(np.argmax(h))


def threshold_below(img: np.ndarray, level: int) -> np.ndarray:
    """Binary image with 1 wherever intensity <= level."""
    a = _as_gray(img)
    return (a.astype(np.int64) <= int(level)).astype(np.uint8)


def label_components(bw: np.ndarray) -> LabelMap:
    """Label the 8-connected foreground components of a binary image.

    Labels are renumbered so that the component whose first pixel appears
    earliest in raster order gets label 1, independent of the underlying
    labeling routine.
    """
    a = _as_gray(bw)
    raw, num = ndimage.label(a != 0, structure=_EIGHT_CONNECTED)
    if num == 0:
        return LabelMap(labels=raw.astype(np.int32), num=0)
    flat = raw.ravel()
    fg = flat > 0
    values, first = np.unique(flat[fg], return_index=True)
    lut = np.zeros(num + 1, dtype=np.int32)
    lut[values[np.argsort(first)]] = np.arange(1, num + 1)
    return LabelMap(labels=lut[raw], num=num)


def component_areas(lm: LabelMap) -> np.ndarray:
    """Pixel count of each component; entry i-1 is the area of label i."""
    counts = np.bincount(lm.labels.ravel(), minlength=lm.num + 1)
    return counts[1 : lm.num + 1]


def largest_component(areas: np.ndarray) -> int:
    """1-based label of the maximum-area component; ties go to the lowest label."""
    a = np.asarray(areas)
    if a.size == 0:
        raise ValueError("no components")
    return int(np.argmax(a)) + 1


def component_bbox(lm: LabelMap, label: int) -> tuple[int, int, int, int]:
    """Tight bounding box (x_min, x_max, y_min, y_max) of one component.

    x indexes columns, y indexes rows; bounds are inclusive.
    """
    rows, cols = np.nonzero(lm.labels == int(label))
    if rows.size == 0:
        raise ValueError("label %d not present" % int(label))
    return int(cols.min()), int(cols.max()), int(rows.min()), int(rows.max())


def crop(img: np.ndarray, x: int, y: int, width: int, height: int) -> np.ndarray:
    """Copy a rectangle out of the image, zero-filling out-of-bounds regions.

    (x, y) is the top-left corner in (column, row) order. The rectangle may
    extend beyond the frame on any side.
    """
    if width <= 0 or height <= 0:
        raise ValueError("crop size must be positive")
    a = _as_gray(img)
    out = np.zeros((height, width), dtype=a.dtype)
    src_y0, src_y1 = max(y, 0), min(y + height, a.shape[0])
    src_x0, src_x1 = max(x, 0), min(x + width, a.shape[1])
    if src_y0 < src_y1 and src_x0 < src_x1:
        out[src_y0 - y : src_y1 - y, src_x0 - x : src_x1 - x] = a[src_y0:src_y1, src_x0:src_x1]
    return out


def _linear_coords(src_len: int, dst_len: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    # Half-pixel-center mapping: dst pixel d samples src coordinate
    # (d + 0.5) * src/dst - 0.5, clamped at the borders.
    x = (np.arange(dst_len) + 0.5) * (src_len / dst_len) - 0.5
    x0 = np.floor(x).astype(np.int64)
    t = x - x0
    lo = np.clip(x0, 0, src_len - 1)
    hi = np.clip(x0 + 1, 0, src_len - 1)
    return lo, hi, t


def resize(img: np.ndarray, target: int) -> np.ndarray:
    """Bilinear resize of a grayscale image to a square target x target raster."""
    a = _as_gray(img)
    if a.size == 0:
        raise ValueError("empty input")
    if target <= 0:
        raise ValueError("target size must be positive")
    rlo, rhi, rt = _linear_coords(a.shape[0], target)
    clo, chi, ct = _linear_coords(a.shape[1], target)
    f = a.astype(np.float64)
    nw = f[np.ix_(rlo, clo)]
    ne = f[np.ix_(rlo, chi)]
    sw = f[np.ix_(rhi, clo)]
    se = f[np.ix_(rhi, chi)]
    top = nw * (1.0 - ct) + ne * ct
    bot = sw * (1.0 - ct) + se * ct
    out = top * (1.0 - rt)[:, None] + bot * rt[:, None]
    return np.rint(out).astype(a.dtype if a.dtype == np.uint8 else np.uint8)


def resize_nearest(img: np.ndarray, target: int) -> np.ndarray:
    """Nearest-neighbor resize; keeps binary rasters in {0, 1}."""
    a = _as_gray(img)
    if a.size == 0:
        raise ValueError("empty input")
    if target <= 0:
        raise ValueError("target size must be positive")
    rows = np.clip(((np.arange(target) + 0.5) * (a.shape[0] / target)).astype(np.int64), 0, a.shape[0] - 1)
    cols = np.clip(((np.arange(target) + 0.5) * (a.shape[1] / target)).astype(np.int64), 0, a.shape[1] - 1)
    return a[np.ix_(rows, cols)]


def to_gray(rgb: np.ndarray) -> np.ndarray:
    """Convert an (H, W, 3) image to grayscale with BT.601 luminance weights."""
    a = np.asarray(rgb)
    if a.ndim != 3 or a.shape[2] != 3:
        raise ValueError("expected a 3-channel image, got shape %r" % (a.shape,))
    lum = 0.299 * a[..., 0].astype(np.float64) + 0.587 * a[..., 1] + 0.114 * a[..., 2]
    return np.floor(lum + 0.5).astype(np.uint8)


def otsu_threshold(img: np.ndarray) -> int:
    """Threshold t maximizing between-class variance of {levels < t} vs {levels >= t}.

    Ties go to the lowest t; a constant image therefore yields t = 0.
    """
    h = histogram(img).astype(np.float64)
    total = h.sum()
    level_mass = h * np.arange(GRAY_LEVELS)
    best_t, best_var = 0, -1.0
    w0 = 0.0
    sum0 = 0.0
    for t in range(GRAY_LEVELS):
        if w0 > 0.0 and w0 < total:
            mu0 = sum0 / w0
            mu1 = (level_mass.sum() - sum0) / (total - w0)
            var = w0 * (total - w0) * (mu0 - mu1) ** 2
            if var > best_var:
                best_var, best_t = var, t
        w0 += h[t]
        sum0 += level_mass[t]
    return best_t if best_var > 0.0 else 0


def otsu_binarize(img: np.ndarray) -> np.ndarray:
    """Binarize with the Otsu threshold; pixels darker than it become ink (1)."""
    t = otsu_threshold(img)
    a = _as_gray(img)
    return (a.astype(np.int64) < t).astype(np.uint8)


# ---------------------------------------------------------------------------
# File I/O: binary PGM (P5, maxval 255) is the required format; 8-bit PNG is
# read when Pillow is available.
# ---------------------------------------------------------------------------


def _read_pgm(path: Path) -> np.ndarray:
    data = path.read_bytes()
    if not data.startswith(b"P5"):
        raise ValueError("%s: only binary PGM (P5) is supported" % path)
    fields: list[int] = []
    pos = 2
    while len(fields) < 3:
        while pos < len(data) and data[pos : pos + 1].isspace():
            pos += 1
        if pos < len(data) and data[pos : pos + 1] == b"#":
            while pos < len(data) and data[pos : pos + 1] != b"\n":
                pos += 1
            continue
        start = pos
        while pos < len(data) and not data[pos : pos + 1].isspace():
            pos += 1
        fields.append(int(data[start:pos]))
    width, height, maxval = fields
    if maxval != 255:
        raise ValueError("%s: unsupported bit depth (maxval %d, expected 255)" % (path, maxval))
    pos += 1  # single whitespace byte after maxval
    pixels = np.frombuffer(data, dtype=np.uint8, count=width * height, offset=pos)
    if pixels.size != width * height:
        raise ValueError("%s: truncated pixel data" % path)
    return pixels.reshape(height, width).copy()


def _read_png(path: Path) -> np.ndarray:
    try:
        from PIL import Image
    except ImportError as exc:  # pragma: no cover - depends on environment
        raise ValueError("%s: PNG support requires Pillow" % path) from exc
    with Image.open(path) as im:
        if im.mode == "L":
            return np.asarray(im, dtype=np.uint8)
        if im.mode == "RGB":
            return np.asarray(im, dtype=np.uint8)
        raise ValueError("%s: unsupported PNG mode %s (need 8-bit gray or RGB)" % (path, im.mode))


def read_image(path: str | Path) -> np.ndarray:
    """Read a grayscale or RGB image from a PGM (P5) or PNG file."""
    p = Path(path)
    suffix = p.suffix.lower()
    if suffix == ".pgm":
        return _read_pgm(p)
    if suffix == ".png":
        return _read_png(p)
    raise ValueError("%s: unsupported image format %r" % (p, suffix))


def write_pgm(path: str | Path, img: np.ndarray) -> None:
    """Write a 2-D uint8 image as binary PGM."""
    a = _as_gray(img)
    if a.dtype != np.uint8:
        raise ValueError("PGM output requires uint8 data")
    header = b"P5\n%d %d\n255\n" % (a.shape[1], a.shape[0])
    Path(path).write_bytes(header + a.tobytes())
