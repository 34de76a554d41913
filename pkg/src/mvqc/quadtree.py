"""Uniform quadtree decomposition of a square image into equal tiles.

Fully decomposing a 512 x 512 raster down to tiles of side d1 yields
L = (512/d1)^2 leaves, so the tree degenerates to a (512/d1) x (512/d1)
grid; the grid is what is stored. Tiles are numbered 1..L, by default in
Morton order (recursively NW, NE, SW, SE), optionally in raster order.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

IMAGE_SIDE = 512

TILE_ORDERS = ("morton", "raster")


@dataclass(frozen=True)
class ComponentGrid:
    """The L tiles of an m x m image at tile side d1, in enumeration order.

    ``regions[i - 1]`` is the (row, col) top-left corner of tile i; every
    tile is d1 x d1.
    """

    m: int
    d1: int
    order: str
    regions: tuple[tuple[int, int], ...]

    @property
    def count(self) -> int:
        return len(self.regions)


def _morton_cell(z: int, bits: int) -> tuple[int, int]:
    # Digit q at each level picks the quadrant: 0=NW, 1=NE, 2=SW, 3=SE,
    # i.e. q = 2*row_bit + col_bit.
    row = col = 0
    for level in range(bits):
        q = (z >> (2 * level)) & 3
        row |= ((q >> 1) & 1) << level
        col |= (q & 1) << level
    return row, col


def decompose(d1: int, m: int = IMAGE_SIDE, order: str = "morton") -> ComponentGrid:
    """Tile an m x m image into (m/d1)^2 squares of side d1."""
    if order not in TILE_ORDERS:
        raise ValueError("unknown tile order %r" % order)
    if d1 <= 0 or m % d1 != 0:
        raise ValueError("tile side %d does not divide image side %d" % (d1, m))
    n = m // d1
    if n & (n - 1) != 0:
        raise ValueError("grid size %d per side is not a power of two" % n)
    if order == "raster":
        cells = [(r, c) for r in range(n) for c in range(n)]
    else:
        bits = n.bit_length() - 1
        cells = [_morton_cell(z, bits) for z in range(n * n)]
    regions = tuple((r * d1, c * d1) for r, c in cells)
    return ComponentGrid(m=m, d1=d1, order=order, regions=regions)


def extract_region(img: np.ndarray, grid: ComponentGrid, index: int) -> np.ndarray:
    """View of tile ``index`` (1-based) of an image matching the grid size."""
    a = np.asarray(img)
    if a.shape[0] != grid.m or a.shape[1] != grid.m:
        raise ValueError("image shape %r does not match grid side %d" % (a.shape, grid.m))
    if not 1 <= index <= grid.count:
        raise ValueError("component index %d out of range 1..%d" % (index, grid.count))
    row, col = grid.regions[index - 1]
    return a[row : row + grid.d1, col : col + grid.d1]
