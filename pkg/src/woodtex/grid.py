"""Deterministic impulse grids.

Impulses are hashed per cell: the cell key seeds a Poisson count and each
impulse gets a 64-bit stream that fixes its position within the cell and
any kernel attributes.  Everything is a pure function of (seed, spec,
query), so results are identical across runs and query orders.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import _fast
from .hashing import hash_u64, u01, poisson_count
from .params import ParameterError

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class CartesianGridSpec:
    """Regular cell grid; cell_scale is the world size of one cell per axis."""
    cell_scale: tuple = (1.0, 1.0, 1.0)
    density: float = 2.0

    def validate(self, path="grid"):
        if len(self.cell_scale) != 3 or any(s <= 0 for s in self.cell_scale):
            raise ParameterError(path + ".cell_scale", "components must be > 0")
        if self.density <= 0:
            raise ParameterError(path + ".density", "must be > 0")
        return self


@dataclass(frozen=True)
class CylindricalGridSpec:
    """Concentric equal-volume cells: bands in r, slabs in z, wedges in theta."""
    band_thickness: float = 1.0
    z_height: float = 1.0
    target_cell_volume: float = 1.0
    density: float = 2.0

    def validate(self, path="grid"):
        for name in ("band_thickness", "z_height", "target_cell_volume", "density"):
            if getattr(self, name) <= 0:
                raise ParameterError(f"{path}.{name}", "must be > 0")
        return self

    def cells_in_band(self, band):
        """Angular cell count; proportional to the band midpoint radius."""
        r_mid = (band + 0.5) * self.band_thickness
        n = round(TWO_PI * r_mid * self.band_thickness * self.z_height
                  / self.target_cell_volume)
        return max(1, int(n))

    def cell_volume(self, band):
        r_mid = (band + 0.5) * self.band_thickness
        return (TWO_PI * r_mid * self.band_thickness * self.z_height
                / self.cells_in_band(band))


@dataclass(frozen=True)
class Impulse:
    center: tuple
    stream: int


def impulses_cartesian(grid, seed, p, radius_cells=1):
    """Impulses of all cells within the Chebyshev neighborhood of p.

    Canonical order: cell-lexicographic, then impulse index; independent
    of query history.
    """
    if radius_cells < 1:
        raise ParameterError("radius_cells", "must be >= 1")
    grid.validate()
    wx, wy, wz = (float(s) for s in grid.cell_scale)
    centers, streams = _fast.enum_cartesian(
        np.uint64(seed), wx, wy, wz, float(grid.density),
        float(p[0]), float(p[1]), float(p[2]), int(radius_cells))
    return [Impulse(tuple(centers[i]), int(streams[i])) for i in range(len(streams))]


def _cyl_cell_of(grid, p):
    r = math.hypot(p[0], p[1])
    band = int(r / grid.band_thickness)
    theta = math.atan2(p[1], p[0])
    if theta < 0.0:
        theta += TWO_PI
    slab = math.floor(p[2] / grid.z_height)
    return r, band, theta, slab


def cylindrical_neighborhood(grid, p):
    """Cells adjacent to p's cell: bands +-1, re-binned wedges +-1, slabs +-1.

    On the axis (r = 0) the angle is undefined, so every wedge of the two
    innermost bands is included.
    """
    r, band, theta, slab = _cyl_cell_of(grid, p)
    cells = []
    for b in range(max(0, band - 1), band + 2):
        nth = grid.cells_in_band(b)
        if r <= 0.0 or nth <= 3:
            wedges = range(nth)
        else:
            jq = min(int(theta / TWO_PI * nth), nth - 1)
            wedges = sorted({(jq + dj) % nth for dj in (-1, 0, 1)})
        for j in wedges:
            for m in range(slab - 1, slab + 2):
                cells.append((b, j, m))
    return cells


def impulses_cylindrical(grid, seed, p):
    """Impulses of the containing cylindrical cell and all adjacent cells."""
    grid.validate()
    cells = cylindrical_neighborhood(grid, p)
    seed = np.uint64(seed)
    dr = float(grid.band_thickness)
    dz = float(grid.z_height)
    vt = float(grid.target_cell_volume)
    lam = float(grid.density)
    total = 0
    counts = []
    for (b, j, m) in cells:
        n = _fast.cyl_cell_poisson(seed, dr, dz, vt, lam, b, j, m)
        counts.append(n)
        total += n
    centers = np.empty((total, 3))
    streams = np.empty(total, dtype=np.uint64)
    k = 0
    for (b, j, m) in cells:
        k = _fast.enum_cyl_cell(seed, dr, dz, vt, lam, b, j, m, centers, streams, k)
    return [Impulse(tuple(centers[i]), int(streams[i])) for i in range(total)]


# --- pure-Python reference enumeration (used to pin the jitted path) -----------

def impulses_cartesian_reference(grid, seed, p, radius_cells=1):
    wx, wy, wz = grid.cell_scale
    cx0 = math.floor(p[0] / wx)
    cy0 = math.floor(p[1] / wy)
    cz0 = math.floor(p[2] / wz)
    out = []
    for cx in range(cx0 - radius_cells, cx0 + radius_cells + 1):
        for cy in range(cy0 - radius_cells, cy0 + radius_cells + 1):
            for cz in range(cz0 - radius_cells, cz0 + radius_cells + 1):
                key = hash_u64(seed, [cx, cy, cz])
                n = poisson_count(u01(key), grid.density)
                for j in range(n):
                    s = hash_u64(seed, [cx, cy, cz, j])
                    ux = (s & 0x1FFFFF) / 2097152.0
                    uy = ((s >> 21) & 0x1FFFFF) / 2097152.0
                    uz = ((s >> 42) & 0x1FFFFF) / 2097152.0
                    out.append(Impulse(((cx + ux) * wx, (cy + uy) * wy, (cz + uz) * wz), s))
    return out
