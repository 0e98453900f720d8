"""Colored parametric surface construction and triangulation.

A grid becomes X/Y/Z matrices over integer indices (i, j), gets a color
matrix C from one of three elevation ramps under flat or interpolated
shading, and is split into an indexed triangle mesh (each quad patch cut
along its (i,j)-(i+1,j+1) diagonal).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import EmptyMeshError
from .grid import METERS_PER_DEGREE, METERS_PER_FOOT, ElevationGrid


class RampKind(enum.Enum):
    GRAY = "gray"
    HSV = "hsv"
    ATLAS = "atlas"


class ShadingMode(enum.Enum):
    FLAT = "flat"
    INTERPOLATED = "interp"


# hypsometric control points: forest green lowlands through khaki and
# sienna to gray rock and white peaks
_ATLAS_STOPS = (0.00, 0.30, 0.60, 0.85, 1.00)
_ATLAS_COLORS = (
    (34, 139, 34),
    (240, 230, 140),
    (205, 133, 63),
    (139, 137, 137),
    (255, 255, 255),
)


@dataclass(frozen=True)
class ColorRamp:
    kind: RampKind
    z_min: float
    z_max: float

    def __post_init__(self):
        if not self.z_min < self.z_max:
            raise ValueError(f"z_min ({self.z_min}) must be < z_max ({self.z_max})")


@dataclass(frozen=True)
class ParametricSurface:
    """X/Y in degrees, Z in the chosen vertical unit, valid flags per node."""

    X: np.ndarray
    Y: np.ndarray
    Z: np.ndarray
    valid: np.ndarray
    vertical_unit: str  # "meters" or "feet"
    bounds: object  # GeoBounds of the source grid

    @property
    def shape(self) -> tuple[int, int]:
        return self.Z.shape


@dataclass
class TriangleMesh:
    vertices: np.ndarray        # (V, 3) model-space coordinates
    geo_vertices: np.ndarray    # (V, 3) original (lon, lat, elevation)
    triangles: np.ndarray       # (T, 3) vertex indices
    colors: np.ndarray          # (V, 3) per-vertex or (T, 3) per-triangle RGB8
    mode: ShadingMode


def build_surface(grid: ElevationGrid, unit: str = "feet") -> ParametricSurface:
    if unit not in ("meters", "feet"):
        raise ValueError(f"unknown vertical unit {unit!r}")
    if grid.m < 2 or grid.n < 2:
        raise ValueError("surface needs at least a 2x2 grid")
    X, Y = np.meshgrid(grid.node_lons(), grid.node_lats())
    valid = grid.valid_mask()
    Z = np.where(valid, grid.values, 0.0)
    if unit == "feet":
        Z = Z / METERS_PER_FOOT
    return ParametricSurface(X=X, Y=Y, Z=Z, valid=valid,
                             vertical_unit=unit, bounds=grid.bounds)


def normalize_z(z, ramp: ColorRamp):
    """Clamp-normalized position of z within the ramp's [z_min, z_max]."""
    t = (z - ramp.z_min) / (ramp.z_max - ramp.z_min)
    return np.clip(t, 0.0, 1.0)


def _round_channel(x: float) -> int:
    return int(math.floor(x + 0.5))


def hsv_to_rgb(h: float, s: float, v: float) -> tuple[int, int, int]:
    """Standard HSV sector conversion; h in degrees [0, 360)."""
    c = v * s
    hp = (h % 360.0) / 60.0
    x = c * (1.0 - abs(hp % 2.0 - 1.0))
    sector = int(hp)
    r, g, b = [
        (c, x, 0.0), (x, c, 0.0), (0.0, c, x),
        (0.0, x, c), (x, 0.0, c), (c, 0.0, x),
    ][sector]
    m = v - c
    return (_round_channel(255 * (r + m)),
            _round_channel(255 * (g + m)),
            _round_channel(255 * (b + m)))


def ramp_color(t: float, kind: RampKind) -> tuple[int, int, int]:
    """RGB8 color at normalized elevation t."""
    if not 0.0 <= t <= 1.0:
        raise ValueError(f"t={t} outside [0, 1]; callers must clamp")
    if kind is RampKind.GRAY:
        g = _round_channel(255 * t)
        return (g, g, g)
    if kind is RampKind.HSV:
        return hsv_to_rgb(240.0 * (1.0 - t), 1.0, 1.0)
    # piecewise-linear hypsometric table
    for k in range(len(_ATLAS_STOPS) - 1):
        t0, t1 = _ATLAS_STOPS[k], _ATLAS_STOPS[k + 1]
        if t <= t1:
            f = (t - t0) / (t1 - t0)
            c0, c1 = _ATLAS_COLORS[k], _ATLAS_COLORS[k + 1]
            return tuple(_round_channel(a + f * (b - a)) for a, b in zip(c0, c1))
    return _ATLAS_COLORS[-1]


def _ramp_array(t: np.ndarray, kind: RampKind) -> np.ndarray:
    """Vectorized ramp_color; t already clamped to [0, 1]."""
    t = np.asarray(t, dtype=np.float64)
    if kind is RampKind.GRAY:
        g = np.floor(255.0 * t + 0.5)
        rgb = np.stack([g, g, g], axis=-1)
    elif kind is RampKind.HSV:
        hp = (240.0 * (1.0 - t)) / 60.0
        x = 1.0 - np.abs(hp % 2.0 - 1.0)
        sector = np.minimum(hp.astype(np.int64), 5)
        zeros = np.zeros_like(t)
        ones = np.ones_like(t)
        table = np.array([  # per-sector (r, g, b) in {0, x, 1}
            [2, 1, 0], [1, 2, 0], [0, 2, 1], [0, 1, 2], [1, 0, 2], [2, 0, 1],
        ])
        comps = np.stack([zeros, x, ones], axis=0)
        idx = table[sector]  # (..., 3) selector into comps
        rgb = np.take_along_axis(
            np.moveaxis(comps, 0, -1), idx, axis=-1
        )
        rgb = np.floor(255.0 * rgb + 0.5)
    else:
        channels = [np.interp(t, _ATLAS_STOPS, [c[k] for c in _ATLAS_COLORS])
                    for k in range(3)]
        rgb = np.floor(np.stack(channels, axis=-1) + 0.5)
    return rgb.astype(np.uint8)


def colorize(surface: ParametricSurface, ramp: ColorRamp,
             mode: ShadingMode) -> np.ndarray:
    """Color matrix C: m x n x 3 (interpolated) or (m-1) x (n-1) x 3 (flat).

    Flat patches take their color from the patch's top-left vertex.
    """
    m, n = surface.shape
    if mode is ShadingMode.INTERPOLATED:
        src = surface.Z
    else:
        src = surface.Z[: m - 1, : n - 1]
    return _ramp_array(normalize_z(src, ramp), ramp.kind)


def triangulate(surface: ParametricSurface, C: np.ndarray, mode: ShadingMode,
                vertical_exaggeration: float = 1.0) -> TriangleMesh:
    """Split each fully-valid quad patch into two triangles.

    Model coordinates: x and y normalized to [0, 1] over the bounds; z
    scaled so its full data range spans ve * (z range) / max(lon, lat extent),
    with the extent expressed in the surface's vertical unit so the model
    keeps true terrain proportions at ve = 1.
    All triangles wind counter-clockwise seen from +z.
    """
    m, n = surface.shape
    valid = surface.valid
    patch_ok = valid[:-1, :-1] & valid[:-1, 1:] & valid[1:, :-1] & valid[1:, 1:]
    if not patch_ok.any():
        raise EmptyMeshError("no quad patch has four valid corners")

    b = surface.bounds
    zvals = surface.Z[valid]
    z_lo, z_hi = float(zvals.min()), float(zvals.max())
    max_extent = max(b.lon_extent, b.lat_extent) * METERS_PER_DEGREE
    if surface.vertical_unit == "feet":
        max_extent /= METERS_PER_FOOT
    z_scale = vertical_exaggeration / max_extent if z_hi > z_lo else 0.0

    # a node is emitted iff some surviving patch references it; vertex
    # indices follow row-major source order
    used = np.zeros((m, n), dtype=bool)
    used[:-1, :-1] |= patch_ok
    used[:-1, 1:] |= patch_ok
    used[1:, :-1] |= patch_ok
    used[1:, 1:] |= patch_ok
    vert_index = np.full((m, n), -1, dtype=np.int64)
    vert_index[used] = np.arange(int(used.sum()))

    x = (surface.X[used] - b.west) / b.lon_extent
    y = (surface.Y[used] - b.south) / b.lat_extent
    z = (surface.Z[used] - z_lo) * z_scale
    vertices = np.stack([x, y, z], axis=1)
    geo = np.stack([surface.X[used], surface.Y[used], surface.Z[used]], axis=1)

    pi, pj = np.nonzero(patch_ok)
    a = vert_index[pi, pj]
    right = vert_index[pi, pj + 1]
    below = vert_index[pi + 1, pj]
    diag = vert_index[pi + 1, pj + 1]
    # split along the (i,j)-(i+1,j+1) diagonal, both halves CCW from above
    triangles = np.empty((2 * len(pi), 3), dtype=np.int64)
    triangles[0::2] = np.stack([a, below, diag], axis=1)
    triangles[1::2] = np.stack([a, diag, right], axis=1)

    if mode is ShadingMode.INTERPOLATED:
        colors = C[used]
    else:
        colors = np.repeat(C[pi, pj], 2, axis=0)
    return TriangleMesh(
        vertices=vertices,
        geo_vertices=geo,
        triangles=triangles,
        colors=np.ascontiguousarray(colors, dtype=np.uint8),
        mode=mode,
    )
