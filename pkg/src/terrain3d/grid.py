"""Core elevation-grid model: georeferenced bounds, grid container, stats.

Grids are node-registered: the value at matrix index (0, 0) sits exactly at
the (west, north) corner and (m-1, n-1) at (east, south), so adjacent tiles
share an edge line of samples. Row 0 is the northernmost row everywhere in
this package; format codecs convert on the way in and out.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

DEFAULT_NODATA = -32767.0

METERS_PER_FOOT = 0.3048

# mean meridian arc length of one degree; used to relate horizontal
# extents in degrees to vertical distances in meters
METERS_PER_DEGREE = 111320.0


@dataclass(frozen=True)
class GeoBounds:
    """Geographic extent in decimal degrees (west/east lon, south/north lat)."""

    west: float
    east: float
    south: float
    north: float

    def __post_init__(self):
        for name in ("west", "east", "south", "north"):
            v = getattr(self, name)
            if not np.isfinite(v):
                raise ValueError(f"bounds {name} must be finite, got {v!r}")
        if not self.west < self.east:
            raise ValueError(f"west ({self.west}) must be < east ({self.east})")
        if not self.south < self.north:
            raise ValueError(f"south ({self.south}) must be < north ({self.north})")
        if abs(self.south) > 90 or abs(self.north) > 90:
            raise ValueError("latitudes must lie in [-90, 90]")
        for lon in (self.west, self.east):
            if not (-180.0 <= lon < 360.0):
                raise ValueError(f"longitude {lon} outside [-180, 360)")

    @property
    def lon_extent(self) -> float:
        return self.east - self.west

    @property
    def lat_extent(self) -> float:
        return self.north - self.south


@dataclass(frozen=True)
class ElevationGrid:
    """Node-registered elevation matrix in meters with a nodata sentinel.

    values[0, 0] is the northwest node, values[m-1, n-1] the southeast node.
    Every cell is either finite or exactly equal to `nodata`.
    """

    values: np.ndarray
    bounds: GeoBounds
    nodata: float = DEFAULT_NODATA

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=np.float64)
        if vals.ndim != 2 or vals.shape[0] < 1 or vals.shape[1] < 1:
            raise ValueError(f"values must be a 2-D matrix, got shape {vals.shape}")
        bad = ~np.isfinite(vals) & ~(vals == self.nodata)
        if bad.any():
            i, j = np.argwhere(bad)[0]
            raise ValueError(f"non-finite, non-nodata value at ({i}, {j})")
        vals.flags.writeable = False
        object.__setattr__(self, "values", vals)

    @property
    def m(self) -> int:
        return self.values.shape[0]

    @property
    def n(self) -> int:
        return self.values.shape[1]

    @property
    def lon_spacing(self) -> float:
        if self.n < 2:
            raise ValueError("spacing undefined for a single-column grid")
        return self.bounds.lon_extent / (self.n - 1)

    @property
    def lat_spacing(self) -> float:
        if self.m < 2:
            raise ValueError("spacing undefined for a single-row grid")
        return self.bounds.lat_extent / (self.m - 1)

    def valid_mask(self) -> np.ndarray:
        return self.values != self.nodata

    def node_lons(self) -> np.ndarray:
        """Longitudes of the n node columns, west to east."""
        return np.linspace(self.bounds.west, self.bounds.east, self.n)

    def node_lats(self) -> np.ndarray:
        """Latitudes of the m node rows, north to south."""
        return np.linspace(self.bounds.north, self.bounds.south, self.m)


@dataclass(frozen=True)
class GridStats:
    """Aggregate elevation statistics over the valid (non-nodata) cells."""

    min: Optional[float]
    max: Optional[float]
    mean: Optional[float]
    valid_count: int
    nodata_count: int

    @property
    def empty(self) -> bool:
        return self.valid_count == 0


def node_position(grid: ElevationGrid, i: int, j: int) -> tuple[float, float]:
    """Geographic (lon, lat) of node (i, j).

    Linear in both indices: lon = west + j*dx, lat = north - i*dy.
    Requires m, n >= 2 so spacing is defined.
    """
    if grid.m < 2 or grid.n < 2:
        raise ValueError("spacing undefined: grid must be at least 2x2")
    if not (0 <= i < grid.m and 0 <= j < grid.n):
        raise IndexError(f"node ({i}, {j}) outside {grid.m}x{grid.n} grid")
    b = grid.bounds
    lon = b.west + j * (b.east - b.west) / (grid.n - 1)
    lat = b.north - i * (b.north - b.south) / (grid.m - 1)
    return lon, lat


def stats(grid: ElevationGrid) -> GridStats:
    valid = grid.valid_mask()
    nvalid = int(valid.sum())
    if nvalid == 0:
        return GridStats(None, None, None, 0, grid.m * grid.n)
    vals = grid.values[valid]
    return GridStats(
        min=float(vals.min()),
        max=float(vals.max()),
        mean=float(vals.mean()),
        valid_count=nvalid,
        nodata_count=grid.m * grid.n - nvalid,
    )


def meters_to_feet(z: float, nodata: Optional[float] = None) -> float:
    """Convert meters to international feet; the nodata sentinel passes through."""
    if nodata is not None and z == nodata:
        return z
    return z / METERS_PER_FOOT


def feet_to_meters(z: float, nodata: Optional[float] = None) -> float:
    if nodata is not None and z == nodata:
        return z
    return z * METERS_PER_FOOT
