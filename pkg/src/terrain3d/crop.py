"""Mask a grid to polygon boundaries: outside becomes nodata.

A node survives iff its own coordinate is inside (or on the boundary of)
any polygon. With trim=True, rows and columns whose nodes all fall outside
the polygons' union bounding box are removed, shrinking the bounds while
keeping node registration.
"""

from __future__ import annotations

import numpy as np

from .grid import ElevationGrid, GeoBounds
from .shapefile import Polygon, points_in_polygons


def mask(grid: ElevationGrid, polys: list[Polygon]) -> np.ndarray:
    """m x n boolean matrix, true where the node survives the crop."""
    return points_in_polygons(polys, grid.node_lons(), grid.node_lats())


def crop_to_polygon(grid: ElevationGrid, polys: list[Polygon],
                    trim: bool = False) -> ElevationGrid:
    keep = mask(grid, polys)
    values = np.where(keep, grid.values, grid.nodata)
    bounds = grid.bounds

    if trim and polys:
        west = min(p.bbox.west for p in polys)
        east = max(p.bbox.east for p in polys)
        south = min(p.bbox.south for p in polys)
        north = max(p.bbox.north for p in polys)
        lons = grid.node_lons()
        lats = grid.node_lats()
        col_keep = (lons >= west) & (lons <= east)
        row_keep = (lats >= south) & (lats <= north)
        if col_keep.sum() >= 2 and row_keep.sum() >= 2:
            j0, j1 = np.flatnonzero(col_keep)[[0, -1]]
            i0, i1 = np.flatnonzero(row_keep)[[0, -1]]
            values = values[i0 : i1 + 1, j0 : j1 + 1]
            bounds = GeoBounds(
                west=float(lons[j0]), east=float(lons[j1]),
                south=float(lats[i1]), north=float(lats[i0]),
            )
    return ElevationGrid(values=values, bounds=bounds, nodata=grid.nodata)
