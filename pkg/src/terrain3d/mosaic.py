"""Tile concatenation with redundant-edge reconciliation.

Adjacent node-registered tiles share one edge line of samples ("redundant
records"). Concatenation detects the overlap geometrically from bounds
(overlap of 0 or 1 lines) and reconciles the shared line per EdgePolicy.
"""

from __future__ import annotations

import enum

import numpy as np

from .errors import AdjacencyError, LayoutError, SeamError, ShapeError
from .grid import ElevationGrid, GeoBounds


class EdgePolicy(enum.Enum):
    STRICT = "strict"
    PREFER_FIRST = "prefer-first"
    AVERAGE = "average"


def _reconcile(first: np.ndarray, second: np.ndarray, policy: EdgePolicy,
               nodata: float, axis_name: str) -> np.ndarray:
    """Merge the two copies of a shared edge line into one."""
    a_nod = first == nodata
    b_nod = second == nodata
    if policy is EdgePolicy.STRICT:
        comparable = ~a_nod & ~b_nod
        mismatch = comparable & (first != second)
        if mismatch.any():
            idx = int(np.argwhere(mismatch)[0][0])
            raise SeamError(
                f"shared edge disagrees at {axis_name} {idx}: "
                f"{first[idx]} vs {second[idx]}"
            )
    if policy is EdgePolicy.AVERAGE:
        merged = np.where(a_nod & b_nod, nodata,
                          np.where(a_nod, second,
                                   np.where(b_nod, first, (first + second) / 2.0)))
        return merged
    # STRICT (post-check) and PREFER_FIRST both keep the first tile's line,
    # except where it is nodata and the second has data
    return np.where(first == nodata, second, first)


def _detect_overlap(edge_a: float, edge_b: float, spacing: float, what: str) -> int:
    half = spacing / 2.0
    if abs(edge_b - edge_a) <= half:
        return 1
    if abs(edge_b - (edge_a + spacing)) <= half:
        return 0
    raise AdjacencyError(
        f"tiles are not adjacent along {what}: edges at {edge_a} and {edge_b} "
        f"with spacing {spacing}"
    )


def horzcat(left: ElevationGrid, right: ElevationGrid,
            policy: EdgePolicy = EdgePolicy.STRICT) -> ElevationGrid:
    """Concatenate a west tile and an east tile."""
    if left.m != right.m:
        raise ShapeError(f"row count mismatch: {left.m} vs {right.m}")
    spacing = left.lon_spacing
    half = spacing / 2.0
    if abs(left.bounds.north - right.bounds.north) > half or \
       abs(left.bounds.south - right.bounds.south) > half:
        raise AdjacencyError("tiles do not share north/south extents")
    if left.nodata != right.nodata:
        raise ShapeError("nodata sentinels differ between tiles")
    overlap = _detect_overlap(left.bounds.east, right.bounds.west, spacing, "longitude")

    if overlap == 1:
        seam = _reconcile(left.values[:, -1], right.values[:, 0], policy,
                          left.nodata, "row")
        values = np.hstack([left.values[:, :-1], seam[:, None], right.values[:, 1:]])
    else:
        values = np.hstack([left.values, right.values])
    bounds = GeoBounds(west=left.bounds.west, east=right.bounds.east,
                       south=left.bounds.south, north=left.bounds.north)
    return ElevationGrid(values=values, bounds=bounds, nodata=left.nodata)


def vertcat(top: ElevationGrid, bottom: ElevationGrid,
            policy: EdgePolicy = EdgePolicy.STRICT) -> ElevationGrid:
    """Concatenate a north tile and a south tile."""
    if top.n != bottom.n:
        raise ShapeError(f"column count mismatch: {top.n} vs {bottom.n}")
    spacing = top.lat_spacing
    half = spacing / 2.0
    if abs(top.bounds.west - bottom.bounds.west) > half or \
       abs(top.bounds.east - bottom.bounds.east) > half:
        raise AdjacencyError("tiles do not share west/east extents")
    if top.nodata != bottom.nodata:
        raise ShapeError("nodata sentinels differ between tiles")
    # latitude decreases downward: top's south edge meets bottom's north edge
    overlap = _detect_overlap(-top.bounds.south, -bottom.bounds.north, spacing, "latitude")

    if overlap == 1:
        seam = _reconcile(top.values[-1, :], bottom.values[0, :], policy,
                          top.nodata, "column")
        values = np.vstack([top.values[:-1, :], seam[None, :], bottom.values[1:, :]])
    else:
        values = np.vstack([top.values, bottom.values])
    bounds = GeoBounds(west=top.bounds.west, east=top.bounds.east,
                       south=bottom.bounds.south, north=top.bounds.north)
    return ElevationGrid(values=values, bounds=bounds, nodata=top.nodata)


def mosaic4(tl: ElevationGrid, tr: ElevationGrid,
            bl: ElevationGrid, br: ElevationGrid,
            policy: EdgePolicy = EdgePolicy.STRICT) -> ElevationGrid:
    """Two horizontal concatenations followed by one vertical one."""
    top = horzcat(tl, tr, policy)
    bottom = horzcat(bl, br, policy)
    return vertcat(top, bottom, policy)


class TileLayout:
    """Dense r x c arrangement of tiles inferred from their bounds."""

    def __init__(self, rows: list[list[ElevationGrid]]):
        self.rows = rows

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.rows), len(self.rows[0])

    def __getitem__(self, rc) -> ElevationGrid:
        r, c = rc
        return self.rows[r][c]


def arrange_tiles(tiles: list[ElevationGrid]) -> TileLayout:
    """Sort tiles into a dense layout by (north desc, west asc)."""
    if not tiles:
        raise LayoutError("no tiles given")
    spacing = tiles[0].lat_spacing
    for t in tiles:
        if abs(t.lat_spacing - spacing) > spacing / 2 or \
           abs(t.lon_spacing - tiles[0].lon_spacing) > tiles[0].lon_spacing / 2:
            raise LayoutError("tiles have inconsistent node spacing")
    half = spacing / 2.0

    ordered = sorted(tiles, key=lambda t: (-t.bounds.north, t.bounds.west))
    rows: list[list[ElevationGrid]] = []
    for tile in ordered:
        if rows and abs(rows[-1][0].bounds.north - tile.bounds.north) <= half:
            rows[-1].append(tile)
        else:
            rows.append([tile])

    ncols = len(rows[0])
    if any(len(r) != ncols for r in rows):
        raise LayoutError(
            f"ragged layout: row widths {[len(r) for r in rows]} cannot tile a rectangle"
        )
    for r in rows:
        for c in range(ncols):
            if abs(r[c].bounds.west - rows[0][c].bounds.west) > r[c].lon_spacing / 2:
                raise LayoutError("tiles do not align into columns")
    # validate adjacency (and reject deep overlaps) along both axes
    try:
        for row in rows:
            for c in range(ncols - 1):
                _detect_overlap(row[c].bounds.east, row[c + 1].bounds.west,
                                row[c].lon_spacing, "longitude")
        for ri in range(len(rows) - 1):
            _detect_overlap(-rows[ri][0].bounds.south, -rows[ri + 1][0].bounds.north,
                            spacing, "latitude")
    except AdjacencyError as exc:
        raise LayoutError(str(exc))
    return TileLayout(rows)


def mosaic_layout(layout: TileLayout,
                  policy: EdgePolicy = EdgePolicy.STRICT) -> ElevationGrid:
    """Concatenate an r x c layout: horzcat within rows, then vertcat."""
    strips = []
    for row in layout.rows:
        strip = row[0]
        for tile in row[1:]:
            strip = horzcat(strip, tile, policy)
        strips.append(strip)
    result = strips[0]
    for strip in strips[1:]:
        result = vertcat(result, strip, policy)
    return result


def mosaic_tiles(tiles: list[ElevationGrid],
                 policy: EdgePolicy = EdgePolicy.STRICT) -> ElevationGrid:
    return mosaic_layout(arrange_tiles(tiles), policy)
