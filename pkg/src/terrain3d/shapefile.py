"""Polygon geometry from ESRI shapefile .shp main files.

Only the geometry file is read (no .dbf/.shx); only polygon (type 5) and
null (type 0) records are accepted. Point-in-polygon uses the even-odd rule
over all rings combined, so holes fall out automatically regardless of
winding, and boundary points count as inside.
"""

from __future__ import annotations

import struct
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import FormatError, UnsupportedShapeType
from .grid import GeoBounds

SHAPE_NULL = 0
SHAPE_POLYGON = 5


@dataclass(frozen=True)
class Ring:
    """Closed vertex loop; first point equals the last exactly."""

    points: tuple[tuple[float, float], ...]

    def __post_init__(self):
        if len(self.points) < 4:
            raise ValueError(f"ring needs >= 4 points including closure, got {len(self.points)}")
        if self.points[0] != self.points[-1]:
            raise ValueError("ring is not closed (first point != last point)")


@dataclass(frozen=True)
class Polygon:
    rings: tuple[Ring, ...]
    bbox: GeoBounds

    def __post_init__(self):
        if not self.rings:
            raise ValueError("polygon needs at least one ring")


def _bbox_of_rings(rings) -> GeoBounds:
    xs = [p[0] for ring in rings for p in ring.points]
    ys = [p[1] for ring in rings for p in ring.points]
    west, east = min(xs), max(xs)
    south, north = min(ys), max(ys)
    # degenerate polygons still need a valid box
    eps = 1e-12
    if west == east:
        east = west + eps
    if south == north:
        north = south + eps
    return GeoBounds(west=west, east=east, south=south, north=north)


def read_shp(data: bytes) -> list[Polygon]:
    """Parse all polygon records from a .shp main file."""
    if len(data) < 100:
        raise FormatError(f"file too short for a shapefile header ({len(data)} bytes)")
    (file_code,) = struct.unpack(">i", data[0:4])
    if file_code != 9994:
        raise FormatError(f"bad file code {file_code}, expected 9994")
    (shape_type,) = struct.unpack("<i", data[32:36])
    if shape_type not in (SHAPE_NULL, SHAPE_POLYGON):
        raise UnsupportedShapeType(
            f"shape type {shape_type} not supported (only polygon=5 and null=0)"
        )

    polygons: list[Polygon] = []
    offset = 100
    while offset < len(data):
        if offset + 8 > len(data):
            raise FormatError(f"truncated record header at byte {offset}")
        record_number, content_words = struct.unpack(">ii", data[offset : offset + 8])
        offset += 8
        content = data[offset : offset + content_words * 2]
        if len(content) != content_words * 2:
            raise FormatError(f"truncated record {record_number}")
        offset += content_words * 2
        poly = _parse_record(record_number, content)
        if poly is not None:
            polygons.append(poly)
    return polygons


def _parse_record(record_number: int, content: bytes) -> Polygon | None:
    if len(content) < 4:
        raise FormatError(f"record {record_number}: content too short")
    (shape_type,) = struct.unpack("<i", content[0:4])
    if shape_type == SHAPE_NULL:
        return None
    if shape_type != SHAPE_POLYGON:
        raise UnsupportedShapeType(
            f"record {record_number}: shape type {shape_type} not supported"
        )
    if len(content) < 44:
        raise FormatError(f"record {record_number}: truncated polygon header")
    num_parts, num_points = struct.unpack("<ii", content[36:44])
    if num_parts < 1 or num_points < 0:
        raise FormatError(f"record {record_number}: bad part/point counts")
    need = 44 + 4 * num_parts + 16 * num_points
    if len(content) < need:
        raise FormatError(f"record {record_number}: truncated geometry")
    parts = struct.unpack(f"<{num_parts}i", content[44 : 44 + 4 * num_parts])
    pts_off = 44 + 4 * num_parts
    coords = np.frombuffer(content, dtype="<f8", count=2 * num_points, offset=pts_off)
    coords = coords.reshape(num_points, 2)
    if not np.isfinite(coords).all():
        raise FormatError(f"record {record_number}: non-finite coordinate")

    rings = []
    boundaries = list(parts) + [num_points]
    for k in range(num_parts):
        start, end = boundaries[k], boundaries[k + 1]
        if not (0 <= start < end <= num_points):
            raise FormatError(f"record {record_number}: bad part offsets")
        pts = [tuple(map(float, xy)) for xy in coords[start:end]]
        if pts[0] != pts[-1]:
            warnings.warn(
                f"record {record_number} ring {k} not closed; closing it",
                stacklevel=3,
            )
            pts.append(pts[0])
        if len(pts) < 4:
            raise FormatError(f"record {record_number} ring {k}: fewer than 3 distinct points")
        rings.append(Ring(points=tuple(pts)))
    return Polygon(rings=tuple(rings), bbox=_bbox_of_rings(rings))


def _on_segment(px, py, ax, ay, bx, by) -> bool:
    cross = (bx - ax) * (py - ay) - (by - ay) * (px - ax)
    if cross != 0.0:
        return False
    return min(ax, bx) <= px <= max(ax, bx) and min(ay, by) <= py <= max(ay, by)


def point_in_polygon(poly: Polygon, p: tuple[float, float]) -> bool:
    """Even-odd test across all rings; boundary points count as inside."""
    px, py = p
    b = poly.bbox
    if not (b.west <= px <= b.east and b.south <= py <= b.north):
        return False
    inside = False
    for ring in poly.rings:
        pts = ring.points
        for k in range(len(pts) - 1):
            ax, ay = pts[k]
            bx, by = pts[k + 1]
            if _on_segment(px, py, ax, ay, bx, by):
                return True
            # half-open rule: count edges crossing the horizontal ray rightward
            if (ay > py) != (by > py):
                x_cross = ax + (py - ay) * (bx - ax) / (by - ay)
                if x_cross > px:
                    inside = not inside
    return inside


def ring_signed_area(ring: Ring) -> float:
    """Shoelace area in square degrees; positive for counter-clockwise order."""
    pts = ring.points
    acc = 0.0
    for k in range(len(pts) - 1):
        ax, ay = pts[k]
        bx, by = pts[k + 1]
        acc += ax * by - bx * ay
    return acc / 2.0


def points_in_polygons(
    polys, lons: np.ndarray, lats: np.ndarray
) -> np.ndarray:
    """Vectorized union membership for a lattice of query points.

    lons (length n) and lats (length m) describe a grid; returns an m x n
    boolean matrix, true where the node is inside (or on the boundary of)
    any polygon. Matches point_in_polygon node-for-node.
    """
    m, n = len(lats), len(lons)
    lon_grid, lat_grid = np.meshgrid(lons, lats)
    result = np.zeros((m, n), dtype=bool)
    for poly in polys:
        b = poly.bbox
        candidate = (
            (lon_grid >= b.west)
            & (lon_grid <= b.east)
            & (lat_grid >= b.south)
            & (lat_grid <= b.north)
        )
        if not candidate.any():
            continue
        px = lon_grid[candidate]
        py = lat_grid[candidate]
        inside = np.zeros(px.shape, dtype=bool)
        boundary = np.zeros(px.shape, dtype=bool)
        for ring in poly.rings:
            pts = np.asarray(ring.points)
            ax, ay = pts[:-1, 0], pts[:-1, 1]
            bx, by = pts[1:, 0], pts[1:, 1]
            for k in range(len(ax)):
                cross = (bx[k] - ax[k]) * (py - ay[k]) - (by[k] - ay[k]) * (px - ax[k])
                on = (
                    (cross == 0.0)
                    & (px >= min(ax[k], bx[k]))
                    & (px <= max(ax[k], bx[k]))
                    & (py >= min(ay[k], by[k]))
                    & (py <= max(ay[k], by[k]))
                )
                boundary |= on
                crosses = (ay[k] > py) != (by[k] > py)
                if crosses.any():
                    with np.errstate(divide="ignore", invalid="ignore"):
                        x_cross = ax[k] + (py - ay[k]) * (bx[k] - ax[k]) / (by[k] - ay[k])
                    inside ^= crosses & (x_cross > px)
        keep = np.zeros((m, n), dtype=bool)
        keep[candidate] = inside | boundary
        result |= keep
    return result
