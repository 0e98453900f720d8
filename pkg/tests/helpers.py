"""Shared fixture builders and independent oracles for the test suite.

The oracles here are deliberately written from first principles (winding
numbers, table-driven CRC32, brute-force index mapping) so they never share
code with the implementations they check.
"""

import math
import struct

import numpy as np

import terrain3d as t


def make_grid(values, west=0.0, south=0.0, spacing=1.0, nodata=-32767.0):
    vals = np.asarray(values, dtype=float)
    m, n = vals.shape
    # single row/column grids still need a non-degenerate bounding box
    bounds = t.GeoBounds(west, west + max(n - 1, 1) * spacing,
                         south, south + max(m - 1, 1) * spacing)
    return t.ElevationGrid(values=vals, bounds=bounds, nodata=nodata)


def write_shp_bytes(polygons, file_shape_type=5, record_shape_type=5):
    """Hand-rolled .shp writer: polygons is a list of lists of rings."""
    records = b""
    for recnum, rings in enumerate(polygons, 1):
        allpts = [p for r in rings for p in r]
        xs = [p[0] for p in allpts]
        ys = [p[1] for p in allpts]
        content = struct.pack("<i", record_shape_type)
        content += struct.pack("<4d", min(xs), min(ys), max(xs), max(ys))
        content += struct.pack("<ii", len(rings), len(allpts))
        off = 0
        for r in rings:
            content += struct.pack("<i", off)
            off += len(r)
        for r in rings:
            for x, y in r:
                content += struct.pack("<2d", x, y)
        records += struct.pack(">ii", recnum, len(content) // 2) + content
    header = struct.pack(">i", 9994) + b"\x00" * 20
    header += struct.pack(">i", (100 + len(records)) // 2)
    header += struct.pack("<i", 1000) + struct.pack("<i", file_shape_type)
    header += struct.pack("<8d", 0, 0, 0, 0, 0, 0, 0, 0)
    return header + records


def star_polygon(rng, n_vertices, center=(0.0, 0.0), radius=1.0):
    """Random simple (non-self-intersecting) ring: random radii, sorted angles."""
    cx, cy = center
    angles = np.sort(rng.uniform(0, 2 * math.pi, size=n_vertices))
    # collapse near-duplicate angles to keep edges non-degenerate
    radii = rng.uniform(0.2 * radius, radius, size=n_vertices)
    pts = [(cx + r * math.cos(a), cy + r * math.sin(a))
           for a, r in zip(angles, radii)]
    pts.append(pts[0])
    return pts


# --- winding-number oracle ------------------------------------------------

def _is_left(ax, ay, bx, by, px, py):
    return (bx - ax) * (py - ay) - (px - ax) * (by - ay)


def winding_number(ring_pts, px, py):
    wn = 0
    for k in range(len(ring_pts) - 1):
        ax, ay = ring_pts[k]
        bx, by = ring_pts[k + 1]
        if ay <= py:
            if by > py and _is_left(ax, ay, bx, by, px, py) > 0:
                wn += 1
        elif by <= py and _is_left(ax, ay, bx, by, px, py) < 0:
            wn -= 1
    return wn


def inside_by_winding(polygons, px, py):
    """Union membership: odd count of rings that wind around the point."""
    contained = 0
    for poly in polygons:
        for ring in poly.rings:
            if winding_number(ring.points, px, py) != 0:
                contained += 1
    return contained % 2 == 1


def point_near_boundary(polygons, px, py, eps=1e-9):
    for poly in polygons:
        for ring in poly.rings:
            pts = ring.points
            for k in range(len(pts) - 1):
                ax, ay = pts[k]
                bx, by = pts[k + 1]
                dx, dy = bx - ax, by - ay
                seg2 = dx * dx + dy * dy
                if seg2 == 0:
                    d2 = (px - ax) ** 2 + (py - ay) ** 2
                else:
                    u = max(0.0, min(1.0, ((px - ax) * dx + (py - ay) * dy) / seg2))
                    d2 = (px - ax - u * dx) ** 2 + (py - ay - u * dy) ** 2
                if d2 < eps * eps:
                    return True
    return False


# --- independent CRC32 ----------------------------------------------------

_CRC_TABLE = []
for _n in range(256):
    _c = _n
    for _ in range(8):
        _c = (0xEDB88320 ^ (_c >> 1)) if (_c & 1) else (_c >> 1)
    _CRC_TABLE.append(_c)


def crc32_reference(data: bytes) -> int:
    c = 0xFFFFFFFF
    for byte in data:
        c = _CRC_TABLE[(c ^ byte) & 0xFF] ^ (c >> 8)
    return c ^ 0xFFFFFFFF


def png_chunks(data: bytes):
    """Yield (tag, payload, stored_crc) for each chunk of a PNG byte string."""
    assert data[:8] == bytes([137, 80, 78, 71, 13, 10, 26, 10])
    off = 8
    while off < len(data):
        (length,) = struct.unpack(">I", data[off : off + 4])
        tag = data[off + 4 : off + 8]
        payload = data[off + 8 : off + 8 + length]
        (crc,) = struct.unpack(">I", data[off + 8 + length : off + 12 + length])
        yield tag, payload, crc
        off += 12 + length


# --- mosaic index-mapping oracle -------------------------------------------

def mosaic4_expected(tl, tr, bl, br):
    """Brute-force construction of the 2x2 mosaic by direct index placement."""
    m_top, n_left = tl.values.shape
    m_bot, n_right = bl.values.shape[0], tr.values.shape[1]
    rows = m_top + m_bot - 1
    cols = n_left + n_right - 1
    out = np.empty((rows, cols))
    for i in range(m_top):
        for j in range(n_left):
            out[i, j] = tl.values[i, j]
    for i in range(m_top):
        for j in range(n_right):
            out[i, n_left - 1 + j] = tr.values[i, j]
    for i in range(m_bot):
        for j in range(n_left):
            out[m_top - 1 + i, j] = bl.values[i, j]
    for i in range(m_bot):
        for j in range(n_right):
            out[m_top - 1 + i, n_left - 1 + j] = br.values[i, j]
    return out


def tiles_from_matrix(matrix, west, south, spacing, split_row, split_col):
    """Cut one big node-registered matrix into 4 tiles sharing edge lines."""
    matrix = np.asarray(matrix, dtype=float)
    m, n = matrix.shape
    east = west + (n - 1) * spacing
    north = south + (m - 1) * spacing
    lat_split = north - split_row * spacing
    lon_split = west + split_col * spacing

    def grid(vals, w, e, s, no):
        return t.ElevationGrid(values=vals, bounds=t.GeoBounds(w, e, s, no))

    tl = grid(matrix[: split_row + 1, : split_col + 1], west, lon_split, lat_split, north)
    tr = grid(matrix[: split_row + 1, split_col:], lon_split, east, lat_split, north)
    bl = grid(matrix[split_row:, : split_col + 1], west, lon_split, south, lat_split)
    br = grid(matrix[split_row:, split_col:], lon_split, east, south, lat_split)
    return tl, tr, bl, br
