"""Deterministic software renderer: orthographic camera, z-buffer, PNG out.

Triangles are filled at pixel centers with a top-left rule so triangles
sharing an edge paint each pixel exactly once. Depth ties go to the lower
triangle index, which makes the output independent of any banding used to
parallelize rasterization.
"""

from __future__ import annotations

import math
import struct
import zlib
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .surface import ShadingMode, TriangleMesh

WHITE = (255, 255, 255)


@dataclass(frozen=True)
class Camera:
    """Orthographic azimuth/elevation viewpoint.

    Azimuth is measured counter-clockwise about +z starting from the -y
    axis; elevation is the angle above the horizontal plane.
    """

    azimuth: float
    elevation: float
    zoom: float = 1.0
    target: Optional[tuple[float, float, float]] = None

    def __post_init__(self):
        if not -90.0 <= self.elevation <= 90.0:
            raise ValueError(f"elevation {self.elevation} outside [-90, 90]")
        if not self.zoom > 0:
            raise ValueError("zoom must be positive")


@dataclass
class Image:
    width: int
    height: int
    pixels: np.ndarray  # (height, width, 3) uint8

    def tobytes(self) -> bytes:
        return self.pixels.tobytes()


@dataclass
class ProjectedMesh:
    """Screen-space triangles with per-vertex depth, ready to rasterize."""

    xy: np.ndarray        # (V, 2) pixel coordinates
    depth: np.ndarray     # (V,) distance along the view axis (smaller = nearer)
    triangles: np.ndarray
    colors: np.ndarray
    mode: ShadingMode


def view_direction(azimuth: float, elevation: float) -> np.ndarray:
    """Unit vector from the target toward the camera."""
    az = math.radians(azimuth % 360.0)  # full turns are byte-identical
    el = math.radians(elevation)
    d = np.array([
        math.sin(az) * math.cos(el),
        -math.cos(az) * math.cos(el),
        math.sin(el),
    ])
    return d / np.linalg.norm(d)


def project(mesh: TriangleMesh, camera: Camera, width: int, height: int) -> ProjectedMesh:
    """Orthographic look-at projection fitting the mesh's bounding sphere."""
    verts = mesh.vertices
    lo = verts.min(axis=0)
    hi = verts.max(axis=0)
    center = (lo + hi) / 2.0
    radius = float(np.linalg.norm(hi - lo)) / 2.0
    if radius == 0.0:
        radius = 1.0
    target = np.asarray(camera.target) if camera.target is not None else center

    d = view_direction(camera.azimuth, camera.elevation)
    up_world = np.array([0.0, 1.0, 0.0]) if abs(camera.elevation) == 90.0 \
        else np.array([0.0, 0.0, 1.0])
    right = np.cross(up_world, d)
    right /= np.linalg.norm(right)
    up = np.cross(d, right)

    rel = verts - target
    u = rel @ right
    v = rel @ up
    depth = -(rel @ d)

    scale = camera.zoom * (min(width, height) / 2.0) / radius
    sx = width / 2.0 + u * scale
    sy = height / 2.0 - v * scale
    return ProjectedMesh(
        xy=np.stack([sx, sy], axis=1),
        depth=depth,
        triangles=mesh.triangles,
        colors=mesh.colors,
        mode=mesh.mode,
    )


def _edge_accepts_zero(ax, ay, bx, by) -> bool:
    # top-left fill rule for positive-area winding in y-down screen space
    if ay == by:
        return bx > ax
    return by < ay


def _draw_degenerate(band, zbuf, proj, ti, idx, width, row0, row1, interp):
    """Paint an edge-on (zero screen area) triangle as a thin segment."""
    pts = proj.xy[list(idx)]
    depths = proj.depth[list(idx)]
    # endpoints = the farthest pair of the three collinear vertices
    pairs = [(0, 1), (1, 2), (0, 2)]
    a, b = max(pairs, key=lambda p: np.sum((pts[p[0]] - pts[p[1]]) ** 2))
    (x0, y0), (x1, y1) = pts[a], pts[b]
    length = math.hypot(x1 - x0, y1 - y0)
    if length == 0.0:
        return
    steps = int(math.ceil(length)) * 2 + 1
    for s in range(steps + 1):
        f = s / steps
        x = x0 + f * (x1 - x0)
        y = y0 + f * (y1 - y0)
        px = int(math.floor(x))
        py = int(math.floor(y))
        if not (0 <= px < width and row0 <= py < row1):
            continue
        depth = depths[a] + f * (depths[b] - depths[a])
        if depth < zbuf[py - row0, px]:
            zbuf[py - row0, px] = depth
            if interp:
                ca = proj.colors[idx[a]].astype(np.float64)
                cb = proj.colors[idx[b]].astype(np.float64)
                band[py - row0, px] = np.floor(ca + f * (cb - ca) + 0.5).astype(np.uint8)
            else:
                band[py - row0, px] = proj.colors[ti]


def _rasterize_rows(proj: ProjectedMesh, width: int, row0: int, row1: int,
                    background: tuple[int, int, int]) -> np.ndarray:
    """Fill image rows [row0, row1) and return the band's pixel block."""
    rows = row1 - row0
    band = np.empty((rows, width, 3), dtype=np.uint8)
    band[:] = np.array(background, dtype=np.uint8)
    zbuf = np.full((rows, width), np.inf)

    xy = proj.xy
    depth = proj.depth
    interp = proj.mode is ShadingMode.INTERPOLATED
    for ti, tri in enumerate(proj.triangles):
        i0, i1, i2 = (int(k) for k in tri)
        x0, y0 = xy[i0]
        x1, y1 = xy[i1]
        x2, y2 = xy[i2]
        area = (x1 - x0) * (y2 - y0) - (y1 - y0) * (x2 - x0)
        if area == 0.0:
            # edge-on triangle: degenerates to a segment, drawn 1 pixel wide
            _draw_degenerate(band, zbuf, proj, ti, (i0, i1, i2), width,
                             row0, row1, interp)
            continue
        if area < 0.0:
            i1, i2 = i2, i1
            x1, y1, x2, y2 = x2, y2, x1, y1
            area = -area

        ix0 = max(0, math.ceil(min(x0, x1, x2) - 0.5))
        ix1 = min(width - 1, math.floor(max(x0, x1, x2) - 0.5))
        iy0 = max(row0, math.ceil(min(y0, y1, y2) - 0.5))
        iy1 = min(row1 - 1, math.floor(max(y0, y1, y2) - 0.5))
        if ix0 > ix1 or iy0 > iy1:
            continue

        px = np.arange(ix0, ix1 + 1) + 0.5
        py = (np.arange(iy0, iy1 + 1) + 0.5)[:, None]
        w0 = (x2 - x1) * (py - y1) - (y2 - y1) * (px - x1)
        w1 = (x0 - x2) * (py - y2) - (y0 - y2) * (px - x2)
        w2 = (x1 - x0) * (py - y0) - (y1 - y0) * (px - x0)
        inside = (
            ((w0 > 0) | ((w0 == 0) & _edge_accepts_zero(x1, y1, x2, y2)))
            & ((w1 > 0) | ((w1 == 0) & _edge_accepts_zero(x2, y2, x0, y0)))
            & ((w2 > 0) | ((w2 == 0) & _edge_accepts_zero(x0, y0, x1, y1)))
        )
        if not inside.any():
            continue

        pix_depth = (w0 * depth[i0] + w1 * depth[i1] + w2 * depth[i2]) / area
        zslice = zbuf[iy0 - row0 : iy1 + 1 - row0, ix0 : ix1 + 1]
        win = inside & (pix_depth < zslice)
        if not win.any():
            continue
        zslice[win] = pix_depth[win]

        bslice = band[iy0 - row0 : iy1 + 1 - row0, ix0 : ix1 + 1]
        if interp:
            c0 = proj.colors[i0].astype(np.float64)
            c1 = proj.colors[i1].astype(np.float64)
            c2 = proj.colors[i2].astype(np.float64)
            blend = (
                w0[..., None] * c0 + w1[..., None] * c1 + w2[..., None] * c2
            ) / area
            rgb = np.floor(blend + 0.5).astype(np.uint8)
            bslice[win] = rgb[win]
        else:
            bslice[win] = proj.colors[ti]
    return band


def rasterize(proj: ProjectedMesh, width: int, height: int,
              background: tuple[int, int, int] = WHITE,
              bands: int = 1, parallel: bool = False) -> Image:
    """Z-buffered fill. Output is byte-identical for any banding/parallelism."""
    if width < 1 or height < 1:
        raise ValueError("image dimensions must be positive")
    bands = max(1, min(bands, height))
    edges = np.linspace(0, height, bands + 1).astype(int)
    spans = [(int(edges[k]), int(edges[k + 1])) for k in range(bands)
             if edges[k] < edges[k + 1]]
    if parallel and len(spans) > 1:
        with ThreadPoolExecutor(max_workers=len(spans)) as pool:
            blocks = list(pool.map(
                lambda span: _rasterize_rows(proj, width, span[0], span[1], background),
                spans,
            ))
    else:
        blocks = [_rasterize_rows(proj, width, r0, r1, background) for r0, r1 in spans]
    return Image(width=width, height=height, pixels=np.vstack(blocks))


def render_surface(mesh: TriangleMesh, camera: Camera, width: int, height: int,
                   background: tuple[int, int, int] = WHITE,
                   bands: int = 1, parallel: bool = False) -> Image:
    proj = project(mesh, camera, width, height)
    return rasterize(proj, width, height, background, bands=bands, parallel=parallel)


def _chunk(tag: bytes, payload: bytes) -> bytes:
    return (
        struct.pack(">I", len(payload))
        + tag
        + payload
        + struct.pack(">I", zlib.crc32(tag + payload) & 0xFFFFFFFF)
    )


def write_png(image: Image) -> bytes:
    """Encode as PNG with a stored (uncompressed) deflate stream.

    Entirely hand-assembled so the byte stream is stable across library
    versions: zlib header 0x78 0x01, stored blocks of at most 65535 bytes,
    Adler-32 trailer.
    """
    if image.width < 1 or image.height < 1:
        raise ValueError("image dimensions must be positive")
    if image.pixels.shape != (image.height, image.width, 3):
        raise ValueError("pixel buffer shape does not match width/height")

    raw = bytearray()
    for row in image.pixels:
        raw.append(0)  # filter type None
        raw += row.tobytes()
    raw = bytes(raw)

    zstream = bytearray(b"\x78\x01")
    for off in range(0, len(raw), 65535):
        block = raw[off : off + 65535]
        final = 1 if off + 65535 >= len(raw) else 0
        zstream.append(final)
        zstream += struct.pack("<HH", len(block), len(block) ^ 0xFFFF)
        zstream += block
    zstream += struct.pack(">I", zlib.adler32(raw) & 0xFFFFFFFF)

    ihdr = struct.pack(">IIBBBBB", image.width, image.height, 8, 2, 0, 0, 0)
    return (
        bytes([137, 80, 78, 71, 13, 10, 26, 10])
        + _chunk(b"IHDR", ihdr)
        + _chunk(b"IDAT", bytes(zstream))
        + _chunk(b"IEND", b"")
    )
