"""ASCII PLY serialization of triangle meshes.

Interpolated meshes carry red/green/blue on the vertex element; flat meshes
carry them on the face element. A comment line records the geographic
bounds and vertical unit so viewers retain provenance.
"""

from __future__ import annotations

import numpy as np

from .errors import FormatError
from .surface import ShadingMode, TriangleMesh


def _fmt_coord(v: float) -> str:
    # coordinates are nominally 32-bit floats; print via the float32 value
    return f"{np.float32(v):.9g}"


def export_ply(mesh: TriangleMesh, comment: str | None = None) -> bytes:
    if len(mesh.triangles) == 0:
        raise ValueError("refusing to export an empty mesh")
    interp = mesh.mode is ShadingMode.INTERPOLATED
    lines = [
        "ply",
        "format ascii 1.0",
    ]
    if comment:
        lines.append(f"comment {comment}")
    lines.append(f"element vertex {len(mesh.vertices)}")
    lines += ["property float x", "property float y", "property float z"]
    if interp:
        lines += ["property uchar red", "property uchar green", "property uchar blue"]
    lines.append(f"element face {len(mesh.triangles)}")
    lines.append("property list uchar int vertex_indices")
    if not interp:
        lines += ["property uchar red", "property uchar green", "property uchar blue"]
    lines.append("end_header")

    for k, (x, y, z) in enumerate(mesh.vertices):
        row = f"{_fmt_coord(x)} {_fmt_coord(y)} {_fmt_coord(z)}"
        if interp:
            r, g, b = mesh.colors[k]
            row += f" {r} {g} {b}"
        lines.append(row)
    for k, (i0, i1, i2) in enumerate(mesh.triangles):
        row = f"3 {i0} {i1} {i2}"
        if not interp:
            r, g, b = mesh.colors[k]
            row += f" {r} {g} {b}"
        lines.append(row)
    return ("\n".join(lines) + "\n").encode("ascii")


def read_ply(data: bytes) -> TriangleMesh:
    """Minimal reader for files produced by export_ply (roundtrip checks)."""
    text = data.decode("ascii")
    lines = text.splitlines()
    if not lines or lines[0] != "ply":
        raise FormatError("not a PLY file")
    nvert = nface = None
    vertex_has_color = False
    body_at = None
    current = None
    for k, line in enumerate(lines[1:], start=1):
        parts = line.split()
        if parts[:2] == ["element", "vertex"]:
            nvert = int(parts[2])
            current = "vertex"
        elif parts[:2] == ["element", "face"]:
            nface = int(parts[2])
            current = "face"
        elif parts[:2] == ["property", "uchar"] and parts[2] == "red":
            if current == "vertex":
                vertex_has_color = True
        elif line == "end_header":
            body_at = k + 1
            break
    if body_at is None or nvert is None or nface is None:
        raise FormatError("truncated PLY header")
    if len(lines) - body_at < nvert + nface:
        raise FormatError("PLY body shorter than header counts")

    verts = np.empty((nvert, 3))
    vcolors = np.zeros((nvert, 3), dtype=np.uint8)
    for k in range(nvert):
        tok = lines[body_at + k].split()
        verts[k] = [float(t) for t in tok[:3]]
        if vertex_has_color:
            vcolors[k] = [int(t) for t in tok[3:6]]
    tris = np.empty((nface, 3), dtype=np.int64)
    fcolors = np.zeros((nface, 3), dtype=np.uint8)
    for k in range(nface):
        tok = lines[body_at + nvert + k].split()
        if tok[0] != "3":
            raise FormatError(f"face {k}: only triangles supported")
        tris[k] = [int(t) for t in tok[1:4]]
        if not vertex_has_color:
            fcolors[k] = [int(t) for t in tok[4:7]]
    mode = ShadingMode.INTERPOLATED if vertex_has_color else ShadingMode.FLAT
    return TriangleMesh(
        vertices=verts,
        geo_vertices=verts.copy(),
        triangles=tris,
        colors=vcolors if vertex_has_color else fcolors,
        mode=mode,
    )
