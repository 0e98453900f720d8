"""Command-line pipeline: info | mosaic | crop | mesh | render.

Exit codes are stable: 0 success, 2 usage or unknown input, 3 parse error,
4 mosaic error, 5 empty result. Diagnostics go to stderr; stdout carries
reports only.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import asciigrid, dted
from .crop import crop_to_polygon
from .errors import (AdjacencyError, EmptyMeshError, FormatError, LayoutError,
                     RangeError, SeamError, ShapeError, TerrainError)
from .grid import ElevationGrid, GeoBounds, stats
from .mosaic import EdgePolicy, mosaic_tiles
from .plyio import export_ply
from .render import Camera, render_surface, write_png
from .shapefile import read_shp
from .surface import (ColorRamp, RampKind, ShadingMode, build_surface,
                      colorize, triangulate)

EXIT_USAGE = 2
EXIT_PARSE = 3
EXIT_MOSAIC = 4
EXIT_EMPTY = 5

_DTED_EXTENSIONS = {".dt0", ".dt1", ".dt2", ".dted"}


class UsageError(Exception):
    pass


def _load_grid(path: str) -> ElevationGrid:
    p = Path(path)
    ext = p.suffix.lower()
    if ext not in _DTED_EXTENSIONS | {".asc"}:
        raise UsageError(f"unknown input extension {ext!r} for {path}")
    if not p.is_file():
        raise UsageError(f"no such file: {path}")
    if ext == ".asc":
        return asciigrid.read_asciigrid(p.read_text())
    return dted.read_dted(p.read_bytes())


def _save_grid(grid: ElevationGrid, path: str) -> None:
    p = Path(path)
    ext = p.suffix.lower()
    if ext == ".asc":
        p.write_text(asciigrid.write_asciigrid(grid))
    elif ext in _DTED_EXTENSIONS:
        p.write_bytes(dted.write_dted(grid))
    else:
        raise UsageError(f"unknown output extension {ext!r} for {path}")


def format_dms(deg: float, kind: str) -> str:
    """'76° 12' 27.3885" E' style degree-minute-second text."""
    hemi = {"lon": ("E", "W"), "lat": ("N", "S")}[kind][deg < 0]
    total = abs(deg)
    d = int(total)
    rem = (total - d) * 60.0
    m = int(rem)
    s = (rem - m) * 60.0
    if round(s, 4) >= 60.0:  # carry from second rounding
        s = 0.0
        m += 1
        if m == 60:
            m = 0
            d += 1
    return f"{d}° {m}' {s:.4f}\" {hemi}"


def _bounds_report(bounds: GeoBounds) -> list[str]:
    return [
        f"UPPER LEFT X={bounds.west:.10f}",
        f"UPPER LEFT Y={bounds.north:.10f}",
        f"LOWER RIGHT X={bounds.east:.10f}",
        f"LOWER RIGHT Y={bounds.south:.10f}",
        f"WEST LONGITUDE={format_dms(bounds.west, 'lon')}",
        f"NORTH LATITUDE={format_dms(bounds.north, 'lat')}",
        f"EAST LONGITUDE={format_dms(bounds.east, 'lon')}",
        f"SOUTH LATITUDE={format_dms(bounds.south, 'lat')}",
    ]


def cmd_info(args) -> int:
    ext = Path(args.path).suffix.lower()
    if ext == ".shp":
        if not Path(args.path).is_file():
            raise UsageError(f"no such file: {args.path}")
        polys = read_shp(Path(args.path).read_bytes())
        print(f"POLYGONS={len(polys)}")
        for k, poly in enumerate(polys):
            npts = sum(len(r.points) for r in poly.rings)
            print(f"POLYGON {k}: rings={len(poly.rings)} points={npts}")
            for line in _bounds_report(poly.bbox):
                print(f"  {line}")
        return 0

    grid = _load_grid(args.path)
    print(f"SIZE={grid.m} x {grid.n}")
    for line in _bounds_report(grid.bounds):
        print(line)
    st = stats(grid)
    if st.empty:
        print("ELEVATION=empty (no valid cells)")
    else:
        print(f"MIN ELEVATION={st.min:g} m")
        print(f"MAX ELEVATION={st.max:g} m")
        print(f"MEAN ELEVATION={st.mean:g} m")
    print(f"VALID CELLS={st.valid_count}")
    print(f"NODATA CELLS={st.nodata_count}")
    return 0


def cmd_mosaic(args) -> int:
    tiles = [_load_grid(p) for p in args.inputs]
    policy = EdgePolicy(args.policy)
    merged = mosaic_tiles(tiles, policy)
    _save_grid(merged, args.output)
    print(f"wrote {merged.m} x {merged.n} grid to {args.output}")
    return 0


def cmd_crop(args) -> int:
    grid = _load_grid(args.grid)
    shape_path = Path(args.shape)
    if shape_path.suffix.lower() != ".shp":
        raise UsageError(f"--shape expects a .shp file, got {args.shape}")
    if not shape_path.is_file():
        raise UsageError(f"no such file: {args.shape}")
    polys = read_shp(shape_path.read_bytes())
    cropped = crop_to_polygon(grid, polys, trim=not args.no_trim)
    if stats(cropped).valid_count == 0:
        print("empty crop: no grid node falls inside the polygons", file=sys.stderr)
        return EXIT_EMPTY
    _save_grid(cropped, args.output)
    print(f"wrote {cropped.m} x {cropped.n} grid to {args.output}")
    return 0


def _build_mesh(args, grid: ElevationGrid):
    surface = build_surface(grid, unit=args.unit)
    zmin, zmax = args.zmin, args.zmax
    if zmin is None or zmax is None:
        if args.unit == "feet":
            d_lo, d_hi = 0.0, 3000.0
        else:
            zvals = surface.Z[surface.valid]
            if zvals.size:
                d_lo, d_hi = float(zvals.min()), float(zvals.max())
            else:
                d_lo, d_hi = 0.0, 1.0
            if d_lo == d_hi:
                d_hi = d_lo + 1.0
        zmin = d_lo if zmin is None else zmin
        zmax = d_hi if zmax is None else zmax
    if not zmin < zmax:
        raise UsageError(f"--zmin ({zmin}) must be < --zmax ({zmax})")
    ramp = ColorRamp(kind=RampKind(args.ramp), z_min=zmin, z_max=zmax)
    mode = ShadingMode(args.shading)
    colors = colorize(surface, ramp, mode)
    mesh = triangulate(surface, colors, mode, vertical_exaggeration=args.ve)
    return surface, mesh


def _add_mesh_flags(sub) -> None:
    sub.add_argument("--ramp", choices=["gray", "hsv", "atlas"], default="gray")
    sub.add_argument("--shading", choices=["flat", "interp"], default="flat")
    sub.add_argument("--unit", choices=["feet", "meters"], default="feet")
    sub.add_argument("--zmin", type=float, default=None)
    sub.add_argument("--zmax", type=float, default=None)
    sub.add_argument("--ve", type=float, default=1.0,
                     help="vertical exaggeration factor")


def cmd_mesh(args) -> int:
    grid = _load_grid(args.grid)
    _, mesh = _build_mesh(args, grid)
    b = grid.bounds
    comment = (f"bounds west={b.west!r} east={b.east!r} "
               f"south={b.south!r} north={b.north!r} unit={args.unit}")
    Path(args.output).write_bytes(export_ply(mesh, comment=comment))
    print(f"wrote {len(mesh.vertices)} vertices, "
          f"{len(mesh.triangles)} triangles to {args.output}")
    return 0


def _parse_size(text: str) -> tuple[int, int]:
    try:
        w, h = text.lower().split("x")
        width, height = int(w), int(h)
    except ValueError:
        raise UsageError(f"--size expects WxH, got {text!r}")
    if width < 1 or height < 1:
        raise UsageError(f"--size dimensions must be positive, got {text!r}")
    return width, height


def cmd_render(args) -> int:
    grid = _load_grid(args.grid)
    surface, mesh = _build_mesh(args, grid)
    width, height = _parse_size(args.size)
    camera = Camera(azimuth=args.az, elevation=args.el, zoom=args.zoom)
    image = render_surface(mesh, camera, width, height)
    out = Path(args.output)
    out.write_bytes(write_png(image))

    zvals = surface.Z[surface.valid]
    sidecar = out.with_suffix(".txt")
    lines = _bounds_report(grid.bounds) + [
        f"MIN ELEVATION={zvals.min():g} {args.unit}",
        f"MAX ELEVATION={zvals.max():g} {args.unit}",
        f"AZIMUTH={args.az:g}",
        f"ELEVATION ANGLE={args.el:g}",
    ]
    sidecar.write_text("\n".join(lines) + "\n")
    print(f"wrote {width}x{height} image to {out} (axis report: {sidecar})")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="terrain3d",
        description="DEM tiles to cropped, colored 3D terrain meshes and renders.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("info", help="describe a DEM or shapefile")
    p.add_argument("path")
    p.set_defaults(func=cmd_info)

    p = sub.add_parser("mosaic", help="concatenate tiles into one grid")
    p.add_argument("inputs", nargs="+")
    p.add_argument("--policy", choices=[e.value for e in EdgePolicy],
                   default="strict")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_mosaic)

    p = sub.add_parser("crop", help="mask a grid to a shapefile polygon")
    p.add_argument("grid")
    p.add_argument("--shape", required=True)
    p.add_argument("--no-trim", action="store_true",
                   help="keep the full extent instead of trimming to the polygon bbox")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_crop)

    p = sub.add_parser("mesh", help="export a colored surface mesh as PLY")
    p.add_argument("grid")
    _add_mesh_flags(p)
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_mesh)

    p = sub.add_parser("render", help="render the surface to a PNG")
    p.add_argument("grid")
    _add_mesh_flags(p)
    p.add_argument("--az", type=float, default=0.0)
    p.add_argument("--el", type=float, default=70.0)
    p.add_argument("--size", default="800x600")
    p.add_argument("--zoom", type=float, default=1.0)
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_render)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (LayoutError, SeamError, AdjacencyError, ShapeError) as exc:
        print(f"mosaic error: {exc}", file=sys.stderr)
        return EXIT_MOSAIC
    except EmptyMeshError as exc:
        print(f"empty result: {exc}", file=sys.stderr)
        return EXIT_EMPTY
    except (FormatError, RangeError) as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except TerrainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
