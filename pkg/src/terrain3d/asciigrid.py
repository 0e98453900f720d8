"""ESRI-style ASCII grid reader/writer.

One deliberate twist on the ESRI convention: xllcorner/yllcorner name the
southwest *node* rather than a cell corner, keeping the node-registered
interpretation used everywhere else in this package. The writer emits a
canonical form (fixed key order, shortest-roundtrip numbers) so golden tests
can compare bytes.
"""

from __future__ import annotations

from .errors import FormatError
from .grid import DEFAULT_NODATA, ElevationGrid, GeoBounds

import numpy as np

_REQUIRED_KEYS = ("ncols", "nrows", "xllcorner", "yllcorner", "cellsize")

_SPACING_TOL = 1e-9


def _fmt_number(x: float) -> str:
    """Shortest decimal text that reads back to exactly x."""
    if x == int(x) and abs(x) < 1e15:
        return str(int(x))
    return repr(float(x))


def read_asciigrid(text: str) -> ElevationGrid:
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    header: dict[str, float] = {}
    data_start = 0
    for idx, line in enumerate(lines):
        parts = line.split()
        key = parts[0].lower()
        if len(parts) == 2 and key in _REQUIRED_KEYS + ("nodata_value",):
            try:
                header[key] = float(parts[1])
            except ValueError:
                raise FormatError(f"unparseable header value in {line!r}")
        else:
            data_start = idx
            break
    else:
        data_start = len(lines)

    missing = [k for k in _REQUIRED_KEYS if k not in header]
    if missing:
        raise FormatError(f"missing required header key(s): {', '.join(missing)}")

    ncols = int(header["ncols"])
    nrows = int(header["nrows"])
    if ncols < 1 or nrows < 1:
        raise FormatError("ncols and nrows must be >= 1")
    cellsize = header["cellsize"]
    if cellsize <= 0:
        raise FormatError("cellsize must be positive")
    nodata_value = header.get("nodata_value", -9999.0)

    data_lines = lines[data_start:]
    if len(data_lines) != nrows:
        raise FormatError(f"expected {nrows} data rows, found {len(data_lines)}")

    rows = []
    for r, line in enumerate(data_lines):
        tokens = line.split()
        if len(tokens) != ncols:
            raise FormatError(
                f"row {r}: expected {ncols} values, found {len(tokens)}"
            )
        try:
            rows.append([float(tok) for tok in tokens])
        except ValueError as exc:
            raise FormatError(f"row {r}: unparseable number ({exc})")

    values = np.array(rows, dtype=np.float64)
    nodata = DEFAULT_NODATA
    values[values == nodata_value] = nodata

    west = header["xllcorner"]
    south = header["yllcorner"]
    east = west + (ncols - 1) * cellsize
    north = south + (nrows - 1) * cellsize
    if ncols == 1:
        east = west + cellsize  # degenerate width: keep bounds valid
    if nrows == 1:
        north = south + cellsize
    bounds = GeoBounds(west=west, east=east, south=south, north=north)
    return ElevationGrid(values=values, bounds=bounds, nodata=nodata)


def write_asciigrid(grid: ElevationGrid) -> str:
    if grid.m < 2 or grid.n < 2:
        raise ValueError("cannot write a degenerate grid (need m, n >= 2)")
    dx = grid.lon_spacing
    dy = grid.lat_spacing
    if abs(dx - dy) > _SPACING_TOL:
        raise ValueError(
            f"anisotropic spacing (dx={dx!r}, dy={dy!r}): "
            "ASCII grid has a single cellsize, write DTED instead"
        )
    out = [
        f"ncols {grid.n}",
        f"nrows {grid.m}",
        f"xllcorner {_fmt_number(grid.bounds.west)}",
        f"yllcorner {_fmt_number(grid.bounds.south)}",
        f"cellsize {_fmt_number(dx)}",
        f"NODATA_value {_fmt_number(grid.nodata)}",
    ]
    for row in grid.values:
        out.append(" ".join(_fmt_number(v) for v in row))
    return "\n".join(out) + "\n"
