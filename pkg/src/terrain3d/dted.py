"""DTED elevation tile reader/writer.

Layout implemented here:

  UHL  80 bytes   "UHL1", SW-corner origin, intervals, line/point counts
  DSI  648 bytes  "DSI" magic then ASCII spaces (ignored on read)
  ACC  2700 bytes "ACC" magic then ASCII spaces (ignored on read)
  then `lon_lines` column records:
    0xAA | block count (3B BE) | lon count (2B BE) | lat count (2B BE, 0)
         | lat_points x 2B BE sign-magnitude elevations
         | 4B BE unsigned byte-sum checksum over the preceding record bytes

Columns run west to east; within a column elevations run south to north.
Origins are written as DDDMMSS.SH / DDMMSS.SH (tenth-arc-second precision)
so bounds survive a roundtrip to within half a tenth of an arc-second.
"""

from __future__ import annotations

import struct

import numpy as np

from .errors import ChecksumError, FormatError, RangeError
from .grid import DEFAULT_NODATA, ElevationGrid, GeoBounds

UHL_SIZE = 80
DSI_SIZE = 648
ACC_SIZE = 2700

_TENTHS_PER_DEGREE = 36000


def decode_sign_magnitude(raw: int) -> int:
    """Decode a 16-bit DTED sign-magnitude word to signed meters."""
    magnitude = raw & 0x7FFF
    if raw & 0x8000:
        return -magnitude
    return magnitude


def encode_sign_magnitude(value: int) -> int:
    if not -32767 <= value <= 32767:
        raise RangeError(f"elevation {value} outside sign-magnitude range +/-32767")
    if value < 0:
        return 0x8000 | (-value)
    return value


def _format_angle(deg: float, positive: str, negative: str, degree_digits: int) -> bytes:
    """Zero-padded D..DMMSS.SH text, tenths of arc-seconds."""
    hemi = positive if deg >= 0 else negative
    tenths = round(abs(deg) * _TENTHS_PER_DEGREE)
    d, rem = divmod(tenths, _TENTHS_PER_DEGREE)
    m, rem = divmod(rem, 600)
    s, t = divmod(rem, 10)
    return f"{d:0{degree_digits}d}{m:02d}{s:02d}.{t}{hemi}".encode("ascii")


def _parse_angle(text: bytes) -> float:
    body, hemi = text[:-1].decode("ascii"), text[-1:].decode("ascii")
    sec_part = body[-4:]
    mm = body[-6:-4]
    dd = body[:-6]
    try:
        deg = int(dd) + int(mm) / 60.0 + float(sec_part) / 3600.0
    except ValueError:
        raise FormatError(f"unparseable origin angle {text!r}")
    if hemi in ("W", "S"):
        deg = -deg
    elif hemi not in ("E", "N"):
        raise FormatError(f"bad hemisphere {hemi!r} in origin angle")
    return deg


def write_dted(grid: ElevationGrid) -> bytes:
    """Serialize a grid to DTED bytes. Elevations are rounded to integer meters."""
    if grid.m < 2 or grid.n < 2:
        raise ValueError("cannot write a degenerate grid (need m, n >= 2)")

    vals = grid.values
    nodata_mask = ~grid.valid_mask()
    # round half away from zero, the usual DEM convention
    ivals = np.where(vals >= 0, np.floor(vals + 0.5), np.ceil(vals - 0.5)).astype(np.int64)
    ivals[nodata_mask] = -32767
    if np.abs(ivals).max() > 32767:
        bad = int(ivals[np.abs(ivals) > 32767].flat[0])
        raise RangeError(f"elevation {bad} exceeds the DTED range of +/-32767 m")

    b = grid.bounds
    lon_interval = round(grid.lon_spacing * _TENTHS_PER_DEGREE)
    lat_interval = round(grid.lat_spacing * _TENTHS_PER_DEGREE)
    if not (1 <= lon_interval <= 9999 and 1 <= lat_interval <= 9999):
        raise RangeError(
            f"node spacing ({lon_interval}, {lat_interval} tenth-arc-seconds) "
            "not representable in the 4-digit interval fields"
        )
    if grid.n > 9999 or grid.m > 9999:
        raise RangeError("line/point counts exceed the 4-digit header fields")

    uhl = bytearray(b" " * UHL_SIZE)
    uhl[0:4] = b"UHL1"
    uhl[4:14] = _format_angle(b.west, "E", "W", 3)
    uhl[14:24] = _format_angle(b.south, "N", "S", 3)
    uhl[24:28] = f"{lon_interval:04d}".encode("ascii")
    uhl[28:32] = f"{lat_interval:04d}".encode("ascii")
    uhl[32:36] = f"{grid.n:04d}".encode("ascii")
    uhl[36:40] = f"{grid.m:04d}".encode("ascii")

    dsi = bytearray(b" " * DSI_SIZE)
    dsi[0:3] = b"DSI"
    acc = bytearray(b" " * ACC_SIZE)
    acc[0:3] = b"ACC"

    out = bytearray()
    out += uhl
    out += dsi
    out += acc
    words = np.where(ivals < 0, 0x8000 | (-ivals), ivals).astype(">u2")
    for j in range(grid.n):
        record = bytearray()
        record.append(0xAA)
        record += struct.pack(">I", j)[1:]  # 3-byte block count
        record += struct.pack(">H", j)
        record += struct.pack(">H", 0)
        record += words[::-1, j].tobytes()  # south -> north
        checksum = sum(record) & 0xFFFFFFFF
        record += struct.pack(">I", checksum)
        out += record
    return bytes(out)


def read_dted(data: bytes, verify_checksums: bool = True) -> ElevationGrid:
    """Parse DTED bytes into an ElevationGrid (row 0 = north)."""
    if len(data) < UHL_SIZE:
        raise FormatError(f"file too short for a UHL header ({len(data)} bytes)")
    if data[0:4] != b"UHL1":
        raise FormatError(f"bad magic {data[0:4]!r}, expected b'UHL1'")

    west = _parse_angle(data[4:14])
    south = _parse_angle(data[14:24])
    try:
        lon_interval = int(data[24:28])
        lat_interval = int(data[28:32])
        n = int(data[32:36])
        m = int(data[36:40])
    except ValueError:
        raise FormatError("unparseable numeric field in UHL header")
    if n < 2 or m < 2:
        raise FormatError(f"line/point counts must be >= 2, got {n}x{m}")
    if lon_interval <= 0 or lat_interval <= 0:
        raise FormatError("intervals must be positive")

    record_size = 8 + 2 * m + 4
    expected = UHL_SIZE + DSI_SIZE + ACC_SIZE + n * record_size
    if len(data) != expected:
        raise FormatError(
            f"file length {len(data)} inconsistent with header "
            f"({n} columns x {m} points implies {expected})"
        )
    if data[UHL_SIZE : UHL_SIZE + 3] != b"DSI":
        raise FormatError("missing DSI block magic")
    acc_off = UHL_SIZE + DSI_SIZE
    if data[acc_off : acc_off + 3] != b"ACC":
        raise FormatError("missing ACC block magic")

    values = np.empty((m, n), dtype=np.float64)
    base = UHL_SIZE + DSI_SIZE + ACC_SIZE
    for j in range(n):
        off = base + j * record_size
        record = data[off : off + record_size]
        if record[0] != 0xAA:
            raise FormatError(f"record {j}: sentinel byte {record[0]:#04x} != 0xaa")
        if verify_checksums:
            stored = struct.unpack(">I", record[-4:])[0]
            actual = sum(record[:-4]) & 0xFFFFFFFF
            if stored != actual:
                raise ChecksumError(j, stored, actual)
        words = np.frombuffer(record, dtype=">u2", count=m, offset=8).astype(np.int64)
        decoded = np.where(words & 0x8000, -(words & 0x7FFF), words)
        values[:, j] = decoded[::-1]  # records run south -> north

    east = west + (n - 1) * lon_interval / _TENTHS_PER_DEGREE
    north = south + (m - 1) * lat_interval / _TENTHS_PER_DEGREE
    bounds = GeoBounds(west=west, east=east, south=south, north=north)
    return ElevationGrid(values=values, bounds=bounds, nodata=DEFAULT_NODATA)
