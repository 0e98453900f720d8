import struct

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

import terrain3d as t
from terrain3d.dted import ACC_SIZE, DSI_SIZE, UHL_SIZE
from helpers import make_grid

# 1 tenth of an arc-second, the finest interval the header encodes
TENTH = 1.0 / 36000.0


def dted_grid(vals, west=76.0, south=17.0, spacing_tenths=36):
    return make_grid(vals, west=west, south=south,
                     spacing=spacing_tenths * TENTH)


def assert_grids_equal(a, b):
    assert np.array_equal(a.values, b.values)
    assert np.array_equal(a.valid_mask(), b.valid_mask())
    half_tenth = TENTH / 2
    for attr in ("west", "east", "south", "north"):
        assert abs(getattr(a.bounds, attr) - getattr(b.bounds, attr)) <= half_tenth


class TestSignMagnitude:
    def test_positive(self):
        assert t.decode_sign_magnitude(0x0005) == 5

    def test_negative(self):
        assert t.decode_sign_magnitude(0x8005) == -5

    def test_nodata_word(self):
        assert t.decode_sign_magnitude(0xFFFF) == -32767

    def test_negative_zero_normalizes(self):
        assert t.decode_sign_magnitude(0x8000) == 0


class TestWriter:
    def test_2x2_zero_grid_length(self):
        data = t.write_dted(dted_grid(np.zeros((2, 2))))
        assert len(data) == 80 + 648 + 2700 + 2 * (8 + 2 * 2 + 4)

    def test_out_of_range_elevation(self):
        with pytest.raises(t.RangeError):
            t.write_dted(dted_grid([[40000.0, 0.0], [0.0, 0.0]]))

    def test_degenerate_grid(self):
        with pytest.raises(ValueError):
            t.write_dted(make_grid(np.zeros((1, 3)), spacing=TENTH))

    def test_checksum_bytes(self):
        # record checksum is the plain byte sum, big-endian
        data = t.write_dted(dted_grid(np.zeros((2, 2))))
        base = UHL_SIZE + DSI_SIZE + ACC_SIZE
        record = data[base : base + 16]
        assert record[-4:] == struct.pack(">I", sum(record[:-4]))

    def test_checksum_of_5000_byte_sum(self):
        assert struct.pack(">I", 5000) == bytes([0x00, 0x00, 0x13, 0x88])

    def test_rounding_half_away_from_zero(self):
        g = dted_grid([[0.5, -0.5], [1.5, -1.5]])
        out = t.read_dted(t.write_dted(g))
        assert out.values.tolist() == [[1.0, -1.0], [2.0, -2.0]]


class TestReader:
    def test_roundtrip_small(self):
        g = dted_grid([
            [-100.0, 0.0, 250.0, -32767.0],
            [1.0, 2.0, 3.0, 4.0],
            [5.0, 6.0, 7.0, 8.0],
            [9.0, 10.0, 11.0, 12.0],
            [13.0, 14.0, 15.0, 16.0],
        ])
        assert_grids_equal(t.read_dted(t.write_dted(g)), g)

    def test_dted1_sized_header(self):
        g = dted_grid(np.zeros((1201, 1201)), spacing_tenths=30)
        out = t.read_dted(t.write_dted(g))
        assert (out.m, out.n) == (1201, 1201)

    def test_column_orientation(self):
        # column values run south->north in the file, top-down in the grid
        g = dted_grid([[30.0, 60.0], [20.0, 50.0], [10.0, 40.0]])
        data = t.write_dted(g)
        base = UHL_SIZE + DSI_SIZE + ACC_SIZE
        rec0 = data[base : base + 8 + 6 + 4]
        elevations = struct.unpack(">3H", rec0[8:14])
        assert elevations == (10, 20, 30)  # south -> north on disk
        assert t.read_dted(data).values[:, 0].tolist() == [30.0, 20.0, 10.0]

    def test_bad_magic(self):
        data = bytearray(t.write_dted(dted_grid(np.zeros((2, 2)))))
        data[0:4] = b"XXXX"
        with pytest.raises(t.FormatError, match="magic"):
            t.read_dted(bytes(data))

    def test_truncated(self):
        data = t.write_dted(dted_grid(np.zeros((3, 3))))
        with pytest.raises(t.FormatError):
            t.read_dted(data[:-5])

    def test_bad_sentinel(self):
        data = bytearray(t.write_dted(dted_grid(np.zeros((2, 2)))))
        data[UHL_SIZE + DSI_SIZE + ACC_SIZE] = 0xAB
        with pytest.raises(t.FormatError, match="sentinel"):
            t.read_dted(bytes(data))

    def test_checksum_error_names_record(self):
        data = bytearray(t.write_dted(dted_grid(np.zeros((2, 3)))))
        second_record = UHL_SIZE + DSI_SIZE + ACC_SIZE + (8 + 4 + 4) + 9
        data[second_record] ^= 0x01
        with pytest.raises(t.ChecksumError) as exc:
            t.read_dted(bytes(data))
        assert exc.value.record_index == 1

    def test_checksum_downgrade_flag(self):
        data = bytearray(t.write_dted(dted_grid(np.zeros((2, 2)))))
        data[UHL_SIZE + DSI_SIZE + ACC_SIZE + 9] ^= 0x01
        g = t.read_dted(bytes(data), verify_checksums=False)
        assert g.m == 2


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_roundtrip_property(data):
    rng = np.random.default_rng(data.draw(st.integers(0, 2**32 - 1)))
    m = data.draw(st.integers(2, 16))
    n = data.draw(st.integers(2, 16))
    vals = rng.integers(-32767, 32768, size=(m, n)).astype(float)
    vals[rng.random(size=(m, n)) < 0.1] = -32767.0
    tenths = data.draw(st.integers(1, 9999))
    west_t = data.draw(st.integers(-179 * 36000, 179 * 36000))
    south_t = data.draw(st.integers(-80 * 36000, 80 * 36000))
    g = make_grid(vals, west=west_t * TENTH, south=south_t * TENTH,
                  spacing=tenths * TENTH)
    assert_grids_equal(t.read_dted(t.write_dted(g)), g)


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_any_single_byte_corruption_detected(data):
    rng = np.random.default_rng(42)
    g = dted_grid(rng.integers(-500, 3000, size=(4, 5)).astype(float))
    blob = bytearray(t.write_dted(g))
    records_start = UHL_SIZE + DSI_SIZE + ACC_SIZE
    pos = data.draw(st.integers(records_start, len(blob) - 1))
    flip = data.draw(st.integers(1, 255))
    blob[pos] ^= flip
    with pytest.raises(t.FormatError):  # ChecksumError or sentinel failure
        t.read_dted(bytes(blob))
