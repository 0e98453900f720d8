import numpy as np
import pytest
from hypothesis import given, strategies as st

import terrain3d as t
from helpers import make_grid

LATUR_BOUNDS = t.GeoBounds(west=76.2076079218, east=77.2934412815,
                           south=17.8677159574, north=18.8385493143)


class TestGeoBounds:
    def test_rejects_inverted_extents(self):
        with pytest.raises(ValueError):
            t.GeoBounds(west=2, east=1, south=0, north=1)
        with pytest.raises(ValueError):
            t.GeoBounds(west=0, east=1, south=1, north=0)

    def test_rejects_bad_latitudes(self):
        with pytest.raises(ValueError):
            t.GeoBounds(west=0, east=1, south=80, north=95)

    def test_accepts_wrapped_longitudes(self):
        t.GeoBounds(west=350, east=355, south=0, north=1)
        t.GeoBounds(west=-170, east=-160, south=0, north=1)


class TestElevationGrid:
    def test_rejects_nonfinite_values(self):
        with pytest.raises(ValueError):
            make_grid([[1.0, np.nan], [2.0, 3.0]])

    def test_nodata_sentinel_is_allowed(self):
        g = make_grid([[1.0, -32767.0], [2.0, 3.0]])
        assert g.valid_mask().sum() == 3

    def test_values_immutable(self):
        g = make_grid([[1.0, 2.0], [3.0, 4.0]])
        with pytest.raises(ValueError):
            g.values[0, 0] = 9


class TestNodePosition:
    def test_corner_nodes(self):
        g = make_grid(np.zeros((3, 4)), west=10, south=20, spacing=0.5)
        assert t.node_position(g, 0, 0) == (10.0, 21.0)
        assert t.node_position(g, 2, 3) == (11.5, 20.0)

    def test_latur_midpoint(self):
        # 3x3 grid over the Latur extents: center node is the arithmetic midpoint
        g = t.ElevationGrid(values=np.zeros((3, 3)), bounds=LATUR_BOUNDS)
        lon, lat = t.node_position(g, 1, 1)
        assert lon == pytest.approx(76.75052460165, abs=1e-12)
        assert lat == pytest.approx(18.35313263585, abs=1e-12)

    def test_out_of_range_raises(self):
        g = make_grid(np.zeros((3, 3)))
        with pytest.raises(IndexError):
            t.node_position(g, 3, 0)
        with pytest.raises(IndexError):
            t.node_position(g, 0, -1)

    def test_degenerate_grid_raises(self):
        g = make_grid(np.zeros((1, 3)))
        with pytest.raises(ValueError, match="spacing undefined"):
            t.node_position(g, 0, 0)

    @given(st.integers(0, 5), st.integers(0, 7))
    def test_affine_in_indices(self, i, j):
        g = make_grid(np.zeros((8, 10)), west=76.2, south=17.8, spacing=0.013)
        lon0, lat0 = t.node_position(g, i, j)
        lon1, lat1 = t.node_position(g, i + 1, j + 1)
        lon2, lat2 = t.node_position(g, i + 2, j + 2)
        assert lon0 + lon2 == pytest.approx(2 * lon1, abs=1e-12)
        assert lat0 + lat2 == pytest.approx(2 * lat1, abs=1e-12)


class TestStats:
    def test_mixed_grid(self):
        g = make_grid([[1.0, 2.0], [3.0, -32767.0]])
        s = t.stats(g)
        assert (s.min, s.max, s.mean) == (1.0, 3.0, 2.0)
        assert (s.valid_count, s.nodata_count) == (3, 1)

    def test_all_nodata(self):
        g = make_grid(np.full((3, 3), -32767.0))
        s = t.stats(g)
        assert s.empty
        assert s.min is None and s.max is None and s.mean is None
        assert s.nodata_count == 9

    def test_random_range_bounds(self):
        rng = np.random.default_rng(0)
        g = make_grid(rng.integers(540, 639, size=(100, 100)).astype(float),
                      spacing=0.001)
        s = t.stats(g)
        assert s.min >= 540 and s.max <= 638
        assert s.valid_count + s.nodata_count == 100 * 100

    def test_transpose_invariant(self):
        rng = np.random.default_rng(1)
        vals = rng.normal(600, 30, size=(5, 9))
        a = t.stats(make_grid(vals))
        b = t.stats(make_grid(vals.T))
        assert (a.min, a.max, a.mean) == (b.min, b.max, b.mean)


class TestUnitConversion:
    def test_paper_constant(self):
        assert t.meters_to_feet(631) == pytest.approx(2070.21, abs=0.005)

    def test_trivia(self):
        assert t.meters_to_feet(0) == 0
        assert t.meters_to_feet(0.3048) == 1.0

    def test_nodata_passthrough(self):
        assert t.meters_to_feet(-32767.0, nodata=-32767.0) == -32767.0
        assert t.feet_to_meters(-32767.0, nodata=-32767.0) == -32767.0

    @given(st.floats(-1e6, 1e6, allow_nan=False))
    def test_roundtrip(self, z):
        back = t.feet_to_meters(t.meters_to_feet(z))
        assert back == pytest.approx(z, rel=1e-9, abs=1e-12)
