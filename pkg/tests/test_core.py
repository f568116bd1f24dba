import numpy as np
import pytest

from breakoutkit.core import (
    AMPLITUDE,
    RADIUS,
    BreakoutPick,
    GeometryError,
    GridGeometry,
    ImageLogGrid,
    MaskGrid,
    ParameterError,
    PickSet,
    ProbGrid,
    azimuth_of_column,
    grids_equal,
    union_masks,
)


def geom(n_depth=4, n_azimuth=16, depth_start=0.0, depth_step=0.1):
    return GridGeometry(n_depth, n_azimuth, depth_start, depth_step)


class TestGridGeometry:
    def test_azimuth_step_covers_circle(self):
        for n in (8, 16, 100, 256, 360, 720):
            g = geom(n_azimuth=n)
            assert abs(g.azimuth_step * n - 360.0) < 1e-9

    def test_column_sum_equals_circle(self):
        g = geom(n_azimuth=256)
        assert abs(sum(g.azimuth_step for _ in range(g.n_azimuth)) - 360.0) < 1e-9

    @pytest.mark.parametrize("kwargs", [
        dict(n_depth=0), dict(n_azimuth=7), dict(depth_step=0.0),
        dict(depth_step=-1.0), dict(depth_start=float("nan")),
    ])
    def test_invalid_geometry_rejected(self, kwargs):
        base = dict(n_depth=4, n_azimuth=16, depth_start=0.0, depth_step=0.1)
        base.update(kwargs)
        with pytest.raises(ParameterError):
            GridGeometry(**base)

    def test_depth_of_row(self):
        g = geom(depth_start=50.0, depth_step=0.25)
        assert g.depth_of_row(0) == 50.0
        assert g.depth_of_row(3) == pytest.approx(50.75)
        with pytest.raises(ParameterError):
            g.depth_of_row(4)


class TestAzimuthOfColumn:
    def test_identity_case(self):
        assert azimuth_of_column(0, geom(n_azimuth=256)) == 0.0

    def test_half_circle(self):
        assert azimuth_of_column(128, geom(n_azimuth=256)) == 180.0

    def test_fractional_column(self):
        # 100 * 360 / 256 by hand arithmetic
        assert azimuth_of_column(100, geom(n_azimuth=256)) == pytest.approx(140.625)

    def test_out_of_range(self):
        g = geom(n_azimuth=256)
        with pytest.raises(ParameterError):
            azimuth_of_column(256, g)
        with pytest.raises(ParameterError):
            azimuth_of_column(-1, g)


class TestGrids:
    def test_mask_rejects_other_values(self):
        with pytest.raises(ParameterError):
            MaskGrid(geom(1, 8), [[0, 1, 2, 0, 0, 0, 0, 0]])

    def test_mask_dense(self):
        with pytest.raises(ParameterError):
            MaskGrid(geom(1, 8), [[0, 1, float("nan"), 0, 0, 0, 0, 0]])

    def test_prob_range(self):
        g = geom(1, 8)
        ProbGrid(g, [[0.0, 1.0, 0.5, 0.25, 0.0, 0.0, 0.0, 1.0]])
        with pytest.raises(ParameterError):
            ProbGrid(g, [[0.0, 1.1, 0.5, 0.25, 0.0, 0.0, 0.0, 1.0]])
        with pytest.raises(ParameterError):
            ProbGrid(g, [[0.0, float("nan"), 0.5, 0.25, 0.0, 0.0, 0.0, 1.0]])

    def test_radius_positive_where_present(self):
        g = geom(1, 8)
        ImageLogGrid(g, RADIUS, [[48.0, float("nan")] + [48.0] * 6])
        with pytest.raises(ParameterError):
            ImageLogGrid(g, RADIUS, [[48.0, -1.0] + [48.0] * 6])

    def test_amplitude_allows_nan(self):
        g = geom(1, 8)
        grid = ImageLogGrid(g, AMPLITUDE, [[1.0, float("nan")] + [0.0] * 6])
        assert np.isnan(grid.values[0, 1])

    def test_shape_mismatch(self):
        with pytest.raises(GeometryError):
            MaskGrid(geom(2, 8), np.zeros((1, 8)))

    def test_values_read_only(self):
        grid = MaskGrid(geom(1, 8), np.zeros((1, 8)))
        with pytest.raises(ValueError):
            grid.values[0, 0] = 1


class TestUnionMasks:
    def test_identity_on_zeros(self):
        g = geom(2, 8)
        z = MaskGrid(g, np.zeros((2, 8)))
        assert grids_equal(union_masks(z, z), z)

    def test_identity_element(self):
        g = geom(2, 8)
        rng = np.random.default_rng(0)
        m = MaskGrid(g, rng.integers(0, 2, (2, 8)))
        z = MaskGrid(g, np.zeros((2, 8)))
        assert grids_equal(union_masks(m, z), m)

    def test_inclusion_exclusion(self):
        # a has 10 cells, b has 6, overlap 4 -> union has 12
        g = geom(4, 8)
        a = np.zeros((4, 8), dtype=np.uint8)
        b = np.zeros((4, 8), dtype=np.uint8)
        a.flat[:10] = 1
        b.flat[6:12] = 1  # cells 6..9 overlap a
        u = union_masks(MaskGrid(g, a), MaskGrid(g, b))
        assert int(a.sum()) == 10 and int(b.sum()) == 6
        assert int((a & b).sum()) == 4
        assert int(u.values.sum()) == 12

    def test_commutative_associative_idempotent(self):
        g = geom(6, 16)
        rng = np.random.default_rng(42)
        for _ in range(50):
            a = MaskGrid(g, rng.integers(0, 2, g.shape()))
            b = MaskGrid(g, rng.integers(0, 2, g.shape()))
            c = MaskGrid(g, rng.integers(0, 2, g.shape()))
            assert grids_equal(union_masks(a, b), union_masks(b, a))
            assert grids_equal(
                union_masks(union_masks(a, b), c), union_masks(a, union_masks(b, c))
            )
            assert grids_equal(union_masks(a, a), a)

    def test_geometry_mismatch(self):
        a = MaskGrid(geom(2, 8), np.zeros((2, 8)))
        b = MaskGrid(geom(2, 16), np.zeros((2, 16)))
        with pytest.raises(GeometryError):
            union_masks(a, b)


class TestBreakoutPick:
    def test_from_edges_derives_consistent_fields(self):
        p = BreakoutPick.from_edges(10.0, 350.0, 20.0)
        assert p.right_deg == pytest.approx(10.0, abs=1e-12)
        assert p.azimuth_deg == pytest.approx(0.0, abs=1e-12)
        assert p.width_deg == 20.0

    def test_derived_field_consistency_random(self):
        # recomputing width and azimuth from the edges reproduces the
        # stored values to 1e-9 degrees
        rng = np.random.default_rng(7)
        for _ in range(500):
            left = float(rng.uniform(0, 360))
            width = float(rng.uniform(0.5, 359.5))
            p = BreakoutPick.from_edges(0.0, left, width)
            w = (p.right_deg - p.left_deg) % 360.0
            if w == 0.0:
                w = 360.0
            assert abs(w - p.width_deg) < 1e-9
            assert abs((p.left_deg + p.width_deg / 2.0) % 360.0 - p.midpoint_deg()) < 1e-9

    def test_inconsistent_width_rejected(self):
        with pytest.raises(ParameterError):
            BreakoutPick(0.0, 10.0, 60.0, 40.0, 30.0)

    def test_width_domain(self):
        with pytest.raises(ParameterError):
            BreakoutPick.from_edges(0.0, 10.0, 0.0)
        with pytest.raises(ParameterError):
            BreakoutPick.from_edges(0.0, 10.0, 360.0)

    def test_detector_azimuth_may_sit_off_midpoint(self):
        p = BreakoutPick.from_edges(0.0, 100.0, 40.0, azimuth_deg=110.0)
        assert p.azimuth_deg == 110.0
        assert p.midpoint_deg() == pytest.approx(120.0)


class TestPickSet:
    def test_sorted_on_construction(self):
        a = BreakoutPick.from_edges(2.0, 10.0, 20.0)
        b = BreakoutPick.from_edges(1.0, 50.0, 20.0)
        c = BreakoutPick.from_edges(1.0, 10.0, 20.0)
        s = PickSet((a, b, c), "manual")
        assert [p.depth for p in s] == [1.0, 1.0, 2.0]
        assert [p.left_deg for p in s][:2] == [10.0, 50.0]

    def test_duplicate_rejected(self):
        a = BreakoutPick.from_edges(1.0, 10.0, 20.0)
        b = BreakoutPick.from_edges(1.0, 10.0, 30.0)
        with pytest.raises(ParameterError):
            PickSet((a, b), "manual")

    def test_unknown_source(self):
        with pytest.raises(ParameterError):
            PickSet((), "guess")
