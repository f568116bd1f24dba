import math

import numpy as np
import pytest

from breakoutkit.core import (
    BreakoutPick,
    GeometryError,
    GridGeometry,
    MaskGrid,
    PickSet,
    ProbGrid,
)
from breakoutkit.evaluation import (
    RANK_BELOW_C,
    RANK_C_OR_BETTER,
    axial_stats,
    balanced_bce,
    breakout_zones,
    circ_diff,
    circular_stats,
    evaluate_picks,
    iou,
    match_picks,
    pick_errors,
    rates,
    resample_picks,
    rose_histogram,
    wsm_quality,
)


def pick(depth, azimuth, width=20.0):
    return BreakoutPick.from_edges(depth, (azimuth - width / 2.0) % 360.0, width)


def picks(source, *specs):
    return PickSet(tuple(pick(*s) for s in specs), source)


class TestIoU:
    def geom(self):
        return GridGeometry(10, 10, 0.0, 0.1)

    def test_identical(self):
        g = self.geom()
        rng = np.random.default_rng(0)
        m = MaskGrid(g, rng.integers(0, 2, g.shape()))
        assert iou(m, m) == 1.0

    def test_disjoint(self):
        g = self.geom()
        a = np.zeros(g.shape()); a[0] = 1
        b = np.zeros(g.shape()); b[5] = 1
        assert iou(MaskGrid(g, a), MaskGrid(g, b)) == 0.0

    def test_inclusion_exclusion(self):
        # 50-cell pred, 50-cell label, 25 overlapping -> 25/75
        g = self.geom()
        a = np.zeros(100); a[:50] = 1
        b = np.zeros(100); b[25:75] = 1
        value = iou(MaskGrid(g, a.reshape(10, 10)), MaskGrid(g, b.reshape(10, 10)))
        assert value == pytest.approx(1.0 / 3.0, rel=1e-12)

    def test_both_empty(self):
        g = self.geom()
        z = MaskGrid(g, np.zeros(g.shape()))
        assert iou(z, z) == 1.0

    def test_symmetric(self):
        g = self.geom()
        rng = np.random.default_rng(1)
        a = MaskGrid(g, rng.integers(0, 2, g.shape()))
        b = MaskGrid(g, rng.integers(0, 2, g.shape()))
        assert iou(a, b) == iou(b, a)

    def test_geometry_mismatch(self):
        a = MaskGrid(GridGeometry(2, 8, 0, 0.1), np.zeros((2, 8)))
        b = MaskGrid(GridGeometry(2, 16, 0, 0.1), np.zeros((2, 16)))
        with pytest.raises(GeometryError):
            iou(a, b)

    def test_monotone_under_agreed_cells(self):
        g = self.geom()
        rng = np.random.default_rng(3)
        a = rng.integers(0, 2, g.shape()).astype(np.uint8)
        b = rng.integers(0, 2, g.shape()).astype(np.uint8)
        score = iou(MaskGrid(g, a), MaskGrid(g, b))
        free = np.flatnonzero(~(a.ravel().astype(bool) | b.ravel().astype(bool)))
        for idx in free[:10]:
            a2, b2 = a.copy(), b.copy()
            a2.flat[idx] = 1
            b2.flat[idx] = 1
            new_score = iou(MaskGrid(g, a2), MaskGrid(g, b2))
            assert new_score >= score


class TestCircDiff:
    def test_examples(self):
        assert circ_diff(10, 350) == pytest.approx(20.0)
        assert circ_diff(0, 180) == pytest.approx(180.0)
        assert circ_diff(143, 147) == pytest.approx(4.0)

    def test_metric_properties(self):
        rng = np.random.default_rng(2)
        for _ in range(500):
            a, b, c = rng.uniform(0, 360, 3)
            assert circ_diff(a, b) == pytest.approx(circ_diff(b, a), abs=1e-9)
            assert circ_diff(a, a) == 0.0
            assert circ_diff(a, c) <= circ_diff(a, b) + circ_diff(b, c) + 1e-9
            assert 0.0 <= circ_diff(a, b) <= 180.0


class TestResample:
    def test_identity_when_rows_at_bin_centers(self):
        # native step 0.2 with rows at bin centers 0.1, 0.3, ...
        s = picks("manual", (0.1, 100.0), (0.3, 120.0), (0.5, 140.0))
        out = resample_picks(s, 0.2)
        assert [p.depth for p in out] == [p.depth for p in s]
        assert [p.azimuth_deg for p in out] == [p.azimuth_deg for p in s]

    def test_emitted_at_bin_center(self):
        # native step 0.05, picks only at 0.10 -> emitted at bin center 0.1
        s = picks("manual", (0.10, 100.0))
        out = resample_picks(s, 0.2)
        assert [p.depth for p in out] == [pytest.approx(0.1)]

    def test_nearest_row_wins(self):
        s = picks("manual", (1.02, 100.0), (1.08, 120.0), (1.12, 140.0))
        out = resample_picks(s, 0.2)
        # bin [1.0, 1.2) center 1.1: depth 1.08 and 1.12 tie at 0.02; the
        # shallower row wins
        assert [p.depth for p in out] == [pytest.approx(1.1)]
        assert [p.azimuth_deg for p in out] == [pytest.approx(120.0)]

    def test_empty(self):
        assert len(resample_picks(PickSet((), "manual"), 0.2)) == 0

    def test_multiple_picks_of_chosen_row_survive(self):
        s = picks("manual", (0.51, 100.0), (0.51, 280.0))
        out = resample_picks(s, 0.2)
        assert len(out) == 2
        assert {round(p.depth, 6) for p in out} == {0.5}


class TestMatching:
    def test_identical_sets(self):
        s = picks("manual", (0.1, 100.0), (0.1, 280.0), (0.3, 50.0))
        auto = PickSet(s.picks, "segnet")
        m = match_picks(auto, s)
        assert len(m.matched) == 3
        assert rates(m) == (0.0, 0.0)

    def test_unmatched_auto_is_false_positive(self):
        auto = picks("segnet", (0.1, 100.0), (0.5, 30.0))
        manual = picks("manual", (0.1, 100.0))
        m = match_picks(auto, manual)
        assert len(m.false_positives) == 1
        assert m.false_positives[0].depth == 0.5

    def test_tolerance_boundary(self):
        auto = picks("segnet", (0.1, 100.0))
        manual = picks("manual", (0.1, 125.0))
        assert len(match_picks(auto, manual, az_tol_deg=30.0).matched) == 1
        assert len(match_picks(auto, manual, az_tol_deg=20.0).matched) == 0

    def test_greedy_prefers_closest(self):
        auto = picks("segnet", (0.1, 100.0), (0.1, 130.0))
        manual = picks("manual", (0.1, 105.0), (0.1, 290.0))
        m = match_picks(auto, manual)
        assert len(m.matched) == 1
        a, b = m.matched[0]
        assert a.azimuth_deg == pytest.approx(100.0)
        assert b.azimuth_deg == pytest.approx(105.0)

    def test_counts_add_up(self):
        rng = np.random.default_rng(4)
        auto, manual = [], []
        for i in range(50):
            d = round(0.1 + 0.2 * int(rng.integers(0, 20)), 6)
            auto.append((d, float(rng.integers(0, 360))))
            manual.append((d, float(rng.integers(0, 360))))
        a = picks("segnet", *{(d, az): (d, az) for d, az in auto}.values())
        m = picks("manual", *{(d, az): (d, az) for d, az in manual}.values())
        result = match_picks(a, m)
        assert len(result.matched) + len(result.false_positives) == len(a)
        assert len(result.matched) + len(result.false_negatives) == len(m)


class TestRates:
    def test_zero_fp(self):
        m = match_picks(picks("segnet", (0.1, 10.0)), picks("manual", (0.1, 10.0)))
        assert rates(m) == (0.0, 0.0)

    def test_four_percent(self):
        # 4 unmatched of 100 automatic picks -> fpr 0.04
        auto_specs = [(round(0.1 + 0.2 * i, 6), 100.0) for i in range(96)]
        auto_specs += [(round(0.1 + 0.2 * (96 + i), 6), 100.0) for i in range(4)]
        manual_specs = [(round(0.1 + 0.2 * i, 6), 100.0) for i in range(96)]
        m = match_picks(picks("segnet", *auto_specs), picks("manual", *manual_specs))
        fpr, fnr = rates(m)
        assert fpr == pytest.approx(0.04)
        assert fnr == 0.0

    def test_fnr(self):
        manual_specs = [(round(0.1 + 0.2 * i, 6), 100.0) for i in range(100)]
        auto_specs = manual_specs[:61]
        m = match_picks(picks("segnet", *auto_specs), picks("manual", *manual_specs))
        _, fnr = rates(m)
        assert fnr == pytest.approx(0.39)

    def test_empty_denominators(self):
        m = match_picks(PickSet((), "segnet"), PickSet((), "manual"))
        assert rates(m) == (0.0, 0.0)


class TestPickErrors:
    def test_perfect(self):
        s = picks("manual", (0.1, 100.0))
        m = match_picks(PickSet(s.picks, "segnet"), s)
        assert pick_errors(m) == (0.0, 0.0)

    def test_single_pair(self):
        auto = PickSet((pick(0.1, 143.0, 40.0),), "segnet")
        manual = PickSet((pick(0.1, 147.0, 50.0),), "manual")
        az, w = pick_errors(match_picks(auto, manual))
        assert az == pytest.approx(4.0)
        assert w == pytest.approx(10.0)

    def test_wrap_in_mean(self):
        auto = picks("segnet", (0.1, 10.0), (0.3, 20.0))
        manual = picks("manual", (0.1, 350.0), (0.3, 40.0))
        az, _ = pick_errors(match_picks(auto, manual))
        assert az == pytest.approx(20.0)  # (20 + 20) / 2

    def test_empty_is_none(self):
        m = match_picks(PickSet((), "segnet"), PickSet((), "manual"))
        assert pick_errors(m) is None


class TestCircularStats:
    def test_constant(self):
        mean, std = circular_stats([143.0] * 12)
        assert mean == pytest.approx(143.0)
        assert std == pytest.approx(0.0, abs=1e-6)

    def test_wrap_correctness(self):
        mean, std = circular_stats([350.0, 10.0])
        assert mean == pytest.approx(0.0, abs=1e-9)
        assert std < 15.0

    def test_two_angle_closed_form(self):
        # for two angles 2*delta apart: Rbar = cos(delta),
        # std = sqrt(-2 ln cos(delta)) in degrees
        mean, std = circular_stats([80.0, 100.0])
        expected = math.degrees(math.sqrt(-2.0 * math.log(math.cos(math.radians(10.0)))))
        assert mean == pytest.approx(90.0)
        assert std == pytest.approx(expected, rel=1e-12)
        assert std == pytest.approx(10.0, abs=0.05)  # small-angle regime

    def test_uniform_flagged(self):
        mean, std = circular_stats([0.0, 90.0, 180.0, 270.0])
        assert math.isnan(mean)
        assert math.isinf(std)

    def test_rotation_equivariance(self):
        rng = np.random.default_rng(8)
        az = rng.uniform(0, 60, 30)
        m0, s0 = circular_stats(az)
        m1, s1 = circular_stats((az + 77.0) % 360.0)
        assert (m0 + 77.0) % 360.0 == pytest.approx(m1, abs=1e-9)
        assert s0 == pytest.approx(s1, abs=1e-9)


class TestAxialStats:
    def test_folds_diametral_pairs(self):
        # both walls of a breakout pair are one orientation
        mean, std = axial_stats([143.0, 323.0, 143.0, 323.0])
        assert mean == pytest.approx(143.0)
        assert std == pytest.approx(0.0, abs=1e-6)

    def test_directional_stats_degenerate_on_pairs(self):
        mean, std = circular_stats([143.0, 323.0, 143.0, 323.0])
        assert math.isnan(mean) and math.isinf(std)

    def test_matches_directional_for_tight_unimodal_data(self):
        rng = np.random.default_rng(9)
        az = 143.0 + rng.normal(0, 3.0, 200)
        m_ax, s_ax = axial_stats(az)
        m_dir, s_dir = circular_stats(az % 360.0)
        assert m_ax == pytest.approx(m_dir % 180.0, abs=0.1)
        assert s_ax == pytest.approx(s_dir, abs=0.1)

    def test_mean_in_half_circle(self):
        rng = np.random.default_rng(10)
        for _ in range(50):
            az = rng.uniform(0, 360, 10)
            mean, _ = axial_stats(az)
            if not math.isnan(mean):
                assert 0.0 <= mean < 180.0


def zone_picks(n_zones, rows_per_zone, step, azimuths):
    """Build picks forming n_zones contiguous zones separated by gaps."""
    out = []
    az_iter = iter(azimuths)
    depth_idx = 0
    for _ in range(n_zones):
        for _ in range(rows_per_zone):
            out.append(pick(round(depth_idx * step, 6), next(az_iter)))
            depth_idx += 1
        depth_idx += 3  # gap
    return PickSet(tuple(out), "manual")


class TestWsmQuality:
    def test_c_or_better(self):
        # 5 zones x 10 rows x 0.5 m = 25 m combined, tight azimuths
        az = [143.0 + (3.0 if i % 2 else -3.0) for i in range(50)]
        s = zone_picks(5, 10, 0.5, az)
        assert len(breakout_zones(s, 0.5)) == 5
        assert wsm_quality(s, 0.5) == RANK_C_OR_BETTER

    def test_count_fails(self):
        az = [143.0] * 60
        s = zone_picks(3, 20, 0.5, az)  # 3 zones, 30 m
        assert wsm_quality(s, 0.5) == RANK_BELOW_C

    def test_std_fails(self):
        rng = np.random.default_rng(6)
        az = [float(a) for a in rng.uniform(0, 360, 60)]  # scattered azimuths
        s = zone_picks(6, 10, 0.5, az)  # 6 zones, 30 m
        _, std = circular_stats(s.azimuths())
        assert std >= 25.0
        assert wsm_quality(s, 0.5) == RANK_BELOW_C

    def test_length_fails(self):
        az = [143.0] * 20
        s = zone_picks(5, 4, 0.5, az)  # 5 zones x 2 m = 10 m
        assert wsm_quality(s, 0.5) == RANK_BELOW_C

    def test_monotone_under_consistent_zone(self):
        az = [143.0] * 50
        s = zone_picks(5, 10, 0.5, az)
        assert wsm_quality(s, 0.5) == RANK_C_OR_BETTER
        extra = [pick(100.0 + 0.5 * i, 143.0) for i in range(10)]
        bigger = PickSet(s.picks + tuple(extra), "manual")
        assert wsm_quality(bigger, 0.5) == RANK_C_OR_BETTER


def scalar_balanced_bce(y, p, eps=1e-7):
    """Independent plain-Python evaluation of the class-balanced loss."""
    y = [float(v) for v in y]
    p = [min(max(float(v), eps), 1.0 - eps) for v in p]
    n = len(y)
    beta = sum(1.0 - v for v in y) / n
    loss = 0.0
    for yi, pi in zip(y, p):
        loss += -beta * yi * math.log(pi) - (1.0 - yi) * math.log(1.0 - pi)
    return beta, loss


class TestBalancedBce:
    def test_perfect_positive_prediction(self):
        beta, loss = balanced_bce([1, 1, 1, 1], [1.0, 1.0, 1.0, 1.0])
        assert beta == 0.0
        assert loss == pytest.approx(0.0, abs=1e-12)

    def test_all_background_reduces_to_plain_bce(self):
        n = 64
        beta, loss = balanced_bce([0] * n, [0.5] * n)
        assert beta == 1.0
        assert loss == pytest.approx(n * math.log(2.0), rel=1e-12)

    def test_four_pixel_case(self):
        beta, loss = balanced_bce([1, 0, 0, 0], [0.8, 0.2, 0.2, 0.2])
        assert beta == pytest.approx(0.75)
        # frozen from the scalar oracle: 3.75 * (-ln 0.8)
        assert loss == pytest.approx(0.8367883174282864, rel=1e-12)

    def test_matches_scalar_oracle_on_random_inputs(self):
        rng = np.random.default_rng(12)
        for _ in range(100):
            n = int(rng.integers(4, 200))
            y = rng.integers(0, 2, n)
            p = rng.uniform(0, 1, n)
            beta_o, loss_o = scalar_balanced_bce(y, p)
            beta, loss = balanced_bce(y, p)
            assert beta == pytest.approx(beta_o, rel=1e-12)
            assert loss == pytest.approx(loss_o, rel=1e-9)

    def test_grid_inputs(self):
        g = GridGeometry(2, 8, 0.0, 0.1)
        rng = np.random.default_rng(13)
        y = MaskGrid(g, rng.integers(0, 2, g.shape()))
        p = ProbGrid(g, rng.uniform(0, 1, g.shape()))
        beta_a, loss_a = balanced_bce(y, p)
        beta_b, loss_b = balanced_bce(y.values, p.values)
        assert beta_a == beta_b
        assert loss_a == pytest.approx(loss_b, rel=1e-12)

    def test_loss_nonnegative_and_zero_iff_exact(self):
        rng = np.random.default_rng(14)
        for _ in range(50):
            y = rng.integers(0, 2, 32)
            p = rng.uniform(0.01, 0.99, 32)
            _, loss = balanced_bce(y, p)
            assert loss >= 0.0
        _, exact = balanced_bce([1, 0, 1, 0], [1.0, 0.0, 1.0, 0.0])
        assert exact == pytest.approx(0.0, abs=1e-5)


class TestRoseHistogram:
    def test_bins(self):
        rows = rose_histogram([0.0, 5.0, 9.99, 10.0, 355.0, 359.9])
        assert rows[0] == (0.0, 3)
        assert rows[1] == (10.0, 1)
        assert rows[35] == (350.0, 2)
        assert len(rows) == 36
        assert sum(c for _, c in rows) == 6


class TestEvaluatePicks:
    def test_report_fields(self):
        auto = picks("segnet", (0.1, 143.0), (0.1, 323.0))
        manual = picks("manual", (0.1, 143.0), (0.1, 323.0))
        report = evaluate_picks(auto, manual)
        assert report.fpr == 0.0 and report.fnr == 0.0
        assert report.n_auto == 2 and report.n_manual == 2 and report.n_matched == 2
        assert report.azimuth_error_deg == 0.0
        assert report.iou is None
        d = report.to_dict()
        assert "iou" not in d
        assert d["wsm_rank"] == RANK_BELOW_C

    def test_iou_included_with_grids(self):
        g = GridGeometry(2, 8, 0.0, 0.1)
        z = MaskGrid(g, np.zeros(g.shape()))
        report = evaluate_picks(
            PickSet((), "segnet"), PickSet((), "manual"), pred=z, label=z
        )
        assert report.iou == 1.0
        assert "iou" in report.to_dict()

    def test_global_rotation_invariance(self):
        specs = [(round(0.1 + 0.2 * i, 6), float(az)) for i, az in
                 enumerate([10, 50, 143, 200, 270, 323, 355])]
        auto = picks("segnet", *specs)
        manual = picks("manual", *[(d, (a + 4.0) % 360) for d, a in specs])
        r0 = evaluate_picks(auto, manual)
        shift = 123.0
        auto_s = picks("segnet", *[(d, (a + shift) % 360) for d, a in specs])
        manual_s = picks("manual", *[(d, (a + 4.0 + shift) % 360) for d, a in specs])
        r1 = evaluate_picks(auto_s, manual_s)
        assert r0.fpr == r1.fpr and r0.fnr == r1.fnr
        assert r0.azimuth_error_deg == pytest.approx(r1.azimuth_error_deg, abs=1e-9)
        assert r0.width_error_deg == pytest.approx(r1.width_error_deg, abs=1e-9)
        assert r0.azimuth_std_deg == pytest.approx(r1.azimuth_std_deg, abs=1e-9)
        # the reported mean is an orientation, so it rotates modulo 180
        assert (r0.azimuth_mean_deg + shift) % 180.0 == pytest.approx(
            r1.azimuth_mean_deg % 180.0, abs=1e-6
        )
