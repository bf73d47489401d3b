import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import circle, ellipse, rotation
from leafmatch.geometry import (
    Contour,
    OpenCurve,
    arc_positions,
    curvature_profile,
    geodesic_length,
    global_curvature,
    global_curvature_profile,
    local_curvature,
    normalize,
    occlude,
    resample_uniform,
    savgol_smooth,
    signed_area,
    transform,
)


def spacing(pts, closed):
    seg = np.diff(np.vstack([pts, pts[:1]]) if closed else pts, axis=0)
    return np.hypot(seg[:, 0], seg[:, 1])


class TestTypes:
    def test_contour_rejects_clockwise(self):
        pts = circle(n=20).points[::-1]
        with pytest.raises(ValueError, match="counter-clockwise"):
            Contour(pts)

    def test_contour_rejects_repeats_and_few_points(self):
        pts = circle(n=20).points.copy()
        pts[3] = pts[2]
        with pytest.raises(ValueError):
            Contour(pts)
        with pytest.raises(ValueError):
            Contour(circle(n=20).points[:7])

    def test_open_curve_needs_distinct_ends(self):
        with pytest.raises(ValueError):
            OpenCurve([[0, 0], [1, 0], [1, 1], [0, 0]])

    def test_non_finite(self):
        with pytest.raises(ValueError):
            OpenCurve([[0, 0], [1, np.nan], [2, 0], [3, 0]])

    def test_points_read_only(self):
        c = circle(n=20)
        with pytest.raises(ValueError):
            c.points[0, 0] = 5.0


class TestResample:
    def test_square_corners(self):
        sq = np.array([[0, 0], [1, 0], [1, 1], [0, 1]], dtype=float)
        out = resample_uniform(sq, 4, closed=True)
        np.testing.assert_allclose(out, sq, atol=1e-12)

    def test_segment(self):
        out = resample_uniform(np.array([[0.0, 0.0], [1.0, 0.0]]), 3, closed=False)
        np.testing.assert_allclose(out, [[0, 0], [0.5, 0], [1, 0]], atol=1e-12)

    @pytest.mark.parametrize("wobble", [0.0, 0.05])
    def test_random_polygon_spacing(self, rng, wobble):
        for _ in range(20):
            ang = np.sort(rng.uniform(0, 2 * np.pi, 20))
            rad = rng.uniform(1 - wobble, 1 + wobble, (20, 1))
            out = resample_uniform(np.column_stack([np.cos(ang), np.sin(ang)]) * rad, 100, closed=True)
            d = spacing(out, True)
            assert d.std() / d.mean() < 1e-9

    def test_spiky_polygon_warns_instead_of_silent(self):
        r = np.random.default_rng(1)
        ang = np.sort(r.uniform(0, 2 * np.pi, 20))
        pts = np.column_stack([np.cos(ang), np.sin(ang)]) * r.uniform(0.5, 1.5, (20, 1))
        with pytest.warns(RuntimeWarning, match="equal-chord"):
            out = resample_uniform(pts, 100, closed=True)
        assert out.shape == (100, 2)

    def test_open_endpoints_kept_and_points_on_polyline(self, rng):
        x = np.linspace(0, 10, 30)
        pts = np.column_stack([x, np.sin(x) + rng.normal(scale=0.05, size=30)])
        out = resample_uniform(pts, 57, closed=False)
        np.testing.assert_allclose(out[[0, -1]], pts[[0, -1]])
        d = spacing(out, False)
        assert d.std() / d.mean() < 1e-9
        # every output point lies on some input segment
        a, b = pts[:-1], pts[1:]
        for p in out:
            ab = b - a
            t = np.clip(((p - a) * ab).sum(1) / (ab * ab).sum(1), 0, 1)
            assert np.min(np.hypot(*(a + t[:, None] * ab - p).T)) < 1e-9

    def test_idempotent(self, rng):
        pts = circle(3.0, 37).points + rng.normal(scale=0.05, size=(37, 2))
        once = resample_uniform(pts, 80, closed=True)
        twice = resample_uniform(once, 80, closed=True)
        np.testing.assert_allclose(once, twice, atol=1e-9)

    def test_keeps_type(self):
        c = circle(n=50)
        assert isinstance(resample_uniform(c, 64), Contour)

    def test_degenerate(self):
        with pytest.raises(ValueError):
            resample_uniform(np.zeros((5, 2)), 10, closed=False)

    def test_closed_needs_flag_for_arrays(self):
        with pytest.raises(TypeError):
            resample_uniform(np.zeros((5, 2)), 10)

    @settings(max_examples=30, deadline=None)
    @given(st.integers(8, 200), st.integers(0, 10_000))
    def test_spacing_property(self, n, seed):
        r = np.random.default_rng(seed)
        x = np.linspace(0, 4, 12)
        pts = np.column_stack([x, np.sin(x) + r.normal(scale=0.05, size=12)])
        out = resample_uniform(pts, n, closed=False)
        d = spacing(out, False)
        assert len(out) == n
        assert d.std() <= 1e-9 * d.mean()


class TestSavgol:
    def test_parabola_unchanged(self):
        x = np.linspace(-1, 1, 60)
        pts = np.column_stack([x, x * x])
        out = savgol_smooth(pts, 7, closed=False)
        np.testing.assert_allclose(out, pts, atol=1e-9)

    def test_quadratic_in_index(self, rng):
        i = np.arange(80, dtype=float)
        c = rng.normal(size=(3, 2))
        pts = c[0] + np.outer(i, c[1]) + np.outer(i * i, c[2])
        np.testing.assert_allclose(savgol_smooth(pts, 9, closed=False), pts, atol=1e-7)

    def test_constant(self):
        pts = np.ones((40, 2))
        np.testing.assert_allclose(savgol_smooth(pts, 5, closed=True), pts)

    def test_noisy_circle_improves(self, rng):
        c = circle(1.0, 400).points
        noisy = c + rng.normal(scale=0.01, size=c.shape)
        out = savgol_smooth(noisy, 9, closed=True)

        def rms(p):
            return np.sqrt(np.mean((np.hypot(*p.T) - 1.0) ** 2))

        assert rms(out) < rms(noisy)
        assert out.shape == noisy.shape

    def test_window_validation(self):
        pts = circle(n=30).points
        with pytest.raises(ValueError):
            savgol_smooth(pts, 9, closed=True)  # 9 > 30 / 4
        with pytest.raises(ValueError):
            savgol_smooth(pts, 6, closed=True)
        with pytest.raises(ValueError):
            savgol_smooth(pts, 3, closed=True)


class TestCurvature:
    @pytest.mark.parametrize("r", [1.0, 2.0, 10.0])
    def test_circle_local_and_global(self, r):
        c = circle(r, 500)
        k = curvature_profile(c)
        np.testing.assert_allclose(k, 1 / r, rtol=0.02)
        g = global_curvature_profile(c)
        np.testing.assert_allclose(g, 1 / r, rtol=0.05)

    def test_scalar_accessors(self):
        c = circle(10.0, 500)
        assert local_curvature(c, 17) == pytest.approx(0.1, rel=0.02)
        assert global_curvature(c, 17) == pytest.approx(0.1, rel=0.05)

    def test_line(self):
        x = np.linspace(0, 7, 200)
        line = OpenCurve(np.column_stack([x, 0.5 * x + 1]))
        assert np.max(curvature_profile(line)) < 1e-9
        assert np.max(global_curvature_profile(line)) < 1e-9

    def test_ellipse_extremes(self):
        e = ellipse(2.0, 1.0, 600)
        # analytic curvature 2 at t = 0, pi (indices 0, 300) and 1/4 at t = pi/2, 3pi/2
        k = curvature_profile(e)
        assert np.argmax(k) in (0, 300)
        assert k[0] == pytest.approx(2.0, rel=0.02)
        assert k[150] == pytest.approx(0.25, rel=0.02)
        g = global_curvature_profile(e)
        assert abs(np.argmin(g[:300]) - 150) <= 3
        assert abs(np.argmin(g[300:]) - 150) <= 3

    def test_rigid_invariance(self, rng):
        pts = circle(5.0, 300).points * np.array([1.0, 0.6]) + rng.normal(scale=0.01, size=(300, 2))
        R = rotation(37)
        moved = pts @ R.T + np.array([3.0, -8.0])
        for fn in (curvature_profile, global_curvature_profile):
            np.testing.assert_allclose(fn(moved, closed=True), fn(pts, closed=True), atol=1e-6)

    @pytest.mark.parametrize("s", [0.5, 2.0, 5.0])
    def test_scale(self, s):
        c = circle(3.0, 400)
        k = curvature_profile(c)
        ks = curvature_profile(c.points * s, closed=True)
        np.testing.assert_allclose(ks, k / s, rtol=1e-9)


class TestGeodesic:
    def test_adjacent_and_same(self):
        c = circle(1.0, 100)
        d = np.hypot(*(c.points[4] - c.points[3]))
        assert geodesic_length(c, 3, 4) == pytest.approx(d)
        assert geodesic_length(c, 5, 5) == 0.0

    def test_half_circle(self):
        c = circle(1.0, 2000)
        assert geodesic_length(c, 0, 1000) == pytest.approx(np.pi, abs=0.01)

    def test_wraps_ccw(self):
        c = circle(1.0, 100)
        total = c.length
        assert geodesic_length(c, 90, 10) == pytest.approx(total * 20 / 100)

    def test_errors(self):
        c = circle(1.0, 100)
        with pytest.raises(IndexError):
            geodesic_length(c, 0, 100)
        o = OpenCurve(c.points[:50])
        with pytest.raises(ValueError):
            geodesic_length(o, 10, 5)


class TestOcclude:
    def test_quarter(self):
        c = resample_uniform(circle(50.0, 333), 1000)
        o = occlude(c, 0.25, seed=7)
        assert isinstance(o, OpenCurve)
        assert abs(len(o) - 750) <= 1
        assert abs(o.length / c.length - 0.75) <= 1.5 / 1000

    def test_zero(self):
        c = circle(1.0, 64)
        o = occlude(c, 0.0, seed=3)
        np.testing.assert_array_equal(o.points, c.points)

    def test_deterministic_and_seed_dependent(self):
        c = circle(1.0, 400)
        a, b = occlude(c, 0.3, 11), occlude(c, 0.3, 11)
        np.testing.assert_array_equal(a.points, b.points)
        assert not np.array_equal(a.points, occlude(c, 0.3, 12).points)

    def test_range(self):
        c = circle(1.0, 100)
        for f in (-0.1, 0.96):
            with pytest.raises(ValueError):
                occlude(c, f, 0)

    def test_points_keep_order(self):
        c = circle(1.0, 200)
        o = occlude(c, 0.4, 5)
        idx = [int(np.argmin(np.hypot(*(c.points - p).T))) for p in o.points]
        steps = np.mod(np.diff(idx), 200)
        assert np.all(steps == 1)

    @settings(max_examples=25, deadline=None)
    @given(st.floats(0.05, 0.9), st.integers(0, 1000))
    def test_remaining_fraction(self, f, seed):
        c = circle(10.0, 500)
        o = occlude(c, f, seed)
        spacing_ = c.length / 500
        assert abs(o.length - (1 - f) * c.length) <= spacing_ + 1e-9


class TestNormalize:
    def test_length_centroid_orientation(self):
        pts = circle(3.0, 100, center=(5, 5)).points[::-1]
        out = normalize(pts, closed=True)
        _, total = arc_positions(out, True)
        assert total == pytest.approx(1000.0)
        assert signed_area(out) > 0
        np.testing.assert_allclose(out.mean(axis=0), 0, atol=1e-9)

    def test_open(self):
        out = normalize(np.array([[0.0, 0], [1, 0], [2, 0], [3, 0]]), closed=False)
        assert arc_positions(out, False)[1] == pytest.approx(1000.0)

    def test_transform_reflection_keeps_ccw(self):
        c = circle(1.0, 50)
        m = transform(c, np.diag([-1.0, 1.0]))
        assert isinstance(m, Contour) and signed_area(m.points) > 0
