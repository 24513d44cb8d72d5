import math

import numpy as np
import pytest

import oracles
from geomkit import shapes
from geomkit.errors import ContractViolation
from geomkit.vectorization import (
    ALGORITHMS,
    PrefixMoments,
    douglas_peucker,
    fit_line,
    fit_plane,
    ftls_extract,
    global_optimize,
    line_sse,
    polyline_construct,
    reumann_witkam,
    run_benchmark,
    sym2_eigen,
    sym3_eigen,
    tls_line_fit,
    tls_plane_fit,
    with_polyline,
)
from geomkit.vectorization.benchmark import CSV_HEADER, check_algorithms, register_algorithm
from geomkit.vectorization.eigen import jacobi_eigen, sym3_eigenvalues
from geomkit.vectorization.ftls import VectorizationResult


def perfect_l(m=50):
    a = np.column_stack([np.arange(m, 0, -1.0), np.zeros(m)])  # (m,0) .. (1,0)
    b = np.column_stack([np.zeros(m), np.arange(0, m, 1.0)])  # (0,0) .. (0,m-1)
    return np.vstack([a, b])  # corner (0,0) at index m


class TestPrefixMoments:
    def test_singleton(self):
        pm = PrefixMoments([[3.0, 4.0]])
        k, s1, s2 = pm.interval_sums(0, 0)
        assert k == 1
        np.testing.assert_allclose(s1, [3, 4])
        np.testing.assert_allclose(s2, [[9, 12], [12, 16]])
        np.testing.assert_array_equal(pm.scatter(0, 0), np.zeros((2, 2)))
        np.testing.assert_allclose(pm.centroid(0, 0), [3, 4])

    @pytest.mark.parametrize("dim", [2, 3])
    def test_random_intervals_match_direct_sums(self, dim):
        rng = np.random.default_rng(dim)
        pts = rng.normal(size=(500, dim)) * 10 + 3
        pm = PrefixMoments(pts)
        for _ in range(1000):
            i, j = sorted(rng.integers(0, 500, 2))
            k, s1, s2 = pm.interval_sums(i, j)
            seg = pts[i:j + 1]
            ref1 = sum(seg)
            ref2 = sum(np.outer(p, p) for p in seg)
            assert k == j - i + 1
            np.testing.assert_allclose(s1, ref1, rtol=1e-9, atol=1e-9 * np.abs(seg).sum())
            np.testing.assert_allclose(s2, ref2, rtol=1e-9, atol=1e-9 * (seg ** 2).sum())

    def test_full_range_telescopes(self):
        pts = np.random.default_rng(7).normal(size=(200, 3))
        pm = PrefixMoments(pts)
        acc = np.zeros(3)
        for p in pts - pm.origin:
            acc = acc + p
        # differencing against the zero row leaves the running sum untouched
        assert np.array_equal(pm.s1[pm.n] - pm.s1[0], acc)
        np.testing.assert_allclose(pm.scatter(0, pm.n - 1), oracles.scatter(pts)[1], rtol=1e-12)

    def test_invalid(self):
        with pytest.raises(ContractViolation):
            PrefixMoments(np.empty((0, 2)))
        with pytest.raises(ContractViolation):
            PrefixMoments(np.zeros((3, 4)))
        pm = PrefixMoments(np.zeros((3, 2)))
        with pytest.raises(ContractViolation):
            pm.scatter(2, 1)
        with pytest.raises(ContractViolation):
            pm.scatter(0, 3)


class TestEigen:
    def test_sym2_against_eigh(self):
        rng = np.random.default_rng(0)
        for _ in range(500):
            a, b, c = rng.normal(size=3)
            lmax, lmin, u = sym2_eigen(a, b, c)
            w, v = np.linalg.eigh([[a, c], [c, b]])
            assert lmax == pytest.approx(w[1], abs=1e-12) and lmin == pytest.approx(w[0], abs=1e-12)
            assert abs(abs(u @ v[:, 1]) - 1) < 1e-12

    def test_sym2_isotropic(self):
        _, _, u = sym2_eigen(2.0, 2.0, 0.0)
        np.testing.assert_array_equal(u, [1.0, 0.0])

    def test_sym3_against_eigh(self):
        rng = np.random.default_rng(1)
        for _ in range(500):
            m = rng.normal(size=(3, 3))
            m = m + m.T
            vals, vecs = sym3_eigen(m)
            w = np.linalg.eigh(m)[0][::-1]
            np.testing.assert_allclose(vals, w, atol=1e-12 * np.abs(w).max())
            np.testing.assert_allclose(m @ vecs, vecs * vals, atol=1e-11 * np.abs(w).max())
            np.testing.assert_allclose(vecs.T @ vecs, np.eye(3), atol=1e-13)

    def test_sym3_degenerate(self):
        for m in (np.zeros((3, 3)), np.eye(3) * 2, np.diag([3.0, 1.0, 1.0]), np.diag([1.0, 1.0, 3.0])):
            vals, vecs = sym3_eigen(m)
            np.testing.assert_allclose(vals, np.sort(np.diag(m))[::-1], atol=1e-15)
            np.testing.assert_allclose(vecs.T @ vecs, np.eye(3), atol=1e-15)
            np.testing.assert_allclose(m @ vecs, vecs * vals, atol=1e-15)

    def test_closed_form_values(self):
        vals = sym3_eigenvalues(2, 3, 4, 0.5, 0.1, -0.3)
        w = np.linalg.eigvalsh([[2, 0.5, 0.1], [0.5, 3, -0.3], [0.1, -0.3, 4]])[::-1]
        np.testing.assert_allclose(vals, w, atol=1e-14)

    def test_jacobi(self):
        m = np.array([[4.0, 1, 2], [1, 3, 0.5], [2, 0.5, 1]])
        w, v = jacobi_eigen(m)
        np.testing.assert_allclose(np.sort(w), np.linalg.eigvalsh(m), atol=1e-13)
        np.testing.assert_allclose(m @ v, v * w, atol=1e-13)


class TestLineFit:
    def test_collinear(self):
        f = fit_line([[0, 0], [1, 0], [2, 0]])
        np.testing.assert_allclose(f.direction, [1, 0])
        assert f.sse == 0.0

    def test_three_point_example(self):
        pts = np.array([[0, 0], [1, 1], [2, 0]], dtype=float)
        f = fit_line(pts)
        np.testing.assert_allclose(f.centroid, [1, 1 / 3], atol=1e-15)
        np.testing.assert_allclose(PrefixMoments(pts).scatter(0, 2), [[2, 0], [0, 2 / 3]], atol=1e-15)
        np.testing.assert_allclose(f.direction, [1, 0], atol=1e-15)
        assert f.sse == pytest.approx(2 / 3, rel=1e-14)

    def test_random_3d_sse_equals_pointwise_residuals(self):
        rng = np.random.default_rng(2)
        pts = rng.normal(size=(400, 3)) * [5, 1, 0.5] + 2
        pm = PrefixMoments(pts)
        for _ in range(300):
            i, j = sorted(rng.integers(0, 400, 2))
            if j - i < 2:
                continue
            f = tls_line_fit(pm, i, j)
            ref = oracles.line_residual_sse(pts[i:j + 1], f.centroid, f.direction)
            assert f.sse == pytest.approx(ref, rel=1e-8)
            assert f.count == j - i + 1

    def test_needs_two_points(self):
        with pytest.raises(ContractViolation):
            tls_line_fit(PrefixMoments([[0, 0], [1, 1]]), 1, 1)

    def test_far_from_origin(self):
        rng = np.random.default_rng(3)
        t = np.linspace(0, 1, 1000)
        pts = np.column_stack([t, 0.5 * t]) + 1e6 + rng.normal(scale=1e-3, size=(1000, 2))
        _, u, sse = oracles.tls_line(pts)
        f = fit_line(pts)
        assert f.sse == pytest.approx(sse, rel=1e-6)
        assert oracles.angle_between_lines(f.direction, u) < 1e-9

    def test_short_window_far_from_cloud_mean(self):
        # plain prefix differences lose about 1e-8 of the sse here
        rng = np.random.default_rng(4)
        pts = oracles.piecewise_linear_cloud(rng, 6, 100, 0.01, dim=2) + 40
        pm = PrefixMoments(pts)
        for i in (0, 1, len(pts) - 4):
            _, _, sse = oracles.tls_line(pts[i:i + 3])
            assert tls_line_fit(pm, i, i + 2).sse == pytest.approx(sse, rel=1e-11)
            np.testing.assert_allclose(pm.scatter(i, i + 2), oracles.scatter(pts[i:i + 3])[1], rtol=0, atol=1e-13)

    def test_sweep_kernel_agrees_with_fit(self):
        rng = np.random.default_rng(5)
        pts = oracles.piecewise_linear_cloud(rng, 3, 40, 0.02, dim=3)
        pm = PrefixMoments(pts)
        for i, j in [(0, 5), (3, 90), (0, len(pts) - 1)]:
            assert line_sse(pm, i, j) == pytest.approx(tls_line_fit(pm, i, j).sse, rel=1e-7)


class TestPlaneFit:
    def test_square_in_plane(self):
        f = fit_plane([[0, 0, 0], [1, 0, 0], [1, 1, 0], [0, 1, 0]])
        np.testing.assert_allclose(np.abs(f.normal), [0, 0, 1])
        assert f.sse == pytest.approx(0.0, abs=1e-30)

    @pytest.mark.parametrize("h", [0.1, 0.5, 2.0])
    def test_square_plus_apex_against_normal_grid(self, h):
        pts = np.array([[0, 0, 0], [1, 0, 0], [1, 1, 0], [0, 1, 0], [0.5, 0.5, h]])
        f = fit_plane(pts)
        c = pts.mean(axis=0)
        th, ph = np.meshgrid(np.linspace(0, np.pi / 2, 721), np.linspace(0, 2 * np.pi, 1441), indexing="ij")
        normals = np.stack([np.sin(th) * np.cos(ph), np.sin(th) * np.sin(ph), np.cos(th)], axis=-1).reshape(-1, 3)
        grid_min = np.min(np.sum(((pts - c) @ normals.T) ** 2, axis=0))
        assert f.sse <= grid_min + 1e-12
        assert f.sse == pytest.approx(grid_min, abs=1e-6)

    def test_noise_consistency(self):
        rng = np.random.default_rng(4)
        n, sigma = 10_000, 0.05
        uv = rng.uniform(-5, 5, size=(n, 2))
        basis = np.linalg.qr(rng.normal(size=(3, 3)))[0]
        pts = uv @ basis[:, :2].T + np.outer(rng.normal(scale=sigma, size=n), basis[:, 2]) + [1, 2, 3]
        f = fit_plane(pts)
        assert f.sse / n == pytest.approx(sigma ** 2, rel=0.2)
        assert oracles.angle_between_lines(f.normal, basis[:, 2]) < 0.01

    def test_random_against_eigh(self):
        rng = np.random.default_rng(5)
        pts = rng.normal(size=(300, 3))
        pm = PrefixMoments(pts)
        for _ in range(200):
            i, j = sorted(rng.integers(0, 300, 2))
            if j - i < 3:
                continue
            f = tls_plane_fit(pm, i, j)
            _, nrm, sse = oracles.tls_plane(pts[i:j + 1])
            assert f.sse == pytest.approx(sse, rel=1e-9)
            assert oracles.angle_between_lines(f.normal, nrm) < 1e-8

    def test_requires_3d_and_three_points(self):
        with pytest.raises(ContractViolation):
            fit_plane([[0, 0], [1, 0], [0, 1]])
        with pytest.raises(ContractViolation):
            tls_plane_fit(PrefixMoments(np.eye(3)), 0, 1)


class TestFtls:
    def test_perfect_l(self):
        pts = perfect_l()
        res = ftls_extract(pts, 1e-3)
        assert len(res) == 2
        assert abs(res.intervals[0][1] - 50) <= 1

    def test_collinear_one_segment(self):
        pts = np.column_stack([np.linspace(0, 10, 300), np.linspace(0, 5, 300)])
        for sigma in (1e-9, 1e-3, 10.0):
            assert len(ftls_extract(pts, sigma)) == 1

    def test_semicircle_segment_count_monotone(self):
        pts = shapes.semicircle(2000, noise=0.01, seed=0)
        counts = [len(ftls_extract(pts, s)) for s in (0.02, 0.05, 0.1, 0.2, 0.5, 1.0, 2.0)]
        assert counts == sorted(counts, reverse=True)
        assert counts[0] > counts[-1]

    @pytest.mark.parametrize("shared", [True, False])
    def test_interval_layout(self, shared):
        rng = np.random.default_rng(6)
        pts = oracles.piecewise_linear_cloud(rng, 6, 40, 0.01)
        res = ftls_extract(pts, 0.03, shared_breakpoints=shared)
        iv = res.intervals
        assert iv[0][0] == 0 and iv[-1][1] == len(pts) - 1
        for (a0, b0), (a1, b1) in zip(iv[:-1], iv[1:]):
            if shared:
                assert a1 == b0
            else:
                assert a1 == b0 + 1 or (a1, b1) == (len(pts) - 2, len(pts) - 1)

    def test_trailing_singleton_paired(self):
        # a sharp kink right before the last point leaves one point over
        pts = np.array([[0, 0], [1, 0], [2, 0], [3, 0], [3, 5]], dtype=float)
        res = ftls_extract(pts, 0.01, shared_breakpoints=False)
        assert res.intervals[-1] == (3, 4)
        assert all(b - a >= 1 for a, b in res.intervals)

    def test_segments_clip_to_projections(self):
        pts = np.array([[0, 0.1], [1, -0.1], [2, 0.1], [3, -0.1]])
        res = ftls_extract(pts, 1.0)
        seg = res.segments[0]
        f = res.fits[0]
        np.testing.assert_allclose(np.asarray(seg.begin), f.project(pts[0]))
        np.testing.assert_allclose(np.asarray(seg.end), f.project(pts[-1]))

    def test_3d_helix(self):
        pts = shapes.helix(900, seed=0)
        res = ftls_extract(pts, 0.05)
        assert len(res) > 3
        for f in res.fits:
            assert f.rms <= 0.05

    def test_invalid(self):
        with pytest.raises(ContractViolation):
            ftls_extract(np.zeros((5, 2)), 0.0)
        with pytest.raises(ContractViolation):
            ftls_extract(np.zeros((1, 2)), 1.0)

    def test_duplicate_points(self):
        pts = np.repeat(np.array([[0, 0], [1, 1], [2, 2]], dtype=float), 5, axis=0)
        res = ftls_extract(pts, 1e-6)
        assert len(res) == 1 and res.total_sse == 0.0


class TestGlobalOptimize:
    def test_fixed_point(self):
        pts = perfect_l()
        res = ftls_extract(pts, 1e-3)
        out = global_optimize(pts, None, res)
        assert out.intervals == res.intervals

    @pytest.mark.parametrize("shift", [-3, -2, 2, 3])
    def test_displaced_breakpoint_returns_to_corner(self, shift):
        pts = perfect_l()
        pm = PrefixMoments(pts)
        bad = ftls_extract(pts, 1e-3)
        c = 50 + shift
        start = VectorizationResult(pts, [(0, c), (c, 99)], [tls_line_fit(pm, 0, c), tls_line_fit(pm, c, 99)],
                                    bad.segments, True, 1e-3)
        out = global_optimize(pts, pm, start)
        # the exhaustive sweep over every single breakpoint position agrees
        best = min(range(1, 99), key=lambda b: line_sse(pm, 0, b) + line_sse(pm, b, 99))
        assert out.intervals == [(0, best), (best, 99)] == [(0, 50), (50, 99)]

    def test_monotone_on_random_clouds(self):
        rng = np.random.default_rng(8)
        for _ in range(30):
            pts = oracles.piecewise_linear_cloud(rng, int(rng.integers(2, 8)), 30, 0.02)
            pm = PrefixMoments(pts)
            res = ftls_extract(pts, 0.04, pm=pm, shared_breakpoints=bool(rng.integers(0, 2)))
            out = global_optimize(pts, pm, res)
            assert out.total_sse <= res.total_sse
            assert len(out) == len(res)


class TestPolyline:
    def test_perfect_l_corner(self):
        res = ftls_extract(perfect_l(), 1e-3)
        corners, fallbacks = polyline_construct(res)
        assert len(corners) == 3 and fallbacks == []
        assert np.linalg.norm(corners[1]) < 1e-9
        np.testing.assert_allclose(corners[0], [50, 0], atol=1e-9)
        np.testing.assert_allclose(corners[2], [0, 49], atol=1e-9)

    def test_single_segment(self):
        pts = np.array([[0, 0.1], [1, -0.1], [2, 0.1], [3, -0.1]])
        res = ftls_extract(pts, 1.0)
        corners, _ = polyline_construct(res)
        assert len(corners) == 2
        np.testing.assert_allclose(corners[0], res.fits[0].project(pts[0]))
        np.testing.assert_allclose(corners[1], res.fits[0].project(pts[-1]))

    def test_noisy_square(self):
        sigma = 0.01
        rng_seeds = range(5)
        for seed in rng_seeds:
            pts = shapes.square(401, noise=sigma, seed=seed)
            pm = PrefixMoments(pts)
            res = global_optimize(pts, pm, ftls_extract(pts, 3 * sigma, pm=pm))
            corners, _ = polyline_construct(res)
            truth = shapes.square_corners()
            assert len(corners) == 5
            assert np.max(np.linalg.norm(corners - truth, axis=1)) <= 3 * sigma

    def test_parallel_fallback(self):
        pts = np.array([[0, 0], [1, 0], [2, 0], [3, 0.5], [4, 0.5], [5, 0.5]], dtype=float)
        pm = PrefixMoments(pts)
        res = VectorizationResult(pts, [(0, 2), (3, 5)], [tls_line_fit(pm, 0, 2), tls_line_fit(pm, 3, 5)], [],
                                  False, None)
        corners, fallbacks = polyline_construct(res)
        assert fallbacks == [1]
        np.testing.assert_allclose(corners[1], [2, 0.25])

    def test_3d_corner(self):
        a = np.column_stack([np.linspace(5, 0, 20), np.zeros(20), np.zeros(20)])
        b = np.column_stack([np.zeros(20), np.zeros(20), np.linspace(0, 5, 20)])
        pts = np.vstack([a, b[1:]])
        res = ftls_extract(pts, 1e-6)
        corners, _ = polyline_construct(res)
        assert np.linalg.norm(corners[1]) < 1e-9

    def test_with_polyline(self):
        res = with_polyline(ftls_extract(perfect_l(), 1e-3))
        assert res.polyline.shape == (3, 2)


class TestDouglasPeucker:
    def test_examples(self):
        pts = [[0, 0], [1, 0.5], [2, 0]]
        assert douglas_peucker(pts, 0.6) == [0, 2]
        assert douglas_peucker(pts, 0.4) == [0, 1, 2]

    def test_straight_line(self):
        pts = np.column_stack([np.arange(1000.0), 2 * np.arange(1000.0)])
        for tol in (1e-9, 1.0, 100.0):
            assert douglas_peucker(pts, tol) == [0, 999]

    @pytest.mark.parametrize("seed", range(15))
    def test_matches_recursive_oracle(self, seed):
        rng = np.random.default_rng(seed)
        pts = np.cumsum(rng.normal(size=(200, 2)), axis=0)
        tol = float(rng.uniform(0.2, 3))
        keys = douglas_peucker(pts, tol)
        assert keys == oracles.douglas_peucker(pts, tol)
        assert oracles.polyline_max_deviation(pts, keys) <= tol

    def test_invalid(self):
        with pytest.raises(ContractViolation):
            douglas_peucker([[0, 0]], 1.0)
        with pytest.raises(ContractViolation):
            douglas_peucker([[0, 0], [1, 1]], 0.0)


class TestReumannWitkam:
    def test_straight(self):
        pts = np.column_stack([np.arange(50.0), np.zeros(50)])
        assert reumann_witkam(pts, 0.1) == [0, 49]

    def test_right_angle(self):
        pts = perfect_l()
        keys = reumann_witkam(pts, 0.5)
        assert len(keys) == 3 and abs(keys[1] - 50) <= 1

    @pytest.mark.parametrize("seed", range(15))
    def test_matches_corridor_oracle(self, seed):
        rng = np.random.default_rng(100 + seed)
        pts = np.cumsum(rng.normal(size=(300, 2)), axis=0)
        tol = float(rng.uniform(0.3, 3))
        keys = reumann_witkam(pts, tol)
        assert keys == oracles.reumann_witkam(pts, tol)
        assert len(keys) <= len(pts)
        assert keys == sorted(set(keys)) and keys[0] == 0 and keys[-1] == len(pts) - 1

    def test_repeated_points(self):
        pts = np.array([[0, 0], [0, 0], [0, 0], [1, 0], [2, 0]], dtype=float)
        assert reumann_witkam(pts, 0.1) == [0, 4]


class TestBenchmark:
    def test_rows_and_csv(self):
        rep = run_benchmark("semicircle", sizes=(500, 1000), algorithms=("ftls", "dp", "rw", "ftls-global"),
                            repeats=1)
        assert len(rep.rows) == 8
        lines = rep.to_csv().splitlines()
        assert lines[0] == ",".join(CSV_HEADER)
        assert len(lines) == 9
        for r in rep.rows:
            assert math.isfinite(r.max_deviation) and r.segments >= 1

    def test_deterministic_columns(self):
        a = run_benchmark("l-shape", sizes=(400,), repeats=1, seed=3, noise=0.01)
        b = run_benchmark("l-shape", sizes=(400,), repeats=1, seed=3, noise=0.01)
        assert [(r.total_sse, r.segments) for r in a.rows] == [(r.total_sse, r.segments) for r in b.rows]

    def test_dp_meets_tolerance(self):
        rep = run_benchmark("semicircle", sizes=(2000,), algorithms=("dp",), tolerance=0.05, repeats=1)
        assert rep.rows[0].max_deviation <= 0.05

    def test_unknown_algorithm(self):
        with pytest.raises(ContractViolation, match="ftls, ftls-global, dp, rw"):
            check_algorithms(["ftls", "bogus"])

    def test_register(self):
        from geomkit.vectorization.benchmark import Polyline
        register_algorithm("endpoints", lambda pts, tol: [0, len(pts) - 1],
                           lambda pts, keys: Polyline(pts[keys], [(0, len(pts) - 1)], 0.0))
        try:
            rep = run_benchmark("semicircle", sizes=(100,), algorithms=("endpoints",), repeats=1)
            assert rep.rows[0].segments == 1
        finally:
            del ALGORITHMS["endpoints"]

    def test_table(self):
        rep = run_benchmark("semicircle", sizes=(100,), algorithms=("ftls",), repeats=1)
        assert rep.to_table().shape == (2, 6)
