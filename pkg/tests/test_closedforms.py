import math

import numpy as np
import pytest

from magnikit.barcode import GradedBarcode, graded_magnitude
from magnikit.closedforms import (
    CriticalPoint,
    adamaszek_euler,
    cycle_convexity_scan,
    cycle_magnitude,
    ec_limits,
    ec_subsequence_limit,
    geo_liminf,
    geo_limsup_partial,
    interval_error_bound,
    interval_limit,
    leinster_geodesic_circle,
    morse_magnitude,
    real_subset_magnitude,
    simplex_count,
)
from magnikit.expsum import ExpSum
from magnikit.homology import euler_at
from magnikit.metric import FiniteMetricSpace
from magnikit.rips import rips_filtration, rips_magnitude_subsets

from conftest import cycle_graph

INF = math.inf


def es(*terms):
    return ExpSum.from_terms(terms)


def euclidean_cycle_space(n):
    pts = [
        [math.cos(2 * math.pi * i / n), math.sin(2 * math.pi * i / n)]
        for i in range(n)
    ]
    return FiniteMetricSpace.from_point_cloud(pts)


class TestCycleMagnitude:
    def test_c5_graph(self):
        assert cycle_magnitude(5, "graph") == es((5, 0), (-5, 1), (1, 2))

    def test_c6_graph(self):
        assert cycle_magnitude(6, "graph") == es((6, 0), (-6, 1), (2, 2), (-1, 3))

    def test_trivial_cycles(self):
        assert cycle_magnitude(1, "graph") == es((1, 0))
        assert cycle_magnitude(2, "graph") == es((2, 0), (-1, 1))

    def test_euclidean_triangle(self):
        f = cycle_magnitude(3, "euclidean")
        assert f.allclose(es((3, 0), (-2, math.sqrt(3))), 1e-12)

    def test_matches_subset_enumeration_graph(self):
        for n in range(3, 17):
            assert cycle_magnitude(n, "graph").allclose(
                rips_magnitude_subsets(cycle_graph(n)), 1e-9
            ), n

    def test_matches_subset_enumeration_euclidean(self):
        for n in (3, 4, 5, 6, 7, 8):
            oracle = rips_magnitude_subsets(euclidean_cycle_space(n))
            assert cycle_magnitude(n, "euclidean").allclose(oracle, 1e-9), n

    def test_kind_aliases(self):
        assert cycle_magnitude(6, "eucl") == cycle_magnitude(6, "euclidean")
        assert cycle_magnitude(6, "geo") == cycle_magnitude(6, "geodesic")
        with pytest.raises(ValueError):
            cycle_magnitude(6, "taxicab")

    def test_size_preconditions(self):
        with pytest.raises(ValueError):
            cycle_magnitude(0, "graph")
        with pytest.raises(ValueError):
            cycle_magnitude(2, "euclidean")

    def test_limits(self):
        for n in (3, 7, 12):
            for kind in ("graph", "euclidean", "geodesic"):
                f = cycle_magnitude(n, kind)
                assert f.limit_at_zero() == pytest.approx(1.0, abs=1e-9)
                assert f.limit_at_infinity() == pytest.approx(n)

    def test_geodesic_is_reparam_of_graph(self):
        for n in range(3, 13):
            f = cycle_magnitude(n, "graph")
            g = f.reparam(lambda r: 2 * math.pi * r / n)
            assert g.allclose(cycle_magnitude(n, "geodesic"), 1e-9), n

    def test_euclidean_is_reparam_of_geodesic(self):
        for n in range(3, 13):
            g = cycle_magnitude(n, "geodesic")
            e = g.reparam(lambda r: 2 * math.sin(r / 2))
            assert e.allclose(cycle_magnitude(n, "euclidean"), 1e-9), n

    def test_euclidean_footnote_identity(self):
        # diameter rate of the odd Euclidean cycle equals the "one step more"
        # rate, so dropping the r = n exclusion would change nothing there
        for n in range(3, 100, 2):
            delta_n = 2 * math.sin(math.pi * (n // 2) / n)
            delta_nn = 2 * math.sin(math.pi * (1 / n + (n // 2) / n))
            assert delta_n == pytest.approx(delta_nn, abs=1e-12)


class TestAdamaszekEuler:
    def test_examples(self):
        assert adamaszek_euler(6, 2) == 2
        assert adamaszek_euler(6, 3) == 1
        assert adamaszek_euler(6, 1) == 0
        assert adamaszek_euler(6, 0) == 6

    def test_range_errors(self):
        with pytest.raises(ValueError):
            adamaszek_euler(6, 4)
        with pytest.raises(ValueError):
            adamaszek_euler(6, -1)

    def test_against_clique_complex(self):
        for n in range(3, 17):
            X = cycle_graph(n)
            cx = rips_filtration(X, n - 1)
            for r in range(0, n // 2 + 1):
                assert adamaszek_euler(n, r) == euler_at(cx, float(r)), (n, r)


class TestSimplexCount:
    def test_hexagon_edges(self):
        assert simplex_count(6, 1, 1) == 6

    def test_hexagon_vertices(self):
        assert simplex_count(6, 2, 0) == 6

    def test_range_errors(self):
        with pytest.raises(ValueError):
            simplex_count(6, 3, 1)
        with pytest.raises(ValueError):
            simplex_count(6, -1, 0)

    def test_against_enumeration(self):
        for n in range(3, 13):
            X = cycle_graph(n)
            cx = rips_filtration(X, n - 1)
            for r in range(0, n // 2):
                counts = {}
                for cell in cx.cells:
                    if cell.filtration <= r:
                        counts[cell.degree] = counts.get(cell.degree, 0) + 1
                max_i = max(counts)
                for i in range(0, max_i + 2):
                    assert simplex_count(n, r, i) == counts.get(i, 0), (n, r, i)


class TestRealSubsets:
    def test_pair(self):
        assert real_subset_magnitude([0, 1]) == es((2, 0), (-1, 1))

    def test_uniform_four(self):
        f = real_subset_magnitude([0, 1 / 3, 2 / 3, 1])
        assert f.allclose(es((4, 0), (-3, 1 / 3)), 1e-12)

    def test_duplicates_rejected(self):
        with pytest.raises(ValueError):
            real_subset_magnitude([0, 0, 1])
        with pytest.raises(ValueError):
            real_subset_magnitude([1, 0])

    def test_against_subsets_route(self):
        rng = np.random.default_rng(31)
        for _ in range(50):
            n = int(rng.integers(2, 13))
            pts = np.sort(rng.uniform(0, 3, size=n))
            if np.min(np.diff(pts)) < 1e-6:
                continue
            X = FiniteMetricSpace.from_point_cloud([[p] for p in pts])
            assert real_subset_magnitude(pts).allclose(rips_magnitude_subsets(X), 1e-9)


class TestIntervalTheorem:
    def test_uniform_partitions_within_bound(self):
        for n in (10, 100, 1000):
            pts = [i / n for i in range(n + 1)]
            f = real_subset_magnitude(pts)
            for t in (0.5, 1.0, 5.0):
                gap = interval_limit(t) - f.eval(t)
                assert 0.0 <= gap <= interval_error_bound(1.0 / n, t) + 1e-12

    def test_bound_arithmetic(self):
        assert interval_error_bound(1e-3, 1.0) == pytest.approx(2.5e-3)

    def test_bound_vanishes_with_mesh(self):
        bounds = [interval_error_bound(d, 2.0) for d in (0.1, 0.01, 0.001)]
        assert all(b2 < b1 for b1, b2 in zip(bounds, bounds[1:]))
        assert bounds[-1] < 1e-2

    def test_bound_preconditions(self):
        with pytest.raises(ValueError):
            interval_error_bound(0.0, 1.0)
        with pytest.raises(ValueError):
            interval_error_bound(1.5, 1.0)
        with pytest.raises(ValueError):
            interval_error_bound(0.5, 0.0)


class TestEuclideanCircleLimits:
    def test_liminf_value(self):
        liminf, _, _ = ec_limits(1.0, 9)
        assert liminf == pytest.approx(math.exp(-2) + 2 * math.pi, rel=1e-12)

    def test_partial_cauchy_consistency(self):
        _, p999, tail999 = ec_limits(1.0, 999)
        _, p9999, _ = ec_limits(1.0, 9999)
        assert abs(p9999 - p999) <= tail999

    def test_liminf_below_limsup(self):
        for t in (0.1, 0.5, 1.0):
            liminf, partial, _ = ec_limits(t, 999)
            assert liminf < partial

    def test_rmax_must_be_odd(self):
        with pytest.raises(ValueError):
            ec_limits(1.0, 10)


class TestEuclideanSubsequenceLimits:
    def test_m1(self):
        assert ec_subsequence_limit(1, 1.0) == pytest.approx(math.exp(-2) + 2 * math.pi)

    def test_m3_extra_term(self):
        t = 1.0
        extra = ec_subsequence_limit(3, t) - ec_subsequence_limit(1, t)
        assert extra == pytest.approx((math.pi * t / 3) * math.exp(-math.sqrt(3) * t), rel=1e-12)

    def test_convergence_trend_over_primes(self):
        t = 1.0
        for m in (1, 3):
            target = ec_subsequence_limit(m, t)
            gaps = [
                abs(cycle_magnitude(m * p, "euclidean").eval(t) - target)
                for p in (101, 211, 401, 1009)
            ]
            assert all(b < a for a, b in zip(gaps, gaps[1:]))


class TestGeodesicCircleLimits:
    def test_liminf_value(self):
        assert geo_liminf(0.5) == pytest.approx(math.exp(-math.pi / 2) + math.pi, rel=1e-12)

    def test_partial_sums_increase(self):
        values = [geo_limsup_partial(0.5, r) for r in (9, 99, 999, 9999)]
        assert all(b > a for a, b in zip(values, values[1:]))

    def test_partial_exceeds_liminf(self):
        assert geo_limsup_partial(0.5, 99) > geo_liminf(0.5) + 0.5


class TestMorseMagnitude:
    def test_sphere_height_function(self):
        for n in (2, 3):
            f = morse_magnitude([CriticalPoint(0.0, 0), CriticalPoint(1.0, n - 1)])
            sign = 1.0 if (n - 1) % 2 == 0 else -1.0
            assert f == es((1, 0), (sign, 1))

    def test_torus(self):
        f = morse_magnitude([
            CriticalPoint(0.0, 0), CriticalPoint(1.0, 1),
            CriticalPoint(2.0, 1), CriticalPoint(3.0, 2),
        ])
        assert f == es((1, 0), (-1, 1), (-1, 2), (1, 3))

    def test_matches_sublevel_barcode_sphere(self):
        # distance filtration of the (n-1)-sphere: one free degree-0 bar and
        # one [0,1) bar in degree n-1
        for n in (2, 3, 4):
            g = GradedBarcode.of({0: [(0, INF)], n - 1: [(0, 1)]})
            crits = [CriticalPoint(0.0, 0), CriticalPoint(0.0, n - 1), CriticalPoint(1.0, n)]
            # sublevel route: bars [0, inf) deg 0 and [0, 1) deg n-1
            expected = graded_magnitude(g)
            direct = es((1, 0)) + (es((1, 0), (-1, 1)) if (n - 1) % 2 == 0
                                   else -es((1, 0), (-1, 1)))
            assert expected == direct

    def test_torus_sublevel_equivalence(self):
        # standard Morse function on the torus: bars [0,inf) deg 0, [1,inf)
        # and [2,inf) deg 1, [3,inf) deg 2
        g = GradedBarcode.of({0: [(0, INF)], 1: [(1, INF), (2, INF)], 2: [(3, INF)]})
        f = morse_magnitude([
            CriticalPoint(0.0, 0), CriticalPoint(1.0, 1),
            CriticalPoint(2.0, 1), CriticalPoint(3.0, 2),
        ])
        assert graded_magnitude(g) == f

    def test_rejects_bad_critical_points(self):
        with pytest.raises(ValueError):
            CriticalPoint(math.inf, 0)
        with pytest.raises(ValueError):
            CriticalPoint(0.0, -1)


class TestGeodesicCircleMagnitude:
    def test_value_at_one(self):
        assert leinster_geodesic_circle(1.0) == pytest.approx(
            math.pi / (1.0 - math.exp(-math.pi)), rel=1e-14
        )

    def test_asymptote(self):
        t = 200.0
        assert leinster_geodesic_circle(t) / (math.pi * t) == pytest.approx(1.0, abs=1e-12)

    def test_strictly_above_linear_term(self):
        for t in (0.1, 1.0, 10.0):
            assert leinster_geodesic_circle(t) > math.pi * t


class TestConvexityScan:
    def test_reported_ranges(self):
        ts = [0.05 * i for i in range(1, 120)]
        lo5, hi5 = cycle_convexity_scan(5, ts)
        assert hi5 < 0  # concave throughout the grid
        lo7, hi7 = cycle_convexity_scan(7, ts)
        assert lo7 < 0 < hi7  # mixed signs: neither convex nor concave
