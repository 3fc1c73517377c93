import math

import numpy as np
import pytest

from maglab import (
    SpaceSpec,
    approx_magnitude,
    fourier_upper_bound_1d,
    gamma_hat_1d,
    generate,
    growth_bound_study,
    growth_lower_bound,
    interval_family,
    lp_ball_volume,
    product_counterexample_experiment,
    witness_search,
)
from maglab.errors import InvalidParams, QuadratureDivergence


class TestApproxMagnitude:
    def test_interval_families_agree(self):
        levels = [11, 101, 501]
        uni = approx_magnitude(interval_family(2.0, "uniform"), levels)
        che = approx_magnitude(interval_family(2.0, "chebyshev"), levels)
        assert uni.monotone and che.monotone
        assert uni.extrapolated_limit == pytest.approx(2.0, abs=1e-3)
        assert abs(uni.extrapolated_limit - che.extrapolated_limit) <= 1e-3

    def test_cantor_magnitudes_nondecreasing(self):
        study = approx_magnitude(
            SpaceSpec("cantor_net", {"length": 1.0}), levels=range(4, 9)
        )
        assert study.monotone
        mags = [r.magnitude for r in study.records]
        assert mags[-1] - mags[-2] < 1e-4

    def test_singleton_family_constant(self):
        study = approx_magnitude(
            SpaceSpec("interval_net", {"length": 1.0}), levels=[1, 1, 1]
        )
        assert all(r.magnitude == pytest.approx(1.0) for r in study.records)

    def test_quadrature_value_is_lower_bound(self):
        levels = [21, 81]
        solve = approx_magnitude(interval_family(1.0, "uniform"), levels)
        quad = approx_magnitude(interval_family(1.0, "uniform"), levels, quadrature=True)
        for a, b in zip(quad.records, solve.records):
            assert a.magnitude <= b.magnitude + 1e-12

    def test_net_magnitudes_below_limit(self):
        study = approx_magnitude(interval_family(2.0, "uniform"), [11, 101, 501])
        for r in study.records:
            assert r.magnitude <= study.extrapolated_limit + 1e-6

    def test_indefinite_level_recorded_not_raised(self):
        # bipartite spaces scaled far down are indefinite; the study keeps going
        def family(level):
            return SpaceSpec(
                "complete_bipartite", {"m": 3, "n": level, "r": 1.0}, scale=0.01
            )

        study = approx_magnitude(family, [2, 3])
        assert all(r.failure is not None for r in study.records)


class TestBallVolume:
    def test_diamond(self):
        assert lp_ball_volume(2, 1.0) == pytest.approx(2.0)

    def test_disk(self):
        assert lp_ball_volume(2, 2.0) == pytest.approx(math.pi, abs=1e-12)

    @pytest.mark.parametrize("p", [0.5, 1.0, 2.0, math.inf])
    def test_interval(self, p):
        assert lp_ball_volume(1, p) == pytest.approx(2.0)

    def test_cube(self):
        assert lp_ball_volume(3, math.inf) == pytest.approx(8.0)

    def test_invalid(self):
        with pytest.raises(InvalidParams):
            lp_ball_volume(0, 1.0)


class TestGrowthLowerBound:
    def test_l1_plane(self):
        for t in (1.0, 3.0, 10.0):
            assert growth_lower_bound(2, 1.0, 1.0, 1.0, t) == pytest.approx(
                t**2 / 4.0
            )

    def test_line_segment(self):
        for t in (1.0, 7.0):
            assert growth_lower_bound(1, 2.0, 1.0, 3.0, t) == pytest.approx(
                3.0 * t / 2.0
            )

    def test_vanishes_at_zero(self):
        assert growth_lower_bound(2, 1.0, 1.0, 1.0, 0.0) == 0.0


class TestGrowthBoundStudy:
    def test_l1_square_bounds(self):
        study = growth_bound_study(
            SpaceSpec("grid_net", {"n": 2, "p": 1.0, "m": 21}), [4.0, 8.0]
        )
        for check in study.checks:
            assert check.satisfied
            # the l1 product identity gives the solid square's magnitude
            # (1 + t/2)^2, an upper envelope for any net
            assert check.net_magnitude <= (1 + check.t / 2) ** 2 * 1.05

    def test_requires_grid_template(self):
        with pytest.raises(InvalidParams):
            growth_bound_study(SpaceSpec("interval_net", {"n": 5}), [1.0])


class TestGammaHat:
    def test_p1_closed_form(self):
        rep = gamma_hat_1d(1.0)
        exact = 2.0 / (1.0 + 4.0 * math.pi**2 * rep.grid**2)
        assert np.abs(rep.values - exact).max() <= 1e-6

    def test_p2_closed_form(self):
        rep = gamma_hat_1d(2.0)
        exact = math.sqrt(math.pi) * np.exp(-(math.pi**2) * rep.grid**2)
        assert np.abs(rep.values - exact).max() <= 1e-6

    @pytest.mark.parametrize("p,kwargs", [(0.5, {"L": 700.0, "N": 2**20}), (1.5, {})])
    def test_stable_exponents_positive_decreasing(self, p, kwargs):
        rep = gamma_hat_1d(p, **kwargs)
        assert rep.positive
        assert rep.radially_decreasing
        assert rep.fitted_c > 0

    def test_heavy_tail_needs_larger_window(self):
        with pytest.raises(QuadratureDivergence):
            gamma_hat_1d(0.5)  # default L truncates far too early

    def test_invalid_p(self):
        with pytest.raises(InvalidParams):
            gamma_hat_1d(2.5)


class TestFourierUpperBound:
    def test_bounds_interval_magnitude(self):
        # |[0,2]| = 2 in the line metric; the quotient must sit above it
        for p in (1.0, 2.0):
            result = fourier_upper_bound_1d(2.0, p, 1.0, 4.0)
            assert result.bound >= 2.0

    def test_singleton(self):
        result = fourier_upper_bound_1d(0.0, 2.0, 1.0, 1.0)
        assert result.bound >= 1.0

    def test_requires_radius_beyond_interval(self):
        with pytest.raises(InvalidParams):
            fourier_upper_bound_1d(2.0, 1.0, 1.0, 2.0)


class TestProductCounterexample:
    def test_not_stably_pd(self):
        rep = product_counterexample_experiment()
        assert rep.classification == "NotStablyPD"
        assert rep.failing_scales
        worst = min(lam for _, lam in rep.records)
        assert worst < 0

    def test_cross_pair_distance(self):
        from maglab import lp_product

        cross = SpaceSpec(
            "point_cloud_lp",
            {"points": [[0, 0], [1, 0], [-1, 0], [0, 1], [0, -1]], "p": 1.0},
        )
        factor = generate(cross)
        product = lp_product(factor, factor, q=2.0)
        assert len(product) == 25
        i = product.labels.index((0, 1))
        j = product.labels.index((1, 0))  # differs by 1 in each factor
        assert product.dist[i, j] == pytest.approx(math.sqrt(2.0))


class TestWitnessSearch:
    def test_l2_has_no_witness(self):
        result = witness_search(p=2.0, n=3, budget=300, seed=1)
        assert not result.found
        assert result.subsets_tested == 300

    def test_linf_witness_regression(self):
        # seeded search reproducibly finds a non-PD subset of l_inf^3
        result = witness_search(p=math.inf, n=3, budget=400, seed=0)
        assert result.found
        assert result.witness_lambda_min < 0

    def test_zero_budget(self):
        result = witness_search(p=math.inf, n=3, budget=0, seed=0)
        assert not result.found
        assert result.subsets_tested == 0
