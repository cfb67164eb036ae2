"""Sizing rules: reference points and structural properties."""

import math

import numpy as np
import pytest

from privpool.bounds import (
    bounds_report,
    min_M,
    min_alpha0_constant,
    min_alpha0_random,
    predict_error_bound,
    q_function,
    random_depth_requirements,
)
from privpool.collector import NoiseModel, noise_model
from privpool.pool import SchemeParams


def reference_constant(m, eta, eps):
    """Independent reimplementation with a different factoring."""
    span = 2 ** (m + 1) - 2
    return span * (8 * eta - 8 * eta * eta) / ((1 - 2 * eta) * (1 - 2 * eta)) * (-math.log(eps))


def reference_random_terms(m, eta, eps, sigma_alpha):
    span = 2 ** (m + 1) - 2
    e1 = 2 * reference_constant(m, eta, eps)
    e2 = math.sqrt(16 * sigma_alpha * sigma_alpha * (((1 - 2 * eta) ** 2 + eta**2) / (1 - 2 * eta) ** 2) * span * (-math.log(eps)))
    return e1, e2


class TestMinM:
    @pytest.mark.parametrize("beta,expected", [(0.01, 100), (0.1, 10), (0.5, 2), (0.3, 4)])
    def test_values(self, beta, expected):
        assert min_M(beta) == expected

    @pytest.mark.parametrize("beta", [0.0, 1.0, -0.2, 2.0])
    def test_range(self, beta):
        with pytest.raises(ValueError):
            min_M(beta)


class TestConstantDepthSizing:
    def test_reference_point_large_pool(self):
        value = min_alpha0_constant(10, 0.1, 0.1)
        assert value == 5300
        assert abs(value - 5300) <= 0.01 * 5300

    def test_reference_point_low_noise(self):
        value = min_alpha0_constant(10, 0.01, 0.001)
        assert value == 1166
        assert abs(value - 1166) <= 0.01 * 1166

    def test_reference_point_huge_pool(self):
        value = min_alpha0_constant(100, 0.01, 0.01)
        assert isinstance(value, float)
        assert abs(value - 9.6e29) <= 0.02 * 9.6e29

    def test_small_pool(self):
        assert min_alpha0_constant(3, 0.1, 0.1) == 37

    def test_matches_reference_formula(self):
        rng = np.random.default_rng(0)
        for _ in range(50):
            m = int(rng.integers(1, 16))
            eta = float(rng.uniform(0.01, 0.45))
            eps = float(rng.uniform(0.001, 0.5))
            assert min_alpha0_constant(m, eta, eps) == math.ceil(
                reference_constant(m, eta, eps) - 1e-9
            )

    def test_monotone_in_m_eta_and_accuracy(self):
        values_m = [min_alpha0_constant(m, 0.1, 0.1) for m in range(1, 9)]
        assert values_m == sorted(values_m)
        values_eta = [min_alpha0_constant(3, eta, 0.1) for eta in (0.01, 0.05, 0.1, 0.2, 0.3)]
        assert values_eta == sorted(values_eta)
        values_eps = [min_alpha0_constant(3, 0.1, eps) for eps in (0.5, 0.1, 0.01, 0.001)]
        assert values_eps == sorted(values_eps)

    @pytest.mark.parametrize("args", [(0, 0.1, 0.1), (3, 0.6, 0.1), (3, 0.1, 1.5)])
    def test_input_validation(self, args):
        with pytest.raises(ValueError):
            min_alpha0_constant(*args)


class TestRandomDepthSizing:
    def test_zero_sigma_doubles_the_pre_ceiling_requirement(self):
        for m, eta, eps in [(3, 0.1, 0.1), (7, 0.05, 0.01), (10, 0.1, 0.1)]:
            e1, e2 = random_depth_requirements(m, eta, eps, 0.0)
            assert e2 == 0.0
            assert e1 == pytest.approx(2 * reference_constant(m, eta, eps), rel=1e-12)
            assert min_alpha0_random(m, eta, eps, 0.0) == math.ceil(e1 - 1e-9)

    def test_reference_point(self):
        # 16 * 0.09/0.64 * 14 * ln 10 = 72.53...
        assert min_alpha0_random(3, 0.1, 0.1, 0.0) == 73

    def test_depth_noise_dominated_regime(self):
        ref_e1, ref_e2 = reference_random_terms(3, 0.1, 0.1, 100.0)
        e1, e2 = random_depth_requirements(3, 0.1, 0.1, 100.0)
        assert e1 == pytest.approx(ref_e1, rel=1e-12)
        assert e2 == pytest.approx(ref_e2, rel=1e-12)
        assert e2 > e1
        assert min_alpha0_random(3, 0.1, 0.1, 100.0) == math.ceil(ref_e2 - 1e-9)
        assert min_alpha0_random(3, 0.1, 0.1, 100.0) == 2289

    def test_dominates_constant_sizing(self):
        for m in range(1, 10):
            assert min_alpha0_random(m, 0.1, 0.1, 0.0) >= min_alpha0_constant(m, 0.1, 0.1)

    def test_sigma_validation(self):
        with pytest.raises(ValueError):
            random_depth_requirements(3, 0.1, 0.1, -1.0)


class TestPredictedErrorBound:
    def test_zero_variance(self):
        assert predict_error_bound(None, NoiseModel(0.0, 0.0, 0.0)) == 0.0

    def test_boundary_of_the_sizing_condition(self):
        eps = 0.07
        var = 1.0 / (8.0 * math.log(1.0 / eps))
        assert predict_error_bound(None, NoiseModel(var, 0.0, var)) == pytest.approx(eps, rel=1e-12)

    def test_reference_operating_point(self):
        params = SchemeParams(m=10, alpha0=5300, eta=0.1)
        bound = predict_error_bound(params, noise_model(params))
        assert bound == pytest.approx(0.0999989, abs=1e-6)
        assert bound <= 0.1

    def test_approaches_one_for_huge_variance(self):
        loose = predict_error_bound(None, NoiseModel(100.0, 0.0, 100.0))
        assert 0.99 < loose < 1.0

    def test_sized_depth_meets_target(self):
        for m, eta, eps in [(2, 0.05, 0.2), (4, 0.1, 0.05), (6, 0.2, 0.01)]:
            alpha0 = min_alpha0_constant(m, eta, eps)
            params = SchemeParams(m=m, alpha0=alpha0, eta=eta)
            assert predict_error_bound(params, noise_model(params)) <= eps + 1e-9


class TestReport:
    def test_defaults_m_from_beta(self):
        report = bounds_report(eta=0.1, epsilon=0.1, beta=0.1)
        assert report.m_min == 10 and report.m == 10
        assert report.alpha0_min_constant == 5300
        assert not report.overflow

    def test_requires_m_or_beta(self):
        with pytest.raises(ValueError):
            bounds_report(eta=0.1, epsilon=0.1)

    def test_overflow_flagged(self):
        report = bounds_report(eta=0.01, epsilon=0.01, m=100)
        assert report.overflow
        assert isinstance(report.alpha0_min_constant, float)


def test_q_function_reference_values():
    assert q_function(0.0) == pytest.approx(0.5, rel=1e-12)
    assert q_function(1.959963984540054) == pytest.approx(0.025, rel=1e-9)
