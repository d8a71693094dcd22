import math

import mpmath
import numpy as np
from django.test import SimpleTestCase
from hypothesis import given, settings, strategies as st

from apps.agm_core.agm import agm
from apps.common.exceptions import DomainOverflow
from apps.common.types import DEFAULT_TOLERANCES, Q_MAX, ToleranceConfig

from .series import (
    inverse_theta_sq,
    log_theta,
    reachable_log_range,
    solve_nome,
    theta,
    theta_series,
    theta_sq,
    truncation_terms,
)


def mp_theta(q):
    # plain partial sum at high precision; the alternating sum cancels heavily near q = -1
    with mpmath.workdps(320):
        q = mpmath.mpf(q)
        return float(1 + 2 * mpmath.fsum(q ** (n * n) for n in range(1, 400)))


class TruncationTests(SimpleTestCase):

    def test_terms(self):
        self.assertEqual(truncation_terms(0.1, 1e-16), 5)
        self.assertEqual(truncation_terms(0.99, 1e-16), 62)
        self.assertEqual(truncation_terms(-0.99, 1e-16), 62)
        self.assertEqual(truncation_terms(0.0, 1e-16), 1)

    def test_first_omitted_term_is_below_eps(self):
        for q in (0.05, 0.3, 0.7, 0.9, 0.999):
            n = truncation_terms(q, 1e-16)
            self.assertLess(2 * q ** ((n + 1) ** 2), 1e-16)
            self.assertGreaterEqual(q ** ((n - 1) ** 2), 1e-16 / 2)


class ThetaTests(SimpleTestCase):

    def test_known_values(self):
        self.assertEqual(theta(0), 1.0)
        self.assertAlmostEqual(theta(0.1), 1.2002000020000002, delta=4e-16)

    def test_matches_extended_precision(self):
        for q in np.linspace(-0.95, 0.95, 39):
            with self.subTest(q=q):
                expected = mp_theta(float(q))
                self.assertLessEqual(abs(theta(q) - expected), 1e-13 * expected)

    def test_negative_nome_keeps_relative_accuracy(self):
        expected = mp_theta(-0.99)
        self.assertLess(expected, 1e-100)
        self.assertLessEqual(abs(theta(-0.99) - expected), 1e-11 * expected)

    def test_doubling_the_terms_moves_theta_by_at_most_eps(self):
        for eps in (DEFAULT_TOLERANCES.series_eps, 1e-10):
            cfg = ToleranceConfig(series_eps=eps)
            for q in (0.1, 0.5, 0.9, 0.99):
                with self.subTest(eps=eps, q=q):
                    n = np.arange(1, 2 * truncation_terms(q, eps) + 1, dtype=np.int64)
                    doubled = 1.0 + 2.0 * math.fsum(np.power(q, n * n)[::-1])
                    value = theta_series(q, cfg)
                    self.assertLessEqual(abs(doubled - value), eps + 2 * math.ulp(value))

    def test_series_and_log_agree_for_small_nomes(self):
        for q in (-0.3, -0.05, 0.2, 0.8):
            self.assertAlmostEqual(math.log(theta_series(q)), log_theta(q), delta=1e-14)

    def test_strictly_increasing(self):
        values = [theta_sq(q) for q in np.linspace(-0.95, 0.95, 77)]
        self.assertTrue(all(b > a for a, b in zip(values, values[1:])))

    def test_limits(self):
        self.assertLess(theta_sq(-0.99), 1e-200)
        self.assertGreater(theta_sq(0.99), 300)
        self.assertGreater(theta_sq(Q_MAX), theta_sq(0.99))

    def test_cap(self):
        for q in (0.9995, -0.9995, 1.0):
            with self.subTest(q=q), self.assertRaises(DomainOverflow):
                theta(q)

    def test_underflow_is_reported(self):
        # theta(-0.999) is about exp(-2467), below the binary64 range
        with self.assertRaises(DomainOverflow):
            theta(-0.999)
        self.assertLess(log_theta(-0.999), -2000)

    def test_gauss_relation(self):
        for q in np.linspace(-0.9, 0.9, 25):
            with self.subTest(q=q):
                self.assertLessEqual(abs(agm(theta_sq(q), theta_sq(-q)) - 1.0), 1e-12)


class InverseThetaTests(SimpleTestCase):

    def test_round_trip(self):
        for v in (1e-12, 0.01, 0.5, 2.0, 25.0, 1000.0):
            with self.subTest(v=v):
                q = inverse_theta_sq(v)
                self.assertLessEqual(abs(theta_sq(q) - v), 1e-12 * v)

    @settings(max_examples=50, deadline=None)
    @given(st.floats(min_value=-0.9, max_value=0.9))
    def test_recovers_nome(self, q):
        self.assertAlmostEqual(inverse_theta_sq(theta_sq(q)), q, delta=1e-11)

    def test_unit_value_maps_to_zero(self):
        self.assertEqual(inverse_theta_sq(1.0), 0.0)

    def test_result_carries_iterations(self):
        result = solve_nome(3.0)
        self.assertGreater(result.iterations, 0)
        self.assertLessEqual(abs(result.residual), 1e-13)

    def test_unreachable_values(self):
        _, high = reachable_log_range()
        with self.assertRaises(DomainOverflow):
            inverse_theta_sq(math.exp(high) * 1.01)
        with self.assertRaises(DomainOverflow):
            inverse_theta_sq(2.0, q_max=0.1)
