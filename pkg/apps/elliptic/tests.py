import math

import mpmath
import numpy as np
from django.test import SimpleTestCase
from hypothesis import given, settings, strategies as st

from apps.agm_core.agm import agm
from apps.common.exceptions import DomainOverflow, MaxIterationsExceeded, QuadratureNotConverged
from apps.common.types import ToleranceConfig

from .hypergeom import hyp_F_half, hyp_F_half_series
from .integrals import EllipticPair, elliptic_I, elliptic_I_quadrature, elliptic_I_quadrature_panels
from .quadrature import gauss_legendre_panel, integrate_adaptive


def mp_hyp(z):
    with mpmath.workdps(40):
        return float(mpmath.hyp2f1(0.5, 0.5, 1, z))


class QuadratureTests(SimpleTestCase):

    def test_panel_is_exact_for_low_degree_polynomials(self):
        self.assertAlmostEqual(gauss_legendre_panel(lambda x: x ** 19, 0.0, 1.0), 1 / 20, delta=1e-15)

    def test_adaptive_smooth_integrand(self):
        value, panels = integrate_adaptive(np.sin, 0.0, math.pi, tol=1e-13, max_panels=4096)
        self.assertAlmostEqual(value, 2.0, delta=1e-13)
        self.assertGreaterEqual(panels, 4)

    def test_adaptive_peaked_integrand(self):
        # int_{-1}^{1} eps / (x^2 + eps^2) dx = 2 atan(1 / eps)
        eps = 1e-4
        value, _ = integrate_adaptive(
            lambda x: eps / (x * x + eps * eps), -1.0, 1.0, tol=1e-12, max_panels=4096,
        )
        self.assertAlmostEqual(value / (2 * math.atan(1 / eps)), 1.0, delta=1e-10)

    def test_panel_budget(self):
        with self.assertRaises(QuadratureNotConverged):
            integrate_adaptive(lambda x: 1e-6 / (x * x + 1e-12), -1.0, 1.0, tol=1e-14, max_panels=16)


class HypergeometricTests(SimpleTestCase):

    def test_origin(self):
        self.assertEqual(hyp_F_half(0.0), 1.0)

    def test_matches_extended_precision(self):
        for z in (-0.9, -0.3, 0.1, 0.5, 0.9, 0.99, 0.9999):
            with self.subTest(z=z):
                # the omitted tail is about series_eps / (1 - z) of the sum
                expected = mp_hyp(z)
                tolerance = 1e-13 + 2e-16 / (1 - abs(z))
                self.assertLessEqual(abs(hyp_F_half(z) - expected), tolerance * expected)

    def test_known_values(self):
        self.assertAlmostEqual(hyp_F_half(0.25), 1.0731820072, delta=1e-9)
        integral = 2 / math.pi * elliptic_I_quadrature(1.0, math.sqrt(0.5))
        self.assertAlmostEqual(hyp_F_half(0.5), integral, delta=1e-10)

    def test_partial_sums_increase_for_non_negative_z(self):
        for z in (0.1, 0.5, 0.9, 0.999):
            with self.subTest(z=z):
                sums, counts = zip(*(
                    hyp_F_half_series(z, ToleranceConfig(series_eps=eps))
                    for eps in (1e-2, 1e-4, 1e-8, 1e-12, 1e-16)
                ))
                self.assertEqual(list(sums), sorted(sums))
                self.assertEqual(list(counts), sorted(counts))
                self.assertGreater(sums[0], 1.0)

    def test_terms_grow_towards_the_cap(self):
        _, near = hyp_F_half_series(0.5)
        _, far = hyp_F_half_series(0.9999)
        self.assertLess(near, 100)
        self.assertGreater(far, 100_000)

    def test_cap(self):
        with self.assertRaises(DomainOverflow):
            hyp_F_half(0.9999999)

    def test_term_budget(self):
        with self.assertRaises(MaxIterationsExceeded):
            hyp_F_half(0.9, ToleranceConfig(series_max_terms=10))

    @settings(max_examples=40, deadline=None)
    @given(st.floats(min_value=0.0, max_value=0.99))
    def test_series_equals_agm_form(self, z):
        expected = 1 / agm(1.0, math.sqrt(1 - z))
        self.assertLessEqual(abs(hyp_F_half(z) - expected), 1e-12 * expected)


class EllipticIntegralTests(SimpleTestCase):

    def test_equal_operands(self):
        self.assertAlmostEqual(elliptic_I(1, 1), math.pi / 2, delta=1e-15)
        self.assertAlmostEqual(elliptic_I_quadrature(2, 2), math.pi / 4, delta=1e-14)

    def test_matches_complete_elliptic_integral(self):
        with mpmath.workdps(40):
            for y in (0.01, 0.3, 0.9, 3.0):
                with self.subTest(y=y):
                    expected = float(mpmath.ellipk(1 - mpmath.mpf(y) ** 2))
                    self.assertLessEqual(abs(elliptic_I(1, y) - expected), 1e-14 * expected)

    def test_quadrature_matches_agm(self):
        for x, y in ((1.0, 0.5), (3.0, 5.0), (1.0, 1e-3), (1e3, 1.0), (0.05, 20.0)):
            with self.subTest(x=x, y=y):
                reference = math.pi / (2 * agm(x, y))
                self.assertLessEqual(abs(elliptic_I_quadrature(x, y) - reference), 1e-10 * reference)

    def test_symmetric(self):
        for x, y in ((1.0, 2.0), (0.05, 20.0), (3.0, 1e-3)):
            with self.subTest(x=x, y=y):
                self.assertEqual(elliptic_I(x, y), elliptic_I(y, x))
                forward, backward = elliptic_I_quadrature(x, y), elliptic_I_quadrature(y, x)
                self.assertLessEqual(abs(forward - backward), 2e-10 * forward)

    def test_quadrature_is_homogeneous_of_degree_minus_one(self):
        self.assertLessEqual(abs(elliptic_I_quadrature(2, 4) - elliptic_I_quadrature(1, 2) / 2), 2e-12)

    def test_quadrature_reports_panels(self):
        _, flat = elliptic_I_quadrature_panels(1.0, 0.9)
        _, peaked = elliptic_I_quadrature_panels(1.0, 1e-4)
        self.assertLess(flat, peaked)

    def test_quadrature_ratio_limit(self):
        with self.assertRaises(DomainOverflow):
            elliptic_I_quadrature(1.0, 1e-7)

    def test_pair_validates_operands(self):
        self.assertEqual(EllipticPair(2, 8).ratio, 4.0)
        with self.assertRaises(ValueError):
            EllipticPair(0, 1)
