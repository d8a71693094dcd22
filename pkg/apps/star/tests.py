import math

from django.test import SimpleTestCase
from hypothesis import given, settings, strategies as st

from apps.agm_core.agm import agm
from apps.common.exceptions import DomainOverflow, HypergeomDomain, NonPositiveInput
from apps.common.types import DEFAULT_TOLERANCES, ToleranceConfig

from .operations import (
    Backend,
    BackendChoice,
    backend_choice,
    elliptic_domain_contains,
    hypergeom_domain_contains,
    solve_diagonal,
    solve_right,
    star,
    star_agm_inverse,
    star_domain_contains,
    star_elliptic,
    star_hypergeom,
    star_inverse,
    star_theta,
    star_value,
)

theta_range = st.floats(min_value=0.05, max_value=20.0)


def rel(value, reference):
    return abs(value - reference) / abs(reference)


class IntegerIdentityTests(SimpleTestCase):

    def test_small_triples(self):
        self.assertLessEqual(rel(star_value(3, 5), 9), 1e-9)
        self.assertLessEqual(rel(star_value(5, 13), 25), 1e-9)

    def test_integer_family(self):
        for n in range(1, 11):
            with self.subTest(n=n):
                value = star_value(2 * n + 1, 2 * n * n + 2 * n + 1)
                self.assertLessEqual(rel(value, (2 * n + 1) ** 2), 1e-7)

    def test_every_backend_reproduces_three_five_nine(self):
        for choice in (BackendChoice.THETA, BackendChoice.AGM_INVERSE, BackendChoice.ELLIPTIC):
            with self.subTest(choice=choice):
                self.assertLessEqual(rel(star_value(3, 5, choice), 9), 1e-9)


class StarPropertyTests(SimpleTestCase):

    def test_unit(self):
        for x in (1e-3, 0.05, 1.0, 7.5, 1e3):
            with self.subTest(x=x):
                self.assertLessEqual(rel(star_value(1, x), x), 1e-10)

    @settings(max_examples=40, deadline=None)
    @given(theta_range, theta_range)
    def test_commutative_bit_for_bit(self, x, y):
        self.assertEqual(star_value(x, y), star_value(y, x))

    @settings(max_examples=40, deadline=None)
    @given(theta_range, theta_range)
    def test_defining_property(self, x, y):
        self.assertLessEqual(rel(agm(1, star_value(x, y)), agm(x, y)), 1e-10)

    @settings(max_examples=30, deadline=None)
    @given(theta_range, theta_range)
    def test_mean_property(self, x, y):
        mean = agm(x, y)
        value = star_value(x, y)
        self.assertLessEqual(rel(star_value(mean, mean), value), 1e-9)
        self.assertLessEqual(rel(solve_diagonal(value), mean), 1e-12)

    @settings(max_examples=30, deadline=None)
    @given(theta_range, theta_range)
    def test_mean_step(self, x, y):
        value = star_value(x, y)
        self.assertLessEqual(rel(star_value((x + y) / 2, math.sqrt(x * y)), value), 1e-9)

    def test_half_step(self):
        for x in (0.01, 0.3, 2.0, 50.0):
            with self.subTest(x=x):
                self.assertLessEqual(rel(star_value((x + 1) / 2, math.sqrt(x)), x), 1e-9)

    @settings(max_examples=30, deadline=None)
    @given(st.floats(min_value=0.2, max_value=5.0), theta_range, theta_range)
    def test_distributive(self, a, x, y):
        lhs = star_value(a * x, a * y)
        self.assertLessEqual(rel(star_value(a, a * star_value(x, y)), lhs), 1e-8)

    def test_diagonal_and_cancellation_are_strictly_increasing(self):
        xs = [0.01 * 1.2 ** k for k in range(60)]
        diagonal = [star_value(x, x) for x in xs]
        self.assertTrue(all(v > u for u, v in zip(diagonal, diagonal[1:])))
        for a in (0.5, 2.0, 10.0):
            row = [star_value(a, x) for x in xs]
            self.assertTrue(all(v > u for u, v in zip(row, row[1:])), a)

    def test_not_associative(self):
        left = star_value(star_value(2, 3), 7)
        right = star_value(2, star_value(3, 7))
        self.assertGreater(abs(left - right) / max(left, right), 1e-3)


class InverseTests(SimpleTestCase):

    def test_solve_right(self):
        self.assertLessEqual(abs(solve_right(3, 9) - 5), 1e-8 * 5)
        self.assertLessEqual(abs(solve_right(5, 25) - 13), 1e-8 * 13)
        self.assertLessEqual(rel(solve_right(1, 4), 4), 1e-10)

    def test_inverse(self):
        for x in (0.05, 0.5, 2.0, 20.0):
            with self.subTest(x=x):
                self.assertLessEqual(abs(star_value(x, star_inverse(x)) - 1), 1e-9)

    def test_inverse_of_unit(self):
        self.assertLessEqual(abs(star_inverse(1) - 1), 1e-10)

    def test_config_is_the_second_positional_argument(self):
        cfg = ToleranceConfig(root_abs_tol=1e-12)
        self.assertLessEqual(abs(star_value(3.0, star_inverse(3.0, cfg)) - 1), 1e-9)
        self.assertLessEqual(abs(star_inverse(3.0, None) - star_inverse(3.0)), 1e-12)
        self.assertLessEqual(rel(solve_right(3, 9, cfg, choice=BackendChoice.AGM_INVERSE), 5), 1e-8)
        with self.assertRaises(TypeError):
            star_inverse(3.0, None, BackendChoice.THETA)

    def test_solve_diagonal(self):
        self.assertEqual(solve_diagonal(1), 1.0)
        self.assertLessEqual(rel(star_value(solve_diagonal(9), solve_diagonal(9)), 9), 1e-9)


class BackendTests(SimpleTestCase):

    def test_auto_prefers_theta(self):
        result = star(3, 5)
        self.assertEqual(result.backend, Backend.THETA)
        self.assertIsNotNone(result.nome)
        self.assertEqual(result.mean, agm(3, 5))
        self.assertGreater(result.iterations, 0)

    def test_auto_falls_back_to_agm_inverse(self):
        result = star(1e-3, 1e-2)
        self.assertEqual(result.backend, Backend.AGM_INVERSE)
        self.assertLessEqual(rel(agm(1, result.value), agm(1e-3, 1e-2)), 1e-10)

    def test_theta_refuses_outside_safe_nome(self):
        with self.assertRaises(DomainOverflow):
            star_theta(1e-2, 1e-2)

    def test_backends_agree(self):
        for x, y in ((0.9, 0.5), (0.6, 0.4), (3.0, 5.0), (0.05, 20.0)):
            reference = star_value(x, y, BackendChoice.THETA)
            for choice in (BackendChoice.AGM_INVERSE, BackendChoice.ELLIPTIC, BackendChoice.HYPERGEOMETRIC):
                if choice == BackendChoice.HYPERGEOMETRIC and not hypergeom_domain_contains(x, y):
                    continue
                with self.subTest(x=x, y=y, choice=choice):
                    self.assertLessEqual(rel(star_value(x, y, choice), reference), 1e-8)

    def test_hypergeometric_sorts_its_operands(self):
        self.assertEqual(star_value(0.5, 0.9, 'hypergeom'), star_value(0.9, 0.5, 'hypergeom'))

    def test_hypergeometric_domain(self):
        with self.assertRaises(HypergeomDomain):
            star_hypergeom(1.5, 0.5)
        with self.assertRaises(HypergeomDomain):
            star_hypergeom(0.5, 0.9)
        with self.assertRaises(HypergeomDomain):
            star_hypergeom(0.9, 1e-3)
        with self.assertRaises(HypergeomDomain):
            star(0.5, 1.5, BackendChoice.HYPERGEOMETRIC)
        self.assertTrue(hypergeom_domain_contains(0.9, 0.5))
        self.assertFalse(hypergeom_domain_contains(0.9, 1.5))

    def test_elliptic_domain(self):
        self.assertTrue(elliptic_domain_contains(3, 5))
        self.assertFalse(elliptic_domain_contains(1, 1e4))
        with self.assertRaises(DomainOverflow):
            star_elliptic(1e-3, 1e-3)

    def test_underflow_floor(self):
        self.assertFalse(star_domain_contains(1e-3, 1e-3))
        self.assertTrue(star_domain_contains(1e-2, 1e-2))
        with self.assertRaises(DomainOverflow):
            star(1e-3, 1e-3)
        with self.assertRaises(DomainOverflow):
            star_agm_inverse(1e-3, 1e-3)

    def test_large_operands(self):
        value = star_value(1e6, 1e6)
        self.assertLessEqual(rel(agm(1, value), 1e6), 1e-10)

    def test_means_beyond_the_theta_range(self):
        for x in (1e155, 1e200, 1e250):
            with self.subTest(x=x):
                self.assertTrue(star_domain_contains(x, x))
                result = star(x, x)
                self.assertEqual(result.backend, Backend.AGM_INVERSE)
                self.assertTrue(math.isfinite(result.value))
                self.assertLessEqual(rel(agm(1, result.value), x), 1e-10)

    def test_overflow_ceiling(self):
        self.assertFalse(star_domain_contains(1e307, 1e307))
        with self.assertRaises(DomainOverflow):
            star(1e307, 1e307)

    def test_rejects_non_positive(self):
        with self.assertRaises(NonPositiveInput):
            star(3, -5)

    def test_hypergeometric_examples(self):
        result = star_hypergeom(0.7, 0.7)
        self.assertLessEqual(result.residual, DEFAULT_TOLERANCES.root_abs_tol)
        half = star_hypergeom(0.5, 0.5).value
        self.assertLessEqual(rel(agm(1, half), 0.5), 1e-10)
        self.assertLessEqual(rel(half, star_agm_inverse(0.5, 0.5).value), 1e-9)
        self.assertLessEqual(rel(star_hypergeom(0.9, 0.9).value, star_theta(0.9, 0.9).value), 1e-8)

    def test_backend_choice(self):
        self.assertEqual(backend_choice('hypergeom'), BackendChoice.HYPERGEOMETRIC)
        self.assertEqual(backend_choice('AGM-Inverse'), BackendChoice.AGM_INVERSE)
        self.assertEqual(backend_choice(BackendChoice.THETA), BackendChoice.THETA)
        with self.assertRaises(ValueError):
            backend_choice('newton')

    def test_computation_as_dict(self):
        data = star(3, 5).as_dict()
        self.assertEqual(list(data), ['value', 'mean', 'nome', 'backend', 'iterations', 'residual'])
