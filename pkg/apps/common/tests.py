import math

from django.test import SimpleTestCase, override_settings

from .exceptions import (
    BracketFailure,
    DomainOverflow,
    InvalidTolerance,
    MaxIterationsExceeded,
    NonPositiveInput,
    StarOperationError,
)
from .formatting import csv_cell, format_real, render_csv
from .roots import bisect
from .types import DEFAULT_TOLERANCES, ToleranceConfig, nome, positive_real


class ToleranceConfigTests(SimpleTestCase):

    def test_defaults(self):
        cfg = ToleranceConfig()
        self.assertEqual(cfg.agm_rel_tol, 4 * 2.0 ** -52)
        self.assertEqual(cfg.root_abs_tol, 1e-13)
        self.assertEqual(cfg.series_max_terms, 10_000_000)
        self.assertEqual(cfg.quad_max_panels, 4096)

    def test_rejects_out_of_range_values(self):
        for bad in ({'root_abs_tol': 0.0}, {'quad_tol': -1e-3}, {'series_eps': math.nan},
                    {'agm_max_iter': 0}, {'root_max_iter': 2.5}, {'agm_max_iter': True}):
            with self.subTest(bad=bad), self.assertRaises(InvalidTolerance):
                ToleranceConfig(**bad)

    def test_with_overrides_skips_none(self):
        cfg = DEFAULT_TOLERANCES.with_overrides(root_abs_tol=1e-9, root_max_iter=None)
        self.assertEqual(cfg.root_abs_tol, 1e-9)
        self.assertEqual(cfg.root_max_iter, DEFAULT_TOLERANCES.root_max_iter)

    @override_settings(STAR_TOLERANCES={'quad_tol': 1e-10, 'agm_max_iter': 32})
    def test_from_settings(self):
        cfg = ToleranceConfig.from_settings()
        self.assertEqual(cfg.quad_tol, 1e-10)
        self.assertEqual(cfg.agm_max_iter, 32)
        self.assertEqual(cfg.root_abs_tol, 1e-13)

    def test_as_dict_rebuilds_config(self):
        self.assertEqual(ToleranceConfig(**DEFAULT_TOLERANCES.as_dict()), DEFAULT_TOLERANCES)


class OperandValidationTests(SimpleTestCase):

    def test_positive_real_accepts_text_and_numbers(self):
        self.assertEqual(positive_real('2.5e-3'), 2.5e-3)
        self.assertEqual(positive_real(7), 7.0)

    def test_positive_real_rejects(self):
        for bad in (0, -2, math.nan, math.inf, 'abc', None):
            with self.subTest(bad=bad), self.assertRaises(NonPositiveInput):
                positive_real(bad, 'y')

    def test_non_positive_input_names_the_operand(self):
        with self.assertRaisesMessage(NonPositiveInput, "y must be a positive finite real"):
            positive_real(-2, 'y')

    def test_error_hierarchy(self):
        self.assertTrue(issubclass(NonPositiveInput, ValueError))
        self.assertTrue(issubclass(NonPositiveInput, StarOperationError))
        self.assertTrue(issubclass(DomainOverflow, StarOperationError))

    def test_nome_bounds(self):
        self.assertEqual(nome(-0.5), -0.5)
        for bad in (1.0, -1.0, 0.9995, math.nan):
            with self.subTest(bad=bad), self.assertRaises(DomainOverflow):
                nome(bad)


class BisectTests(SimpleTestCase):

    def test_square_root_of_two(self):
        result = bisect(lambda x: x * x - 2, 1.0, 2.0, ftol=1e-15, max_iter=200)
        self.assertAlmostEqual(result.root, math.sqrt(2), places=14)
        self.assertLessEqual(abs(result.residual), 1e-15)

    def test_geometric_split_reaches_tiny_roots(self):
        target = math.log(1e-200)
        result = bisect(
            lambda x: math.log(x) - target, 1e-300, 1.0,
            ftol=1e-12, max_iter=200, geometric=True,
        )
        self.assertAlmostEqual(math.log(result.root), target, places=9)
        self.assertLess(result.iterations, 60)

    def test_endpoint_zero(self):
        result = bisect(lambda x: x - 1.0, 1.0, 3.0, ftol=1e-12, max_iter=10)
        self.assertEqual((result.root, result.iterations), (1.0, 0))

    def test_same_sign_bracket(self):
        with self.assertRaises(BracketFailure) as ctx:
            bisect(lambda x: x * x + 1, -1.0, 1.0, ftol=1e-12, max_iter=10)
        self.assertEqual((ctx.exception.lo, ctx.exception.hi), (-1.0, 1.0))

    def test_iteration_budget(self):
        with self.assertRaises(MaxIterationsExceeded) as ctx:
            bisect(lambda x: x - math.pi, 0.0, 4.0, ftol=1e-15, max_iter=3, phase='pi')
        self.assertEqual(ctx.exception.phase, 'pi')
        self.assertEqual(ctx.exception.max_iter, 3)


class FormattingTests(SimpleTestCase):

    def test_format_real(self):
        self.assertEqual(format_real(1.0), '1')
        self.assertEqual(format_real(1.4567910310469068), '1.4567910310469068')
        for value in (0.1, 1 / 3, 2.0 ** -1074, 1.7976931348623157e308):
            self.assertEqual(float(format_real(value)), value)

    def test_csv_cells(self):
        self.assertEqual(csv_cell(None), '')
        self.assertEqual(csv_cell(True), 'true')
        self.assertEqual(csv_cell([0.5, 2.0]), '0.5;2')
        self.assertEqual(csv_cell(math.inf), 'inf')

    def test_render_csv_keeps_field_order(self):
        text = render_csv(['b', 'a'], [{'a': 1, 'b': 0.25}])
        self.assertEqual(text, 'b,a\n0.25,1\n')
