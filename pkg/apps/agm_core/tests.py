import math
import sys

import mpmath
from django.test import SimpleTestCase
from hypothesis import given, settings, strategies as st

from apps.common.exceptions import MaxIterationsExceeded, NonPositiveInput
from apps.common.types import ToleranceConfig

from .agm import agm, agm_trace

positive = st.floats(min_value=1e-6, max_value=1e6)


def mp_agm(x, y):
    with mpmath.workdps(40):
        return float(mpmath.agm(x, y))


class AgmTests(SimpleTestCase):

    def test_equal_operands(self):
        self.assertEqual(agm(1, 1), 1.0)
        self.assertEqual(agm(7.25, 7.25), 7.25)

    def test_known_value(self):
        self.assertAlmostEqual(agm(1, 2), 1.4567910310469068, delta=4e-16)

    @settings(max_examples=200, deadline=None)
    @given(positive, positive)
    def test_matches_extended_precision(self, x, y):
        self.assertLessEqual(abs(agm(x, y) - mp_agm(x, y)), 1e-14 * mp_agm(x, y))

    @settings(max_examples=200, deadline=None)
    @given(positive, positive)
    def test_symmetric_bit_for_bit(self, x, y):
        self.assertEqual(agm(x, y), agm(y, x))

    @settings(max_examples=100, deadline=None)
    @given(positive, positive, st.floats(min_value=1e-3, max_value=1e3))
    def test_homogeneous(self, x, y, scale):
        self.assertAlmostEqual(agm(scale * x, scale * y) / (scale * agm(x, y)), 1.0, delta=1e-14)

    @settings(max_examples=100, deadline=None)
    @given(positive, positive)
    def test_between_geometric_and_arithmetic_mean(self, x, y):
        mean = agm(x, y)
        slack = 1e-15 * mean
        self.assertLessEqual(math.sqrt(x) * math.sqrt(y), mean + slack)
        self.assertLessEqual(mean, (x + y) / 2 + slack)

    def test_monotone_in_second_argument(self):
        values = [agm(2.0, y) for y in [1e-6 * 10 ** (k / 4) for k in range(48)]]
        self.assertEqual(values, sorted(set(values)))

    def test_extreme_ratios_are_rescaled(self):
        for x, y in ((1e-300, 1e-10), (1.0, 1e-250), (1e200, 1e210)):
            with self.subTest(x=x, y=y):
                expected = mp_agm(x, y)
                self.assertLessEqual(abs(agm(x, y) - expected), 1e-13 * expected)

    def test_ratio_beyond_binary64_range(self):
        for x, y in ((1e300, 1e-300), (1e-320, 1.0), (sys.float_info.max, 1.0), (5e-324, 1e-10)):
            with self.subTest(x=x, y=y):
                expected = mp_agm(x, y)
                self.assertLessEqual(abs(agm(x, y) - expected), 1e-13 * expected)
                self.assertEqual(agm(x, y), agm(y, x))

    def test_rejects_non_positive(self):
        for bad in ((0, 1), (1, -2), (math.nan, 1), (1, math.inf)):
            with self.subTest(bad=bad), self.assertRaises(NonPositiveInput):
                agm(*bad)

    def test_iteration_cap(self):
        with self.assertRaises(MaxIterationsExceeded) as ctx:
            agm(1, 2, ToleranceConfig(agm_max_iter=1))
        self.assertEqual(ctx.exception.phase, 'agm')


class AgmTraceTests(SimpleTestCase):

    def test_trace_converges_quadratically(self):
        trace = agm_trace(1, 1e-4)
        self.assertTrue(trace.converged)
        self.assertEqual(trace.iterations, len(trace.pairs) - 1)
        gaps = trace.gaps
        self.assertTrue(all(b <= a for a, b in zip(gaps, gaps[1:])))
        for (x_n, y_n), gap, next_gap in zip(trace.pairs, gaps, gaps[1:]):
            bound = gap ** 2 / (8 * min(x_n, y_n))
            self.assertLessEqual(next_gap, bound + 4 * sys.float_info.epsilon * max(x_n, y_n))
        self.assertAlmostEqual(trace.mean / agm(1, 1e-4), 1.0, delta=1e-15)

    def test_trace_is_in_caller_scale(self):
        trace = agm_trace(1e-12, 1e3)
        x0, y0 = trace.pairs[0]
        self.assertEqual(y0, 1e3)
        self.assertAlmostEqual(x0 / 1e-12, 1.0, delta=1e-15)
        self.assertAlmostEqual(trace.mean / agm(1e-12, 1e3), 1.0, delta=1e-15)

    def test_first_iterates(self):
        trace = agm_trace(1, 2)
        self.assertEqual(trace.pairs[0], (1.0, 2.0))
        self.assertEqual(trace.pairs[1], (1.5, math.sqrt(2)))

    def test_equal_operands_take_no_step(self):
        trace = agm_trace(1, 1)
        self.assertEqual(trace.pairs, ((1.0, 1.0),))
        self.assertEqual(trace.iterations, 0)

    def test_final_midpoint_is_homogeneous(self):
        self.assertAlmostEqual(agm_trace(4, 9).mean / (2 * agm(2, 4.5)), 1.0, delta=1e-15)

    def test_huge_ratio_starts_in_caller_scale(self):
        trace = agm_trace(1e300, 1e-300)
        self.assertEqual(trace.pairs[0], (1e300, 1e-300))
        self.assertEqual(trace.pairs[1][0], 5e299)
        self.assertAlmostEqual(trace.mean / agm(1e300, 1e-300), 1.0, delta=1e-15)
