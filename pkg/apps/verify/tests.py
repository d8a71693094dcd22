import math
import os
import tempfile
from unittest import mock

from django.test import SimpleTestCase
from rest_framework.exceptions import ValidationError

from apps.common.exceptions import DomainOverflow

from .grids import (
    GridGenerator,
    SampleGrid,
    default_grid,
    grid_from_rows,
    log_grid,
    log_grid_pairs,
    named_grid,
    random_grid,
    random_tuples,
)
from .reports import IDENTITY_TOLERANCES, IdentityId, IdentityReport, ReportFormat, report_parse, report_serialize
from .suite import (
    IDENTITY_CHECKS,
    SampleFailure,
    associativity_defect,
    integer_residual,
    run_identity,
    run_suite,
    strict_increase_inversions,
    unit_residual,
)

SMALL_GRID = SampleGrid(points=((3.0, 5.0), (2.0, 7.0), (0.5, 0.9, 4.0)), generator=GridGenerator.FILE.value)


class GridTests(SimpleTestCase):

    def test_default_grid_is_seeded(self):
        self.assertEqual(default_grid(7), default_grid(7))
        self.assertNotEqual(default_grid(7).points, default_grid(8).points)

    def test_default_grid_shape(self):
        grid = default_grid(1)
        self.assertGreaterEqual(len(grid.pairs()), 100)
        self.assertEqual(len(grid.triples()), 64)
        self.assertTrue(all(v > 0 for point in grid.points for v in point))
        self.assertEqual(grid.seed, 1)

    def test_generators_are_labelled(self):
        self.assertEqual(default_grid(1).generator, GridGenerator.DEFAULT)
        self.assertEqual(log_grid().generator, GridGenerator.LOG_GRID)
        self.assertEqual(random_grid(1).generator, GridGenerator.RANDOM_SEEDED)
        self.assertEqual(default_grid(1).points, log_grid(1).points + random_grid(1).points)
        self.assertEqual(random_grid(1).triples(), random_grid(1).points)

    def test_named_grid(self):
        self.assertEqual(named_grid('default', 4), default_grid(4))
        self.assertEqual(named_grid('log-grid', 4), log_grid(4))
        self.assertEqual(named_grid('random-seeded', 4), random_grid(4))
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, 'grid.csv')
            with open(path, 'w') as handle:
                handle.write('3,5\n')
            grid = named_grid(path, 4)
        self.assertEqual(grid.generator, GridGenerator.FILE)
        self.assertEqual(grid.points, ((3.0, 5.0),))
        with self.assertRaises(OSError):
            named_grid(os.path.join(tmp, 'missing.csv'), 4)

    def test_extended_pairs_stay_above_the_floor(self):
        pairs = log_grid_pairs(1e-3, 1e3)
        self.assertNotIn((1e-3, 1e-3), pairs)
        self.assertGreater(len(pairs), 40)

    def test_random_tuples_are_log_uniform_in_range(self):
        tuples = random_tuples(3, count=10)
        self.assertEqual(len(tuples), 10)
        self.assertTrue(all(0.05 <= v <= 20 for t in tuples for v in t))

    def test_grid_from_rows(self):
        grid = grid_from_rows([['# x', 'y'], [], ['1', '2'], [' 0.5 ', '3', '4'], ['7']])
        self.assertEqual(grid.points, ((1.0, 2.0), (0.5, 3.0, 4.0), (7.0,)))
        self.assertEqual(grid.generator, GridGenerator.FILE)
        self.assertEqual(grid.scalars(), [0.5, 1.0, 2.0, 3.0, 4.0, 7.0])

    def test_invalid_grids(self):
        with self.assertRaises(ValueError):
            SampleGrid(points=())
        with self.assertRaises(ValueError):
            SampleGrid(points=((1.0, -2.0),))
        with self.assertRaises(ValueError):
            SampleGrid(points=((1.0, 2.0, 3.0, 4.0),))


class ResidualTests(SimpleTestCase):

    def test_strict_increase_inversions(self):
        self.assertEqual(strict_increase_inversions([1, 2, 2, 3, 1]), [1, 3])
        self.assertEqual(strict_increase_inversions([]), [])

    def test_associativity_defect_vanishes_at_the_unit(self):
        self.assertLessEqual(associativity_defect(2.0, 1.0, 7.0), 1e-9)

    def test_integer_residual(self):
        self.assertLessEqual(integer_residual(1), 1e-9)


class SuiteTests(SimpleTestCase):

    def test_trivial_grid(self):
        reports = run_suite(SampleGrid(points=((1.0, 1.0),)))
        self.assertEqual([r.identity_id for r in reports], list(IdentityId.values))
        by_id = {r.identity_id: r for r in reports}
        for identity in (IdentityId.UNIT_A, IdentityId.DEFINING_EQ6):
            self.assertTrue(by_id[identity].passed)
            self.assertLessEqual(by_id[identity].max_residual, 1e-15)
        self.assertFalse(by_id[IdentityId.NONASSOC_WITNESS].passed)

    def test_tolerances_are_recorded(self):
        reports = run_suite(SMALL_GRID)
        for report in reports:
            self.assertEqual(report.tolerance, IDENTITY_TOLERANCES[IdentityId(report.identity_id)])

    def test_corrupted_tolerance_fails_with_witnesses(self):
        reports = {r.identity_id: r for r in run_suite(SMALL_GRID, tolerance_override=1e-30)}
        family = reports[IdentityId.INTEGER_FAMILY]
        self.assertFalse(family.passed)
        self.assertEqual(family.tolerance, 1e-30)
        (n,) = family.witness
        self.assertEqual(integer_residual(n), family.max_residual)
        # structural tolerances are not overridden
        self.assertEqual(reports[IdentityId.DIAGONAL_B].tolerance, 0.0)
        self.assertTrue(reports[IdentityId.DIAGONAL_B].passed)

    def test_failing_witness_reevaluates(self):
        report = run_identity(IdentityId.UNIT_A, SMALL_GRID, tolerance_override=1e-30)
        if not report.passed:
            residual = unit_residual(*report.witness)
            self.assertLessEqual(residual, 2 * report.max_residual)
            self.assertGreaterEqual(2 * residual, report.max_residual)

    def test_errors_are_isolated(self):
        def broken(grid, cfg, tolerance):
            raise SampleFailure((2.0,), DomainOverflow('boom'))

        with mock.patch.dict(IDENTITY_CHECKS, {IdentityId.UNIT_A: broken}):
            reports = run_suite(SMALL_GRID)
        self.assertEqual(len(reports), len(IdentityId.values))
        unit = reports[0]
        self.assertFalse(unit.passed)
        self.assertEqual(unit.witness, (2.0,))
        self.assertEqual(unit.max_residual, math.inf)
        self.assertTrue(reports[1].passed)


class DefaultGridSuiteTests(SimpleTestCase):
    """The acceptance run: every identity holds on the default grid"""

    @classmethod
    def setUpClass(cls):
        super().setUpClass()
        cls.reports = run_suite(default_grid(20240601))

    def test_all_identities_pass(self):
        failing = [(r.identity_id, r.max_residual, r.witness) for r in self.reports if not r.passed]
        self.assertEqual(failing, [])

    def test_sample_counts(self):
        samples = {r.identity_id: r.samples for r in self.reports}
        self.assertGreaterEqual(samples[IdentityId.DEFINING_EQ6], 100)
        self.assertGreaterEqual(samples[IdentityId.DIAGONAL_B], 50)
        self.assertGreaterEqual(samples[IdentityId.DISTRIB_E], 100)
        self.assertGreaterEqual(samples[IdentityId.CROSS_BACKEND], 50)
        self.assertEqual(samples[IdentityId.GAUSS_EQ4], 25)

    def test_nonassociativity_witness_reevaluates(self):
        report = next(r for r in self.reports if r.identity_id == IdentityId.NONASSOC_WITNESS)
        self.assertTrue(report.passed)
        self.assertEqual(len(report.witness), 3)
        self.assertEqual(associativity_defect(*report.witness), report.max_residual)
        self.assertGreater(report.max_residual, 1e-3)

    def test_serialized_reports_round_trip(self):
        for fmt in ReportFormat.values:
            with self.subTest(fmt=fmt):
                payload = report_serialize(self.reports, fmt)
                self.assertEqual(report_parse(payload, fmt), self.reports)


class ReportSerializationTests(SimpleTestCase):

    reports = [
        IdentityReport('unit_A', 12, 0.0, 1e-10, True),
        IdentityReport('mean_C', 4, math.inf, 1e-9, False, (0.1, 2.5)),
        IdentityReport('nonassoc_witness', 1, 0.012345678901234567, 1e-3, True, (2.0, 3.0, 7.0)),
    ]

    def test_single_passing_report_csv(self):
        text = report_serialize(self.reports[:1], ReportFormat.CSV).decode()
        self.assertEqual(
            text,
            'identity_id,samples,max_residual,tolerance,passed,witness\n'
            'unit_A,12,0,1e-10,true,\n',
        )

    def test_csv_round_trip(self):
        payload = report_serialize(self.reports, ReportFormat.CSV)
        self.assertEqual(report_parse(payload, ReportFormat.CSV), self.reports)

    def test_json_round_trip(self):
        payload = report_serialize(self.reports, ReportFormat.JSON)
        self.assertIn(b'Infinity', payload)
        self.assertEqual(report_parse(payload, ReportFormat.JSON), self.reports)

    def test_serialization_is_deterministic(self):
        self.assertEqual(report_serialize(self.reports, 'json'), report_serialize(list(self.reports), 'json'))

    def test_parse_rejects_unknown_identity(self):
        with self.assertRaises(ValidationError):
            report_parse('identity_id,samples,max_residual,tolerance,passed,witness\nbogus,1,0,1,true,\n', ReportFormat.CSV)
