import json
import math
import os
import tempfile
from io import StringIO

from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase

from .base import EXIT_BACKEND_DOMAIN, EXIT_CONVERGENCE, EXIT_DOMAIN, EXIT_VERIFY_FAILED, exit_code_for
from .batch import BatchOperation, BatchRequest, evaluate
from .tasks import evaluate_row
from apps.common.exceptions import BracketFailure, DomainOverflow, HypergeomDomain, MaxIterationsExceeded


def run(*args, **options):
    out = StringIO()
    call_command(*args, stdout=out, **options)
    return out.getvalue()


class CommandTestMixin:

    def assertExitCode(self, code, *args, **options):
        with self.assertRaises(CommandError) as ctx:
            run(*args, **options)
        self.assertEqual(ctx.exception.returncode, code)
        return ctx.exception


class AgmCommandTests(CommandTestMixin, SimpleTestCase):

    def test_equal_operands(self):
        self.assertEqual(run('agm', '1', '1'), '1\n')

    def test_known_value(self):
        self.assertEqual(float(run('agm', '1', '2')), 1.4567910310469068)

    def test_negative_operand(self):
        error = self.assertExitCode(EXIT_DOMAIN, 'agm', '1', '-2')
        self.assertIn('y', str(error))

    def test_unparseable_operand(self):
        self.assertExitCode(EXIT_DOMAIN, 'agm', 'one', '2')

    def test_iteration_cap(self):
        self.assertExitCode(EXIT_CONVERGENCE, 'agm', '1', '2', '--max-iter', '1')

    def test_invalid_tolerance(self):
        self.assertExitCode(EXIT_DOMAIN, 'agm', '1', '2', '--tolerance', '0')
        self.assertExitCode(EXIT_DOMAIN, 'agm', '1', '2', '--max-iter', '2.5')

    def test_exponent_notation(self):
        self.assertEqual(run('agm', '1e0', '1E0', '--tolerance', '1e-12'), '1\n')


class StarCommandTests(CommandTestMixin, SimpleTestCase):

    def test_integer_triples(self):
        self.assertAlmostEqual(float(run('star', '3', '5')), 9, delta=1e-8)
        self.assertAlmostEqual(float(run('star', '5', '13', '--method', 'agm-inverse')), 25, delta=1e-7)

    def test_hypergeometric_matches_theta(self):
        hyp = float(run('star', '0.9', '0.5', '--method', 'hypergeom'))
        theta = float(run('star', '0.9', '0.5', '--method', 'theta'))
        self.assertEqual('%.8g' % hyp, '%.8g' % theta)

    def test_diagnostics(self):
        value, record = run('star', '3', '5', '--diagnostics').splitlines()
        data = json.loads(record)
        self.assertEqual(list(data), ['value', 'mean', 'nome', 'backend', 'iterations', 'residual'])
        self.assertEqual(data['value'], float(value))
        self.assertEqual(data['backend'], 'theta')

    def test_forced_backend_outside_domain(self):
        self.assertExitCode(EXIT_BACKEND_DOMAIN, 'star', '1.5', '0.5', '--method', 'hypergeom')
        self.assertExitCode(EXIT_BACKEND_DOMAIN, 'star', '0.01', '0.01', '--method', 'theta')

    def test_auto_domain_error(self):
        self.assertExitCode(EXIT_DOMAIN, 'star', '1e-3', '1e-3')

    def test_unknown_method(self):
        self.assertExitCode(EXIT_DOMAIN, 'star', '3', '5', '--method', 'newton')

    def test_root_budget(self):
        self.assertExitCode(EXIT_CONVERGENCE, 'star', '3', '5', '--max-iter', '2')


class OtherCommandTests(CommandTestMixin, SimpleTestCase):

    def test_theta(self):
        self.assertAlmostEqual(float(run('theta', '0.1')), 1.2002000020000002, delta=4e-16)
        self.assertAlmostEqual(float(run('theta', '0.1', '--squared')), 1.2002000020000002 ** 2, delta=1e-15)
        self.assertEqual(run('theta', '0'), '1\n')

    def test_theta_negative_nome(self):
        self.assertLess(float(run('theta', '-0.5')), 1)
        self.assertExitCode(EXIT_DOMAIN, 'theta', '0.9999')

    def test_inverse(self):
        inverse = run('inverse', '2').strip()
        self.assertAlmostEqual(float(run('star', '2', inverse)), 1.0, delta=1e-9)

    def test_solve(self):
        self.assertAlmostEqual(float(run('solve', '3', '9')), 5, delta=5e-8)
        self.assertAlmostEqual(float(run('solve', '1', '4')), 4, delta=1e-9)

    def test_elliptic(self):
        self.assertAlmostEqual(float(run('elliptic', '1', '1')), math.pi / 2, delta=1e-15)
        quad = float(run('elliptic', '1', '0.5', '--quadrature'))
        self.assertAlmostEqual(quad, float(run('elliptic', '1', '0.5')), delta=1e-11)

    def test_elliptic_quadrature_budget(self):
        self.assertExitCode(EXIT_CONVERGENCE, 'elliptic', '1', '1e-5', '--quadrature', '--max-iter', '8')


class ExitCodeTests(SimpleTestCase):

    def test_mapping(self):
        self.assertEqual(exit_code_for(MaxIterationsExceeded('agm', 1)), EXIT_CONVERGENCE)
        self.assertEqual(exit_code_for(BracketFailure(0, 1, 1, 1)), EXIT_CONVERGENCE)
        self.assertEqual(exit_code_for(DomainOverflow('x')), EXIT_DOMAIN)
        self.assertEqual(exit_code_for(HypergeomDomain('x'), forced=True), EXIT_BACKEND_DOMAIN)


class BatchParsingTests(SimpleTestCase):

    def test_rows(self):
        request = BatchRequest.from_lines(['# header', '', 'star,3,5', 'AGM, 1, 1', 'theta,0.5,1', 'cube,2'])
        self.assertEqual([row.line for row in request.rows], [3, 4, 5, 6])
        star_row, agm_row, theta_row, unknown_row = request.rows
        self.assertEqual((star_row.operation, star_row.operands, star_row.error), ('star', (3.0, 5.0), None))
        self.assertEqual(agm_row.operation, BatchOperation.AGM)
        self.assertIn('takes 1 operand', theta_row.error)
        self.assertIn('unknown operation', unknown_row.error)

    def test_unparseable_operands(self):
        (row,) = BatchRequest.from_lines(['solve,3,x']).rows
        self.assertIn('unparseable', row.error)

    def test_evaluate(self):
        self.assertEqual(evaluate('agm', (1.0, 1.0))[0], 1.0)
        value, backend, residual = evaluate('star', (3.0, 5.0))
        self.assertAlmostEqual(value, 9, delta=1e-8)
        self.assertEqual(backend, 'theta')
        self.assertLess(residual, 1e-12)
        self.assertEqual(evaluate('inverse', (1.0,), 'agm-inverse')[1], 'agm-inverse')

    def test_task_turns_errors_into_rows(self):
        row = evaluate_row({'line': 1, 'operation': 'agm', 'operands': [1.0, -2.0], 'error': None})
        self.assertIsNone(row['result'])
        self.assertIn('NonPositiveInput', row['error'])
        row = evaluate_row({'line': 2, 'operation': 'theta', 'operands': [0.1], 'error': None})
        self.assertAlmostEqual(row['result'], 1.2002000020000002, delta=4e-16)
        self.assertIsNone(row['error'])


class BatchCommandTests(CommandTestMixin, SimpleTestCase):

    def test_csv_rows_keep_input_order(self):
        text = run('batch', '-', stdin=StringIO('star,3,5\nagm,1,1\n# note\nbogus,1\nagm,1,-1\n'))
        lines = text.splitlines()
        self.assertEqual(lines[0], 'line,operation,operands,result,backend,residual,error')
        self.assertEqual(len(lines), 5)
        self.assertTrue(lines[1].startswith('1,star,3;5,'))
        self.assertAlmostEqual(float(lines[1].split(',')[3]), 9, delta=1e-8)
        self.assertEqual(lines[2], '2,agm,1;1,1,,,')
        self.assertIn('unknown operation', lines[3])
        self.assertIn('NonPositiveInput', lines[4])

    def test_json_format(self):
        rows = json.loads(run('batch', '-', '--format', 'json', stdin=StringIO('star,3,5\nsolve,3,9\n')))
        self.assertEqual([row['line'] for row in rows], [1, 2])
        self.assertAlmostEqual(rows[1]['result'], 5, delta=5e-8)
        self.assertEqual(rows[0]['operands'], [3.0, 5.0])

    def test_empty_input(self):
        self.assertEqual(run('batch', '-', stdin=StringIO('')), 'line,operation,operands,result,backend,residual,error\n')
        self.assertEqual(json.loads(run('batch', '-', '--format', 'json', stdin=StringIO(''))), [])

    def test_input_file(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, 'requests.csv')
            with open(path, 'w') as handle:
                handle.write('elliptic,1,1\n')
            text = run('batch', path)
        self.assertAlmostEqual(float(text.splitlines()[1].split(',')[3]), math.pi / 2, delta=1e-15)

    def test_unreadable_input(self):
        self.assertExitCode(EXIT_DOMAIN, 'batch', '/nonexistent/requests.csv')


class VerifyCommandTests(CommandTestMixin, SimpleTestCase):

    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.grid = os.path.join(self.tmp.name, 'grid.csv')
        with open(self.grid, 'w') as handle:
            handle.write('# x,y[,z]\n3,5\n2,7\n0.5,0.9,4\n')

    def tearDown(self):
        self.tmp.cleanup()

    def report_text(self, *args):
        out = StringIO()
        try:
            call_command('verify', '--grid', self.grid, *args, stdout=out)
        except CommandError as e:
            self.assertEqual(e.returncode, EXIT_VERIFY_FAILED)
        return out.getvalue()

    def test_seeded_runs_are_byte_identical(self):
        first = self.report_text('--seed', '5', '--format', 'csv')
        second = self.report_text('--seed', '5', '--format', 'csv')
        self.assertEqual(first, second)
        self.assertEqual(len(first.splitlines()), 16)

    def test_corrupted_tolerance_fails_but_writes_report(self):
        output = os.path.join(self.tmp.name, 'report.json')
        self.assertExitCode(
            EXIT_VERIFY_FAILED, 'verify', '--grid', self.grid, '--tolerance', '1e-30', '--output', output,
        )
        with open(output) as handle:
            rows = json.load(handle)
        self.assertEqual(len(rows), 15)
        self.assertTrue(any(not row['passed'] for row in rows))

    def test_missing_grid(self):
        self.assertExitCode(EXIT_DOMAIN, 'verify', '--grid', os.path.join(self.tmp.name, 'missing.csv'))

    def test_unwritable_output(self):
        self.assertExitCode(
            EXIT_DOMAIN, 'verify', '--grid', self.grid, '--output', os.path.join(self.tmp.name, 'no', 'report.csv'),
        )
