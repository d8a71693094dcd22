import logging

from django.conf import settings
from django.core.management.base import CommandError

from apps.cli.base import EXIT_DOMAIN, EXIT_VERIFY_FAILED, StarCommand, parse_count, parse_real
from apps.verify.grids import GridGenerator, named_grid
from apps.verify.reports import ReportFormat, report_serialize
from apps.verify.suite import run_suite

logger = logging.getLogger(__name__)


class Command(StarCommand):
    help = 'Run the identity suite and write one report row per identity'
    max_iter_field = 'root_max_iter'

    def add_operands(self, parser):
        parser.add_argument(
            '--grid', default=GridGenerator.DEFAULT.value,
            help="default, log-grid, random-seeded, or a CSV file of operand tuples",
        )
        parser.add_argument('--seed', help='Seed of the random-seeded tuples')
        parser.add_argument(
            '--format', default=ReportFormat.JSON.value, choices=ReportFormat.values,
            help='Report format (default json)',
        )
        parser.add_argument('--output', default='-', help="Report path, '-' for standard output")

    def add_arguments(self, parser):
        self.add_operands(parser)
        parser.add_argument('--tolerance', help='Acceptance tolerance for every residual identity')
        parser.add_argument('--max-iter', dest='max_iter', help=f"Override {self.max_iter_field}")

    def get_config(self, options):
        return super().get_config({**options, 'tolerance': None})

    def handle(self, *args, **options):
        cfg = self.get_config(options)
        override = None
        if options.get('tolerance') is not None:
            override = parse_real(options['tolerance'], '--tolerance')
        seed = settings.STAR_VERIFY_SEED
        if options.get('seed') is not None:
            seed = parse_count(options['seed'], '--seed', minimum=0)

        try:
            grid = named_grid(options['grid'], seed)
        except OSError as e:
            raise CommandError(f"cannot read grid {options['grid']}: {e}", returncode=EXIT_DOMAIN)
        except ValueError as e:
            raise CommandError(f"invalid grid {options['grid']}: {e}", returncode=EXIT_DOMAIN)

        reports = run_suite(grid, cfg, tolerance_override=override)
        payload = report_serialize(reports, options['format'])
        self.write_report(payload, options['output'])

        failed = [report.identity_id for report in reports if not report.passed]
        if failed:
            raise CommandError(f"identities failed: {', '.join(failed)}", returncode=EXIT_VERIFY_FAILED)

    def write_report(self, payload, output):
        if output == '-':
            self.stdout.write(payload.decode('utf-8'), ending='')
            return
        try:
            with open(output, 'wb') as handle:
                handle.write(payload)
        except OSError as e:
            raise CommandError(f"cannot write {output}: {e}", returncode=EXIT_DOMAIN)
        logger.info(f"wrote {len(payload)} bytes to {output}")
