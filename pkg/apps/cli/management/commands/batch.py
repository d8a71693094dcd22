import logging

from django.core.management.base import CommandError

from apps.cli.base import EXIT_DOMAIN, StarCommand
from apps.cli.batch import BatchRequest
from apps.cli.serializers import BatchResultSerializer
from apps.cli.tasks import evaluate_row
from apps.common.formatting import render_csv, render_json
from apps.verify.reports import ReportFormat

logger = logging.getLogger(__name__)


class Command(StarCommand):
    help = 'Evaluate a file of "operation,operand[,operand]" lines, one output row per line'
    accepts_method = True
    stealth_options = ('stdin',)

    def add_operands(self, parser):
        parser.add_argument('input', help="Request file, or '-' for standard input")
        parser.add_argument(
            '--format', default=ReportFormat.CSV.value, choices=ReportFormat.values,
            help='Output table format (default csv)',
        )

    def handle(self, *args, **options):
        cfg = self.get_config(options)
        method = self.get_method(options)
        try:
            request = BatchRequest.from_path(options['input'], stdin=options.get('stdin'))
        except (OSError, UnicodeDecodeError) as e:
            raise CommandError(f"cannot read {options['input']}: {e}", returncode=EXIT_DOMAIN)

        # Submission order is output order whether rows run eagerly or on workers
        pending = [
            evaluate_row.delay(row.as_dict(), method.value, cfg.as_dict()) for row in request.rows
        ]
        rows = BatchResultSerializer([result.get() for result in pending], many=True).data
        failed = sum(1 for row in rows if row['error'])
        logger.info(f"batch {request.source}: {len(rows)} rows, {failed} failed")

        if options['format'] == ReportFormat.JSON:
            self.stdout.write(render_json(rows), ending='')
        else:
            self.stdout.write(render_csv(list(BatchResultSerializer().fields), rows), ending='')
