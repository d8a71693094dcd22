import json

from apps.cli.base import StarCommand, parse_operand
from apps.cli.serializers import StarDiagnosticsSerializer
from apps.common.formatting import format_real
from apps.star.operations import star


class Command(StarCommand):
    help = 'Print x * y, the operation whose mean is the arithmetic-geometric mean'
    accepts_method = True

    def add_operands(self, parser):
        parser.add_argument('x', help='First positive operand')
        parser.add_argument('y', help='Second positive operand')
        parser.add_argument(
            '--diagnostics', action='store_true',
            help='Also print mean, nome, backend, iterations and residual as JSON',
        )

    def compute(self, options, cfg, method):
        x = parse_operand(options['x'], 'x')
        y = parse_operand(options['y'], 'y')
        return star(x, y, method, cfg)

    def emit(self, result, options):
        self.stdout.write(format_real(result.value))
        if options['diagnostics']:
            self.stdout.write(json.dumps(StarDiagnosticsSerializer(result).data))
