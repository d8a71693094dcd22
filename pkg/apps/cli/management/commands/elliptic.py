from apps.cli.base import StarCommand, parse_operand
from apps.elliptic.integrals import elliptic_I, elliptic_I_quadrature


class Command(StarCommand):
    help = 'Print the integral of dphi / sqrt(x^2 cos^2 phi + y^2 sin^2 phi) over [0, pi/2]'
    tolerance_field = 'agm_rel_tol'
    max_iter_field = 'agm_max_iter'

    def add_operands(self, parser):
        parser.add_argument('x', help='First positive operand')
        parser.add_argument('y', help='Second positive operand')
        parser.add_argument(
            '--quadrature', action='store_true',
            help='Integrate numerically instead of using pi / (2 agm(x, y))',
        )

    def tolerance_fields(self, options):
        if options['quadrature']:
            return 'quad_tol', 'quad_max_panels'
        return 'agm_rel_tol', 'agm_max_iter'

    def compute(self, options, cfg, method):
        x = parse_operand(options['x'], 'x')
        y = parse_operand(options['y'], 'y')
        if options['quadrature']:
            return elliptic_I_quadrature(x, y, cfg)
        return elliptic_I(x, y, cfg)
