from apps.cli.base import StarCommand, parse_real
from apps.theta.series import theta, theta_sq


class Command(StarCommand):
    help = 'Print the theta series 1 + 2 sum q^(n^2) for a real nome |q| <= 0.999'
    tolerance_field = 'series_eps'
    max_iter_field = 'series_max_terms'

    def add_operands(self, parser):
        parser.add_argument('q', help='Nome, -0.999 <= q <= 0.999')
        parser.add_argument('--squared', action='store_true', help='Print theta(q)^2 instead')

    def compute(self, options, cfg, method):
        q = parse_real(options['q'], 'q')
        if options['squared']:
            return theta_sq(q, cfg)
        return theta(q, cfg)
