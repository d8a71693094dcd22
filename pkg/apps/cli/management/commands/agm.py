from apps.agm_core.agm import agm
from apps.cli.base import StarCommand, parse_operand


class Command(StarCommand):
    help = 'Print the arithmetic-geometric mean agm(x, y) of two positive reals'
    tolerance_field = 'agm_rel_tol'
    max_iter_field = 'agm_max_iter'

    def add_operands(self, parser):
        parser.add_argument('x', help='First positive operand')
        parser.add_argument('y', help='Second positive operand')

    def compute(self, options, cfg, method):
        return agm(parse_operand(options['x'], 'x'), parse_operand(options['y'], 'y'), cfg)
