from apps.cli.base import StarCommand, parse_operand
from apps.star.operations import solve_right


class Command(StarCommand):
    help = 'Print the y with x * y = z'
    accepts_method = True

    def add_operands(self, parser):
        parser.add_argument('x', help='Known left operand')
        parser.add_argument('z', help='Target value of x * y')

    def compute(self, options, cfg, method):
        x = parse_operand(options['x'], 'x')
        z = parse_operand(options['z'], 'z')
        return solve_right(x, z, cfg, choice=method)
