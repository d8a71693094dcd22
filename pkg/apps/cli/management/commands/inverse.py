from apps.cli.base import StarCommand, parse_operand
from apps.star.operations import star_inverse


class Command(StarCommand):
    help = "Print the inverse x' of x, the element with x * x' = 1"
    accepts_method = True

    def add_operands(self, parser):
        parser.add_argument('x', help='Positive operand')

    def compute(self, options, cfg, method):
        return star_inverse(parse_operand(options['x'], 'x'), cfg, choice=method)
