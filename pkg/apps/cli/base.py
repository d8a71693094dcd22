"""
Shared plumbing of the management commands: operand parsing, tolerance
flags, and the mapping from library errors to exit codes.
"""

import logging
import math

from django.core.management.base import BaseCommand, CommandError

from apps.common.exceptions import (
    BracketFailure,
    DomainOverflow,
    InvalidTolerance,
    MaxIterationsExceeded,
    NonPositiveInput,
    QuadratureNotConverged,
    StarOperationError,
)
from apps.common.formatting import format_real
from apps.common.types import ToleranceConfig, positive_real
from apps.star.operations import BackendChoice, backend_choice

logger = logging.getLogger(__name__)

EXIT_VERIFY_FAILED = 1
EXIT_DOMAIN = 2
EXIT_CONVERGENCE = 3
EXIT_BACKEND_DOMAIN = 4

CONVERGENCE_ERRORS = (MaxIterationsExceeded, QuadratureNotConverged, BracketFailure)


def exit_code_for(error, forced=False):
    if isinstance(error, CONVERGENCE_ERRORS):
        return EXIT_CONVERGENCE
    if forced and isinstance(error, DomainOverflow):
        return EXIT_BACKEND_DOMAIN
    return EXIT_DOMAIN


def command_error(error, forced=False):
    return CommandError(str(error), returncode=exit_code_for(error, forced))


def parse_real(text, name):
    """Decimal or exponent notation; anything else exits with the domain code"""
    try:
        value = float(text)
    except (TypeError, ValueError):
        raise CommandError(f"{name}: cannot parse {text!r} as a real number", returncode=EXIT_DOMAIN)
    if not math.isfinite(value):
        raise CommandError(f"{name}: {text!r} is not finite", returncode=EXIT_DOMAIN)
    return value


def parse_operand(text, name):
    try:
        return positive_real(text, name)
    except NonPositiveInput as e:
        raise CommandError(str(e), returncode=EXIT_DOMAIN)


def parse_count(text, name, minimum=1):
    value = parse_real(text, name)
    if value != int(value) or value < minimum:
        raise CommandError(f"{name} must be an integer >= {minimum}, got {text!r}", returncode=EXIT_DOMAIN)
    return int(value)


def parse_method(text):
    try:
        return backend_choice(text)
    except ValueError as e:
        raise CommandError(str(e), returncode=EXIT_DOMAIN)


class StarCommand(BaseCommand):
    """
    Base class of the numeric commands

    Subclasses declare their operands in add_operands and return the value
    to print from compute(); --tolerance and --max-iter override the
    config fields named by tolerance_fields().
    """
    tolerance_field = 'root_abs_tol'
    max_iter_field = 'root_max_iter'
    accepts_method = False

    def add_operands(self, parser):
        pass

    def add_arguments(self, parser):
        self.add_operands(parser)
        if self.accepts_method:
            parser.add_argument(
                '--method', default=BackendChoice.AUTO.value,
                help=f"Backend: {', '.join(BackendChoice.values)} (default auto)",
            )
        parser.add_argument('--tolerance', help=f"Override {self.tolerance_field}")
        parser.add_argument('--max-iter', dest='max_iter', help=f"Override {self.max_iter_field}")

    def tolerance_fields(self, options):
        return self.tolerance_field, self.max_iter_field

    def get_config(self, options):
        tolerance_field, max_iter_field = self.tolerance_fields(options)
        overrides = {}
        if options.get('tolerance') is not None:
            overrides[tolerance_field] = parse_real(options['tolerance'], '--tolerance')
        if options.get('max_iter') is not None:
            overrides[max_iter_field] = parse_count(options['max_iter'], '--max-iter')
        try:
            return ToleranceConfig.from_settings().with_overrides(**overrides)
        except InvalidTolerance as e:
            raise CommandError(str(e), returncode=EXIT_DOMAIN)

    def get_method(self, options):
        if not self.accepts_method:
            return BackendChoice.AUTO
        return parse_method(options['method'])

    def compute(self, options, cfg, method):
        raise NotImplementedError

    def emit(self, result, options):
        self.stdout.write(format_real(result))

    def handle(self, *args, **options):
        cfg = self.get_config(options)
        method = self.get_method(options)
        try:
            result = self.compute(options, cfg, method)
        except StarOperationError as e:
            logger.debug(f"{type(self).__module__}: {type(e).__name__}: {e}")
            raise command_error(e, forced=method != BackendChoice.AUTO) from e
        self.emit(result, options)
