"""
Batch requests: one computation per CSV line, `operation,operand[,operand]`.

Blank lines and lines starting with '#' are skipped. Rows that fail to parse
are kept with their error so the output still has one row per request.
"""

import csv
import logging
import sys
from dataclasses import asdict, dataclass, field
from typing import Optional

from django.db import models

from apps.agm_core.agm import agm
from apps.elliptic.integrals import elliptic_I
from apps.star.operations import BackendChoice, backend_choice, solve_right, star, star_inverse
from apps.theta.series import theta

logger = logging.getLogger(__name__)


class BatchOperation(models.TextChoices):
    AGM = 'agm', 'agm(x, y)'
    STAR = 'star', 'x * y'
    THETA = 'theta', 'theta(q)'
    INVERSE = 'inverse', 'Inverse element'
    SOLVE = 'solve', 'y with x * y = z'
    ELLIPTIC = 'elliptic', 'Elliptic integral'


OPERATION_ARITY = {
    BatchOperation.AGM: 2,
    BatchOperation.STAR: 2,
    BatchOperation.THETA: 1,
    BatchOperation.INVERSE: 1,
    BatchOperation.SOLVE: 2,
    BatchOperation.ELLIPTIC: 2,
}


@dataclass(frozen=True)
class BatchRow:
    line: int
    operation: str
    operands: tuple = ()
    error: Optional[str] = None

    def as_dict(self):
        data = asdict(self)
        data['operands'] = list(self.operands)
        return data


@dataclass(frozen=True)
class BatchRequest:
    rows: tuple = field(default_factory=tuple)
    source: str = '-'

    @classmethod
    def from_lines(cls, lines, source='-'):
        rows = []
        for line_no, cells in enumerate(csv.reader(lines), start=1):
            cells = [cell.strip() for cell in cells]
            if not any(cells) or cells[0].startswith('#'):
                continue
            rows.append(parse_row(line_no, cells))
        return cls(rows=tuple(rows), source=source)

    @classmethod
    def from_path(cls, path, stdin=None):
        """Read a request file; '-' reads standard input. OSError propagates."""
        if path == '-':
            return cls.from_lines((stdin or sys.stdin).read().splitlines(), '-')
        with open(path, newline='') as handle:
            return cls.from_lines(handle.read().splitlines(), str(path))


def parse_row(line_no, cells):
    name, operand_cells = cells[0].lower(), [cell for cell in cells[1:] if cell]
    try:
        operation = BatchOperation(name)
    except ValueError:
        return BatchRow(line_no, name, error=f"unknown operation {name!r}")
    try:
        operands = tuple(float(cell) for cell in operand_cells)
    except ValueError:
        return BatchRow(line_no, operation.value, error=f"unparseable operands {operand_cells!r}")
    arity = OPERATION_ARITY[operation]
    if len(operands) != arity:
        return BatchRow(
            line_no, operation.value, operands,
            error=f"{operation.value} takes {arity} operand(s), got {len(operands)}",
        )
    return BatchRow(line_no, operation.value, operands)


def evaluate(operation, operands, choice=BackendChoice.AUTO, cfg=None):
    """
    Run one batch operation

    Returns:
        (result, backend, residual); backend and residual are None where the
        operation has no backend choice
    """
    operation = BatchOperation(operation)
    if operation == BatchOperation.STAR:
        computation = star(*operands, choice, cfg)
        return computation.value, computation.backend, computation.residual
    if operation == BatchOperation.INVERSE:
        return star_inverse(*operands, cfg, choice=choice), backend_choice(choice).value, None
    if operation == BatchOperation.SOLVE:
        return solve_right(*operands, cfg, choice=choice), backend_choice(choice).value, None
    if operation == BatchOperation.AGM:
        return agm(*operands, cfg), None, None
    if operation == BatchOperation.THETA:
        return theta(*operands, cfg), None, None
    return elliptic_I(*operands, cfg), None, None
