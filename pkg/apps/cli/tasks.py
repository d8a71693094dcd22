import logging

from celery import shared_task

from apps.common.exceptions import StarOperationError
from apps.common.types import ToleranceConfig

from .batch import evaluate

logger = logging.getLogger(__name__)


@shared_task(queue='batch')
def evaluate_row(row, method='auto', tolerances=None):
    """
    Evaluate one batch row; errors become an error row, never an exception

    Args:
        row: BatchRow.as_dict()
        method: BackendChoice value for star, inverse and solve
        tolerances: ToleranceConfig.as_dict(), settings defaults when None

    Returns:
        Dict with the BatchResultSerializer fields
    """
    result = {
        'line': row['line'],
        'operation': row['operation'],
        'operands': list(row['operands']),
        'result': None,
        'backend': None,
        'residual': None,
        'error': row.get('error'),
    }
    if result['error']:
        logger.warning(f"batch line {row['line']}: {result['error']}")
        return result

    try:
        cfg = ToleranceConfig(**tolerances) if tolerances else ToleranceConfig.from_settings()
        value, backend, residual = evaluate(row['operation'], row['operands'], method, cfg)
    except (StarOperationError, ArithmeticError) as e:
        logger.warning(f"batch line {row['line']} ({row['operation']}) failed: {type(e).__name__}: {e}")
        result['error'] = f"{type(e).__name__}: {e}"
        return result

    result.update(result=value, backend=backend, residual=residual)
    return result
