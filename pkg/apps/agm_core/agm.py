"""
Arithmetic-geometric mean.

x_n = (x_{n-1} + y_{n-1}) / 2,  y_n = sqrt(x_{n-1} y_{n-1}),  agm(x, y) = lim x_n = lim y_n

The iteration stops once |x_n - y_n| <= agm_rel_tol * x_n and returns the
midpoint of the last pair. One step is symmetric in its arguments in IEEE
arithmetic, so agm(x, y) == agm(y, x) bit for bit.
"""

import logging
import math
import sys
from dataclasses import dataclass

from apps.common.exceptions import MaxIterationsExceeded
from apps.common.types import DEFAULT_TOLERANCES, PositiveReal, positive_real

logger = logging.getLogger(__name__)

# Operand ratio beyond which the pair is rescaled by homogeneity
NORMALIZE_RATIO = 1e8
# Magnitudes outside [1/SAFE_MAGNITUDE, SAFE_MAGNITUDE] are rescaled as well,
# otherwise x * y can overflow or underflow
SAFE_MAGNITUDE = 1e150


@dataclass(frozen=True)
class AgmTrace:
    """Every iterate (x_n, y_n) of one AGM run, in the caller's scale"""
    pairs: tuple
    iterations: int
    converged: bool

    @property
    def mean(self):
        x_n, y_n = self.pairs[-1]
        return (x_n + y_n) / 2

    @property
    def gaps(self):
        return [abs(x_n - y_n) for x_n, y_n in self.pairs]


def _scale_for(x, y):
    hi, lo = max(x, y), min(x, y)
    if hi / lo > NORMALIZE_RATIO or hi > SAFE_MAGNITUDE or lo < 1 / SAFE_MAGNITUDE:
        return hi
    return 1.0


def _first_step(x, y):
    """One iteration in the caller's scale, for pairs whose ratio leaves binary64"""
    return x / 2 + y / 2, math.sqrt(x) * math.sqrt(y)


def _iterate(x, y, cfg):
    """
    Run the iteration on (x, y)

    Returns (head, pairs, scale): head holds the iterates taken in the caller's
    scale, pairs the rest in the frame divided by scale.
    """
    x = positive_real(x, 'x')
    y = positive_real(y, 'y')
    head, a, b = [], x, y
    if min(a, b) / max(a, b) < sys.float_info.min:
        head.append((a, b))
        a, b = _first_step(a, b)
    scale = _scale_for(a, b)
    a, b = a / scale, b / scale

    pairs = [(a, b)]
    for step in range(len(head), cfg.agm_max_iter + 1):
        if abs(a - b) <= cfg.agm_rel_tol * max(a, b):
            logger.debug(f"agm converged after {step} steps")
            return head, pairs, scale
        if step == cfg.agm_max_iter:
            break
        a, b = (a + b) / 2, math.sqrt(a * b)
        pairs.append((a, b))

    raise MaxIterationsExceeded(
        'agm', cfg.agm_max_iter, f"gap {abs(a - b)!r} at operands ({x!r}, {y!r})"
    )


def agm(x, y, cfg=None):
    """
    Arithmetic-geometric mean of two positive reals

    Raises:
        NonPositiveInput: x or y is not a positive finite real
        MaxIterationsExceeded: the gap criterion was not met within agm_max_iter
    """
    cfg = cfg or DEFAULT_TOLERANCES
    _, pairs, scale = _iterate(x, y, cfg)
    a, b = pairs[-1]
    return PositiveReal(scale * ((a + b) / 2))


def agm_trace(x, y, cfg=None):
    """Same computation as agm(), returning every iterate pair"""
    cfg = cfg or DEFAULT_TOLERANCES
    head, pairs, scale = _iterate(x, y, cfg)
    if scale != 1.0:
        pairs = [(scale * a, scale * b) for a, b in pairs]
    pairs = head + pairs
    return AgmTrace(pairs=tuple(pairs), iterations=len(pairs) - 1, converged=True)
