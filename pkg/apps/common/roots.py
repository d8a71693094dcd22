import logging
import math
from dataclasses import dataclass

from .exceptions import BracketFailure, DomainOverflow, MaxIterationsExceeded

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class RootResult:
    root: float
    residual: float
    iterations: int


def bisect(func, lo, hi, *, ftol, max_iter, geometric=False, phase='bisection'):
    """
    Bisection on a monotone function whose values at lo and hi differ in sign

    Args:
        func: residual function, monotone on [lo, hi]
        lo, hi: bracket endpoints, lo < hi
        ftol: stop as soon as |func(mid)| <= ftol
        max_iter: halving budget
        geometric: split at sqrt(lo*hi) while the bracket spans more than a
            factor of 4 (needs lo > 0); roots many decades below hi are then
            reached in a few dozen steps
        phase: label used in errors and logs

    Returns:
        RootResult with the root, its residual and the number of halvings.
        When the bracket collapses to adjacent floats the endpoint with the
        smaller |residual| is returned.

    Raises:
        BracketFailure: func(lo) and func(hi) have the same sign
        MaxIterationsExceeded: neither stopping rule fired within max_iter
    """
    f_lo, f_hi = func(lo), func(hi)
    if f_lo == 0:
        return RootResult(lo, 0.0, 0)
    if f_hi == 0:
        return RootResult(hi, 0.0, 0)
    if math.isnan(f_lo) or math.isnan(f_hi) or (f_lo > 0) == (f_hi > 0):
        raise BracketFailure(lo, hi, f_lo, f_hi)

    for iteration in range(1, max_iter + 1):
        if geometric and lo > 0 and hi > 4 * lo:
            mid = math.sqrt(lo) * math.sqrt(hi)
        else:
            mid = lo + (hi - lo) / 2
        if mid <= lo or mid >= hi:
            root, residual = (lo, f_lo) if abs(f_lo) <= abs(f_hi) else (hi, f_hi)
            logger.debug(f"{phase}: bracket collapsed after {iteration} steps at {root!r}")
            return RootResult(root, residual, iteration)

        f_mid = func(mid)
        if math.isnan(f_mid):
            raise DomainOverflow(f"{phase}: residual is not a number at {mid!r}")
        if abs(f_mid) <= ftol:
            logger.debug(f"{phase}: converged after {iteration} steps at {mid!r}")
            return RootResult(mid, f_mid, iteration)

        if (f_mid > 0) == (f_lo > 0):
            lo, f_lo = mid, f_mid
        else:
            hi, f_hi = mid, f_mid

    raise MaxIterationsExceeded(phase, max_iter, f"bracket [{lo!r}, {hi!r}]")
