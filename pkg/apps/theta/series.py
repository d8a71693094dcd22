"""
Jacobi theta series on the real nome, theta(q) = 1 + 2 * sum_{n>=1} q^(n^2), -1 < q < 1.

theta is strictly increasing, theta(0) = 1, theta -> 0 as q -> -1 and
theta -> +inf as q -> 1. For q < 0 the partial sum cancels catastrophically
(signs follow (-1)^n), so theta(-p) is evaluated through the product
prod_{n>=1} (1 - p^n) / (1 + p^n) in the log domain instead.
"""

import logging
import math
import sys

import numpy as np

from apps.common.exceptions import DomainOverflow
from apps.common.roots import RootResult, bisect
from apps.common.types import DEFAULT_TOLERANCES, Nome, Q_MAX, nome, positive_real

logger = logging.getLogger(__name__)


def truncation_terms(q, eps):
    """
    Smallest N >= 1 with |q|^(N^2) < eps / 2

    theta sums n = 1..N, so the first omitted term 2|q|^((N+1)^2) is below eps.
    """
    aq = abs(float(q))
    if aq == 0:
        return 1
    log_target = math.log(eps / 2)
    if log_target >= 0:
        return 1
    n = max(1, math.ceil(math.sqrt(log_target / math.log(aq))))
    # closed form can be off by one near integer boundaries
    while n > 1 and (n - 1) ** 2 * math.log(aq) < log_target:
        n -= 1
    while n * n * math.log(aq) >= log_target:
        n += 1
    return n


def product_terms(p, eps):
    """Number of factors of the theta(-p) product before p^n < eps / 2"""
    if p == 0:
        return 1
    return max(1, math.ceil(math.log(eps / 2) / math.log(p)))


def theta_series(q, cfg=None):
    """Partial sum 1 + 2 * sum_{n=1}^{N} q^(n^2), N = truncation_terms(q, series_eps)"""
    cfg = cfg or DEFAULT_TOLERANCES
    q = nome(q)
    n = np.arange(1, truncation_terms(q, cfg.series_eps) + 1, dtype=np.int64)
    terms = np.power(q, n * n)
    return 1.0 + 2.0 * math.fsum(terms[::-1])


def log_theta(q, cfg=None):
    """Natural logarithm of theta(q), finite on the whole capped domain"""
    cfg = cfg or DEFAULT_TOLERANCES
    q = nome(q)
    if q >= 0:
        return math.log(theta_series(q, cfg))
    p = -q
    powers = np.power(p, np.arange(1, product_terms(p, cfg.series_eps) + 1, dtype=np.float64))
    return math.fsum(np.log1p(-powers) - np.log1p(powers))


def _finite_positive(log_value, what, q):
    if log_value < math.log(sys.float_info.min):
        raise DomainOverflow(f"{what}({q!r}) underflows binary64")
    return math.exp(log_value)


def theta(q, cfg=None):
    """
    theta(q) = 1 + 2 * sum_{n>=1} q^(n^2)

    Raises:
        DomainOverflow: |q| > Q_MAX, or the value underflows binary64
    """
    cfg = cfg or DEFAULT_TOLERANCES
    q = nome(q)
    if q >= 0:
        return theta_series(q, cfg)
    return _finite_positive(log_theta(q, cfg), 'theta', q)


def theta_sq(q, cfg=None):
    """theta(q) squared"""
    cfg = cfg or DEFAULT_TOLERANCES
    q = nome(q)
    if q >= 0:
        return theta_series(q, cfg) ** 2
    return _finite_positive(2 * log_theta(q, cfg), 'theta_sq', q)


def reachable_log_range(cfg=None, q_max=Q_MAX):
    """(ln theta^2(-q_max), ln theta^2(q_max)), the values inverse_theta_sq can reach"""
    cfg = cfg or DEFAULT_TOLERANCES
    return 2 * log_theta(-q_max, cfg), 2 * log_theta(q_max, cfg)


def _outward_bracket(g, direction, q_max):
    """Grow [q_prev, q_next] from 0 toward direction * q_max until g changes sign"""
    previous = 0.0
    step = 1
    while True:
        current = direction * q_max * (1 - 0.5 ** step)
        if step >= 60:
            current = direction * q_max
        if direction * g(current) >= 0:
            return (previous, current) if direction > 0 else (current, previous)
        if current == direction * q_max:
            return None
        previous = current
        step += 1


def solve_nome(v, cfg=None, q_max=Q_MAX):
    """
    Bisection for the unique nome q with theta^2(q) = v, returning the RootResult

    Bisects g(q) = ln theta^2(q) - ln v, so the stopping rule
    |g| <= root_abs_tol is a relative residual on v.

    Raises:
        DomainOverflow: v lies outside [theta^2(-q_max), theta^2(q_max)]
        BracketFailure: no sign change found (should not happen for reachable v)
        MaxIterationsExceeded: bisection budget exhausted
    """
    cfg = cfg or DEFAULT_TOLERANCES
    v = positive_real(v, 'v')
    log_v = math.log(v)
    low, high = reachable_log_range(cfg, q_max)
    if not low <= log_v <= high:
        raise DomainOverflow(
            f"theta^2 cannot reach {v!r} with |q| <= {q_max!r} "
            f"(reachable ln-range [{low!r}, {high!r}])"
        )
    if log_v == 0:
        return RootResult(0.0, 0.0, 0)

    def g(q):
        return 2 * log_theta(q, cfg) - log_v

    direction = 1 if log_v > 0 else -1
    bracket = _outward_bracket(g, direction, q_max)
    if bracket is None:
        raise DomainOverflow(f"no nome within |q| <= {q_max!r} reaches theta^2 = {v!r}")

    result = bisect(
        g, *bracket,
        ftol=cfg.root_abs_tol, max_iter=cfg.root_max_iter, phase='inverse_theta_sq',
    )
    logger.debug(f"theta^2(q) = {v!r} at q = {result.root!r} after {result.iterations} steps")
    return result


def inverse_theta_sq(v, cfg=None, q_max=Q_MAX):
    """The unique nome q with theta^2(q) = v, see solve_nome"""
    return Nome(solve_nome(v, cfg, q_max).root)
