"""
The binary operation x * y whose mean is the arithmetic-geometric mean.

For positive x, y pick the nome q with theta^2(q) = 1 / agm(x, y); then

    x * y = theta^2(-q) / theta^2(q),   equivalently   agm(1, x * y) = agm(x, y).

Four independent backends compute it:

    theta           the theta-quotient definition (direct)
    agm-inverse     A = 1/agm(x, y), bisect B with agm(A, B) = 1, return B / A
    hypergeometric  F(1/2,1/2;1;1-s^2) = F(1/2,1/2;1;1-y^2/x^2) / x, for 0 < y <= x < 1
    elliptic        int dphi/sqrt(cos^2 + s^2 sin^2) = int dphi/sqrt(x^2 cos^2 + y^2 sin^2),
                    both sides by quadrature

star() sorts its operands before dispatch, so star(x, y) == star(y, x) exactly.
"""

import functools
import logging
import math
import sys
from dataclasses import asdict, dataclass
from typing import Optional

from django.db import models

from apps.agm_core.agm import agm
from apps.common.exceptions import DomainOverflow, HypergeomDomain
from apps.common.roots import bisect
from apps.common.types import DEFAULT_TOLERANCES, Q_SAFE, positive_real
from apps.elliptic.hypergeom import hyp_F_half
from apps.elliptic.integrals import elliptic_I_quadrature
from apps.theta.series import log_theta, solve_nome

logger = logging.getLogger(__name__)

# Both hypergeometric series arguments stay at or below 1 - HYPERGEOM_MIN_RATIO^2,
# far inside the 2F1 cap
HYPERGEOM_MIN_RATIO = 1e-2

# Star values the elliptic backend can bracket
ELLIPTIC_MIN_STAR = 1e-6
ELLIPTIC_MAX_STAR = 1e6

# Smallest B / A ratio the agm-inverse bracket starts from; keeps agm(A, B)
# inside the normal binary64 range
_TINY_RATIO = 4 * sys.float_info.min


class Backend(models.TextChoices):
    THETA = 'theta', 'Theta quotient'
    AGM_INVERSE = 'agm-inverse', 'AGM inversion by bisection'
    HYPERGEOMETRIC = 'hypergeometric', 'Hypergeometric equation'
    ELLIPTIC = 'elliptic', 'Elliptic integral equation'


class BackendChoice(models.TextChoices):
    AUTO = 'auto', 'Theta with agm-inverse fallback'
    THETA = 'theta', 'Theta quotient'
    AGM_INVERSE = 'agm-inverse', 'AGM inversion by bisection'
    HYPERGEOMETRIC = 'hypergeometric', 'Hypergeometric equation'
    ELLIPTIC = 'elliptic', 'Elliptic integral equation'


# Spellings accepted on the command line
BACKEND_ALIASES = {
    'hypergeom': BackendChoice.HYPERGEOMETRIC,
    'agm_inverse': BackendChoice.AGM_INVERSE,
}


def backend_choice(value):
    """Normalise a selector string (or BackendChoice) to a BackendChoice"""
    if isinstance(value, BackendChoice):
        return value
    value = str(value).strip().lower()
    if value in BACKEND_ALIASES:
        return BACKEND_ALIASES[value]
    try:
        return BackendChoice(value)
    except ValueError:
        raise ValueError(
            f"unknown backend {value!r}; expected one of {', '.join(BackendChoice.values)}"
        ) from None


@dataclass(frozen=True)
class StarComputation:
    """Result of one x * y evaluation"""
    value: float
    mean: float
    nome: Optional[float]
    backend: str
    iterations: int
    residual: float

    def as_dict(self):
        return asdict(self)


def _nome_or_none(mean, cfg):
    """q with theta^2(q) = 1/mean when it lies in the theta domain"""
    try:
        return solve_nome(1 / mean, cfg).root
    except DomainOverflow:
        return None


def _relative(a, b):
    return abs(a - b) / abs(b)


def star_theta(x, y, cfg=None):
    """
    x * y = theta^2(-q) / theta^2(q) with theta^2(q) = 1 / agm(x, y)

    Raises:
        DomainOverflow: the nome would leave [-Q_SAFE, Q_SAFE]; fall back to star_agm_inverse
    """
    cfg = cfg or DEFAULT_TOLERANCES
    x = positive_real(x, 'x')
    y = positive_real(y, 'y')
    mean = agm(x, y, cfg)
    nome_root = solve_nome(1 / mean, cfg, q_max=Q_SAFE)
    q = nome_root.root

    value = math.exp(2 * log_theta(-q, cfg) - 2 * log_theta(q, cfg))
    residual = _relative(agm(1.0, value, cfg), mean)
    return StarComputation(
        value=value, mean=mean, nome=q, backend=Backend.THETA.value,
        iterations=nome_root.iterations, residual=residual,
    )


def star_agm_inverse(x, y, cfg=None):
    """
    A = 1/agm(x, y); bisect B with agm(A, B) = 1 on [max(tiny, 2 - A), 1/A]; x * y = B / A

    The bracket holds because sqrt(AB) <= agm(A, B) <= (A + B) / 2.

    Raises:
        DomainOverflow: x * y underflows or overflows binary64 (agm(x, y) below
            roughly 2.2e-3 or above agm(1, largest float))
        BracketFailure, MaxIterationsExceeded
    """
    cfg = cfg or DEFAULT_TOLERANCES
    x = positive_real(x, 'x')
    y = positive_real(y, 'y')
    mean = agm(x, y, cfg)
    a = 1 / mean

    def f(b):
        return agm(a, b, cfg) - 1.0

    lo, hi = max(a * _TINY_RATIO, 2.0 - a), 1.0 / a
    if hi <= lo:
        b, iterations, residual = hi, 0, abs(f(hi))
    else:
        if lo == a * _TINY_RATIO and f(lo) > 0:
            raise DomainOverflow(f"x * y underflows binary64 for agm(x, y) = {mean!r}")
        result = bisect(
            f, lo, hi, ftol=cfg.root_abs_tol, max_iter=cfg.root_max_iter,
            geometric=True, phase='star_agm_inverse',
        )
        b, iterations, residual = result.root, result.iterations, abs(result.residual)

    value = b / a
    if not math.isfinite(value):
        raise DomainOverflow(f"x * y overflows binary64 for agm(x, y) = {mean!r}")
    return StarComputation(
        value=value, mean=mean, nome=_nome_or_none(mean, cfg),
        backend=Backend.AGM_INVERSE.value, iterations=iterations, residual=residual,
    )


def star_hypergeom(x, y, cfg=None):
    """
    The s in (0, 1) with F(1/2,1/2;1;1-s^2) = F(1/2,1/2;1;1-y^2/x^2) / x, for 0 < y <= x < 1

    Raises:
        HypergeomDomain: operands outside 0 < y <= x < 1, y/x below HYPERGEOM_MIN_RATIO,
            or x * y below HYPERGEOM_MIN_RATIO
    """
    cfg = cfg or DEFAULT_TOLERANCES
    x = positive_real(x, 'x')
    y = positive_real(y, 'y')
    if not y <= x < 1:
        raise HypergeomDomain(f"hypergeometric backend needs 0 < y <= x < 1, got x={x!r}, y={y!r}")
    if y / x < HYPERGEOM_MIN_RATIO:
        raise HypergeomDomain(f"ratio y/x = {y / x!r} is below {HYPERGEOM_MIN_RATIO!r}")

    target = hyp_F_half(1 - (y / x) ** 2, cfg) / x

    def g(s):
        return hyp_F_half(1 - s * s, cfg) - target

    if g(HYPERGEOM_MIN_RATIO) < 0:
        raise HypergeomDomain(f"x * y falls below {HYPERGEOM_MIN_RATIO!r} for x={x!r}, y={y!r}")
    result = bisect(
        g, HYPERGEOM_MIN_RATIO, 1.0, ftol=cfg.root_abs_tol, max_iter=cfg.root_max_iter,
        geometric=True, phase='star_hypergeom',
    )
    mean = agm(x, y, cfg)
    return StarComputation(
        value=result.root, mean=mean, nome=_nome_or_none(mean, cfg),
        backend=Backend.HYPERGEOMETRIC.value, iterations=result.iterations,
        residual=abs(result.residual) / target,
    )


def star_elliptic(x, y, cfg=None):
    """
    The s > 0 with I(1, s) = I(x, y), I evaluated by quadrature only

    Raises:
        DomainOverflow: operand ratio above the quadrature limit, or s outside
            [ELLIPTIC_MIN_STAR, ELLIPTIC_MAX_STAR]
    """
    cfg = cfg or DEFAULT_TOLERANCES
    x = positive_real(x, 'x')
    y = positive_real(y, 'y')
    target = elliptic_I_quadrature(x, y, cfg)

    def h(s):
        return (elliptic_I_quadrature(1.0, s, cfg) - target) / target

    # sqrt(s) <= agm(1, s) <= (1 + s) / 2 brackets s once the mean is known
    mean = math.pi / (2 * target)
    hi = min(mean ** 2 * (1 + 1e-6), ELLIPTIC_MAX_STAR)
    lo = (2 * mean - 1) * (1 - 1e-6) if 2 * mean > 1 else hi
    lo = max(min(lo, hi), ELLIPTIC_MIN_STAR)
    while lo > ELLIPTIC_MIN_STAR and h(lo) < 0:
        lo = max(lo / 16, ELLIPTIC_MIN_STAR)
    if lo >= hi or h(lo) < 0 or h(hi) > 0:
        raise DomainOverflow(
            f"x * y for x={x!r}, y={y!r} lies outside [{ELLIPTIC_MIN_STAR!r}, {ELLIPTIC_MAX_STAR!r}]"
        )
    result = bisect(
        h, lo, hi, ftol=cfg.quad_tol, max_iter=cfg.root_max_iter,
        geometric=True, phase='star_elliptic',
    )
    return StarComputation(
        value=result.root, mean=mean, nome=_nome_or_none(mean, cfg),
        backend=Backend.ELLIPTIC.value, iterations=result.iterations,
        residual=abs(result.residual),
    )


BACKENDS = {
    BackendChoice.THETA: star_theta,
    BackendChoice.AGM_INVERSE: star_agm_inverse,
    BackendChoice.HYPERGEOMETRIC: star_hypergeom,
    BackendChoice.ELLIPTIC: star_elliptic,
}


def star(x, y, choice=BackendChoice.AUTO, cfg=None):
    """
    x * y through the selected backend

    auto tries the theta quotient and falls back to agm-inverse on DomainOverflow.
    """
    cfg = cfg or DEFAULT_TOLERANCES
    choice = backend_choice(choice)
    x = positive_real(x, 'x')
    y = positive_real(y, 'y')
    hi, lo = max(x, y), min(x, y)

    if choice != BackendChoice.AUTO:
        return BACKENDS[choice](hi, lo, cfg)
    try:
        return star_theta(hi, lo, cfg)
    except DomainOverflow as e:
        logger.info(f"theta backend refused ({hi!r}, {lo!r}): {e}; using agm-inverse")
        return star_agm_inverse(hi, lo, cfg)


def star_value(x, y, choice=BackendChoice.AUTO, cfg=None):
    return star(x, y, choice, cfg).value


def star_inverse(x, cfg=None, *, choice=BackendChoice.AUTO):
    """The element x' with x * x' = 1, namely x * ((1/x) * (1/x))"""
    x = positive_real(x, 'x')
    return x * star_value(1 / x, 1 / x, choice, cfg)


def solve_right(x, z, cfg=None, *, choice=BackendChoice.AUTO):
    """The y with x * y = z, namely x * ((1/x) * (z/x))"""
    x = positive_real(x, 'x')
    z = positive_real(z, 'z')
    return x * star_value(1 / x, z / x, choice, cfg)


def solve_diagonal(z, cfg=None):
    """The unique mu with mu * mu = z; it is agm(1, z)"""
    return agm(1.0, positive_real(z, 'z'), cfg)


@functools.lru_cache(maxsize=None)
def _mean_floor():
    return agm(1.0, 2 * _TINY_RATIO)


@functools.lru_cache(maxsize=None)
def _mean_ceiling():
    return agm(1.0, sys.float_info.max)


def star_domain_contains(x, y, cfg=None):
    """True when x * y is representable in binary64"""
    return _mean_floor() < agm(x, y, cfg) < _mean_ceiling()


def hypergeom_domain_contains(x, y, cfg=None):
    """True when star_hypergeom(max(x, y), min(x, y)) is defined"""
    hi, lo = max(x, y), min(x, y)
    if not (0 < lo and hi < 1 and lo / hi >= HYPERGEOM_MIN_RATIO):
        return False
    return agm(x, y, cfg) >= agm(1.0, HYPERGEOM_MIN_RATIO) * (1 + 1e-6)


def elliptic_domain_contains(x, y, cfg=None):
    """True when star_elliptic(x, y) can bracket its root"""
    if max(x, y) / min(x, y) > 1e3:
        return False
    mean = agm(x, y, cfg)
    return agm(1.0, ELLIPTIC_MIN_STAR) * (1 + 1e-6) <= mean <= agm(1.0, ELLIPTIC_MAX_STAR) * (1 - 1e-6)
