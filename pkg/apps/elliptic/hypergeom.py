"""
F(1/2, 1/2; 1; z) = 1 + (1/2)^2 z + (1*3 / 2*4)^2 z^2 + ...,  |z| < 1

Terms follow t_{n+1} = t_n * ((n + 1/2) / (n + 1))^2 * z; the series diverges
logarithmically as z -> 1, hence the z_max cap and the term budget.
"""

import logging
import math

import numpy as np

from apps.common.exceptions import DomainOverflow, MaxIterationsExceeded
from apps.common.types import DEFAULT_TOLERANCES

logger = logging.getLogger(__name__)

Z_MAX = 0.999999

_FIRST_CHUNK = 64
_MAX_CHUNK = 1 << 16


def hyp_F_half_series(z, cfg=None, z_max=Z_MAX):
    """
    Sum the series until the next term is below series_eps * |partial sum|

    Returns:
        (value, terms_used)

    Raises:
        DomainOverflow: |z| > z_max
        MaxIterationsExceeded: series_max_terms reached first
    """
    cfg = cfg or DEFAULT_TOLERANCES
    z = float(z)
    if not math.isfinite(z) or abs(z) > z_max:
        raise DomainOverflow(f"|z| = {abs(z)!r} exceeds the series cap {z_max!r}")
    if z == 0:
        return 1.0, 1

    parts = [1.0]
    total = 1.0
    term = 1.0
    start = 0
    chunk = _FIRST_CHUNK
    while start < cfg.series_max_terms:
        stop = min(start + chunk, cfg.series_max_terms)
        n = np.arange(start, stop, dtype=np.float64)
        terms = term * np.cumprod(((n + 0.5) / (n + 1.0)) ** 2 * z)
        running = total + np.cumsum(terms)
        done = np.flatnonzero(np.abs(terms) < cfg.series_eps * np.abs(running))
        if done.size:
            cut = int(done[0])
            parts.extend(terms[:cut].tolist())
            used = start + cut + 1
            logger.debug(f"F(1/2,1/2;1;{z!r}) used {used} terms")
            return math.fsum(parts), used
        parts.append(math.fsum(terms))
        total = math.fsum(parts)
        term = float(terms[-1])
        start = stop
        chunk = min(2 * chunk, _MAX_CHUNK)

    raise MaxIterationsExceeded('hyp_F_half', cfg.series_max_terms, f"z = {z!r}")


def hyp_F_half(z, cfg=None, z_max=Z_MAX):
    """F(1/2, 1/2; 1; z) for |z| <= z_max"""
    value, _ = hyp_F_half_series(z, cfg, z_max)
    return value
