import logging
import math

import numpy as np
from numpy.polynomial.legendre import leggauss

from apps.common.exceptions import QuadratureNotConverged

logger = logging.getLogger(__name__)

# Order of the Gauss-Legendre rule applied on every panel
PANEL_ORDER = 10
_NODES, _WEIGHTS = leggauss(PANEL_ORDER)


def gauss_legendre_panel(func, a, b):
    """Fixed-order Gauss-Legendre estimate of the integral of func over [a, b]"""
    half = (b - a) / 2
    centre = (a + b) / 2
    return half * float(np.dot(_WEIGHTS, func(centre + half * _NODES)))


def integrate_adaptive(func, a, b, *, tol, max_panels, initial_panels=4):
    """
    Adaptive interval halving with a Gauss-Legendre panel rule.

    Each panel is split in two until the two halves agree with the whole panel
    to tol relative to their sum; accepted panels are added with fsum.

    Args:
        func: integrand, vectorised over numpy arrays
        a, b: integration limits, a < b
        tol: relative agreement required on each panel
        max_panels: budget of panel-rule evaluations

    Returns:
        (integral, panels_used)

    Raises:
        QuadratureNotConverged: budget exhausted before every panel converged
    """
    edges = np.linspace(a, b, initial_panels + 1)
    stack = [(lo, hi, gauss_legendre_panel(func, lo, hi)) for lo, hi in zip(edges[:-1], edges[1:])]
    evaluations = len(stack)
    accepted = []

    while stack:
        lo, hi, whole = stack.pop()
        mid = (lo + hi) / 2
        left = gauss_legendre_panel(func, lo, mid)
        right = gauss_legendre_panel(func, mid, hi)
        evaluations += 2
        halves = left + right
        if abs(halves - whole) <= tol * abs(halves) or not lo < mid < hi:
            accepted.append(halves)
            continue
        if evaluations >= max_panels:
            raise QuadratureNotConverged(
                f"adaptive quadrature on [{a!r}, {b!r}] exceeded {max_panels} panel evaluations"
            )
        stack.append((lo, mid, left))
        stack.append((mid, hi, right))

    logger.debug(f"adaptive quadrature on [{a!r}, {b!r}] used {evaluations} panels")
    return math.fsum(accepted), evaluations
