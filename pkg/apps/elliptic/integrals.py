"""
Complete elliptic integral in the form

    I(x, y) = int_0^{pi/2} dphi / sqrt(x^2 cos^2 phi + y^2 sin^2 phi) = pi / (2 agm(x, y))

elliptic_I uses the AGM side; the quadrature is kept as an independent oracle.
"""

import math
from dataclasses import dataclass

import numpy as np

from apps.agm_core.agm import agm
from apps.common.exceptions import DomainOverflow
from apps.common.types import DEFAULT_TOLERANCES, positive_real

from .quadrature import integrate_adaptive

# Largest operand ratio the quadrature oracle accepts
QUADRATURE_MAX_RATIO = 1e6


@dataclass(frozen=True)
class EllipticPair:
    x: float
    y: float

    def __post_init__(self):
        object.__setattr__(self, 'x', positive_real(self.x, 'x'))
        object.__setattr__(self, 'y', positive_real(self.y, 'y'))

    @property
    def ratio(self):
        return max(self.x, self.y) / min(self.x, self.y)

    def integrand(self, phi):
        return 1.0 / np.sqrt((self.x * np.cos(phi)) ** 2 + (self.y * np.sin(phi)) ** 2)


def elliptic_I(x, y, cfg=None):
    """pi / (2 agm(x, y))"""
    pair = EllipticPair(x, y)
    return math.pi / (2 * agm(pair.x, pair.y, cfg))


def elliptic_I_quadrature_panels(x, y, cfg=None):
    """Quadrature value of I(x, y) together with the number of panels it took"""
    cfg = cfg or DEFAULT_TOLERANCES
    pair = EllipticPair(x, y)
    if pair.ratio > QUADRATURE_MAX_RATIO:
        raise DomainOverflow(
            f"operand ratio {pair.ratio!r} exceeds the quadrature limit {QUADRATURE_MAX_RATIO!r}"
        )
    return integrate_adaptive(
        pair.integrand, 0.0, math.pi / 2, tol=cfg.quad_tol, max_panels=cfg.quad_max_panels,
    )


def elliptic_I_quadrature(x, y, cfg=None):
    """
    Direct adaptive Gauss-Legendre quadrature of I(x, y)

    Raises:
        DomainOverflow: operand ratio above QUADRATURE_MAX_RATIO
        QuadratureNotConverged: quad_max_panels exhausted
    """
    value, _ = elliptic_I_quadrature_panels(x, y, cfg)
    return value
