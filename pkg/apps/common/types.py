import math
import sys
from dataclasses import asdict, dataclass, fields, replace
from typing import NewType

from .exceptions import InvalidTolerance, NonPositiveInput, DomainOverflow

PositiveReal = NewType('PositiveReal', float)
Nome = NewType('Nome', float)

EPS = sys.float_info.epsilon

# Hard cap on |q|; see the theta module for the cost/cancellation argument
Q_MAX = 0.999
# Range where theta-backed results keep the identity tolerances in binary64
Q_SAFE = 0.9


@dataclass(frozen=True)
class ToleranceConfig:
    """
    Convergence thresholds and iteration caps for every numerical phase

    agm_rel_tol      -- AGM stops when |x_n - y_n| <= agm_rel_tol * x_n
    root_abs_tol     -- residual tolerance for every bisection solve
    series_eps       -- truncation threshold for the theta and 2F1 series
    quad_tol         -- adaptive quadrature refinement threshold (relative)
    *_max_iter etc.  -- caps per phase; exceeding one raises MaxIterationsExceeded
    """
    agm_rel_tol: float = 4 * EPS
    root_abs_tol: float = 1e-13
    series_eps: float = 1e-16
    quad_tol: float = 1e-12
    agm_max_iter: int = 64
    root_max_iter: int = 200
    series_max_terms: int = 10_000_000
    quad_max_panels: int = 4096

    def __post_init__(self):
        for field in fields(self):
            value = getattr(self, field.name)
            if field.type is int:
                if isinstance(value, bool) or int(value) != value or value < 1:
                    raise InvalidTolerance(f"{field.name} must be an integer >= 1, got {value!r}")
            elif not (math.isfinite(value) and value > 0):
                raise InvalidTolerance(f"{field.name} must be a positive finite real, got {value!r}")

    @classmethod
    def from_settings(cls):
        """Build the config from the STAR_TOLERANCES settings dict"""
        from django.conf import settings

        return cls(**getattr(settings, 'STAR_TOLERANCES', {}))

    def with_overrides(self, **overrides):
        """Return a copy with the non-None overrides applied"""
        return replace(self, **{k: v for k, v in overrides.items() if v is not None})

    def as_dict(self):
        return asdict(self)


DEFAULT_TOLERANCES = ToleranceConfig()


def positive_real(value, name='x'):
    """Validate an operand as a strictly positive finite real and return it as float"""
    try:
        number = float(value)
    except (TypeError, ValueError):
        raise NonPositiveInput(name, value) from None
    if not math.isfinite(number) or number <= 0:
        raise NonPositiveInput(name, value)
    return PositiveReal(number)


def nome(value, q_max=Q_MAX):
    """Validate a theta nome: finite and within the capped domain |q| <= q_max"""
    q = float(value)
    if not math.isfinite(q) or abs(q) >= 1:
        raise DomainOverflow(f"nome must satisfy -1 < q < 1, got {value!r}")
    if abs(q) > q_max:
        raise DomainOverflow(f"|q| = {abs(q)!r} exceeds the supported cap {q_max!r}")
    return Nome(q)
