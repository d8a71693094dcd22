"""
Error hierarchy shared by every numerical module.

Each error carries the operands or counts that triggered it so callers
(the CLI, the batch task, the verification suite) can report them.
"""


class StarOperationError(Exception):
    """Base class for all errors raised by the AGM / star operation toolkit"""


class NonPositiveInput(StarOperationError, ValueError):
    """An operand that must be a positive finite real was not"""

    def __init__(self, name, value):
        self.name = name
        self.value = value
        super().__init__(f"{name} must be a positive finite real, got {value!r}")


class InvalidTolerance(StarOperationError, ValueError):
    """A tolerance or iteration cap is out of range"""


class MaxIterationsExceeded(StarOperationError):
    """An iteration did not meet its convergence criterion within its cap"""

    def __init__(self, phase, max_iter, detail=''):
        self.phase = phase
        self.max_iter = max_iter
        message = f"{phase} did not converge within {max_iter} iterations"
        if detail:
            message = f"{message}: {detail}"
        super().__init__(message)


class DomainOverflow(StarOperationError):
    """The operand needs a dynamic range this build does not support"""


class HypergeomDomain(DomainOverflow):
    """Operands outside 0 < y <= x < 1, the hypergeometric backend's domain"""


class BracketFailure(StarOperationError):
    """A root-finding bracket does not straddle the root"""

    def __init__(self, lo, hi, f_lo, f_hi):
        self.lo, self.hi = lo, hi
        self.f_lo, self.f_hi = f_lo, f_hi
        super().__init__(
            f"bracket [{lo!r}, {hi!r}] does not straddle a root "
            f"(f(lo)={f_lo!r}, f(hi)={f_hi!r})"
        )


class QuadratureNotConverged(StarOperationError):
    """Adaptive quadrature exhausted its panel budget"""
