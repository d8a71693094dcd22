"""
Identity suite for the star operation.

Every identity has a residual function that evaluates one operand tuple on
its own, so a reported witness can be re-checked in isolation. run_suite
feeds the grid through each identity and returns one IdentityReport per
identity, in IdentityId order.
"""

import itertools
import logging
import math

import numpy as np

from apps.agm_core.agm import agm
from apps.common.exceptions import DomainOverflow, StarOperationError
from apps.common.types import DEFAULT_TOLERANCES
from apps.elliptic.hypergeom import hyp_F_half
from apps.elliptic.integrals import elliptic_I_quadrature
from apps.star.operations import (
    BackendChoice,
    elliptic_domain_contains,
    hypergeom_domain_contains,
    solve_diagonal,
    solve_right,
    star,
    star_domain_contains,
    star_inverse,
    star_value,
)
from apps.theta.series import theta_sq

from .reports import (
    FIXED_TOLERANCE_IDENTITIES,
    IDENTITY_TOLERANCES,
    IdentityId,
    IdentityReport,
)

logger = logging.getLogger(__name__)

# Fixed left operands for the cancellation and distributive checks
FIXED_FACTORS = (0.5, 2.0, 10.0)
INTEGER_FAMILY_RANGE = range(1, 11)
NOME_SAMPLES = np.linspace(-0.9, 0.9, 25)
HYPERGEOM_SAMPLES = np.linspace(0.0, 0.9, 19)
ELLIPTIC_MAX_RATIO = 1e3
# Every ELLIPTIC_STRIDE-th cross-backend pair also runs the quadrature backend
ELLIPTIC_STRIDE = 4
NONASSOC_SCAN_LIMIT = 2000
# Monotonicity sequences skip values closer than this to their predecessor
MIN_RELATIVE_SPACING = 1e-9

COMPUTATION_ERRORS = (StarOperationError, ArithmeticError)


class SampleFailure(Exception):
    """A computation error raised while evaluating one operand tuple"""

    def __init__(self, operands, cause):
        self.operands = tuple(float(v) for v in operands)
        self.cause = cause
        super().__init__(f"{type(cause).__name__} at {self.operands!r}: {cause}")


class ResidualTracker:
    """Running maximum of a residual together with the tuple that produced it"""

    def __init__(self):
        self.samples = 0
        self.max_residual = 0.0
        self.witness = None

    def evaluate(self, func, *operands, **kwargs):
        try:
            residual = float(func(*operands, **kwargs))
        except COMPUTATION_ERRORS as e:
            raise SampleFailure(operands, e) from e
        self.record(residual, operands)
        return residual

    def record(self, residual, operands):
        self.samples += 1
        if math.isnan(residual):
            residual = math.inf
        if self.witness is None or residual > self.max_residual:
            self.max_residual = residual
            self.witness = tuple(float(v) for v in operands)

    def report(self, identity, tolerance):
        passed = self.max_residual <= tolerance
        return IdentityReport(
            identity_id=identity.value,
            samples=self.samples,
            max_residual=float(self.max_residual),
            tolerance=float(tolerance),
            passed=passed,
            witness=None if passed else self.witness,
        )


def _rel(value, reference):
    return abs(value - reference) / abs(reference)


def _separated(values):
    """Sorted values with near-duplicates dropped"""
    kept = []
    for value in sorted(values):
        if not kept or value > kept[-1] * (1 + MIN_RELATIVE_SPACING):
            kept.append(value)
    return kept


# Residuals of single operand tuples

def unit_residual(x, cfg=None):
    return _rel(star_value(1.0, x, cfg=cfg), x)


def mean_residual(x, y, cfg=None):
    """x * y against mu * mu, and mu recovered from x * y by solve_diagonal"""
    mean = agm(x, y, cfg)
    value = star_value(x, y, cfg=cfg)
    return max(_rel(star_value(mean, mean, cfg=cfg), value), _rel(solve_diagonal(value, cfg), mean))


def distrib_residual(a, x, y, cfg=None):
    lhs = star_value(a * x, a * y, cfg=cfg)
    return _rel(star_value(a, a * star_value(x, y, cfg=cfg), cfg=cfg), lhs)


def inverse_residual(x, y, cfg=None):
    """x * x' = 1 for the inverse x', and solve_right(x, x * y) = y"""
    unit = abs(star_value(x, star_inverse(x, cfg=cfg), cfg=cfg) - 1.0)
    return max(unit, _rel(solve_right(x, star_value(x, y, cfg=cfg), cfg=cfg), y))


def gauss_residual(q, cfg=None):
    return abs(agm(theta_sq(q, cfg), theta_sq(-q, cfg), cfg) - 1.0)


def defining_residual(x, y, cfg=None):
    mean = agm(x, y, cfg)
    return _rel(agm(1.0, star_value(x, y, cfg=cfg), cfg), mean)


def meanstep_residual(x, y, cfg=None):
    value = star_value(x, y, cfg=cfg)
    return _rel(star_value((x + y) / 2, math.sqrt(x) * math.sqrt(y), cfg=cfg), value)


def halfstep_residual(x, cfg=None):
    return _rel(star_value((x + 1) / 2, math.sqrt(x), cfg=cfg), x)


def integer_residual(n, cfg=None):
    n = int(n)
    expected = float((2 * n + 1) ** 2)
    return _rel(star_value(2 * n + 1, 2 * n * n + 2 * n + 1, cfg=cfg), expected)


def associativity_defect(x, y, z, cfg=None):
    left = star_value(star_value(x, y, cfg=cfg), z, cfg=cfg)
    right = star_value(x, star_value(y, z, cfg=cfg), cfg=cfg)
    return abs(left - right) / max(left, right)


def cross_backend_residual(x, y, cfg=None, elliptic=True):
    """
    Largest relative disagreement with the theta backend over every backend
    whose domain contains (x, y)

    Raises:
        DomainOverflow: (x, y) is outside the theta backend's domain
    """
    reference = star_value(x, y, BackendChoice.THETA, cfg)
    others = [BackendChoice.AGM_INVERSE]
    if hypergeom_domain_contains(x, y, cfg):
        others.append(BackendChoice.HYPERGEOMETRIC)
    if elliptic and elliptic_domain_contains(x, y, cfg):
        others.append(BackendChoice.ELLIPTIC)
    return max(_rel(star_value(x, y, choice, cfg), reference) for choice in others)


def elliptic_gauss_residual(x, y, cfg=None):
    reference = math.pi / (2 * agm(x, y, cfg))
    return _rel(elliptic_I_quadrature(x, y, cfg), reference)


def hyp_series_residual(z, cfg=None):
    return abs(hyp_F_half(z, cfg) - 2 / math.pi * elliptic_I_quadrature(1.0, math.sqrt(1 - z), cfg))


def theta_inverse_residual(q, cfg=None):
    return abs(star_value(theta_sq(q, cfg), theta_sq(-q, cfg), cfg=cfg) - 1.0)


def strict_increase_inversions(values):
    """Indices i where values[i + 1] <= values[i]"""
    return [i for i in range(len(values) - 1) if not values[i + 1] > values[i]]


# Per-identity checks

def _diagonal_scalars(grid, cfg):
    return [x for x in _separated(grid.scalars()) if star_domain_contains(x, x, cfg)]


def _star_sequence(pairs, cfg):
    values = []
    for x, y in pairs:
        try:
            values.append(star_value(x, y, cfg=cfg))
        except COMPUTATION_ERRORS as e:
            raise SampleFailure((x, y), e) from e
    return values


def _inversion_report(identity, sequences, tolerance):
    """sequences: (prefix, xs, values) triples, one per fixed left operand"""
    samples, inversions, witness = 0, 0, None
    for prefix, xs, values in sequences:
        samples += len(values)
        bad = strict_increase_inversions(values)
        inversions += len(bad)
        if bad and witness is None:
            i = bad[0]
            witness = prefix + (xs[i], xs[i + 1])
    passed = inversions <= tolerance
    return IdentityReport(
        identity_id=identity.value, samples=samples, max_residual=float(inversions),
        tolerance=float(tolerance), passed=passed, witness=None if passed else witness,
    )


def check_unit(grid, cfg, tolerance):
    tracker = ResidualTracker()
    for x in grid.scalars():
        if star_domain_contains(1.0, x, cfg):
            tracker.evaluate(unit_residual, x, cfg=cfg)
    return tracker.report(IdentityId.UNIT_A, tolerance)


def check_diagonal(grid, cfg, tolerance):
    xs = _diagonal_scalars(grid, cfg)
    values = _star_sequence(zip(xs, xs), cfg)
    return _inversion_report(IdentityId.DIAGONAL_B, [((), xs, values)], tolerance)


def check_mean(grid, cfg, tolerance):
    tracker = ResidualTracker()
    for x, y in grid.pairs():
        if star_domain_contains(x, y, cfg):
            tracker.evaluate(mean_residual, x, y, cfg=cfg)
    return tracker.report(IdentityId.MEAN_C, tolerance)


def check_cancel(grid, cfg, tolerance):
    sequences = []
    for a in FIXED_FACTORS:
        xs = [x for x in _separated(grid.scalars()) if star_domain_contains(a, x, cfg)]
        sequences.append(((a,), xs, _star_sequence([(a, x) for x in xs], cfg)))
    return _inversion_report(IdentityId.CANCEL_D, sequences, tolerance)


def _distrib_triples(grid):
    yield from grid.triples()
    for a in FIXED_FACTORS:
        for x, y in grid.pairs():
            yield a, x, y


def check_distrib(grid, cfg, tolerance):
    tracker = ResidualTracker()
    for a, x, y in _distrib_triples(grid):
        if star_domain_contains(x, y, cfg) and star_domain_contains(a * x, a * y, cfg):
            tracker.evaluate(distrib_residual, a, x, y, cfg=cfg)
    return tracker.report(IdentityId.DISTRIB_E, tolerance)


def _inverse_defined(x, y, cfg):
    if not (star_domain_contains(1 / x, 1 / x, cfg) and star_domain_contains(x, y, cfg)):
        return False
    # solve_right evaluates (1/x) * (z/x), whose mean is agm(x, y) / x
    shifted = agm(x, y, cfg) / x
    return star_domain_contains(shifted, shifted, cfg)


def check_inverse(grid, cfg, tolerance):
    tracker = ResidualTracker()
    for x, y in itertools.chain(grid.pairs(), [(3.0, 5.0), (5.0, 13.0)]):
        if _inverse_defined(x, y, cfg):
            tracker.evaluate(inverse_residual, x, y, cfg=cfg)
    return tracker.report(IdentityId.INVERSE_F, tolerance)


def check_gauss(grid, cfg, tolerance):
    tracker = ResidualTracker()
    for q in NOME_SAMPLES:
        tracker.evaluate(gauss_residual, float(q), cfg=cfg)
    return tracker.report(IdentityId.GAUSS_EQ4, tolerance)


def check_defining(grid, cfg, tolerance):
    tracker = ResidualTracker()
    for x, y in grid.pairs():
        if star_domain_contains(x, y, cfg):
            tracker.evaluate(defining_residual, x, y, cfg=cfg)
    return tracker.report(IdentityId.DEFINING_EQ6, tolerance)


def check_meanstep(grid, cfg, tolerance):
    tracker = ResidualTracker()
    for x, y in grid.pairs():
        if star_domain_contains(x, y, cfg):
            tracker.evaluate(meanstep_residual, x, y, cfg=cfg)
    for x in grid.scalars():
        if star_domain_contains(x, x, cfg):
            tracker.evaluate(halfstep_residual, x, cfg=cfg)
    return tracker.report(IdentityId.MEANSTEP_EQ7, tolerance)


def check_integer_family(grid, cfg, tolerance):
    tracker = ResidualTracker()
    for n in INTEGER_FAMILY_RANGE:
        tracker.evaluate(integer_residual, n, cfg=cfg)
    return tracker.report(IdentityId.INTEGER_FAMILY, tolerance)


def _nonassoc_candidates(grid):
    yield from grid.triples()
    yield from itertools.product(_separated(grid.scalars()), repeat=3)


def check_nonassoc(grid, cfg, tolerance):
    """First triple whose associativity defect exceeds the threshold"""
    scanned, largest, largest_at = 0, 0.0, None
    for triple in itertools.islice(_nonassoc_candidates(grid), NONASSOC_SCAN_LIMIT):
        try:
            defect = associativity_defect(*triple, cfg=cfg)
        except COMPUTATION_ERRORS:
            continue
        scanned += 1
        if largest_at is None or defect > largest:
            largest, largest_at = defect, tuple(float(v) for v in triple)
        if defect > tolerance:
            logger.info(f"associativity fails at {largest_at!r} with defect {defect!r}")
            break
    found = largest > tolerance
    return IdentityReport(
        identity_id=IdentityId.NONASSOC_WITNESS.value, samples=scanned, max_residual=float(largest),
        tolerance=float(tolerance), passed=found, witness=largest_at if found else None,
    )


def check_cross_backend(grid, cfg, tolerance):
    tracker = ResidualTracker()
    for index, (x, y) in enumerate(grid.pairs()):
        try:
            star(x, y, BackendChoice.THETA, cfg)
        except DomainOverflow:
            continue
        tracker.evaluate(cross_backend_residual, x, y, cfg=cfg, elliptic=index % ELLIPTIC_STRIDE == 0)
    return tracker.report(IdentityId.CROSS_BACKEND, tolerance)


def check_elliptic_gauss(grid, cfg, tolerance):
    tracker = ResidualTracker()
    for x, y in grid.pairs():
        if max(x, y) / min(x, y) <= ELLIPTIC_MAX_RATIO:
            tracker.evaluate(elliptic_gauss_residual, x, y, cfg=cfg)
    return tracker.report(IdentityId.ELLIPTIC_GAUSS, tolerance)


def check_hyp_series(grid, cfg, tolerance):
    tracker = ResidualTracker()
    for z in HYPERGEOM_SAMPLES:
        tracker.evaluate(hyp_series_residual, float(z), cfg=cfg)
    return tracker.report(IdentityId.HYP_SERIES_INTEGRAL, tolerance)


def check_theta_inverse(grid, cfg, tolerance):
    tracker = ResidualTracker()
    for q in NOME_SAMPLES:
        tracker.evaluate(theta_inverse_residual, float(q), cfg=cfg)
    return tracker.report(IdentityId.THETA_INVERSE_PAIR, tolerance)


IDENTITY_CHECKS = {
    IdentityId.UNIT_A: check_unit,
    IdentityId.DIAGONAL_B: check_diagonal,
    IdentityId.MEAN_C: check_mean,
    IdentityId.CANCEL_D: check_cancel,
    IdentityId.DISTRIB_E: check_distrib,
    IdentityId.INVERSE_F: check_inverse,
    IdentityId.GAUSS_EQ4: check_gauss,
    IdentityId.DEFINING_EQ6: check_defining,
    IdentityId.MEANSTEP_EQ7: check_meanstep,
    IdentityId.INTEGER_FAMILY: check_integer_family,
    IdentityId.NONASSOC_WITNESS: check_nonassoc,
    IdentityId.CROSS_BACKEND: check_cross_backend,
    IdentityId.ELLIPTIC_GAUSS: check_elliptic_gauss,
    IdentityId.HYP_SERIES_INTEGRAL: check_hyp_series,
    IdentityId.THETA_INVERSE_PAIR: check_theta_inverse,
}


def identity_tolerance(identity, tolerance_override=None):
    if tolerance_override is not None and identity not in FIXED_TOLERANCE_IDENTITIES:
        return float(tolerance_override)
    return IDENTITY_TOLERANCES[identity]


def run_identity(identity, grid, cfg=None, tolerance_override=None):
    """Evaluate one identity; computation errors become a failing report"""
    cfg = cfg or DEFAULT_TOLERANCES
    tolerance = identity_tolerance(identity, tolerance_override)
    try:
        return IDENTITY_CHECKS[identity](grid, cfg, tolerance)
    except (SampleFailure, *COMPUTATION_ERRORS) as e:
        logger.warning(f"identity {identity.value} failed with an error: {e}")
        return IdentityReport(
            identity_id=identity.value, samples=0, max_residual=math.inf,
            tolerance=float(tolerance), passed=False,
            witness=getattr(e, 'operands', None),
        )


def run_suite(grid, cfg=None, tolerance_override=None):
    """One IdentityReport per identity, in IdentityId order"""
    cfg = cfg or DEFAULT_TOLERANCES
    reports = [run_identity(identity, grid, cfg, tolerance_override) for identity in IdentityId]
    failed = [report.identity_id for report in reports if not report.passed]
    if failed:
        logger.warning(f"identity suite: {len(failed)} failing: {', '.join(failed)}")
    else:
        logger.info(f"identity suite: all {len(reports)} identities passed on {len(grid.points)} points")
    return reports
