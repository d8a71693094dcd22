import csv
import io
import json
from dataclasses import dataclass
from typing import Optional

from django.db import models

from apps.common.formatting import render_csv, render_json


class IdentityId(models.TextChoices):
    UNIT_A = 'unit_A', 'Unit element: 1 * x = x'
    DIAGONAL_B = 'diagonal_B', 'x * x = y * y implies x = y'
    MEAN_C = 'mean_C', 'x * y = agm(x, y) * agm(x, y)'
    CANCEL_D = 'cancel_D', 'Cancellation: a * x = a * y implies x = y'
    DISTRIB_E = 'distrib_E', 'Distributive law: (ax) * (ay) = a * (a (x * y))'
    INVERSE_F = 'inverse_F', 'Inverse and right solve'
    GAUSS_EQ4 = 'gauss_eq4', 'agm(theta^2(q), theta^2(-q)) = 1'
    DEFINING_EQ6 = 'defining_eq6', 'agm(1, x * y) = agm(x, y)'
    MEANSTEP_EQ7 = 'meanstep_eq7', 'x * y = (x + y)/2 * sqrt(xy)'
    INTEGER_FAMILY = 'integer_family', '(2n+1) * (2n^2+2n+1) = (2n+1)^2'
    NONASSOC_WITNESS = 'nonassoc_witness', 'A non-associative triple exists'
    CROSS_BACKEND = 'cross_backend', 'Backends agree'
    ELLIPTIC_GAUSS = 'elliptic_gauss', 'Quadrature integral = pi / (2 agm(x, y))'
    HYP_SERIES_INTEGRAL = 'hyp_series_integral', '2F1 series = (2/pi) * integral'
    THETA_INVERSE_PAIR = 'theta_inverse_pair', 'theta^2(q) * theta^2(-q) = 1'


# Acceptance tolerances, recorded in every report
IDENTITY_TOLERANCES = {
    IdentityId.UNIT_A: 1e-10,
    IdentityId.DIAGONAL_B: 0.0,
    IdentityId.MEAN_C: 1e-9,
    IdentityId.CANCEL_D: 0.0,
    IdentityId.DISTRIB_E: 1e-8,
    IdentityId.INVERSE_F: 1e-8,
    IdentityId.GAUSS_EQ4: 1e-12,
    IdentityId.DEFINING_EQ6: 1e-10,
    IdentityId.MEANSTEP_EQ7: 1e-9,
    IdentityId.INTEGER_FAMILY: 1e-7,
    IdentityId.NONASSOC_WITNESS: 1e-3,
    IdentityId.CROSS_BACKEND: 1e-8,
    IdentityId.ELLIPTIC_GAUSS: 1e-9,
    IdentityId.HYP_SERIES_INTEGRAL: 1e-9,
    IdentityId.THETA_INVERSE_PAIR: 1e-9,
}

# Identities whose tolerance is structural and never overridden
FIXED_TOLERANCE_IDENTITIES = {
    IdentityId.DIAGONAL_B,
    IdentityId.CANCEL_D,
    IdentityId.NONASSOC_WITNESS,
}


class ReportFormat(models.TextChoices):
    CSV = 'csv', 'CSV'
    JSON = 'json', 'JSON'


@dataclass(frozen=True)
class IdentityReport:
    identity_id: str
    samples: int
    max_residual: float
    tolerance: float
    passed: bool
    witness: Optional[tuple] = None


def report_serialize(reports, fmt=ReportFormat.JSON):
    """Serialize IdentityReports to CSV or JSON bytes with a stable field order"""
    from .serializers import IdentityReportSerializer

    rows = IdentityReportSerializer(list(reports), many=True).data
    if ReportFormat(fmt) == ReportFormat.JSON:
        return render_json(rows).encode('utf-8')
    fields = list(IdentityReportSerializer().fields)
    return render_csv(fields, rows).encode('utf-8')


def report_parse(data, fmt=ReportFormat.JSON):
    """Inverse of report_serialize"""
    from .serializers import IdentityReportSerializer

    text = data.decode('utf-8') if isinstance(data, bytes) else data
    if ReportFormat(fmt) == ReportFormat.JSON:
        rows = json.loads(text)
    else:
        rows = list(csv.DictReader(io.StringIO(text)))
    serializer = IdentityReportSerializer(data=rows, many=True)
    serializer.is_valid(raise_exception=True)
    return serializer.save()
