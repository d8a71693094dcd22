import csv
import itertools
import logging
import math
from dataclasses import dataclass

import numpy as np
from django.db import models

from apps.common.types import positive_real
from apps.star.operations import star_domain_contains

logger = logging.getLogger(__name__)

# Operand ranges of the default grid: theta-backend identities, then the
# extended range that exercises the agm-inverse fallback
THETA_RANGE = (0.05, 20.0)
EXTENDED_RANGE = (1e-3, 1e3)
POINTS_PER_AXIS = 7
RANDOM_TUPLES = 64


class GridGenerator(models.TextChoices):
    DEFAULT = 'default', 'Log grid plus seeded random tuples'
    LOG_GRID = 'log-grid', 'Log-spaced grid'
    RANDOM_SEEDED = 'random-seeded', 'Seeded random tuples'
    FILE = 'file', 'Operand file'


@dataclass(frozen=True)
class SampleGrid:
    """Operand tuples (one to three positive reals each) fed to the identity suite"""
    points: tuple
    generator: str = GridGenerator.LOG_GRID.value
    seed: int = 0

    def __post_init__(self):
        if not self.points:
            raise ValueError("a sample grid needs at least one point")
        points = tuple(
            tuple(positive_real(v, f"operand {i} of point {n}") for i, v in enumerate(point))
            for n, point in enumerate(self.points)
        )
        if any(not 1 <= len(point) <= 3 for point in points):
            raise ValueError("grid points carry one to three operands")
        object.__setattr__(self, 'points', points)

    def pairs(self):
        return [point[:2] for point in self.points if len(point) >= 2]

    def triples(self):
        return [point for point in self.points if len(point) == 3]

    def scalars(self):
        return sorted({value for point in self.points for value in point})


def log_axis(lo, hi, count=POINTS_PER_AXIS):
    return [float(v) for v in np.geomspace(lo, hi, count)]


def log_grid_pairs(lo, hi, count=POINTS_PER_AXIS):
    """All ordered pairs of a log-spaced axis whose star value is representable"""
    axis = log_axis(lo, hi, count)
    return [pair for pair in itertools.product(axis, axis) if star_domain_contains(*pair)]


def random_tuples(seed, count=RANDOM_TUPLES, lo=THETA_RANGE[0], hi=THETA_RANGE[1]):
    """count log-uniform operand triples from a seeded generator"""
    rng = np.random.default_rng(seed)
    values = np.exp(rng.uniform(math.log(lo), math.log(hi), size=(count, 3)))
    return [tuple(float(v) for v in row) for row in values]


def log_grid(seed=0):
    """Log-spaced pairs over the theta range and the extended range"""
    points = log_grid_pairs(*THETA_RANGE) + log_grid_pairs(*EXTENDED_RANGE)
    return SampleGrid(points=tuple(points), generator=GridGenerator.LOG_GRID.value, seed=seed)


def random_grid(seed, count=RANDOM_TUPLES):
    points = tuple(random_tuples(seed, count))
    return SampleGrid(points=points, generator=GridGenerator.RANDOM_SEEDED.value, seed=seed)


def default_grid(seed):
    points = log_grid(seed).points + random_grid(seed).points
    logger.debug(f"default grid with seed {seed}: {len(points)} points")
    return SampleGrid(points=points, generator=GridGenerator.DEFAULT.value, seed=seed)


GRID_BUILDERS = {
    GridGenerator.DEFAULT: default_grid,
    GridGenerator.LOG_GRID: log_grid,
    GridGenerator.RANDOM_SEEDED: random_grid,
}


def named_grid(name, seed):
    """
    A generated grid by GridGenerator value, anything else is read as a CSV file

    Raises:
        OSError: the file cannot be read
        ValueError: the file holds invalid operands
    """
    if name in GRID_BUILDERS:
        return GRID_BUILDERS[GridGenerator(name)](seed)
    return grid_from_file(name, seed)


def grid_from_rows(rows, seed=0):
    """Grid from CSV rows of one to three operands; blank lines and '#' comments skipped"""
    points = []
    for row in rows:
        cells = [cell.strip() for cell in row if cell.strip()]
        if not cells or cells[0].startswith('#'):
            continue
        points.append(tuple(float(cell) for cell in cells))
    return SampleGrid(points=tuple(points), generator=GridGenerator.FILE.value, seed=seed)


def grid_from_file(path, seed=0):
    with open(path, newline='') as handle:
        return grid_from_rows(csv.reader(handle), seed)
