"""Shared model builders and randomized corpora for the test suite.

All randomness is seeded; corpora are deterministic across runs.
"""

import random
from fractions import Fraction

import pytest

from zardec.exact import primitive_vector
from zardec.fan import Fan, star_subdivide


def p2_fan():
    return Fan(2, [(1, 0), (0, 1), (-1, -1)], [(0, 1), (1, 2), (2, 0)])


def p1p1_fan():
    return Fan(2, [(1, 0), (0, 1), (-1, 0), (0, -1)],
               [(0, 1), (1, 2), (2, 3), (3, 0)])


def hirzebruch_fan(a):
    return Fan(2, [(1, 0), (0, 1), (-1, a), (0, -1)],
               [(0, 1), (1, 2), (2, 3), (3, 0)])


def f2_fan():
    return hirzebruch_fan(2)


def p3_fan():
    return Fan(3, [(1, 0, 0), (0, 1, 0), (0, 0, 1), (-1, -1, -1)],
               [(0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)])


def random_smooth_surface_fan(rng: random.Random, max_extra=3):
    """Random smooth complete 2-dim fan: a standard base plus star
    subdivisions at sums of adjacent rays (which preserve smoothness)."""
    base = rng.choice([p2_fan, p1p1_fan,
                       lambda: hirzebruch_fan(1),
                       lambda: hirzebruch_fan(2),
                       lambda: hirzebruch_fan(3)])
    fan = base()
    for _ in range(rng.randrange(max_extra + 1)):
        cone = fan.cones[rng.randrange(len(fan.cones))]
        w = tuple(fan.rays[cone[0]][d] + fan.rays[cone[1]][d] for d in range(2))
        if w in fan.rays:
            continue
        fan, _ = star_subdivide(fan, w)
    return fan


def random_simplicial_fan_3d(rng: random.Random, max_extra=2):
    """Random complete simplicial 3-dim fan via interior star subdivisions."""
    fan = p3_fan()
    for _ in range(rng.randrange(max_extra + 1)):
        cone = fan.cones[rng.randrange(len(fan.cones))]
        weights = [rng.randrange(1, 3) for _ in range(3)]
        w = tuple(sum(c * fan.rays[i][d] for c, i in zip(weights, cone))
                  for d in range(3))
        w, _ = primitive_vector(w)
        if w in fan.rays:
            continue
        fan, _ = star_subdivide(fan, w)
    return fan


def random_effective_divisor(rng: random.Random, n, top=4):
    return tuple(Fraction(rng.randrange(0, top + 1), rng.choice([1, 1, 2, 3]))
                 for _ in range(n))


def random_big_divisor(rng: random.Random, n, top=3):
    """Strictly positive coefficients make the section polytope
    full-dimensional on a complete fan."""
    return tuple(Fraction(rng.randrange(1, top + 1), rng.choice([1, 2]))
                 for _ in range(n))


def random_lattice_polytope_points(rng: random.Random, dim=2, npts=4, box=3):
    pts = {tuple(rng.randrange(-box, box + 1) for _ in range(dim))
           for _ in range(npts)}
    return sorted(pts)


@pytest.fixture
def rng():
    return random.Random(20240811)
