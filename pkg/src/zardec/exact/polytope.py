"""Exact polytopes in ambient dimension <= 3.

A polytope carries an H-representation (integer normals, rational
offsets, meaning <normal, x> >= offset), a V-representation (exact
rational vertices), or both.  Vertex enumeration, lattice-point
enumeration and support-function evaluation are all exact; degenerate
polytopes (points, segments, the empty set) are ordinary values.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

from .linalg import UNIQUE, as_fraction, rank, solve_linear
from .lp import GE, lp_maximize


class UnboundedPolytopeError(ValueError):
    pass


class EmptyPolytopeError(ValueError):
    pass


class UnsupportedDimensionError(ValueError):
    pass


def _check_dim(dim):
    if not 1 <= dim <= 3:
        raise UnsupportedDimensionError(
            f"vertex/lattice operations support dimension 1..3, got {dim}")


class Polytope:
    """Convex polytope with lazily synchronized H- and V-representations."""

    def __init__(self, dim, halfspaces=None, vertices=None):
        self.dim = dim
        self.halfspaces = None
        if halfspaces is not None:
            self.halfspaces = [
                (tuple(int(c) for c in normal), as_fraction(offset))
                for normal, offset in halfspaces]
        self._vertices = None
        if vertices is not None:
            self._vertices = sorted(
                {tuple(as_fraction(c) for c in v) for v in vertices})
        if self.halfspaces is None and self._vertices is None:
            raise ValueError("polytope needs at least one representation")

    @classmethod
    def from_halfspaces(cls, dim, halfspaces):
        return cls(dim, halfspaces=halfspaces)

    @classmethod
    def from_points(cls, points, dim=None):
        points = list(points)
        if dim is None:
            if not points:
                raise ValueError("cannot infer dimension of empty point set")
            dim = len(points[0])
        verts = convex_hull(points, dim) if points else []
        return cls(dim, vertices=verts)

    def vertices(self):
        if self._vertices is None:
            self._vertices = enumerate_vertices(self.dim, self.halfspaces)
        return self._vertices

    def is_empty(self):
        return len(self.vertices()) == 0

    def affine_dim(self):
        """Dimension of the affine hull; -1 for the empty polytope."""
        verts = self.vertices()
        if not verts:
            return -1
        base = verts[0]
        diffs = [[v[i] - base[i] for i in range(self.dim)] for v in verts[1:]]
        return rank(diffs) if diffs else 0

    def scaled(self, k):
        """The dilate k * P (k a positive rational)."""
        k = as_fraction(k)
        hs = None
        if self.halfspaces is not None:
            hs = [(n, o * k) for n, o in self.halfspaces]
        vs = None
        if self._vertices is not None:
            vs = [tuple(c * k for c in v) for v in self._vertices]
        return Polytope(self.dim, halfspaces=hs, vertices=vs)

    def contains(self, point):
        point = [as_fraction(c) for c in point]
        if self.halfspaces is not None:
            return all(
                sum((Fraction(n[i]) * point[i] for i in range(self.dim)),
                    Fraction(0)) >= o
                for n, o in self.halfspaces)
        return point_in_hull(point, self.vertices())

    def __repr__(self):
        if self._vertices is not None:
            return f"Polytope(dim={self.dim}, vertices={self._vertices})"
        return f"Polytope(dim={self.dim}, halfspaces={len(self.halfspaces)})"


def point_in_hull(point, generators):
    """Exact membership of a point in the convex hull of finitely many points.

    Decided by LP feasibility of the convex-combination system.
    """
    if not generators:
        return False
    d = len(point)
    m = len(generators)
    constraints = []
    for i in range(d):
        constraints.append(([as_fraction(g[i]) for g in generators], "=",
                            as_fraction(point[i])))
    constraints.append(([Fraction(1)] * m, "=", Fraction(1)))
    for j in range(m):
        row = [Fraction(0)] * m
        row[j] = Fraction(1)
        constraints.append((row, GE, Fraction(0)))
    res = lp_maximize([Fraction(0)] * m, constraints, lex_argument=False)
    return res.is_optimal


def _row_extremes(pts):
    """Drop points strictly between two others on an axis-parallel line;
    only per-line extremes can be vertices."""
    by_line = {}
    for p in pts:
        by_line.setdefault(p[1:], []).append(p)
    keep = []
    for group in by_line.values():
        group.sort()
        keep.append(group[0])
        if len(group) > 1:
            keep.append(group[-1])
    return sorted(keep)


def convex_hull(points, dim=None):
    """Minimal vertex set of the convex hull, sorted lexicographically.

    A point is kept iff it is not a convex combination of the others.
    """
    pts = sorted({tuple(as_fraction(c) for c in p) for p in points})
    if not pts:
        return []
    if dim is None:
        dim = len(pts[0])
    _check_dim(dim)
    if any(len(p) != dim for p in pts):
        raise ValueError("inconsistent point dimensions")
    if len(pts) == 1:
        return pts
    pts = _row_extremes(pts)
    verts = []
    for i, p in enumerate(pts):
        others = pts[:i] + pts[i + 1:]
        if not point_in_hull(p, others):
            verts.append(p)
    return verts


def _coordinate_range(dim, halfspaces, coord):
    """Exact (min, max) of a coordinate over an H-polytope.

    Returns None if the polytope is empty; raises on an unbounded
    direction.
    """
    constraints = [([Fraction(c) for c in n], GE, o) for n, o in halfspaces]
    obj = [Fraction(0)] * dim
    obj[coord] = Fraction(1)
    hi = lp_maximize(obj, constraints, lex_argument=False)
    if hi.status == "infeasible":
        return None
    if hi.status == "unbounded":
        raise UnboundedPolytopeError(f"unbounded above in coordinate {coord}")
    obj[coord] = Fraction(-1)
    lo = lp_maximize(obj, constraints, lex_argument=False)
    if lo.status == "unbounded":
        raise UnboundedPolytopeError(f"unbounded below in coordinate {coord}")
    return (-lo.optimum, hi.optimum)


def bounding_box(dim, halfspaces):
    """Exact per-coordinate ranges; None for the empty polytope."""
    ranges = []
    for i in range(dim):
        r = _coordinate_range(dim, halfspaces, i)
        if r is None:
            return None
        ranges.append(r)
    return ranges


def enumerate_vertices(dim, halfspaces):
    """All vertices of a bounded H-polytope, sorted lexicographically.

    Candidates are the unique solutions of dim-subsets of active
    boundaries; a candidate inside the polytope is a vertex.
    """
    _check_dim(dim)
    box = bounding_box(dim, halfspaces)  # raises if unbounded
    if box is None:
        return []
    cands = set()
    for subset in itertools.combinations(range(len(halfspaces)), dim):
        a = [[Fraction(halfspaces[i][0][j]) for j in range(dim)]
             for i in subset]
        b = [halfspaces[i][1] for i in subset]
        res = solve_linear(a, b)
        if res.status != UNIQUE:
            continue
        x = res.solution
        ok = all(
            sum((Fraction(n[j]) * x[j] for j in range(dim)), Fraction(0)) >= o
            for n, o in halfspaces)
        if ok:
            cands.add(tuple(x))
    return sorted(cands)


def _int_range(lo: Fraction, hi: Fraction):
    import math
    return range(math.ceil(lo), math.floor(hi) + 1)


def lattice_points(p: Polytope):
    """All integer points of a bounded polytope, sorted lexicographically.

    Bounding-box scan with an exact half-space (or hull-membership)
    filter.  Raises UnboundedPolytopeError on unbounded input.
    """
    _check_dim(p.dim)
    if p.halfspaces is not None:
        box = bounding_box(p.dim, p.halfspaces)
        if box is None:
            return []
        grid = itertools.product(*[_int_range(lo, hi) for lo, hi in box])
        out = []
        for m in grid:
            if all(sum(n[i] * m[i] for i in range(p.dim)) >= o
                   for n, o in p.halfspaces):
                out.append(tuple(m))
        return out
    verts = p.vertices()
    if not verts:
        return []
    box = [(min(v[i] for v in verts), max(v[i] for v in verts))
           for i in range(p.dim)]
    out = []
    for m in itertools.product(*[_int_range(lo, hi) for lo, hi in box]):
        if point_in_hull([Fraction(c) for c in m], verts):
            out.append(tuple(m))
    return out


def support_eval(p: Polytope, v) -> Fraction:
    """min over the polytope of <m, v>, evaluated exactly at the vertices."""
    verts = p.vertices()
    if not verts:
        raise EmptyPolytopeError("support function of the empty polytope")
    v = [as_fraction(c) for c in v]
    return min(sum((m[i] * v[i] for i in range(p.dim)), Fraction(0))
               for m in verts)
