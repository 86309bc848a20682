"""Complete simplicial fans and torus-invariant divisors.

A fan is a list of primitive integer ray generators plus maximal cones
given as index sets of size equal to the ambient dimension (2 or 3).
Divisors on a fan are plain tuples of Fractions, one coefficient per
ray.  Star subdivisions realize blow-ups; Cartier data realizes
pullbacks and nefness tests; section polytopes realize global sections.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from functools import cmp_to_key
from math import gcd

from .exact import (
    Polytope,
    as_fraction,
    dot,
    lp_maximize,
    matrix_inverse,
    primitive_vector,
)


class FanError(ValueError):
    pass


class ZeroVectorError(FanError):
    pass


class NonPrimitiveError(FanError):
    pass


class AlreadyARayError(FanError):
    pass


class NotInSupportError(FanError):
    pass


class NonSmoothError(FanError):
    pass


class InvalidFanError(FanError):
    pass


class Fan:
    """Immutable fan; construction only checks shapes, validate_fan checks math."""

    def __init__(self, dim, rays, cones):
        if dim not in (2, 3):
            raise FanError(f"fans are supported in dimension 2 or 3, got {dim}")
        self.dim = dim
        rays = tuple(tuple(int(c) for c in r) for r in rays)
        if any(len(r) != dim for r in rays):
            raise FanError("ray dimension mismatch")
        self.rays = rays
        cones = tuple(tuple(sorted(int(i) for i in c)) for c in cones)
        for c in cones:
            if len(c) != dim or len(set(c)) != dim:
                raise FanError(f"maximal cone {c} must have {dim} distinct rays")
            if any(i < 0 or i >= len(rays) for i in c):
                raise FanError(f"cone {c} references a missing ray")
        self.cones = tuple(sorted(set(cones)))
        self._inv = {}
        self._cartier = {}
        self._structural = None

    def __repr__(self):
        return f"Fan(dim={self.dim}, rays={len(self.rays)}, cones={len(self.cones)})"

    def cone_matrix_inverse(self, ci):
        """Inverse of the matrix whose columns are the cone's rays."""
        inv = self._inv.get(ci)
        if inv is None:
            cone = self.cones[ci]
            cols = [[Fraction(self.rays[j][i]) for j in cone]
                    for i in range(self.dim)]
            inv = tuple(tuple(row) for row in matrix_inverse(cols))
            self._inv[ci] = inv
        return inv

    def barycentric(self, ci, v):
        """Coordinates of v in the cone's ray basis (any rational vector v)."""
        inv = self.cone_matrix_inverse(ci)
        v = [as_fraction(c) for c in v]
        return [dot(row, v) for row in inv]

    def cones_containing(self, v):
        out = []
        for ci in range(len(self.cones)):
            lam = self.barycentric(ci, v)
            if all(x >= 0 for x in lam):
                out.append(ci)
        return out


def _facets(cone):
    return [tuple(sorted(set(cone) - {i})) for i in cone]


def _structural_problems(fan: Fan):
    problems = []
    seen = {}
    for i, r in enumerate(fan.rays):
        if all(c == 0 for c in r):
            problems.append(f"ray {i} is the zero vector")
            continue
        g = 0
        for c in r:
            g = gcd(g, abs(c))
        if g != 1:
            problems.append(f"ray {i} = {r} is not primitive")
        if r in seen:
            problems.append(f"ray {i} duplicates ray {seen[r]}")
        seen.setdefault(r, i)
    from .exact import determinant
    for ci, cone in enumerate(fan.cones):
        mat = [[fan.rays[j][i] for j in cone] for i in range(fan.dim)]
        if determinant(mat) == 0:
            problems.append(f"cone {cone} is not simplicial (dependent rays)")
    facet_count = {}
    for cone in fan.cones:
        for f in _facets(cone):
            facet_count[f] = facet_count.get(f, 0) + 1
    for f, cnt in sorted(facet_count.items()):
        if cnt != 2:
            problems.append(f"facet {f} lies in {cnt} maximal cones, expected 2")
    return problems


def _interiors_intersect(fan: Fan, ci, cj) -> bool:
    """Exact LP test: do two simplicial cones share an interior point?"""
    d = fan.dim
    vi = [fan.rays[k] for k in fan.cones[ci]]
    vj = [fan.rays[k] for k in fan.cones[cj]]
    nvar = 2 * d + 1  # lambdas, mus, t
    cons = []
    for coord in range(d):
        row = ([Fraction(v[coord]) for v in vi]
               + [-Fraction(v[coord]) for v in vj] + [Fraction(0)])
        cons.append((row, "=", Fraction(0)))
    for k in range(2 * d):
        row = [Fraction(0)] * nvar
        row[k] = Fraction(1)
        row[-1] = Fraction(-1)
        cons.append((row, ">=", Fraction(0)))
    row = [Fraction(0)] * nvar
    row[-1] = Fraction(1)
    cons.append((row, "<=", Fraction(1)))
    obj = [Fraction(0)] * nvar
    obj[-1] = Fraction(1)
    res = lp_maximize(obj, cons, lex_argument=False)
    assert res.is_optimal
    return res.optimum > 0


def validate_fan(fan: Fan, deep=True):
    """Full diagnostic: primitivity, simpliciality, facet pairing and
    (with deep=True) exact pairwise interior-disjointness.

    Returns (ok, problems).  Facet pairing plus pairwise compatibility
    is the completeness certificate for convex-position desk-scale fans.
    """
    problems = _structural_problems(fan)
    if deep and not problems:
        for ci, cj in itertools.combinations(range(len(fan.cones)), 2):
            if _interiors_intersect(fan, ci, cj):
                problems.append(
                    f"cones {fan.cones[ci]} and {fan.cones[cj]} overlap")
    return (not problems), problems


def _ensure_valid(fan: Fan):
    if fan._structural is None:
        fan._structural = _structural_problems(fan)
    if fan._structural:
        raise InvalidFanError("; ".join(fan._structural))


def as_divisor(fan: Fan, coeffs):
    coeffs = tuple(as_fraction(c) for c in coeffs)
    if len(coeffs) != len(fan.rays):
        raise FanError(
            f"divisor has {len(coeffs)} coefficients, fan has {len(fan.rays)} rays")
    return coeffs


def is_effective(coeffs) -> bool:
    return all(c >= 0 for c in coeffs)


def cartier_data(fan: Fan, coeffs):
    """Per-cone vectors m with <m, ray> = -coeff for each ray of the cone."""
    _ensure_valid(fan)
    coeffs = as_divisor(fan, coeffs)
    cached = fan._cartier.get(coeffs)
    if cached is not None:
        return cached
    data = []
    for ci, cone in enumerate(fan.cones):
        inv = fan.cone_matrix_inverse(ci)
        rhs = [-coeffs[j] for j in cone]
        # columns of inv^T are rows of inv: m = (V^T)^{-1} rhs
        m = tuple(sum((inv[i][k] * rhs[i] for i in range(fan.dim)),
                      Fraction(0)) for k in range(fan.dim))
        data.append(m)
    data = tuple(data)
    fan._cartier[coeffs] = data
    return data


def is_nef(fan: Fan, coeffs) -> bool:
    """Toric nefness: every cone's Cartier datum underestimates every ray."""
    coeffs = as_divisor(fan, coeffs)
    data = cartier_data(fan, coeffs)
    for m in data:
        for rho, a in zip(fan.rays, coeffs):
            if dot(m, rho) < -a:
                return False
    return True


def trace_value(fan: Fan, coeffs, v) -> Fraction:
    """Coefficient of the valuation v in the pullback of the divisor.

    Locates the containing maximal cone and evaluates the Cartier
    datum; when v lies on a wall all containing cones must agree.
    """
    v = tuple(int(c) for c in v)
    if all(c == 0 for c in v):
        raise ZeroVectorError("trace at the zero vector")
    coeffs = as_divisor(fan, coeffs)
    data = cartier_data(fan, coeffs)
    value = None
    for ci in fan.cones_containing(v):
        val = -dot(data[ci], v)
        if value is None:
            value = val
        else:
            assert val == value, "trace disagrees across a wall"
    if value is None:
        raise NotInSupportError(f"{v} lies in no cone; fan not complete?")
    return value


def pullback(fan: Fan, coeffs, subdivided: Fan):
    """Coefficients of the divisor pulled back to a fan refining `fan`.

    Every ray of `subdivided` is evaluated through the original fan.
    """
    coeffs = as_divisor(fan, coeffs)
    return tuple(trace_value(fan, coeffs, r) for r in subdivided.rays)


def star_subdivide(fan: Fan, w):
    """Insert the primitive ray w, re-triangulating all cones containing it.

    Returns (new_fan, index_of_w).
    """
    _ensure_valid(fan)
    w = tuple(int(c) for c in w)
    if all(c == 0 for c in w):
        raise ZeroVectorError("cannot subdivide at the zero vector")
    prim, g = primitive_vector(w)
    if g != 1:
        raise NonPrimitiveError(f"{w} is not primitive (gcd {g})")
    if w in fan.rays:
        raise AlreadyARayError(f"{w} is already a ray")
    wi = len(fan.rays)
    new_cones = []
    hit = False
    for ci, cone in enumerate(fan.cones):
        lam = fan.barycentric(ci, w)
        if any(x < 0 for x in lam):
            new_cones.append(cone)
            continue
        hit = True
        for pos, ridx in enumerate(cone):
            if lam[pos] > 0:
                new_cones.append(tuple(sorted((set(cone) - {ridx}) | {wi})))
    if not hit:
        raise NotInSupportError(f"{w} lies outside the fan's support")
    out = Fan(fan.dim, fan.rays + (w,), new_cones)
    _ensure_valid(out)
    return out, wi


def section_polytope(fan: Fan, coeffs, k=1) -> Polytope:
    """H-polytope {m : <m, ray> >= -k * coeff} of degree-k sections."""
    _ensure_valid(fan)
    coeffs = as_divisor(fan, coeffs)
    k = as_fraction(k)
    hs = [(ray, -k * a) for ray, a in zip(fan.rays, coeffs)]
    return Polytope.from_halfspaces(fan.dim, hs)


def is_big(fan: Fan, coeffs) -> bool:
    """Full-dimensional section polytope."""
    return section_polytope(fan, coeffs, 1).affine_dim() == fan.dim


def _angle_cmp(a, b):
    def half(v):
        return 0 if (v[1] > 0 or (v[1] == 0 and v[0] > 0)) else 1
    ha, hb = half(a), half(b)
    if ha != hb:
        return -1 if ha < hb else 1
    cross = a[0] * b[1] - a[1] * b[0]
    if cross > 0:
        return -1
    if cross < 0:
        return 1
    return 0


def cyclic_ray_order(fan: Fan):
    """Ray indices of a complete 2-dim fan in counterclockwise order."""
    if fan.dim != 2:
        raise FanError("cyclic order only makes sense for surfaces")
    order = sorted(range(len(fan.rays)),
                   key=cmp_to_key(lambda i, j: _angle_cmp(fan.rays[i], fan.rays[j])))
    cone_sets = {frozenset(c) for c in fan.cones}
    n = len(order)
    for p in range(n):
        pair = frozenset((order[p], order[(p + 1) % n]))
        if pair not in cone_sets:
            raise InvalidFanError(
                "cyclically consecutive rays do not span a cone; fan not complete")
    return order


def surface_intersection(fan: Fan):
    """Intersection matrix of the boundary curves of a smooth toric surface.

    Self-intersections come from the wall relation
    v_prev + v_next = c * v_ray (giving -c); cyclically adjacent rays
    meet in a point (entry 1), all other pairs are disjoint (entry 0).
    """
    _ensure_valid(fan)
    if fan.dim != 2:
        raise FanError("surface_intersection needs a 2-dimensional fan")
    from .exact import determinant
    for cone in fan.cones:
        mat = [[fan.rays[j][i] for j in cone] for i in range(2)]
        if abs(determinant(mat)) != 1:
            raise NonSmoothError(f"cone {cone} is not unimodular")
    order = cyclic_ray_order(fan)
    n = len(fan.rays)
    pos = {ray_idx: p for p, ray_idx in enumerate(order)}
    mat = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        p = pos[i]
        prev_r = fan.rays[order[(p - 1) % n]]
        next_r = fan.rays[order[(p + 1) % n]]
        s = (prev_r[0] + next_r[0], prev_r[1] + next_r[1])
        v = fan.rays[i]
        k = 0 if v[0] != 0 else 1
        c = Fraction(s[k], v[k])
        assert (c * v[0], c * v[1]) == (s[0], s[1]), "wall relation broken"
        mat[i][i] = -c
        mat[i][order[(p - 1) % n]] = Fraction(1)
        mat[i][order[(p + 1) % n]] = Fraction(1)
    return mat


def primitive_vectors_in_box(dim, bound):
    """All primitive integer vectors with coordinates in [-bound, bound]."""
    out = []
    for v in itertools.product(range(-bound, bound + 1), repeat=dim):
        if all(c == 0 for c in v):
            continue
        g = 0
        for c in v:
            g = gcd(g, abs(c))
        if g == 1:
            out.append(v)
    return out
