"""Exact fan refinement machinery.

Common refinements of complete simplicial fans, refinement along a
hyperplane through the origin, and complete simplicial fans on which a
polytope's support function is linear per cone.  All cone computations
run on inward facet normals and primitive extreme rays, exactly.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from functools import reduce

from .exact import as_fraction, dot, rank, rational_direction_to_primitive
from .fan import Fan, InvalidFanError, _ensure_valid


def cone_facet_normals(fan: Fan, ci):
    """Inward primitive integer facet normals of a simplicial max cone."""
    inv = fan.cone_matrix_inverse(ci)
    return tuple(rational_direction_to_primitive(row) for row in inv)


def _kernel_direction(normals, dim):
    """A nonzero integer direction orthogonal to dim-1 normals, or None."""
    if dim == 2:
        (n,) = normals
        return (-n[1], n[0])
    n1, n2 = normals
    d = (n1[1] * n2[2] - n1[2] * n2[1],
         n1[2] * n2[0] - n1[0] * n2[2],
         n1[0] * n2[1] - n1[1] * n2[0])
    if all(c == 0 for c in d):
        return None
    return d


def extreme_rays(normals, dim):
    """Primitive extreme rays of the pointed cone {x : <n, x> >= 0 for all n}.

    Candidates are kernel directions of (dim-1)-subsets of normals;
    a candidate inside the cone with active set of rank dim-1 is an
    extreme ray.  Raises on non-pointed input.
    """
    normals = [tuple(int(c) for c in n) for n in normals]
    found = set()
    for subset in itertools.combinations(normals, dim - 1):
        d = _kernel_direction(subset, dim)
        if d is None:
            continue
        for cand in (d, tuple(-c for c in d)):
            if all(sum(n[i] * cand[i] for i in range(dim)) >= 0
                   for n in normals):
                prim = rational_direction_to_primitive(cand)
                found.add(prim)
    for r in found:
        if tuple(-c for c in r) in found:
            raise ValueError("cone is not pointed")
    return sorted(found)


def cone_dim(rays):
    if not rays:
        return 0
    return rank([[Fraction(c) for c in r] for r in rays])


def triangulate_cone(rays, normals, dim):
    """Split a full-dimensional pointed cone into simplicial cones.

    Rays and inward normals describe the same cone.  In dimension 2 the
    cone is already simplicial; in dimension 3 we cone from the
    lexicographically smallest extreme ray over the facets avoiding it.
    Returns a list of dim-tuples of ray vectors.
    """
    rays = sorted(rays)
    if len(rays) == dim:
        return [tuple(rays)]
    if dim == 2:
        raise AssertionError("pointed 2-dim cone has exactly 2 extreme rays")
    anchor = rays[0]
    facets = set()
    for n in normals:
        on = [r for r in rays if dot(n, r) == 0]
        if len(on) == 2:
            facets.add(tuple(sorted(on)))
    out = []
    for a, b in sorted(facets):
        if anchor in (a, b):
            continue
        out.append(tuple(sorted((anchor, a, b))))
    return out


def _build_fan(dim, simplicial_cones, preferred_rays=()):
    """Assemble a Fan from cones given by ray vectors.

    Ray indexing is deterministic: preferred rays first (in order),
    then the remaining rays sorted lexicographically.
    """
    used = {r for cone in simplicial_cones for r in cone}
    rays = []
    index = {}
    for r in preferred_rays:
        if r in used and r not in index:
            index[r] = len(rays)
            rays.append(r)
    for r in sorted(used - set(index)):
        index[r] = len(rays)
        rays.append(r)
    cones = [tuple(sorted(index[r] for r in cone)) for cone in simplicial_cones]
    fan = Fan(dim, rays, cones)
    _ensure_valid(fan)
    return fan


def _cells_to_cones(dim, cells):
    cones = []
    for rays, normals in cells:
        cones.extend(triangulate_cone(rays, normals, dim))
    return sorted(set(cones))


def common_refinement_pair(f1: Fan, f2: Fan) -> Fan:
    """The fan whose cones are the full-dimensional pairwise intersections
    (triangulated) of the two complete fans."""
    if f1.dim != f2.dim:
        raise InvalidFanError("cannot refine fans of different dimensions")
    dim = f1.dim
    _ensure_valid(f1)
    _ensure_valid(f2)
    cells = []
    seen = set()
    for ci in range(len(f1.cones)):
        n1 = cone_facet_normals(f1, ci)
        for cj in range(len(f2.cones)):
            normals = n1 + cone_facet_normals(f2, cj)
            rays = extreme_rays(normals, dim)
            if cone_dim(rays) < dim:
                continue
            key = frozenset(rays)
            if key in seen:
                continue
            seen.add(key)
            cells.append((rays, normals))
    preferred = list(f1.rays) + [r for r in f2.rays if r not in set(f1.rays)]
    return _build_fan(dim, _cells_to_cones(dim, cells), preferred)


def common_refinement(fans) -> Fan:
    fans = list(fans)
    if not fans:
        raise ValueError("no fans to refine")
    return reduce(common_refinement_pair, fans)


def refine_by_hyperplane(fan: Fan, normal) -> Fan:
    """Refine a complete fan by the hyperplane <normal, x> = 0."""
    _ensure_valid(fan)
    dim = fan.dim
    normal = tuple(int(c) for c in normal)
    cells = []
    seen = set()
    for ci in range(len(fan.cones)):
        base = cone_facet_normals(fan, ci)
        for side in (normal, tuple(-c for c in normal)):
            normals = base + (side,)
            rays = extreme_rays(normals, dim)
            if cone_dim(rays) < dim:
                continue
            key = frozenset(rays)
            if key in seen:
                continue
            seen.add(key)
            cells.append((rays, normals))
    return _build_fan(dim, _cells_to_cones(dim, cells), fan.rays)


def _orthant_normals(dim):
    out = []
    for signs in itertools.product((1, -1), repeat=dim):
        out.append(tuple(tuple(s * (1 if i == j else 0) for j in range(dim))
                         for i, s in enumerate(signs)))
    return out


def polytope_linearization_fan(polytope) -> Fan:
    """A complete simplicial fan on whose cones v -> min_{m in Q} <m, v>
    is linear: the normal fan of Q refined by the coordinate orthants
    (which also handles lower-dimensional Q)."""
    verts = polytope.vertices()
    if not verts:
        raise ValueError("empty polytope has no support function")
    dim = polytope.dim
    cells = []
    seen = set()
    for orth in _orthant_normals(dim):
        for m in verts:
            normals = list(orth)
            for m2 in verts:
                if m2 == m:
                    continue
                diff = [as_fraction(b) - as_fraction(a)
                        for a, b in zip(m, m2)]
                normals.append(rational_direction_to_primitive(diff))
            rays = extreme_rays(normals, dim)
            if cone_dim(rays) < dim:
                continue
            key = frozenset(rays)
            if key in seen:
                continue
            seen.add(key)
            cells.append((rays, tuple(normals)))
    return _build_fan(dim, _cells_to_cones(dim, cells))
