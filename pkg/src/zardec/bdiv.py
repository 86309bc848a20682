"""b-divisors over toric model towers.

A b-divisor is an evaluable expression: Cartier closures of divisors on
complete fans, polytope-valued nef atoms, and sums, scalings, maxima
and minima of these.  Its value at a primitive lattice vector is the
coefficient of that valuation.  This module carries the toolkit's core:
the separating-blow-up loop, exact maxima of nef b-divisors, fixed and
mobile parts of linear systems, and polytope-valued positive parts.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from .exact import (
    Polytope,
    UnboundedPolytopeError,
    as_fraction,
    dot,
    lattice_points,
    primitive_vector,
    rational_direction_to_primitive,
    support_eval,
)
from .fan import (
    Fan,
    ZeroVectorError,
    as_divisor,
    cartier_data,
    is_big,
    is_effective,
    is_nef,
    primitive_vectors_in_box,
    pullback,
    section_polytope,
    star_subdivide,
    trace_value,
)
from .refine import (
    common_refinement,
    common_refinement_pair,
    polytope_linearization_fan,
    refine_by_hyperplane,
)


class NotABadPairError(ValueError):
    pass


class NotNefError(ValueError):
    pass


class NoSectionsError(ValueError):
    """The linear system is empty: H0 of the requested multiple is zero."""


class NotBigError(ValueError):
    pass


class UnboundedSectionSpaceError(ValueError):
    """The b-divisor is not bounded above by any Cartier closure."""


# ---------------------------------------------------------------------------
# expression trees


class BDiv:
    """Base class for b-divisor expressions."""

    def value_at(self, v) -> Fraction:
        raise NotImplementedError

    def __add__(self, other):
        return Sum((self, other))

    def __sub__(self, other):
        return Sum((self, Scale(Fraction(-1), other)))

    def __rmul__(self, factor):
        return Scale(as_fraction(factor), self)


def _check_vector(v):
    v = tuple(int(c) for c in v)
    if all(c == 0 for c in v):
        raise ZeroVectorError("b-divisors have no value at the zero vector")
    return v


@dataclass(frozen=True)
class Closure(BDiv):
    """Cartier closure: trace on every model is the pullback of one divisor."""

    fan: Fan
    coeffs: tuple

    def __post_init__(self):
        object.__setattr__(self, "coeffs", as_divisor(self.fan, self.coeffs))

    def value_at(self, v):
        return trace_value(self.fan, self.coeffs, _check_vector(v))


@dataclass(frozen=True)
class PolytopeNef(BDiv):
    """The nef b-divisor v -> -scale * min_{m in Q} <m, v>, scale >= 0."""

    polytope: Polytope
    scale: Fraction = Fraction(1)

    def __post_init__(self):
        object.__setattr__(self, "scale", as_fraction(self.scale))
        if self.scale < 0:
            raise ValueError("PolytopeNef scale must be nonnegative")
        if not self.polytope.vertices():
            raise ValueError("PolytopeNef needs a nonempty polytope")

    def value_at(self, v):
        return -self.scale * support_eval(self.polytope, _check_vector(v))


@dataclass(frozen=True)
class Sum(BDiv):
    terms: tuple

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple(self.terms))

    def value_at(self, v):
        return sum((t.value_at(v) for t in self.terms), Fraction(0))


@dataclass(frozen=True)
class Scale(BDiv):
    factor: Fraction
    arg: BDiv

    def __post_init__(self):
        object.__setattr__(self, "factor", as_fraction(self.factor))

    def value_at(self, v):
        if self.factor == 0:
            _check_vector(v)
            return Fraction(0)
        return self.factor * self.arg.value_at(v)


@dataclass(frozen=True)
class Max(BDiv):
    args: tuple

    def __post_init__(self):
        object.__setattr__(self, "args", tuple(self.args))

    def value_at(self, v):
        return max(a.value_at(v) for a in self.args)


@dataclass(frozen=True)
class Min(BDiv):
    args: tuple

    def __post_init__(self):
        object.__setattr__(self, "args", tuple(self.args))

    def value_at(self, v):
        return min(a.value_at(v) for a in self.args)


def zero(dim) -> PolytopeNef:
    """The zero b-divisor in the given ambient dimension."""
    origin = tuple(Fraction(0) for _ in range(dim))
    return PolytopeNef(Polytope(dim, vertices=[origin]), Fraction(1))


def value_at(b: BDiv, v) -> Fraction:
    return b.value_at(v)


def ambient_dim(b: BDiv) -> int:
    if isinstance(b, Closure):
        return b.fan.dim
    if isinstance(b, PolytopeNef):
        return b.polytope.dim
    if isinstance(b, Scale):
        return ambient_dim(b.arg)
    if isinstance(b, (Sum, Max, Min)):
        dims = {ambient_dim(t) for t in (b.terms if isinstance(b, Sum) else b.args)}
        if len(dims) != 1:
            raise ValueError(f"mixed ambient dimensions {dims}")
        return dims.pop()
    raise TypeError(f"not a b-divisor: {b!r}")


# ---------------------------------------------------------------------------
# type labels, bad pairs, separation


def classify_types(fan: Fan, d1, d2):
    """Per-ray label: 1 where d1 > d2, 2 where d1 < d2, 0 on equality."""
    d1 = as_divisor(fan, d1)
    d2 = as_divisor(fan, d2)
    out = []
    for a, b in zip(d1, d2):
        out.append(1 if a > b else 2 if a < b else 0)
    return tuple(out)


def bad_pairs(fan: Fan, d1, d2):
    """All (i, j) with label 1 and 2 whose rays span a cone, sorted."""
    labels = classify_types(fan, d1, d2)
    ones = [i for i, t in enumerate(labels) if t == 1]
    twos = [j for j, t in enumerate(labels) if t == 2]
    cone_sets = [set(c) for c in fan.cones]
    out = []
    for i in ones:
        for j in twos:
            if any(i in c and j in c for c in cone_sets):
                out.append((i, j))
    return sorted(out)


@dataclass(frozen=True)
class SeparationStep:
    pair: tuple
    excess_1: Fraction
    excess_2: Fraction
    weight_a: int
    weight_b: int
    subdivision_vector: tuple
    primitivity_divisor: int
    exceptional_index: int
    exceptional_type: int
    bad_pairs_after: int


@dataclass
class SeparationReport:
    initial_fan: Fan
    initial_d1: tuple
    initial_d2: tuple
    initial_bad_pairs: int
    steps: list
    final_fan: Fan
    d1: tuple
    d2: tuple

    def invariants_hold(self) -> bool:
        counts = [self.initial_bad_pairs] + [s.bad_pairs_after for s in self.steps]
        strictly_down = all(a > b for a, b in zip(counts, counts[1:]))
        return (strictly_down
                and all(s.exceptional_type == 0 for s in self.steps)
                and len(self.steps) <= self.initial_bad_pairs
                and not bad_pairs(self.final_fan, self.d1, self.d2))


def separating_blowup(fan: Fan, d1, d2, pair):
    """Weighted blow-up along a bad pair producing a type-0 exceptional ray.

    Weights (a, b) are the coprime pair with a/b equal to the ratio of
    coefficient excesses; the inserted ray is the primitive multiple of
    b*v_i + a*v_j.  Returns (fan', d1', d2', exceptional index, record).
    """
    d1 = as_divisor(fan, d1)
    d2 = as_divisor(fan, d2)
    i, j = pair
    if (i, j) not in bad_pairs(fan, d1, d2):
        raise NotABadPairError(f"({i}, {j}) is not a bad pair")
    c1 = d1[i] - d2[i]
    c2 = d2[j] - d1[j]
    assert c1 > 0 and c2 > 0
    ratio = c1 / c2
    a, b = ratio.numerator, ratio.denominator
    vi, vj = fan.rays[i], fan.rays[j]
    w_raw = tuple(b * vi[k] + a * vj[k] for k in range(fan.dim))
    w, g = primitive_vector(w_raw)
    new_fan, exc = star_subdivide(fan, w)
    d1p = pullback(fan, d1, new_fan)
    d2p = pullback(fan, d2, new_fan)

    assert d1p[:len(d1)] == d1 and d2p[:len(d2)] == d2, \
        "pullback changed coefficients of surviving rays"
    assert d1p[exc] == d2p[exc], "exceptional coefficients differ"
    # trace is linear on the 2-cone spanned by the pair
    assert d1p[exc] == Fraction(b * d1[i] + a * d1[j], 1) / g
    assert not any(i in c and j in c for c in new_fan.cones), \
        "blow-up failed to separate the pair"
    labels_after = classify_types(new_fan, d1p, d2p)
    assert labels_after[exc] == 0

    record = SeparationStep(
        pair=(i, j), excess_1=c1, excess_2=c2, weight_a=a, weight_b=b,
        subdivision_vector=w, primitivity_divisor=g,
        exceptional_index=exc, exceptional_type=0,
        bad_pairs_after=len(bad_pairs(new_fan, d1p, d2p)))
    return new_fan, d1p, d2p, exc, record


def separate_all(fan: Fan, d1, d2) -> SeparationReport:
    """Blow up the first bad pair until none remain.

    Each step strictly decreases the bad-pair count, so the loop ends
    within the initial count.
    """
    d1 = as_divisor(fan, d1)
    d2 = as_divisor(fan, d2)
    initial = len(bad_pairs(fan, d1, d2))
    steps = []
    cur_fan, cur1, cur2 = fan, d1, d2
    while True:
        bps = bad_pairs(cur_fan, cur1, cur2)
        if not bps:
            break
        assert len(steps) < initial, "separation exceeded its step budget"
        before = len(bps)
        cur_fan, cur1, cur2, _, rec = separating_blowup(cur_fan, cur1, cur2, bps[0])
        assert rec.bad_pairs_after < before, "bad-pair count failed to decrease"
        steps.append(rec)
    return SeparationReport(
        initial_fan=fan, initial_d1=d1, initial_d2=d2,
        initial_bad_pairs=initial, steps=steps,
        final_fan=cur_fan, d1=cur1, d2=cur2)


# ---------------------------------------------------------------------------
# nef maxima


def _nef_polytope(b: BDiv) -> Polytope:
    """The polytope whose support function computes a nef b-divisor."""
    if isinstance(b, Closure):
        if not is_nef(b.fan, b.coeffs):
            raise NotNefError(f"divisor {b.coeffs} is not nef on its fan")
        p = section_polytope(b.fan, b.coeffs, 1)
        p.vertices()
        return p
    if isinstance(b, PolytopeNef):
        scaled = b.polytope.scaled(b.scale) if b.scale != 1 else b.polytope
        scaled.vertices()
        return scaled
    raise NotNefError(
        "max_nef needs Cartier closures of nef divisors or PolytopeNef atoms")


def _as_nef_model(b: BDiv):
    """Realize a nef b-divisor as (fan, nef divisor on it)."""
    if isinstance(b, Closure):
        if not is_nef(b.fan, b.coeffs):
            raise NotNefError(f"divisor {b.coeffs} is not nef on its fan")
        return b.fan, b.coeffs
    if isinstance(b, PolytopeNef):
        q = _nef_polytope(b)
        fan = polytope_linearization_fan(q)
        coeffs = tuple(-support_eval(q, r) for r in fan.rays)
        assert is_nef(fan, coeffs)
        return fan, coeffs
    raise NotNefError(
        "max_nef needs Cartier closures of nef divisors or PolytopeNef atoms")


def probe_grid(dim, box=5):
    return primitive_vectors_in_box(dim, box)


def max_nef(b1: BDiv, b2: BDiv, strategy="hull", check=True, probe_box=5) -> PolytopeNef:
    """Maximum of two nef b-divisors, as a PolytopeNef.

    hull strategy: convex hull of the two section polytopes.
    separation strategy: pull both to a common refinement, run the
    separating-blow-up loop, and wrap the (now nef) componentwise max.
    With check=True the other strategy is computed too and both are
    asserted equal as functions on all involved rays plus a probe box.
    """
    if strategy not in ("hull", "separation"):
        raise ValueError(f"unknown strategy {strategy!r}")

    def _hull():
        q1, q2 = _nef_polytope(b1), _nef_polytope(b2)
        return PolytopeNef(
            Polytope.from_points(list(q1.vertices()) + list(q2.vertices())),
            Fraction(1))

    def _separation():
        f1, c1 = _as_nef_model(b1)
        f2, c2 = _as_nef_model(b2)
        fan = common_refinement_pair(f1, f2)
        p1 = pullback(f1, c1, fan)
        p2 = pullback(f2, c2, fan)
        report = separate_all(fan, p1, p2)
        m = tuple(max(x, y) for x, y in zip(report.d1, report.d2))
        assert is_nef(report.final_fan, m), \
            "separated max is not nef; separation criterion violated"
        p = section_polytope(report.final_fan, m, 1)
        p.vertices()
        return PolytopeNef(p, Fraction(1))

    result = _hull() if strategy == "hull" else _separation()
    if check:
        other = _separation() if strategy == "hull" else _hull()
        dim = ambient_dim(b1)
        probes = {r for f in leaf_fans(b1) + leaf_fans(b2) for r in f.rays}
        probes.update(probe_grid(dim, probe_box))
        for v in sorted(probes):
            assert result.value_at(v) == other.value_at(v), \
                f"max_nef strategies disagree at {v}"
    return result


# ---------------------------------------------------------------------------
# fixed parts, mobile parts, positive parts


def fix_part(fan: Fan, coeffs, k) -> Sum:
    """Fix(k D-bar) as a b-divisor: k steps of the closure minus the
    mobile polytope part; value min_m <m, v> + k * trace(v) over the
    lattice points m of the degree-k section polytope."""
    coeffs = as_divisor(fan, coeffs)
    k = int(k)
    if k <= 0:
        raise ValueError("k must be a positive integer")
    pts = lattice_points(section_polytope(fan, coeffs, k))
    if not pts:
        raise NoSectionsError(f"H0({k} D) = 0")
    hull = Polytope.from_points(pts)
    return Sum((Scale(Fraction(k), Closure(fan, coeffs)),
                Scale(Fraction(-1), PolytopeNef(hull, Fraction(1)))))


def mobile_part(fan: Fan, coeffs, k) -> PolytopeNef:
    """M_k = D-bar - (1/k) Fix(k D-bar): the nef polytope atom from the
    hull of the degree-k lattice sections, with scale 1/k."""
    coeffs = as_divisor(fan, coeffs)
    k = int(k)
    if k <= 0:
        raise ValueError("k must be a positive integer")
    pts = lattice_points(section_polytope(fan, coeffs, k))
    if not pts:
        raise NoSectionsError(f"H0({k} D) = 0")
    mob = PolytopeNef(Polytope.from_points(pts), Fraction(1, k))
    if __debug__:
        fix = fix_part(fan, coeffs, k)
        closure = Closure(fan, coeffs)
        for r in fan.rays:
            assert mob.value_at(r) == closure.value_at(r) - fix.value_at(r) / k
    return mob


def positive_part_exact(fan: Fan, coeffs) -> PolytopeNef:
    """Positive part of a big effective divisor: the section polytope
    itself, as a nef polytope atom (the exact limit of the mobile parts)."""
    coeffs = as_divisor(fan, coeffs)
    assert is_effective(coeffs), "positive part needs an effective divisor"
    if not is_big(fan, coeffs):
        raise NotBigError(
            "exact positive part is only available for big divisors; "
            "use positive_part_approx")
    p = section_polytope(fan, coeffs, 1)
    p.vertices()
    return PolytopeNef(p, Fraction(1))


def positive_part_approx(fan: Fan, coeffs, k) -> PolytopeNef:
    """The nef lower bound M_k for the positive part (any effective D
    with sections in degree k)."""
    return mobile_part(fan, coeffs, k)


# ---------------------------------------------------------------------------
# linearization fans and global sections


def leaf_fans(b: BDiv):
    if isinstance(b, Closure):
        return [b.fan]
    if isinstance(b, PolytopeNef):
        return [polytope_linearization_fan(b.polytope)]
    if isinstance(b, Scale):
        return leaf_fans(b.arg)
    if isinstance(b, Sum):
        return [f for t in b.terms for f in leaf_fans(t)]
    if isinstance(b, (Max, Min)):
        return [f for t in b.args for f in leaf_fans(t)]
    raise TypeError(f"not a b-divisor: {b!r}")


class _TieFound(Exception):
    def __init__(self, normal):
        self.normal = normal


def _cone_rays(fan: Fan, ci):
    return [fan.rays[i] for i in fan.cones[ci]]


def _leaf_cone_containing(leaf_fan: Fan, rays):
    for cj in range(len(leaf_fan.cones)):
        if all(all(x >= 0 for x in leaf_fan.barycentric(cj, r)) for r in rays):
            return cj
    raise AssertionError("refined cone not contained in any leaf cone")


def _functional_on_cone(b: BDiv, fan: Fan, ci):
    """The linear functional representing b on the given cone; raises
    _TieFound when a Max/Min node bends inside the cone."""
    rays = _cone_rays(fan, ci)
    if isinstance(b, Closure):
        cj = _leaf_cone_containing(b.fan, rays)
        m = cartier_data(b.fan, b.coeffs)[cj]
        return tuple(-x for x in m)
    if isinstance(b, PolytopeNef):
        verts = b.polytope.vertices()
        v0 = tuple(sum(r[i] for r in rays) for i in range(fan.dim))
        best = min(verts, key=lambda m: (dot(m, v0), m))
        func = tuple(-b.scale * x for x in best)
        for r in rays:
            assert dot(func, r) == b.value_at(r), \
                "support function not linear on refined cone"
        return func
    if isinstance(b, Scale):
        inner = _functional_on_cone(b.arg, fan, ci)
        return tuple(b.factor * x for x in inner)
    if isinstance(b, Sum):
        funcs = [_functional_on_cone(t, fan, ci) for t in b.terms]
        return tuple(sum(col, Fraction(0)) for col in zip(*funcs))
    if isinstance(b, (Max, Min)):
        funcs = [_functional_on_cone(t, fan, ci) for t in b.args]
        take_upper = isinstance(b, Max)
        cur = funcs[0]
        for nxt in funcs[1:]:
            diff = tuple(x - y for x, y in zip(cur, nxt))
            vals = [dot(diff, r) for r in rays]
            if any(v > 0 for v in vals) and any(v < 0 for v in vals):
                raise _TieFound(rational_direction_to_primitive(diff))
            cur_dominates = all(v >= 0 for v in vals)
            if take_upper:
                cur = cur if cur_dominates else nxt
            else:
                cur = nxt if cur_dominates else cur
        return cur
    raise TypeError(f"not a b-divisor: {b!r}")


_linearization_cache: dict = {}


def linearization_fan(b: BDiv) -> Fan:
    """A complete simplicial fan on every cone of which b is linear:
    the common refinement of all leaf fans, further subdivided along
    the tie loci of Max/Min nodes."""
    cached = _linearization_cache.get(b)
    if cached is not None:
        return cached
    fan = common_refinement(leaf_fans(b))
    for _ in range(256):
        tie = None
        for ci in range(len(fan.cones)):
            try:
                _functional_on_cone(b, fan, ci)
            except _TieFound as t:
                tie = t.normal
                break
        if tie is None:
            _linearization_cache[b] = fan
            return fan
        fan = refine_by_hyperplane(fan, tie)
    raise AssertionError("tie subdivision failed to stabilize")


def global_sections(b: BDiv, k):
    """Lattice points m with <m, v> + k * value(v) >= 0 for all primitive v.

    Reduced to one inequality per ray of the linearization fan; floors
    are automatic because <m, v> is an integer at lattice v.
    """
    k = int(k)
    if k <= 0:
        raise ValueError("k must be a positive integer")
    fan = linearization_fan(b)
    hs = [(r, -k * b.value_at(r)) for r in fan.rays]
    poly = Polytope.from_halfspaces(fan.dim, hs)
    try:
        return lattice_points(poly)
    except UnboundedPolytopeError as exc:
        raise UnboundedSectionSpaceError(
            "section space is infinite; the b-divisor is not bounded above "
            "by a Cartier closure") from exc


# ---------------------------------------------------------------------------
# decomposition verification


def _leaf_nef_ok(b: BDiv) -> bool:
    if isinstance(b, Closure):
        return is_nef(b.fan, b.coeffs)
    if isinstance(b, PolytopeNef):
        return True  # support-function atoms are nef by convexity
    if isinstance(b, Scale):
        return _leaf_nef_ok(b.arg)
    if isinstance(b, Sum):
        return all(_leaf_nef_ok(t) for t in b.terms)
    if isinstance(b, (Max, Min)):
        return all(_leaf_nef_ok(t) for t in b.args)
    return False


def verify_decomposition(fan: Fan, coeffs, positive: BDiv, kmax,
                         candidates=(), probe_box=3, seed=7):
    """Re-check the defining properties of a positive part candidate.

    Checks, for k = 1..kmax: section equality against the closure of D;
    effectivity of N = D-bar - P on the probe set; domination of nef
    sub-b-divisors (mobile parts of D on the base fan and on seeded
    random refinements, plus any supplied candidates); and nefness of
    the leaves of P.  Returns a report dict with an overall verdict.
    """
    coeffs = as_divisor(fan, coeffs)
    closure = Closure(fan, coeffs)
    failures = []

    section_equality = {}
    for k in range(1, int(kmax) + 1):
        same = global_sections(positive, k) == global_sections(closure, k)
        section_equality[k] = same
        if not same:
            failures.append(f"section spaces differ at k={k}")

    negative = closure - positive
    probes = set(fan.rays)
    probes.update(r for f in leaf_fans(positive) for r in f.rays)
    probes.update(probe_grid(fan.dim, probe_box))
    probes = sorted(probes)
    negative_effective = all(negative.value_at(v) >= 0 for v in probes)
    if not negative_effective:
        failures.append("negative part takes a negative value")

    rng = random.Random(seed)
    nef_candidates = list(candidates)
    for k in range(1, int(kmax) + 1):
        try:
            nef_candidates.append(mobile_part(fan, coeffs, k))
        except NoSectionsError:
            pass
    cur_fan, cur = fan, coeffs
    for _ in range(3):
        ci = rng.randrange(len(cur_fan.cones))
        w = tuple(sum(cur_fan.rays[i][d] for i in cur_fan.cones[ci])
                  for d in range(cur_fan.dim))
        w, _ = primitive_vector(w)
        if w in cur_fan.rays:
            continue
        cur_fan, _ = star_subdivide(cur_fan, w)
        cur = pullback(fan, coeffs, cur_fan)
        try:
            nef_candidates.append(mobile_part(cur_fan, cur, 1 + rng.randrange(int(kmax))))
        except NoSectionsError:
            pass
    maximality = True
    for cand in nef_candidates:
        for v in probes:
            if cand.value_at(v) > positive.value_at(v):
                maximality = False
                failures.append(
                    f"nef sub-b-divisor exceeds the candidate at {v}")
                break
        if not maximality:
            break

    leaf_nef = _leaf_nef_ok(positive)
    if not leaf_nef:
        failures.append("a leaf of the positive part is not nef")

    return {
        "section_equality": section_equality,
        "negative_effective": negative_effective,
        "maximality": maximality,
        "leaf_nef": leaf_nef,
        "failures": failures,
        "ok": not failures,
    }
