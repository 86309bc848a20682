"""Zariski decomposition on abstract surfaces.

A surface is just a list of named curves with an exact symmetric
intersection matrix.  The decomposition is computed by the growing-
support algorithm and can be cross-checked against the independent
LP characterization (positive part = componentwise-maximal nef
subdivisor).
"""

from __future__ import annotations

from fractions import Fraction

from .exact import (
    GE,
    LE,
    UNIQUE,
    as_fraction,
    char_poly,
    descartes_positive_roots,
    dot,
    is_negative_definite,
    is_symmetric,
    lp_maximize,
    solve_linear,
)


class NonEffectiveInputError(ValueError):
    pass


class InvalidGeometryError(ValueError):
    """The input matrix is not realizable as surface intersection data."""


class SurfaceModel:
    """Named curves plus their exact intersection matrix.

    The matrix must be symmetric.  Two plausibility conditions are
    checked and reported as warnings, never errors: the matrix should
    have at most one positive eigenvalue (signature of a projective
    surface), and distinct curves should meet non-negatively
    (off-diagonal entries >= 0).
    """

    def __init__(self, curves, matrix):
        self.curves = list(curves)
        self.matrix = [[as_fraction(x) for x in row] for row in matrix]
        n = len(self.curves)
        if len(self.matrix) != n or any(len(r) != n for r in self.matrix):
            raise ValueError("intersection matrix shape does not match curves")
        if not is_symmetric(self.matrix):
            raise ValueError("intersection matrix must be symmetric")
        self.warnings = []
        if n:
            positives = descartes_positive_roots(char_poly(self.matrix))
            if positives > 1:
                self.warnings.append(
                    f"{positives} positive eigenvalues; surface data has at most one")
        for i in range(n):
            for j in range(i + 1, n):
                if self.matrix[i][j] < 0:
                    self.warnings.append(
                        f"negative off-diagonal entry at ({self.curves[i]},"
                        f" {self.curves[j]}); curves are not distinct primes")

    @property
    def n(self):
        return len(self.curves)

    def intersect(self, a, b) -> Fraction:
        """Intersection number of two divisors given by coefficient vectors."""
        return sum((a[i] * dot(self.matrix[i], b) for i in range(self.n)),
                   Fraction(0))

    def curve_products(self, a):
        """The vector (a . C_i) of intersections with each listed curve."""
        return [dot(self.matrix[i], a) for i in range(self.n)]


def as_surface_divisor(model: SurfaceModel, coeffs):
    coeffs = [as_fraction(c) for c in coeffs]
    if len(coeffs) != model.n:
        raise ValueError("divisor length does not match curve count")
    return coeffs


class Decomposition:
    """Positive and negative parts plus a re-checkable certificate."""

    def __init__(self, positive, negative, support, certificate):
        self.positive = positive
        self.negative = negative
        self.support = support
        self.certificate = certificate

    def __repr__(self):
        return (f"Decomposition(P={self.positive}, N={self.negative}, "
                f"support={self.support})")


def is_nef_on_span(model: SurfaceModel, p) -> bool:
    """True iff p meets every listed curve non-negatively."""
    p = as_surface_divisor(model, p)
    return all(v >= 0 for v in model.curve_products(p))


def zariski_decompose(model: SurfaceModel, divisor) -> Decomposition:
    """Unique decomposition D = P + N by the growing-support algorithm.

    Start with empty support; solve for N supported there matching D
    against the support curves; enlarge the support by every curve the
    remainder meets negatively; repeat.  The support grows strictly, so
    at most n rounds.  InvalidGeometry is raised when the solved data
    violates what is automatic for genuine surfaces (singular support
    block, N outside [0, D], or a non-negative-definite support matrix).
    """
    d = as_surface_divisor(model, divisor)
    if not all(c >= 0 for c in d):
        raise NonEffectiveInputError(f"divisor {d} is not effective")
    n = model.n
    support: list[int] = []
    negative = [Fraction(0)] * n
    for _ in range(n + 1):
        positive = [d[i] - negative[i] for i in range(n)]
        products = model.curve_products(positive)
        new = [i for i in range(n) if products[i] < 0 and i not in support]
        if not new:
            break
        support = sorted(support + new)
        sub = [[model.matrix[i][j] for j in support] for i in support]
        rhs = [dot(model.matrix[i], d) for i in support]
        res = solve_linear(sub, rhs)
        if res.status != UNIQUE:
            raise InvalidGeometryError(
                f"support block {support} is singular; not surface data")
        negative = [Fraction(0)] * n
        for idx, i in enumerate(support):
            negative[i] = res.solution[idx]
    else:
        raise AssertionError("support grew beyond the curve count")

    positive = [d[i] - negative[i] for i in range(n)]
    if not all(0 <= negative[i] <= d[i] for i in range(n)):
        raise InvalidGeometryError(
            "solved negative part leaves [0, D]; not surface data")
    sub = [[model.matrix[i][j] for j in support] for i in support]
    if not is_negative_definite(sub):
        raise InvalidGeometryError(
            f"support block {support} is not negative definite")

    products = model.curve_products(positive)
    certificate = {
        "nef_products": products,
        "orthogonality": {i: products[i] for i in support},
        "support_negative_definite": True,
    }
    return Decomposition(positive, negative, tuple(support), certificate)


def maximality_oracle(model: SurfaceModel, divisor):
    """Independent LP route: per-curve maximal coefficient of a nef
    subdivisor of D.  The componentwise optima assemble to the positive
    part (maximality characterization of P)."""
    d = as_surface_divisor(model, divisor)
    if not all(c >= 0 for c in d):
        raise NonEffectiveInputError(f"divisor {d} is not effective")
    n = model.n
    cons = []
    for i in range(n):
        row = [Fraction(0)] * n
        row[i] = Fraction(1)
        cons.append((list(row), GE, Fraction(0)))
        cons.append((list(row), LE, d[i]))
    for j in range(n):
        cons.append(([model.matrix[i][j] for i in range(n)], GE, Fraction(0)))
    out = []
    for i in range(n):
        obj = [Fraction(0)] * n
        obj[i] = Fraction(1)
        res = lp_maximize(obj, cons, lex_argument=False)
        assert res.is_optimal, "nef-subdivisor LP cannot fail: 0 is feasible"
        out.append(res.optimum)
    return out


def verify_certificate(model: SurfaceModel, divisor, dec: Decomposition) -> bool:
    """Re-check a decomposition from scratch; pure predicate."""
    try:
        d = as_surface_divisor(model, divisor)
        p = as_surface_divisor(model, dec.positive)
        nn = as_surface_divisor(model, dec.negative)
    except ValueError:
        return False
    n = model.n
    if any(p[i] + nn[i] != d[i] for i in range(n)):
        return False
    if not all(0 <= p[i] <= d[i] and 0 <= nn[i] <= d[i] for i in range(n)):
        return False
    if not is_nef_on_span(model, p):
        return False
    products = model.curve_products(p)
    if any(products[i] != 0 for i in dec.support):
        return False
    if any(nn[i] != 0 for i in range(n) if i not in dec.support):
        return False
    sub = [[model.matrix[i][j] for j in dec.support] for i in dec.support]
    return is_negative_definite(sub)
