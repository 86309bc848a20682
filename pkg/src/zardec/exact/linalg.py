"""Exact rational linear algebra.

Everything here works over ``fractions.Fraction`` and never rounds.
Matrices are plain sequences of sequences; vectors are sequences.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm


class DimensionMismatchError(ValueError):
    pass


class NonSymmetricError(ValueError):
    pass


NO_SOLUTION = "no_solution"
UNDERDETERMINED = "underdetermined"
UNIQUE = "unique"


def as_fraction(x) -> Fraction:
    """Coerce ints, Fractions and 'p/q' strings to Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"not an exact rational: {x!r}")


def mat_copy(a):
    return [[as_fraction(x) for x in row] for row in a]


def dot(u, v) -> Fraction:
    if len(u) != len(v):
        raise DimensionMismatchError(f"dot: {len(u)} vs {len(v)}")
    return sum((Fraction(x) * y for x, y in zip(u, v)), Fraction(0))


def mat_vec(a, v):
    return [dot(row, v) for row in a]


def is_symmetric(a) -> bool:
    n = len(a)
    if any(len(row) != n for row in a):
        return False
    return all(a[i][j] == a[j][i] for i in range(n) for j in range(i + 1, n))


def _exact_div(num: int, den: int) -> int:
    q, rem = divmod(num, den)
    assert rem == 0, "fraction-free elimination lost exact divisibility"
    return q


def _integerize_rows(a, b):
    """Scale each augmented row to integers; returns list of int rows."""
    rows = []
    for i, row in enumerate(a):
        ents = [as_fraction(x) for x in row] + [as_fraction(b[i])]
        mult = lcm(*(e.denominator for e in ents)) if ents else 1
        rows.append([int(e * mult) for e in ents])
    return rows


class LinearSolveResult:
    """Outcome of an exact linear solve: status plus solution when unique."""

    __slots__ = ("status", "solution")

    def __init__(self, status, solution=None):
        self.status = status
        self.solution = solution

    def __repr__(self):
        return f"LinearSolveResult({self.status}, {self.solution})"


def solve_linear(a, b) -> LinearSolveResult:
    """Solve A x = b exactly.

    Fraction-free (Bareiss) forward elimination on the integerized
    augmented matrix, then exact rational back-substitution.  Returns a
    result with status UNIQUE / NO_SOLUTION / UNDERDETERMINED.
    """
    m = len(a)
    if len(b) != m:
        raise DimensionMismatchError(f"solve_linear: {m} rows, {len(b)} rhs")
    n = len(a[0]) if m else 0
    if any(len(row) != n for row in a):
        raise DimensionMismatchError("solve_linear: ragged matrix")
    if m == 0:
        return LinearSolveResult(UNDERDETERMINED if n else UNIQUE, [] if not n else None)

    rows = _integerize_rows(a, b)
    prev_piv = 1
    pivots = []  # (row, col) of pivots in echelon order
    r = 0
    for c in range(n):
        pr = next((i for i in range(r, m) if rows[i][c] != 0), None)
        if pr is None:
            continue
        rows[r], rows[pr] = rows[pr], rows[r]
        piv = rows[r][c]
        for i in range(r + 1, m):
            fi = rows[i][c]
            row_i = rows[i]
            row_r = rows[r]
            rows[i] = [_exact_div(piv * row_i[j] - fi * row_r[j], prev_piv)
                       for j in range(n + 1)]
        prev_piv = piv
        pivots.append((r, c))
        r += 1
        if r == m:
            break

    # inconsistency: zero A-part with nonzero rhs
    for i in range(r, m):
        if all(rows[i][j] == 0 for j in range(n)) and rows[i][n] != 0:
            return LinearSolveResult(NO_SOLUTION)
    if len(pivots) < n:
        return LinearSolveResult(UNDERDETERMINED)

    x = [Fraction(0)] * n
    for (pr, pc) in reversed(pivots):
        s = Fraction(rows[pr][n])
        for j in range(pc + 1, n):
            if rows[pr][j]:
                s -= rows[pr][j] * x[j]
        x[pc] = s / rows[pr][pc]

    assert mat_vec(a, x) == [as_fraction(v) for v in b]
    return LinearSolveResult(UNIQUE, x)


def solve_unique(a, b):
    """Solve expecting a unique solution; raises otherwise."""
    res = solve_linear(a, b)
    if res.status != UNIQUE:
        raise ValueError(f"expected unique solution, got {res.status}")
    return res.solution


def determinant(a) -> Fraction:
    """Exact determinant by fraction-free elimination."""
    n = len(a)
    if any(len(row) != n for row in a):
        raise DimensionMismatchError("determinant: non-square")
    if n == 0:
        return Fraction(1)
    ents = [as_fraction(x) for row in a for x in row]
    mult = lcm(*(e.denominator for e in ents))
    rows = [[int(as_fraction(x) * mult) for x in row] for row in a]
    sign = 1
    prev_piv = 1
    for c in range(n):
        pr = next((i for i in range(c, n) if rows[i][c] != 0), None)
        if pr is None:
            return Fraction(0)
        if pr != c:
            rows[c], rows[pr] = rows[pr], rows[c]
            sign = -sign
        piv = rows[c][c]
        for i in range(c + 1, n):
            fi = rows[i][c]
            rows[i] = [_exact_div(piv * rows[i][j] - fi * rows[c][j], prev_piv)
                       for j in range(n)]
        prev_piv = piv
    return Fraction(sign * rows[n - 1][n - 1], mult ** n)


def rank(a) -> int:
    m = len(a)
    n = len(a[0]) if m else 0
    rows = mat_copy(a)
    r = 0
    for c in range(n):
        pr = next((i for i in range(r, m) if rows[i][c] != 0), None)
        if pr is None:
            continue
        rows[r], rows[pr] = rows[pr], rows[r]
        piv = rows[r][c]
        for i in range(r + 1, m):
            if rows[i][c]:
                f = rows[i][c] / piv
                rows[i] = [rows[i][j] - f * rows[r][j] for j in range(n)]
        r += 1
        if r == m:
            break
    return r


def matrix_inverse(a):
    """Exact inverse of a square matrix; raises on singular input."""
    n = len(a)
    cols = []
    for j in range(n):
        e = [Fraction(1) if i == j else Fraction(0) for i in range(n)]
        cols.append(solve_unique(a, e))
    return [[cols[j][i] for j in range(n)] for i in range(n)]


def is_negative_definite(a) -> bool:
    """Sylvester test: (-1)^k * (k-th leading principal minor) > 0 for all k.

    The empty matrix is negative definite (vacuously).
    """
    n = len(a)
    if n == 0:
        return True
    if not is_symmetric(a):
        raise NonSymmetricError("is_negative_definite needs a symmetric matrix")
    for k in range(1, n + 1):
        minor = determinant([row[:k] for row in a[:k]])
        if (-1) ** k * minor <= 0:
            return False
    return True


def char_poly(a):
    """Coefficients [1, c1, ..., cn] of det(tI - A), by Faddeev-LeVerrier."""
    n = len(a)
    if any(len(row) != n for row in a):
        raise DimensionMismatchError("char_poly: non-square")
    am = mat_copy(a)
    coeffs = [Fraction(1)]
    mk = [[Fraction(0)] * n for _ in range(n)]
    for k in range(1, n + 1):
        # M_k = A M_{k-1} + c_{k-1} I
        if k == 1:
            mk = [[Fraction(1) if i == j else Fraction(0) for j in range(n)]
                  for i in range(n)]
        else:
            prod = [[dot(am[i], [mk[r][j] for r in range(n)]) for j in range(n)]
                    for i in range(n)]
            for i in range(n):
                prod[i][i] += coeffs[-1]
            mk = prod
        amk = [[dot(am[i], [mk[r][j] for r in range(n)]) for j in range(n)]
               for i in range(n)]
        trace = sum((amk[i][i] for i in range(n)), Fraction(0))
        coeffs.append(-trace / k)
    return coeffs


def descartes_positive_roots(coeffs) -> int:
    """Sign variations of a (monic, all-real-roots) polynomial's coefficients.

    For symmetric matrices this equals the number of positive eigenvalues.
    """
    signs = [1 if c > 0 else -1 for c in coeffs if c != 0]
    return sum(1 for x, y in zip(signs, signs[1:]) if x != y)


def primitive_vector(v):
    """Divide an integer vector by the gcd of its entries; returns (vec, g)."""
    ints = [int(x) for x in v]
    if any(ints[i] != v[i] for i in range(len(v))):
        raise ValueError(f"not an integer vector: {v!r}")
    g = 0
    for x in ints:
        g = gcd(g, abs(x))
    if g == 0:
        raise ValueError("zero vector has no primitive form")
    return tuple(x // g for x in ints), g


def rational_direction_to_primitive(v):
    """Scale a rational vector to its primitive integer direction."""
    fracs = [as_fraction(x) for x in v]
    mult = lcm(*(f.denominator for f in fracs))
    ints = [int(f * mult) for f in fracs]
    prim, _ = primitive_vector(ints)
    return prim
