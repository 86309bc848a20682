"""Exact rational linear programming.

A small two-phase simplex over ``Fraction`` with Bland's anti-cycling
pivot rule.  Constraints are triples ``(coeffs, rel, rhs)`` with ``rel``
one of ``"<="``, ``">="``, ``"="``; variables are free unless an explicit
``x_i >= 0`` row marks them nonnegative (detected and used directly).

The returned argument is pinned down deterministically: among optimal
solutions, coordinates are minimized lexicographically (x1 first).
"""

from __future__ import annotations

from fractions import Fraction

from .linalg import DimensionMismatchError, as_fraction

OPTIMAL = "optimal"
UNBOUNDED = "unbounded"
INFEASIBLE = "infeasible"

LE, GE, EQ = "<=", ">=", "="


class LPResult:
    __slots__ = ("status", "optimum", "argument")

    def __init__(self, status, optimum=None, argument=None):
        self.status = status
        self.optimum = optimum
        self.argument = argument

    @property
    def is_optimal(self):
        return self.status == OPTIMAL

    def __repr__(self):
        return f"LPResult({self.status}, {self.optimum}, {self.argument})"


def _normalize(objective, constraints):
    n = len(objective)
    rows = []
    for coeffs, rel, rhs in constraints:
        if len(coeffs) != n:
            raise DimensionMismatchError(
                f"constraint arity {len(coeffs)}, expected {n}")
        if rel not in (LE, GE, EQ):
            raise ValueError(f"unknown relation {rel!r}")
        rows.append(([as_fraction(c) for c in coeffs], rel, as_fraction(rhs)))
    return [as_fraction(c) for c in objective], rows


def _detect_nonneg(n, rows):
    """Pull out rows of the exact form x_i >= 0; they become sign marks."""
    nonneg = [False] * n
    kept = []
    for coeffs, rel, rhs in rows:
        support = [j for j in range(n) if coeffs[j] != 0]
        if (len(support) == 1 and rhs == 0
                and ((rel == GE and coeffs[support[0]] > 0)
                     or (rel == LE and coeffs[support[0]] < 0))):
            nonneg[support[0]] = True
            continue
        kept.append((coeffs, rel, rhs))
    return nonneg, kept


class _Tableau:
    """Dense simplex tableau with Bland pivoting; all entries Fraction."""

    def __init__(self, rows, basis, ncols):
        self.rows = rows            # m x (ncols+1), rhs last
        self.basis = basis          # basic var index per row
        self.ncols = ncols

    def pivot(self, r, c):
        piv = self.rows[r][c]
        self.rows[r] = [x / piv for x in self.rows[r]]
        for i in range(len(self.rows)):
            if i != r and self.rows[i][c] != 0:
                f = self.rows[i][c]
                prow = self.rows[r]
                self.rows[i] = [x - f * p for x, p in zip(self.rows[i], prow)]
        self.basis[r] = c

    def reduced_costs(self, cost):
        """r_j = c_j - c_B . T_j for the current basis."""
        cb = [cost[b] for b in self.basis]
        red = list(cost)
        for i, row in enumerate(self.rows):
            if cb[i] == 0:
                continue
            for j in range(self.ncols):
                if row[j] != 0:
                    red[j] -= cb[i] * row[j]
        return red

    def maximize(self, cost, blocked=()):
        """Bland's rule simplex; returns OPTIMAL or UNBOUNDED."""
        blocked = set(blocked)
        while True:
            red = self.reduced_costs(cost)
            enter = next((j for j in range(self.ncols)
                          if j not in blocked and red[j] > 0), None)
            if enter is None:
                return OPTIMAL
            leave = None
            best = None
            for i, row in enumerate(self.rows):
                if row[enter] > 0:
                    ratio = row[-1] / row[enter]
                    if best is None or ratio < best or (
                            ratio == best and self.basis[i] < self.basis[leave]):
                        best = ratio
                        leave = i
            if leave is None:
                return UNBOUNDED
            self.pivot(leave, enter)

    def value_of(self, j):
        for i, b in enumerate(self.basis):
            if b == j:
                return self.rows[i][-1]
        return Fraction(0)


def _build_tableau(n, nonneg, rows):
    """Standard form: split free vars, add slack/surplus, artificials.

    Returns (tableau, var_map, artificial_indices) where var_map[i] is
    (plus_col, minus_col_or_None) for original variable i.
    """
    var_map = []
    col = 0
    for i in range(n):
        if nonneg[i]:
            var_map.append((col, None))
            col += 1
        else:
            var_map.append((col, col + 1))
            col += 2
    nstruct = col

    # orient rows so rhs >= 0
    oriented = []
    for coeffs, rel, rhs in rows:
        if rhs < 0:
            coeffs = [-c for c in coeffs]
            rhs = -rhs
            rel = {LE: GE, GE: LE, EQ: EQ}[rel]
        oriented.append((coeffs, rel, rhs))

    nslack = sum(1 for _, rel, _ in oriented if rel != EQ)
    nart = sum(1 for _, rel, _ in oriented if rel != LE)
    ncols = nstruct + nslack + nart

    tab_rows = []
    basis = []
    art_cols = []
    scol = nstruct
    acol = nstruct + nslack
    for coeffs, rel, rhs in oriented:
        row = [Fraction(0)] * (ncols + 1)
        for i in range(n):
            if coeffs[i] == 0:
                continue
            p, m = var_map[i]
            row[p] += coeffs[i]
            if m is not None:
                row[m] -= coeffs[i]
        row[-1] = rhs
        if rel == LE:
            row[scol] = Fraction(1)
            basis.append(scol)
            scol += 1
        elif rel == GE:
            row[scol] = Fraction(-1)
            scol += 1
            row[acol] = Fraction(1)
            basis.append(acol)
            art_cols.append(acol)
            acol += 1
        else:
            row[acol] = Fraction(1)
            basis.append(acol)
            art_cols.append(acol)
            acol += 1
        tab_rows.append(row)
    return _Tableau(tab_rows, basis, ncols), var_map, art_cols


def _solve_raw(objective, constraints_rows, n, nonneg):
    tab, var_map, art_cols = _build_tableau(n, nonneg, constraints_rows)

    if art_cols:
        phase1 = [Fraction(0)] * tab.ncols
        for j in art_cols:
            phase1[j] = Fraction(-1)
        tab.maximize(phase1)
        art_set = set(art_cols)
        if any(tab.value_of(j) != 0 for j in art_cols):
            return LPResult(INFEASIBLE)
        # pivot residual artificials out of the basis, dropping null rows
        for i in range(len(tab.rows) - 1, -1, -1):
            if tab.basis[i] in art_set:
                c = next((j for j in range(tab.ncols)
                          if j not in art_set and tab.rows[i][j] != 0), None)
                if c is None:
                    del tab.rows[i]
                    del tab.basis[i]
                else:
                    tab.pivot(i, c)
        blocked = art_cols
    else:
        blocked = []

    cost = [Fraction(0)] * tab.ncols
    for i in range(n):
        p, m = var_map[i]
        cost[p] += objective[i]
        if m is not None:
            cost[m] -= objective[i]
    status = tab.maximize(cost, blocked=blocked)
    if status == UNBOUNDED:
        return LPResult(UNBOUNDED)

    arg = []
    for i in range(n):
        p, m = var_map[i]
        v = tab.value_of(p)
        if m is not None:
            v -= tab.value_of(m)
        arg.append(v)
    opt = sum((objective[i] * arg[i] for i in range(n)), Fraction(0))
    return LPResult(OPTIMAL, opt, arg)


def lp_maximize(objective, constraints, lex_argument=True) -> LPResult:
    """Maximize ``objective . x`` subject to linear constraints, exactly.

    Infeasible and unbounded problems are reported as result statuses,
    not exceptions.  With ``lex_argument`` (the default) the argument is
    the lexicographically smallest point of the optimal face, obtained
    by fixing the optimum and minimizing x1, x2, ... in turn; callers
    that only consume the optimum may skip the refinement.
    """
    objective, rows = _normalize(objective, constraints)
    n = len(objective)
    nonneg, kept = _detect_nonneg(n, rows)
    res = _solve_raw(objective, kept, n, nonneg)
    if not res.is_optimal:
        return res

    _check_feasible(res.argument, rows)

    if lex_argument and n:
        fixed = kept + [(list(objective), EQ, res.optimum)]
        arg = list(res.argument)
        for i in range(n):
            unit = [Fraction(0)] * n
            unit[i] = Fraction(-1)
            stage = _solve_raw(unit, fixed, n, nonneg)
            if stage.is_optimal:
                arg[i] = -stage.optimum
            # unbounded stage: optimal face open below in x_i; keep value
            unit[i] = Fraction(1)
            fixed = fixed + [(list(unit), EQ, arg[i])]
        res = LPResult(OPTIMAL, res.optimum, arg)
        _check_feasible(res.argument, rows)
        assert sum((objective[i] * res.argument[i] for i in range(n)),
                   Fraction(0)) == res.optimum
    return res


def _check_feasible(x, rows):
    for coeffs, rel, rhs in rows:
        v = sum((c * xi for c, xi in zip(coeffs, x)), Fraction(0))
        if rel == LE:
            assert v <= rhs, "simplex returned an infeasible point"
        elif rel == GE:
            assert v >= rhs, "simplex returned an infeasible point"
        else:
            assert v == rhs, "simplex returned an infeasible point"
