"""
Exact feasibility of rational linear inequality systems.

A system is a list of rows ``(coefficients, bound)`` read as
``coefficients . x >= bound``. Small systems are decided by Fourier-Motzkin
elimination, larger ones by a phase-one simplex with Bland's rule. All
arithmetic is over :class:`fractions.Fraction`.
"""
import logging
from fractions import Fraction

logger = logging.getLogger(__name__)

#: systems with at most this many variables use Fourier-Motzkin elimination
FOURIER_MOTZKIN_LIMIT = 6


def _normalise(row, bound):
    pivot = next((abs(c) for c in row if c), None)
    if pivot is None:
        return tuple(row), bound
    return tuple(c / pivot for c in row), bound / pivot


def fourier_motzkin(rows, variables):
    system = {_normalise([Fraction(c) for c in row], Fraction(b)) for row, b in rows}
    for k in range(variables):
        positive, negative, rest = [], [], []
        for row, b in system:
            if row[k] > 0:
                positive.append((row, b))
            elif row[k] < 0:
                negative.append((row, b))
            else:
                rest.append((row, b))
        combined = set(rest)
        for p_row, p_b in positive:
            for n_row, n_b in negative:
                lam, mu = -n_row[k], p_row[k]
                row = [lam * p + mu * n for p, n in zip(p_row, n_row)]
                row[k] = Fraction(0)
                combined.add(_normalise(row, lam * p_b + mu * n_b))
        system = combined
        logger.debug("eliminated x%s: %s rows", k, len(system))
    return all(b <= 0 for _, b in system)


class Tableau:
    """
    Phase-one tableau for ``A x >= b, x >= 0``: surplus and artificial
    columns are appended and the sum of artificials is minimised.
    """

    def __init__(self, rows):
        m = len(rows)
        n = len(rows[0][0]) if rows else 0
        self.m, self.n = m, n
        width = n + 2 * m
        self.A = []
        self.b = []
        for i, (coeffs, bound) in enumerate(rows):
            sign = 1 if bound >= 0 else -1
            line = [Fraction(0)] * width
            for j, c in enumerate(coeffs):
                line[j] = sign * Fraction(c)
            line[n + i] = Fraction(-sign)
            line[n + m + i] = Fraction(1)
            self.A.append(line)
            self.b.append(sign * Fraction(bound))
        self.basis = [n + m + i for i in range(m)]
        self.width = width
        # reduced costs of the phase-one objective (minimise the artificials)
        self.cost = [Fraction(0)] * width
        for j in range(n + m):
            self.cost[j] = -sum(self.A[i][j] for i in range(m))
        self.value = -sum(self.b)

    def pivot(self, i, j):
        piv = self.A[i][j]
        self.A[i] = [a / piv for a in self.A[i]]
        self.b[i] /= piv
        for k in range(self.m):
            if k != i and self.A[k][j]:
                factor = self.A[k][j]
                self.A[k] = [a - factor * p for a, p in zip(self.A[k], self.A[i])]
                self.b[k] -= factor * self.b[i]
        factor = self.cost[j]
        self.cost = [c - factor * p for c, p in zip(self.cost, self.A[i])]
        self.value -= factor * self.b[i]
        self.basis[i] = j

    def bland_step(self):
        try:
            j = min(j for j in range(self.width) if self.cost[j] < 0)
        except ValueError:
            return "optimal"
        candidates = [
            (self.b[i] / self.A[i][j], self.basis[i], i)
            for i in range(self.m)
            if self.A[i][j] > 0
        ]
        if not candidates:
            return "unbounded"
        _, _, i = min(candidates)
        self.pivot(i, j)
        return "go_on"

    def solve(self):
        while True:
            status = self.bland_step()
            if status != "go_on":
                return status


def simplex_feasible(rows):
    """
    Feasibility of ``A x >= b`` with ``x >= 0``.
    """
    if not rows:
        return True
    tableau = Tableau(rows)
    tableau.solve()
    return tableau.value == 0


def feasible(rows, variables, nonnegative=False):
    """
    Decide whether the system has a rational solution. ``nonnegative``
    states that the rows already force ``x >= 0``, which the simplex
    method needs; otherwise Fourier-Motzkin is always used.
    """
    if variables <= FOURIER_MOTZKIN_LIMIT or not nonnegative:
        return fourier_motzkin(rows, variables)
    return simplex_feasible(rows)


def _square(matrix):
    return [[Fraction(x) for x in row] for row in matrix]


def collatz_wielandt_rows(matrix, lower):
    """
    Rows of ``{v >= lower, (M - I) v >= 0}``.
    """
    M = _square(matrix)
    n = len(M)
    rows = []
    for i in range(n):
        unit = [Fraction(0)] * n
        unit[i] = Fraction(1)
        rows.append((unit, Fraction(lower)))
    for i in range(n):
        rows.append(([M[i][j] - (1 if i == j else 0) for j in range(n)], Fraction(0)))
    return rows


def spectral_radius_at_least_one(matrix) -> bool:
    """
    ``lambda(M) >= 1`` for a nonnegative ``M``, decided as feasibility of
    ``{v >= 0, sum v = 1, M v >= v}``.
    """
    n = len(matrix)
    if n == 0:
        return False
    rows = collatz_wielandt_rows(matrix, 0)
    ones = [Fraction(1)] * n
    rows.append((ones, Fraction(1)))
    rows.append(([-x for x in ones], Fraction(-1)))
    return feasible(rows, n, nonnegative=True)


def has_positive_supervector(matrix) -> bool:
    """
    Existence of ``v > 0`` with ``M v >= v``; by scaling, ``v >= 1``.
    """
    n = len(matrix)
    if n == 0:
        return False
    return feasible(collatz_wielandt_rows(matrix, 1), n, nonnegative=True)
