"""Exact linear algebra over Q on top of sympy's DomainMatrix.

Vectors cross this boundary as tuples of ``fractions.Fraction``; sympy does the
row reductions and inversions.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd as int_gcd, lcm as int_lcm
from typing import Sequence

import sympy
from sympy import QQ
from sympy.polys.matrices import DomainMatrix

Vector = tuple[Fraction, ...]


class InvariantError(RuntimeError):
    """A computed object violates a structural invariant (self-check failure)."""


def _to_domain(rows: Sequence[Sequence[Fraction | int]], ncols: int) -> DomainMatrix:
    data = [[QQ(int(Fraction(x).numerator), int(Fraction(x).denominator)) for x in row] for row in rows]
    return DomainMatrix(data, (len(rows), ncols), QQ)


def _from_domain(dm: DomainMatrix) -> list[list[Fraction]]:
    m = dm.to_Matrix()
    return [[Fraction(int(m[i, j].p), int(m[i, j].q)) for j in range(m.cols)] for i in range(m.rows)]


def rref(rows: Sequence[Sequence[Fraction | int]], ncols: int) -> tuple[list[list[Fraction]], tuple[int, ...]]:
    """Reduced row echelon form and pivot columns."""
    if not rows or ncols == 0:
        return [], ()
    dm, pivots = _to_domain(rows, ncols).rref()
    return _from_domain(dm), tuple(pivots)


def rank(rows: Sequence[Sequence[Fraction | int]], ncols: int) -> int:
    return len(rref(rows, ncols)[1])


def nullspace(rows: Sequence[Sequence[Fraction | int]], ncols: int) -> list[Vector]:
    """Basis of {x : rows·x = 0}, one vector per free column, in column order."""
    reduced, pivots = rref(rows, ncols)
    pivot_set = set(pivots)
    basis = []
    for free in range(ncols):
        if free in pivot_set:
            continue
        v = [Fraction(0)] * ncols
        v[free] = Fraction(1)
        for row, p in zip(reduced, pivots):
            v[p] = -row[free]
        basis.append(tuple(v))
    return basis


def solve_left(rows: Sequence[Sequence[Fraction]], target: Sequence[Fraction]) -> Vector | None:
    """A particular solution x of x·rows = target, or ``None`` if inconsistent."""
    k = len(rows)
    n = len(target)
    if k == 0:
        return () if all(t == 0 for t in target) else None
    augmented = [[rows[i][j] for i in range(k)] + [target[j]] for j in range(n)]
    reduced, pivots = rref(augmented, k + 1)
    if k in pivots:
        return None
    x = [Fraction(0)] * k
    for row, p in zip(reduced, pivots):
        x[p] = row[k]
    return tuple(x)


def primitive(v: Sequence[Fraction]) -> Vector:
    """Scale to a primitive integer vector with positive first nonzero entry."""
    nonzero = [x for x in v if x != 0]
    if not nonzero:
        return tuple(Fraction(x) for x in v)
    den = 1
    for x in nonzero:
        den = int_lcm(den, x.denominator)
    ints = [int(x * den) for x in v]
    g = 0
    for x in ints:
        g = int_gcd(g, x)
    sign = 1 if next(x for x in ints if x) > 0 else -1
    return tuple(Fraction(sign * x // g) for x in ints)


def dot(u: Sequence[Fraction], v: Sequence[Fraction]) -> Fraction:
    return sum((a * b for a, b in zip(u, v)), Fraction(0))


def combine(coeffs: Sequence[Fraction], rows: Sequence[Sequence[Fraction]], ncols: int) -> Vector:
    out = [Fraction(0)] * ncols
    for c, row in zip(coeffs, rows):
        if c:
            for j, x in enumerate(row):
                if x:
                    out[j] += c * x
    return tuple(out)


class CoordinateSolver:
    """Coordinates of vectors with respect to a fixed basis (rows of full rank).

    Raises ``InvariantError`` for a vector outside the span.
    """

    def __init__(self, basis: Sequence[Sequence[Fraction]], ncols: int):
        self.basis = [tuple(Fraction(x) for x in row) for row in basis]
        self.ncols = ncols
        k = len(self.basis)
        if k == 0:
            self.pivots: tuple[int, ...] = ()
            self._inv: list[list[Fraction]] = []
            return
        _, pivots = rref(self.basis, ncols)
        if len(pivots) != k:
            raise InvariantError(f"basis of {k} vectors has rank {len(pivots)}")
        self.pivots = pivots
        square = [[row[p] for p in pivots] for row in self.basis]
        self._inv = _from_domain(_to_domain(square, k).inv())

    def __call__(self, v: Sequence[Fraction]) -> Vector:
        k = len(self.basis)
        vp = [v[p] for p in self.pivots]
        x = tuple(sum((vp[i] * self._inv[i][j] for i in range(k)), Fraction(0)) for j in range(k))
        if combine(x, self.basis, self.ncols) != tuple(Fraction(a) for a in v):
            raise InvariantError("vector is not in the span of the basis")
        return x


def to_matrix(columns: Sequence[Sequence[Fraction]], size: int) -> sympy.Matrix:
    """Square sympy matrix whose j-th column is ``columns[j]``."""
    if size == 0:
        return sympy.zeros(0, 0)
    return sympy.Matrix(
        size,
        size,
        lambda i, j: sympy.Rational(columns[j][i].numerator, columns[j][i].denominator),
    )


def matrix_to_strings(m: sympy.Matrix) -> list[list[str]]:
    return [[str(m[i, j]) for j in range(m.cols)] for i in range(m.rows)]
