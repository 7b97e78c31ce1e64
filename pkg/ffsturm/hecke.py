"""Hecke operators, Atkin–Lehner involutions, degeneracy maps and the new space.

Operators act on the right: (f|T)(e) = Σ_β f(β·e). Matrices act on coordinate
columns, so the j-th column of an operator matrix holds the coordinates of the
image of the j-th basis cochain.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
import logging
from typing import Any, Sequence

import sympy

from .graph import EdgeClass
from .harmonic import HarmonicCochain, HarmonicSpace, fourier_table, harmonic_space
from .linalg import (
    CoordinateSolver,
    Vector,
    nullspace,
    rank,
    rref,
    to_matrix,
    matrix_to_strings,
)
from .polynomials import Poly, bezout, enumerate_polys, format_poly, gcd, monic_divisors
from .projective import Level
from .reduction import EdgeCoord, Mat2K, edge_matrix, reduce_edge
from .serialization import SCHEMA

_logger = logging.getLogger(__name__)


@dataclass(slots=True)
class OperatorMatrix:
    """Matrix of an operator on a harmonic space, in that space's basis."""

    name: str
    m: Poly
    kind: str
    matrix: sympy.Matrix

    def to_json(self, level: Level) -> dict[str, Any]:
        return {
            "schema": SCHEMA,
            "q": level.q,
            "level": format_poly(level.n),
            "operator": self.name,
            "m": format_poly(self.m),
            "space": self.kind,
            "dim": self.matrix.rows,
            "matrix": matrix_to_strings(self.matrix),
        }


def hecke_terms(level: Level, m: Poly) -> list[Mat2K]:
    """(a b; 0 d) with ad = m, a and d monic, gcd(a, n) = 1, deg b < deg d."""
    if m.is_zero() or not m.is_monic():
        raise ValueError(f"Hecke index must be monic and nonzero, got {format_poly(m)}")
    F = level.field
    zero = Poly.zero(F)
    terms = []
    for a in monic_divisors(m):
        if gcd(a, level.n).degree != 0:
            continue
        d = m // a
        for b in enumerate_polys(F, d.degree - 1):
            terms.append(Mat2K.of(a, b, zero, d))
    return terms


def _transfer(space: HarmonicSpace, points: Sequence[EdgeCoord], betas: Sequence[Mat2K]) -> list[list[EdgeClass]]:
    graph = space.graph
    level = graph.level
    out = []
    for p in points:
        base = edge_matrix(p, level)
        out.append([graph.classify(reduce_edge(beta @ base, level)) for beta in betas])
    return out


def _image_values(space: HarmonicSpace, transfer: list[list[EdgeClass]], f: HarmonicCochain) -> list[Fraction]:
    return [sum((space.value(f.values, ec) for ec in row), Fraction(0)) for row in transfer]


def _determining_columns(space: HarmonicSpace) -> list[int]:
    """Coordinates read off the edges γe_0 (finite ones, plus depth-0 end edges for H(n))."""
    graph = space.graph
    cols = [k for k in range(space.edge_count) if graph.edges[2 * k].r == 0]
    if space.kind == "full":
        cols += [space.edge_count + c.index for c in graph.cusps if c.ell == 0]
    return cols


def operator_matrix(space: HarmonicSpace, betas: Sequence[Mat2K], *, method: str = "all_edges") -> sympy.Matrix:
    """Matrix of f ↦ Σ_β f(β·-) on ``space``.

    ``method="all_edges"`` evaluates the image on every coordinate edge;
    ``method="determining"`` only on the edges γe_0 and solves for coordinates there.
    """
    points = space.evaluation_points()
    if method == "all_edges":
        transfer = _transfer(space, points, betas)
        columns = [space.coordinates(_image_values(space, transfer, f)) for f in space.basis]
    elif method == "determining":
        cols = _determining_columns(space)
        transfer = _transfer(space, [points[i] for i in cols], betas)
        solver = CoordinateSolver([[f.values[i] for i in cols] for f in space.basis], len(cols))
        columns = [solver(_image_values(space, transfer, f)) for f in space.basis]
    else:
        raise ValueError(f"unknown method {method!r}")
    return to_matrix(columns, space.dim)


def hecke_T(space: HarmonicSpace, m: Poly, *, method: str = "all_edges") -> OperatorMatrix:
    matrix = operator_matrix(space, hecke_terms(space.level, m), method=method)
    _logger.debug("T_%s on %s space of level %s", format_poly(m), space.kind, space.level)
    return OperatorMatrix("T", m, space.kind, matrix)


def atkin_lehner_matrix(level: Level, m: Poly, *, shift: Poly | None = None) -> Mat2K:
    """(s·m, t; u·n, v·m) with det m, for an exact divisor m ‖ n.

    ``shift`` moves along the Bezout solutions (x, y) -> (x + k·n/m, y - k·m);
    every choice gives the same operator on Γ₀(n)-invariant cochains.
    """
    n = level.n
    if m.is_zero() or not m.is_monic() or not m.divides(n):
        raise ValueError(f"{format_poly(m)} is not a monic divisor of {format_poly(n)}")
    cofactor = n // m
    g, x, y = bezout(m, cofactor)
    if g.degree != 0:
        raise ValueError(f"{format_poly(m)} is not an exact divisor of {format_poly(n)}")
    if shift is not None:
        x, y = x + shift * cofactor, y - shift * m
    # x·m + y·(n/m) = 1  gives  (x·m)(m) - (-y)(n) = m
    return Mat2K.of(x * m, -y, n, m)


def atkin_lehner(space: HarmonicSpace, m: Poly, *, method: str = "all_edges") -> OperatorMatrix:
    matrix = operator_matrix(space, [atkin_lehner_matrix(space.level, m)], method=method)
    return OperatorMatrix("W", m, space.kind, matrix)


def degeneracy(f: HarmonicCochain, target: HarmonicSpace, m: Poly) -> HarmonicCochain:
    """e ↦ f(diag(m, 1)·e) for f of level M, as a cochain of the target level n (M·m | n)."""
    source = f.space.graph.level
    n = target.level.n
    if not (source.n * m).divides(n):
        raise ValueError(
            f"{format_poly(source.n)}·{format_poly(m)} does not divide {format_poly(n)}"
        )
    F = source.field
    one, zero = Poly.one(F), Poly.zero(F)
    beta = Mat2K.of(m, zero, zero, one)
    values = []
    for p in target.evaluation_points():
        values.append(f(reduce_edge(beta @ edge_matrix(p, target.level), source)))
    cochain = HarmonicCochain(target, tuple(values))
    target.coordinates(cochain.values)  # raises InvariantError outside the target space
    return cochain


def old_vectors(space: HarmonicSpace) -> list[Vector]:
    """A basis of the old subspace of H₀(n), in edge coordinates."""
    if space.kind != "cuspidal":
        raise ValueError("old forms are computed inside the cuspidal space")
    n = space.level.n
    vectors: list[Vector] = []
    for M in monic_divisors(n):
        if M == n:
            continue
        source = harmonic_space(Level(M), "cuspidal")
        if source.dim == 0:
            continue
        for m in monic_divisors(n // M):
            vectors.extend(degeneracy(f, space, m).values for f in source.basis)
    if not vectors:
        return []
    reduced, pivots = rref(vectors, space.ncoords)
    return [tuple(row) for row in reduced[: len(pivots)]]


def petersson(f1: HarmonicCochain, f2: HarmonicCochain) -> Fraction:
    """Σ over directed edges e of Γ₀(n)\\T of f1(e)·f2(e)/#Stab(e)."""
    space = f1.space
    if space.kind != "cuspidal" or f2.space is not space:
        raise ValueError("the Petersson product is defined for cuspidal cochains of one space")
    return _petersson_values(space, f1.values, f2.values)


def _petersson_values(space: HarmonicSpace, u: Sequence[Fraction], v: Sequence[Fraction]) -> Fraction:
    total = Fraction(0)
    for edge in space.graph.undirected_edges():
        k = edge.undirected
        if u[k] and v[k]:
            total += 2 * u[k] * v[k] / edge.stab_order
    return total


class NewSpace:
    """Petersson orthogonal complement of the old space inside H₀(n).

    ``coefficients`` are rows of coordinates in the cuspidal basis.
    """

    def __init__(self, space: HarmonicSpace):
        self.space = space
        olds = old_vectors(space)
        for o in olds:
            space.coordinates(o)
        dim = space.dim
        if olds:
            gram = [[_petersson_values(space, f.values, o) for f in space.basis] for o in olds]
            self.coefficients: list[Vector] = nullspace(gram, dim)
        else:
            self.coefficients = [
                tuple(Fraction(int(i == j)) for j in range(dim)) for i in range(dim)
            ]
        self.old_dim = len(olds)
        self.basis: list[HarmonicCochain] = [space.cochain(c) for c in self.coefficients]
        _logger.info(
            "new space of level %s: dimension %d (old %d)", space.level, len(self.basis), self.old_dim
        )

    @property
    def dim(self) -> int:
        return len(self.basis)

    def restrict(self, op: OperatorMatrix) -> OperatorMatrix:
        """Matrix of a Hecke-stable operator on the new space."""
        solver = CoordinateSolver(self.coefficients, self.space.dim)
        columns = []
        for c in self.coefficients:
            image = op.matrix * sympy.Matrix([sympy.Rational(x.numerator, x.denominator) for x in c])
            columns.append(solver([Fraction(int(x.p), int(x.q)) for x in image]))
        return OperatorMatrix(op.name, op.m, "new", to_matrix(columns, self.dim))


def new_subspace(space: HarmonicSpace) -> NewSpace:
    return NewSpace(space)


def pairing_rank(space: HarmonicSpace, bound: int, cochains: Sequence[HarmonicCochain] | None = None) -> int:
    """Rank of the matrix (c_m(f_i)) over the cochains and monic m with deg m <= bound."""
    cochains = list(space.basis if cochains is None else cochains)
    if bound < 0 or not cochains:
        return 0
    _, table = fourier_table(space, bound, [list(f.values) for f in cochains])
    rows = [[coeffs[i] for coeffs in table.values()] for i in range(len(cochains))]
    return rank(rows, len(table))


def is_sturm_sound(space: HarmonicSpace, bound: int, cochains: Sequence[HarmonicCochain] | None = None) -> bool:
    """True iff vanishing of c_m for deg m <= bound forces the zero cochain."""
    cochains = list(space.basis if cochains is None else cochains)
    return pairing_rank(space, bound, cochains) == len(cochains)
