"""Γ₀(n)-invariant harmonic cochains and their Fourier coefficients.

A cuspidal cochain is stored by its value on the +-oriented representative of
every undirected finite edge class. A cochain of the full space additionally
stores, per cusp s, the value y_s on the first end edge γ_s·e_(ℓ_s); harmonicity
along the end forces the value q^k·y_s at depth k.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product
import logging
from typing import Any, Sequence

from .graph import EdgeClass, QuotientGraph, build_graph
from .linalg import CoordinateSolver, InvariantError, Vector, nullspace, primitive, solve_left
from .polynomials import Poly, RationalFn, format_poly, monic_polys
from .projective import Level
from .reduction import EdgeCoord, Mat2K, reduce_edge, tail_edge
from .serialization import SCHEMA

_logger = logging.getLogger(__name__)

KINDS = ("cuspidal", "full")


@dataclass(frozen=True, slots=True)
class HarmonicCochain:
    """A cochain given by coordinates in the edge/cusp value space of ``space``."""

    space: "HarmonicSpace"
    values: Vector

    @property
    def level(self) -> Level:
        return self.space.graph.level

    def __call__(self, e: EdgeCoord) -> Fraction:
        return self.space.value(self.values, self.space.graph.classify(e))

    def at_matrix(self, g: Mat2K) -> Fraction:
        return self(reduce_edge(g, self.level))

    def cusp_values(self) -> Vector:
        return self.values[self.space.graph.undirected_count :]


@dataclass(frozen=True, slots=True)
class FourierCoeffs:
    c0: Fraction
    coeffs: dict[Poly, Fraction]
    max_deg: int

    def to_json(self) -> dict[str, Any]:
        return {
            "c0": str(self.c0),
            "max_deg": self.max_deg,
            "coeffs": [{"m": format_poly(m), "c": str(c)} for m, c in self.coeffs.items()],
        }


class HarmonicSpace:
    """Basis of H₀(n) (``kind="cuspidal"``) or H(n) (``kind="full"``)."""

    def __init__(self, graph: QuotientGraph, kind: str = "cuspidal", *, selfcheck: bool = True):
        if kind not in KINDS:
            raise ValueError(f"kind must be one of {KINDS}, got {kind!r}")
        self.graph = graph
        self.kind = kind
        self.q = graph.q
        self.edge_count = graph.undirected_count
        self.ncoords = self.edge_count + (len(graph.cusps) if kind == "full" else 0)
        rows = self._harmonicity_rows()
        if kind == "cuspidal":
            vectors = [primitive(v) for v in nullspace(rows, self.ncoords)]
        else:
            vectors = self._full_vectors(rows)
        self.basis: list[HarmonicCochain] = [HarmonicCochain(self, v) for v in vectors]
        self._solver: CoordinateSolver | None = None
        if selfcheck:
            self.check_harmonic(rows)
        _logger.info(
            "%s space of level %s: dimension %d (genus %d, %d cusps)",
            kind,
            graph.level,
            len(self.basis),
            self.edge_count - len(graph.vertices) + 1,
            len(graph.cusps),
        )

    @property
    def level(self) -> Level:
        return self.graph.level

    @property
    def dim(self) -> int:
        return len(self.basis)

    # -- values -----------------------------------------------------------------

    def value(self, values: Sequence[Fraction], ec: EdgeClass) -> Fraction:
        if ec.finite:
            x = values[ec.index]
            return x if ec.sign > 0 else -x
        if self.kind == "cuspidal":
            return Fraction(0)
        x = values[self.edge_count + ec.index] * self.q**ec.depth
        return x if ec.sign > 0 else -x

    def evaluation_points(self) -> list[EdgeCoord]:
        """Edges whose values are the coordinates of this space."""
        pts = [self.graph.edge_rep(k) for k in range(self.edge_count)]
        if self.kind == "full":
            pts += [EdgeCoord(c.rep, c.ell, 1) for c in self.graph.cusps]
        return pts

    # -- construction -----------------------------------------------------------

    def _harmonicity_rows(self) -> list[list[Fraction]]:
        rows = []
        for v in range(len(self.graph.vertices)):
            row = [Fraction(0)] * self.ncoords
            for e in self.graph.out_edges(v):
                ec = self.graph.classify(e)
                if ec.finite:
                    row[ec.index] += ec.sign
                elif self.kind == "full":
                    row[self.edge_count + ec.index] += ec.sign * self.q**ec.depth
            rows.append(row)
        return rows

    def _full_vectors(self, rows: list[list[Fraction]]) -> list[Vector]:
        finite_rows = [row[: self.edge_count] for row in rows]
        cuspidal = [primitive(v) for v in nullspace(finite_rows, self.edge_count)] if self.edge_count else []
        ncusps = len(self.graph.cusps)
        padded = [tuple(v) + (Fraction(0),) * ncusps for v in cuspidal]
        full = nullspace(rows, self.ncoords)
        # prescribe values at every cusp except [0:1]
        projected = [v[self.edge_count + 1 :] for v in full]
        extensions = []
        for s in range(1, ncusps):
            target = [Fraction(0)] * (ncusps - 1)
            target[s - 1] = Fraction(1)
            x = solve_left(projected, target)
            if x is None:
                raise InvariantError(f"no harmonic cochain with prescribed value at cusp {s}")
            ext = [Fraction(0)] * self.ncoords
            for c, v in zip(x, full):
                for j in range(self.ncoords):
                    ext[j] += c * v[j]
            extensions.append(tuple(ext))
        return padded + extensions

    def check_harmonic(self, rows: list[list[Fraction]] | None = None) -> None:
        rows = rows if rows is not None else self._harmonicity_rows()
        for f in self.basis:
            for v, row in enumerate(rows):
                if sum((a * b for a, b in zip(row, f.values) if a), Fraction(0)) != 0:
                    raise InvariantError(f"cochain is not harmonic at vertex {v} of level {self.level}")

    # -- coordinates ------------------------------------------------------------

    def coordinates(self, values: Sequence[Fraction]) -> Vector:
        """Coordinates of a cochain (edge/cusp value vector) in this basis."""
        if self._solver is None:
            self._solver = CoordinateSolver([f.values for f in self.basis], self.ncoords)
        return self._solver(values)

    def cochain(self, coords: Sequence[Fraction]) -> HarmonicCochain:
        values = [Fraction(0)] * self.ncoords
        for c, f in zip(coords, self.basis):
            if c:
                for j, x in enumerate(f.values):
                    values[j] += c * x
        return HarmonicCochain(self, tuple(values))

    def to_json(self) -> dict[str, Any]:
        return {
            "schema": SCHEMA,
            "q": self.q,
            "level": format_poly(self.level.n),
            "kind": self.kind,
            "dim": self.dim,
            "basis": [[str(x) for x in f.values] for f in self.basis],
        }


@lru_cache(maxsize=128)
def harmonic_space(level: Level, kind: str = "cuspidal", selfcheck: bool = True) -> HarmonicSpace:
    return HarmonicSpace(build_graph(level), kind, selfcheck=selfcheck)


def cuspidal_basis(level: Level) -> list[HarmonicCochain]:
    return harmonic_space(level, "cuspidal").basis


def full_basis(level: Level) -> list[HarmonicCochain]:
    """Cuspidal basis followed by one cochain per cusp s != [0:1] with value 1 there."""
    return harmonic_space(level, "full").basis


def evaluate(f: HarmonicCochain, g: Mat2K) -> Fraction:
    return f.at_matrix(g)


# -- Fourier expansion ----------------------------------------------------------


def _hyperplane_sums(space: HarmonicSpace, deg: int, values: list[list[Fraction]]) -> dict[Poly, list[Fraction]]:
    """c_m for every monic m of degree ``deg``, for each cochain in ``values``.

    With r = deg + 2 and u = Σ u_i π∞^i over π∞O∞/π∞^r O∞,
    c_m = (q·Σ_{a_1(mu) = 0} f(π∞^r, u) - Σ_u f(π∞^r, u)) / (q(q-1)),
    where a_1(mu) = Σ_j m_j u_(j+1) is the π∞-coefficient of m·u.
    """
    F = space.graph.level.field
    q = space.q
    r = deg + 2
    classes = space.graph.tail_classes(r)
    digits_list = _digit_tuples(q, r - 1)
    table = [[space.value(vals, ec) for ec in classes] for vals in values]
    totals = [sum(row, Fraction(0)) for row in table]
    add, mul = F.add, F.mul
    out: dict[Poly, list[Fraction]] = {}
    for m in monic_polys(F, deg):
        mc = m.coeffs
        hits = [Fraction(0)] * len(values)
        for idx, digits in enumerate(digits_list):
            acc = 0
            for j, mj in enumerate(mc):
                if mj:
                    acc = add[acc][mul[mj][digits[j]]]
            if acc == 0:
                for t, row in enumerate(table):
                    x = row[idx]
                    if x:
                        hits[t] += x
        out[m] = [(q * h - tot) / (q * (q - 1)) for h, tot in zip(hits, totals)]
    return out


@lru_cache(maxsize=None)
def _digit_tuples(q: int, length: int) -> tuple[tuple[int, ...], ...]:
    return tuple(product(range(q), repeat=length))


def constant_terms(space: HarmonicSpace, values: list[list[Fraction]]) -> list[Fraction]:
    """c_0 = q^-1 Σ_{u ∈ π∞O∞/π∞²O∞} f(π∞², u)."""
    classes = space.graph.tail_classes(2)
    return [sum((space.value(v, ec) for ec in classes), Fraction(0)) / space.q for v in values]


def fourier_table(space: HarmonicSpace, max_deg: int, values: list[list[Fraction]] | None = None) -> tuple[list[Fraction], dict[Poly, list[Fraction]]]:
    """c_0 and c_m (deg m <= max_deg, monic) for every cochain at once."""
    if values is None:
        values = [list(f.values) for f in space.basis]
    coeffs: dict[Poly, list[Fraction]] = {}
    for deg in range(max_deg + 1):
        coeffs.update(_hyperplane_sums(space, deg, values))
    return constant_terms(space, values), coeffs


def fourier(f: HarmonicCochain, max_deg: int) -> FourierCoeffs:
    c0, table = fourier_table(f.space, max_deg, [list(f.values)])
    return FourierCoeffs(c0[0], {m: cs[0] for m, cs in table.items()}, max_deg)


def reconstruct_tail_value(q: int, c0: Fraction, coeffs: dict[Poly, Fraction], r: int, digits: Sequence[int], F) -> Fraction:
    """q^(2-r)·(c_0 + Σ_{deg m <= r-2} c_m Ψ(mu)) with Ψ(x) = q·[a_1(x) = 0] - 1."""
    total = c0
    for m, c in coeffs.items():
        if m.degree > r - 2:
            continue
        acc = 0
        for j, mj in enumerate(m.coeffs):
            acc = F.add[acc][F.mul[mj][digits[j]]]
        total += c * (q - 1 if acc == 0 else -1)
    return total * Fraction(q) ** (2 - r)


def constant_term_identity(f: HarmonicCochain) -> Fraction:
    """f((π∞^deg n, -1/n; 0, 1)) + f((π∞^(deg n + 1), 1/n; 0, 1)); zero on H(n)."""
    level = f.level
    F = level.field
    inv_n = RationalFn(Poly.one(F), level.n)
    first = f.at_matrix(tail_edge(F, level.degree, -inv_n))
    second = f.at_matrix(tail_edge(F, level.degree + 1, inv_n))
    return first + second
