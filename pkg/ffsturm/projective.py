"""Levels, the projective line P¹(A/n) and its orbit structure.

A point (c:d) of P¹(A/n) is stored in the canonical form obtained locally at
every prime power p^e ‖ n (``(x:1)`` when d is a unit mod p, ``(1:y)`` with p | y
otherwise) and glued by CRT. Two unimodular pairs name the same point iff their
canonical forms coincide.

Right actions of 2x2 matrices on row vectors ``(c d)`` realise the cosets
Γ₀(n)\\GL₂(A). The orbits of Γ∞^(r) (upper triangular matrices with entries of
degree <= r in the corner) and of GL₂(F_q) are computed once per level with a
union-find over generators.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
import logging
from typing import Sequence

from .fields import FiniteField, GF
from .polynomials import (
    Poly,
    bezout,
    crt,
    enumerate_polys,
    factorize,
    format_poly,
    gcd,
    inverse_mod,
    parse_poly,
)

_logger = logging.getLogger(__name__)

Mat = tuple[Poly, Poly, Poly, Poly]


@dataclass(frozen=True, slots=True)
class ProjPoint:
    """Canonical representative (c:d) of a point of P¹(A/n)."""

    c: Poly
    d: Poly

    @property
    def key(self) -> tuple:
        return (self.c.key, self.d.key)

    def __str__(self) -> str:
        return f"[{format_poly(self.c)}:{format_poly(self.d)}]"


@dataclass(frozen=True, slots=True)
class Cusp:
    """A Γ₀(n)-cusp: Γ∞-orbit of P¹(A/n).

    Attributes:
        index: position in the level's cusp list (0 is always [0:1]).
        rep: canonical minimal point of the orbit.
        width_degree: deg of n / gcd(c², n).
        ell: first level r at which edges of this cusp lie on its end.
        gamma: det-1 lift ``(a, b, c, d)`` of ``rep`` to GL₂(A).
    """

    index: int
    rep: ProjPoint
    width_degree: int
    ell: int
    gamma: Mat


class _UnionFind:
    __slots__ = ("parent",)

    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        parent = self.parent
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            if ra < rb:
                self.parent[rb] = ra
            else:
                self.parent[ra] = rb

    def labels(self) -> list[int]:
        # roots are the minimal member of each class
        return [self.find(i) for i in range(len(self.parent))]

    def copy(self) -> "_UnionFind":
        out = _UnionFind(0)
        out.parent = self.parent[:]
        return out


@dataclass(frozen=True)
class Level:
    """A monic nonzero level n ∈ F_q[θ]."""

    n: Poly

    def __post_init__(self) -> None:
        if self.n.is_zero():
            raise ValueError("level must be nonzero")
        if not self.n.is_monic():
            raise ValueError(f"level must be monic, got {format_poly(self.n)}")

    @classmethod
    def parse(cls, q: int, text: str) -> "Level":
        return cls(parse_poly(GF(q), text))

    @property
    def field(self) -> FiniteField:
        return self.n.field

    @property
    def q(self) -> int:
        return self.n.field.q

    @property
    def degree(self) -> int:
        return self.n.degree

    @property
    def norm(self) -> int:
        """|n| = q^deg n."""
        return self.q**self.degree

    @cached_property
    def factorization(self) -> list[tuple[Poly, int]]:
        return factorize(self.n)

    @cached_property
    def _local(self) -> list[tuple[Poly, Poly, Poly]]:
        """(p, p^e, CRT idempotent) per prime power exactly dividing n."""
        parts = [(p, p**e) for p, e in self.factorization]
        moduli = [pe for _, pe in parts]
        F = self.field
        out = []
        for i, (p, pe) in enumerate(parts):
            residues = [Poly.one(F) if j == i else Poly.zero(F) for j in range(len(parts))]
            out.append((p, pe, crt(residues, moduli)))
        return out

    @cached_property
    def proj_line(self) -> "ProjectiveLine":
        return ProjectiveLine(self)

    def __str__(self) -> str:
        return format_poly(self.n)


def canonicalize(c: Poly, d: Poly, level: Level) -> ProjPoint:
    """Canonical representative of (c:d) in P¹(A/n).

    Raises:
        ValueError: if gcd(c, d, n) != 1.
    """
    F = level.field
    if level.degree == 0:
        if c.is_zero() and d.is_zero():
            raise ValueError("(0:0) is not a point")
        return ProjPoint(Poly.zero(F), Poly.one(F))
    cs = Poly.zero(F)
    ds = Poly.zero(F)
    for p, pe, idem in level._local:
        cl, dl = c % pe, d % pe
        if not (dl % p).is_zero():
            x = (cl * inverse_mod(dl, pe)) % pe
            cs = cs + idem * x
            ds = ds + idem
        elif not (cl % p).is_zero():
            y = (dl * inverse_mod(cl, pe)) % pe
            cs = cs + idem
            ds = ds + idem * y
        else:
            raise ValueError(
                f"({format_poly(c)}:{format_poly(d)}) is not unimodular modulo {format_poly(level.n)}"
            )
    return ProjPoint(cs % level.n, ds % level.n)


def width(pt: ProjPoint, level: Level) -> Poly:
    """n / gcd(c², n)."""
    return level.n // gcd(pt.c * pt.c, level.n)


class ProjectiveLine:
    """Enumerated P¹(A/n) with orbit partitions under Γ∞^(r) and GL₂(F_q)."""

    def __init__(self, level: Level):
        self.level = level
        F = level.field
        self.field = F
        pts = self._enumerate()
        pts.sort(key=lambda pt: pt.key)
        self.points: list[ProjPoint] = pts
        self.index: dict[tuple, int] = {pt.key: i for i, pt in enumerate(pts)}
        self.width_degree: list[int] = [width(pt, level).degree for pt in pts]
        self.top = max(0, level.degree - 1)
        self._build_orbits()
        _logger.debug(
            "P1 over level %s: %d points, %d cusps", level, len(pts), len(self.cusp_reps)
        )

    def __len__(self) -> int:
        return len(self.points)

    def _enumerate(self) -> list[ProjPoint]:
        level = self.level
        F = self.field
        if level.degree == 0:
            return [ProjPoint(Poly.zero(F), Poly.one(F))]
        local_lists = []
        for p, pe, idem in level._local:
            k = pe.degree
            residues = list(enumerate_polys(F, k - 1))
            multiples_of_p = [y for y in residues if (y % p).is_zero()]
            local = [(x, Poly.one(F)) for x in residues]
            local += [(Poly.one(F), y) for y in multiples_of_p]
            local_lists.append((idem, local))
        combos: list[tuple[Poly, Poly]] = [(Poly.zero(F), Poly.zero(F))]
        for idem, local in local_lists:
            combos = [(cs + idem * x, ds + idem * y) for cs, ds in combos for x, y in local]
        return [ProjPoint(cs % level.n, ds % level.n) for cs, ds in combos]

    def lookup(self, c: Poly, d: Poly) -> int:
        return self.index[canonicalize(c, d, self.level).key]

    def act(self, i: int, m: Mat) -> int:
        """Index of pt_i · m for the right action on row vectors."""
        a, b, c, d = m
        pt = self.points[i]
        return self.lookup(pt.c * a + pt.d * c, pt.c * b + pt.d * d)

    def _build_orbits(self) -> None:
        F = self.field
        N = len(self.points)
        one, zero = Poly.one(F), Poly.zero(F)
        uf = _UnionFind(N)
        diag = (Poly.constant(F, F.generator), zero, zero, one)
        for i in range(N):
            uf.union(i, self.act(i, diag))
        self.orbit_labels: list[list[int]] = []
        gl2_uf: _UnionFind | None = None
        for r in range(self.top + 1):
            if r < max(1, self.level.degree):
                for e in F.prime_basis:
                    translation = (one, Poly.monomial(F, r, e), zero, one)
                    for i in range(N):
                        uf.union(i, self.act(i, translation))
            if r == 0:
                gl2_uf = uf.copy()
            self.orbit_labels.append(uf.labels())
        assert gl2_uf is not None
        w = (zero, one, one, zero)
        for i in range(N):
            gl2_uf.union(i, self.act(i, w))
        self.gl2_labels: list[int] = gl2_uf.labels()
        self.orbit_sizes = [Counter(labels) for labels in self.orbit_labels]
        self.gl2_sizes = Counter(self.gl2_labels)
        self.cusp_labels = self.orbit_labels[self.top]
        self.cusp_reps = sorted(set(self.cusp_labels))
        self.cusp_of = {rep: k for k, rep in enumerate(self.cusp_reps)}

    def orbit_label(self, i: int, r: int) -> int:
        """Minimal index in the Γ∞^(r)-orbit of point i (r beyond the top level is the Γ∞-orbit)."""
        return self.orbit_labels[min(r, self.top)][i]

    def orbit_size(self, i: int, r: int) -> int:
        level = min(r, self.top)
        return self.orbit_sizes[level][self.orbit_labels[level][i]]

    def cusp_index(self, i: int) -> int:
        return self.cusp_of[self.cusp_labels[i]]


def gamma_infinity_order(q: int, r: int) -> int:
    """|Γ∞^(r)| = (q-1)² q^(r+1)."""
    return (q - 1) ** 2 * q ** (r + 1)


def gl2_order(q: int) -> int:
    return (q * q - 1) * (q * q - q)


def enumerate_proj_line(level: Level) -> list[ProjPoint]:
    return list(level.proj_line.points)


def stabilizer_order(pt: ProjPoint, r: int, level: Level, kind: str) -> int:
    """Order of the stabilizer in Γ₀(n) of γx_r, where γ lifts ``pt``.

    ``kind`` is ``"vertex"`` (x_r = v_r) or ``"edge"`` (x_r = e_r). Computed by
    orbit-stabilizer inside Stab_Γ(x_r), which is GL₂(F_q) for the vertex v_0 and
    Γ∞^(r) otherwise.
    """
    if kind not in ("vertex", "edge"):
        raise ValueError(f"kind must be 'vertex' or 'edge', got {kind!r}")
    if r < 0:
        raise ValueError(f"r must be non-negative, got {r}")
    line = level.proj_line
    i = line.index[pt.key]
    if kind == "vertex" and r == 0:
        size = gl2_order(level.q)
        orbit = line.gl2_sizes[line.gl2_labels[i]]
    else:
        size = gamma_infinity_order(level.q, r)
        orbit = line.orbit_size(i, r)
    if size % orbit:
        raise RuntimeError(f"orbit of size {orbit} does not divide group order {size}")
    return size // orbit


def lift_to_gamma(pt: ProjPoint, level: Level) -> Mat:
    """A matrix (a b; c d) ∈ GL₂(A) of determinant 1 whose bottom row lifts ``pt``."""
    F = level.field
    c, d = pt.c, pt.d
    if gcd(c, d).degree != 0:
        if c.is_zero():
            c = level.n
        else:
            for t in enumerate_polys(F, max(0, c.degree - 1)):
                cand = d + t * level.n
                if gcd(c, cand).degree == 0:
                    d = cand
                    break
            else:  # pragma: no cover - a lift always exists with deg t < deg c
                raise RuntimeError(f"no coprime lift for {pt}")
    _, s, t = bezout(c, d)
    # s*c + t*d = 1  ->  a = t, b = -s
    return (t, -s, c, d)


def cusps(level: Level) -> list[Cusp]:
    """Γ∞-orbits on P¹(A/n); the first is always [0:1]."""
    line = level.proj_line
    out = []
    for k, rep in enumerate(line.cusp_reps):
        pt = line.points[rep]
        wd = line.width_degree[rep]
        out.append(
            Cusp(index=k, rep=pt, width_degree=wd, ell=max(0, wd - 1), gamma=lift_to_gamma(pt, level))
        )
    return out


def index_kappa(level: Level) -> int:
    """κ(n) = [GL₂(A) : Γ₀(n)] = #P¹(A/n)."""
    return len(level.proj_line)


def kappa_formula(level: Level) -> int:
    """Closed form |n| Π_{p | n} (1 + 1/|p|)."""
    value = Fraction(level.norm)
    for p, _ in level.factorization:
        value *= 1 + Fraction(1, level.q**p.degree)
    assert value.denominator == 1
    return int(value)


def mat_mul(x: Mat, y: Mat) -> Mat:
    a, b, c, d = x
    e, f, g, h = y
    return (a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h)


def mat_det(x: Sequence[Poly]) -> Poly:
    a, b, c, d = x
    return a * d - b * c
