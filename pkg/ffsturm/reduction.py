"""Reduction of Bruhat–Tits tree edges to Γ₀(n)-classes.

An edge of the tree is written ``g·I∞`` for g ∈ GL₂(K∞); the standard edge
e_r = diag(θ^r, 1) runs from v_r to v_{r+1} (toward the cusp ∞) and its reversal
is ē = g·(0 1; π∞ 0). Every edge is γe_r or γē_r for some γ ∈ GL₂(A) and a
unique r >= 0; the class in Γ₀(n)\\T is then (Γ₀(n)γ ↦ point of P¹(A/n), r, orient).
"""

from __future__ import annotations

from dataclasses import dataclass
import logging

from .fields import FiniteField
from .polynomials import Poly, RationalFn
from .projective import Level, Mat, ProjPoint, canonicalize, lift_to_gamma

_logger = logging.getLogger(__name__)


@dataclass(frozen=True, slots=True)
class Mat2K:
    """2x2 matrix over K = F_q(θ), entries ``(a b; c d)``."""

    a: RationalFn
    b: RationalFn
    c: RationalFn
    d: RationalFn

    @classmethod
    def of(cls, a, b, c, d) -> "Mat2K":
        """Build from any mix of ``Poly`` and ``RationalFn`` entries."""
        return cls(RationalFn.of(a), RationalFn.of(b), RationalFn.of(c), RationalFn.of(d))

    @classmethod
    def identity(cls, F: FiniteField) -> "Mat2K":
        one, zero = Poly.one(F), Poly.zero(F)
        return cls.of(one, zero, zero, one)

    @classmethod
    def diag_theta(cls, F: FiniteField, r: int) -> "Mat2K":
        """diag(θ^r, 1); negative r gives powers of π∞."""
        one, zero = Poly.one(F), Poly.zero(F)
        return cls.of(pi_power(F, -r), zero, zero, one)

    @classmethod
    def reversal(cls, F: FiniteField) -> "Mat2K":
        """(0 1; π∞ 0), the right factor turning an edge into its opposite."""
        one, zero = Poly.one(F), Poly.zero(F)
        return cls.of(zero, one, pi_power(F, 1), zero)

    @property
    def field(self) -> FiniteField:
        return self.a.field

    @property
    def entries(self) -> tuple[RationalFn, RationalFn, RationalFn, RationalFn]:
        return (self.a, self.b, self.c, self.d)

    def __matmul__(self, other: "Mat2K") -> "Mat2K":
        a, b, c, d = self.entries
        e, f, g, h = other.entries
        return Mat2K(a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h)

    def det(self) -> RationalFn:
        return self.a * self.d - self.b * self.c

    def inverse(self) -> "Mat2K":
        det = self.det()
        if det.is_zero():
            raise ValueError("singular matrix")
        inv = det.inverse()
        return Mat2K(self.d * inv, -self.b * inv, -self.c * inv, self.a * inv)

    def scaled(self, s: RationalFn) -> "Mat2K":
        return Mat2K(self.a * s, self.b * s, self.c * s, self.d * s)


def pi_power(F: FiniteField, k: int) -> RationalFn:
    """π∞^k = θ^(-k)."""
    if k >= 0:
        return RationalFn(Poly.one(F), Poly.monomial(F, k))
    return RationalFn(Poly.monomial(F, -k))


def poly_matrix(m: Mat) -> Mat2K:
    return Mat2K.of(*m)


@dataclass(frozen=True, slots=True)
class EdgeCoord:
    """The Γ₀(n)-class of γe_r (orient = +1) or γē_r (orient = -1), pt = Γ₀(n)γ."""

    pt: ProjPoint
    r: int
    orient: int

    def opposite(self) -> "EdgeCoord":
        return EdgeCoord(self.pt, self.r, -self.orient)


def in_gl2_oinf_orbit(m: Mat2K) -> bool:
    """True iff m ∈ K∞^× · GL₂(O∞), i.e. ν(det) = 2·min ν(entries)."""
    det = m.det()
    if det.is_zero():
        return False
    low = min(x.valuation() for x in m.entries if not x.is_zero())
    return det.valuation() == 2 * low


def _descend(g: Mat2K) -> tuple[Mat, int, int]:
    """Return ``(γ, r, orient)`` with g·I∞ = γe_r (orient +1) or γē_r (orient -1)."""
    a, b, c, d = g.entries
    det = g.det()
    if det.is_zero():
        raise ValueError("edge matrix must be invertible")
    F = g.field
    orient = 1
    if c.is_zero() or (not d.is_zero() and c.valuation() > d.valuation()):
        # g·(1 0; -c/d 1) = (det/d, b; 0, d) ~ (π^k, b/d; 0, 1)
        k = int(det.valuation() - 2 * d.valuation())
        u = b / d
    else:
        # g·(0 1; π 0) = (bπ, a; dπ, c) is the opposite edge
        orient = -1
        k = int(det.valuation() + 1 - 2 * c.valuation())
        u = a / c
    one, zero = Poly.one(F), Poly.zero(F)
    ga, gb, gc, gd = one, zero, zero, one
    while True:
        poly_part, u = u.split()
        if not poly_part.is_zero():
            ga, gb, gc, gd = ga, ga * poly_part + gb, gc, gc * poly_part + gd
        if u.is_zero() or u.valuation() >= k:
            break
        j = int(u.valuation())
        # (π^k, u) = w·(π^(k-2j), 1/u) up to I∞
        ga, gb, gc, gd = gb, ga, gd, gc
        k -= 2 * j
        u = u.inverse()
    if k <= 0:
        return (ga, gb, gc, gd), -k, orient
    # (π^k, 0; 0, 1) = w·ē_(k-1)
    return (gb, ga, gd, gc), k - 1, -orient


def weil_decompose(g: Mat2K) -> tuple[Mat, int]:
    """Write the vertex of g as γ·v_r: g = γ·diag(θ^r, 1)·z·κ with z scalar, κ ∈ GL₂(O∞)."""
    gamma, r, orient = _descend(g)
    return gamma, r + (1 if orient < 0 else 0)


def reduce_edge(g: Mat2K, level: Level) -> EdgeCoord:
    """Γ₀(n)-class of the edge g·I∞."""
    gamma, r, orient = _descend(g)
    return EdgeCoord(canonicalize(gamma[2], gamma[3], level), r, orient)


def edge_matrix(e: EdgeCoord, level: Level) -> Mat2K:
    """A matrix whose edge lies in the class ``e``."""
    F = level.field
    m = poly_matrix(lift_to_gamma(e.pt, level)) @ Mat2K.diag_theta(F, e.r)
    if e.orient < 0:
        m = m @ Mat2K.reversal(F)
    return m


def act_and_reduce(m: Mat2K, e: EdgeCoord, level: Level) -> EdgeCoord:
    """Class of m·x for x any edge in the class ``e``."""
    return reduce_edge(m @ edge_matrix(e, level), level)


def tail_edge(F: FiniteField, r: int, u: RationalFn) -> Mat2K:
    """(π∞^r, u; 0, 1), the edges on which Fourier coefficients are read."""
    one, zero = Poly.one(F), Poly.zero(F)
    return Mat2K(pi_power(F, r), u, RationalFn(zero), RationalFn(one))
