"""Traces of Frobenius a_p of elliptic curves over F_q(θ) and the isogeny test.

Curves are long Weierstrass models y² + a1·xy + a3·y = x³ + a2·x² + a4·x + a6.
The conductor and the reduction type at bad primes are inputs; nothing here runs
Tate's algorithm.
"""

from __future__ import annotations

from dataclasses import dataclass, field
import logging
from pathlib import Path
from typing import Any

from .bounds import isogeny_bound
from .fields import GF, FiniteField
from .polynomials import (
    Poly,
    RationalFn,
    format_poly,
    format_rational,
    inverse_mod,
    is_irreducible,
    monic_irreducibles,
    parse_poly,
    parse_rational,
    powmod,
    enumerate_polys,
)
from .linalg import InvariantError
from .projective import Level
from .serialization import SCHEMA, read_json

_logger = logging.getLogger(__name__)

REDUCTION_TYPES = {"split": 1, "nonsplit": -1, "additive": 0}
VERDICTS = ("isogenous", "not_isogenous", "insufficient_data")


def _const(F: FiniteField, k: int) -> RationalFn:
    return RationalFn(Poly.constant(F, F.from_int(k)))


@dataclass(slots=True)
class CurveModel:
    """A Weierstrass model with its declared conductor n·∞ and bad-prime types."""

    q: int
    a: tuple[RationalFn, RationalFn, RationalFn, RationalFn, RationalFn]
    conductor: Poly
    bad: dict[Poly, str] = field(default_factory=dict)
    split_at_infinity: bool = True

    def validate(self) -> None:
        if len(self.a) != 5:
            raise ValueError(f"expected 5 Weierstrass coefficients, got {len(self.a)}")
        if self.conductor.is_zero() or not self.conductor.is_monic():
            raise ValueError(f"conductor must be monic, got {format_poly(self.conductor)}")
        for p, kind in self.bad.items():
            if kind not in REDUCTION_TYPES:
                raise ValueError(f"unknown reduction type {kind!r} at {format_poly(p)}")
            if not is_irreducible(p):
                raise ValueError(f"bad prime {format_poly(p)} is not irreducible")
        if self.discriminant().is_zero():
            raise ValueError("singular model: discriminant is zero")

    @property
    def field(self) -> FiniteField:
        return GF(self.q)

    def discriminant(self) -> RationalFn:
        F = self.field
        a1, a2, a3, a4, a6 = self.a
        k = lambda n: _const(F, n)  # noqa: E731
        b2 = a1 * a1 + k(4) * a2
        b4 = k(2) * a4 + a1 * a3
        b6 = a3 * a3 + k(4) * a6
        b8 = a1 * a1 * a6 + k(4) * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4
        return (
            -(b2 * b2 * b8)
            - k(8) * b4 * b4 * b4
            - k(27) * b6 * b6
            + k(9) * b2 * b4 * b6
        )

    @classmethod
    def from_json(cls, data: dict[str, Any]) -> "CurveModel":
        q = int(data["q"])
        F = GF(q)
        coeffs = data["a"]
        if len(coeffs) != 5:
            raise ValueError("field 'a' must list a1, a2, a3, a4, a6")
        curve = cls(
            q=q,
            a=tuple(parse_rational(F, str(c)) for c in coeffs),
            conductor=parse_poly(F, data["conductor"]),
            bad={parse_poly(F, b["p"]): b["type"] for b in data.get("bad", [])},
            split_at_infinity=bool(data.get("split_at_infinity", True)),
        )
        curve.validate()
        return curve

    @classmethod
    def load(cls, path: Path) -> "CurveModel":
        return cls.from_json(read_json(path))

    def to_json(self) -> dict[str, Any]:
        return {
            "schema": SCHEMA,
            "q": self.q,
            "a": [format_rational(c) for c in self.a],
            "conductor": format_poly(self.conductor),
            "bad": [{"p": format_poly(p), "type": t} for p, t in self.bad.items()],
            "split_at_infinity": self.split_at_infinity,
        }


# -- reduction modulo a prime ------------------------------------------------------


def _reduce(x: RationalFn, p: Poly) -> Poly | None:
    """x mod p in A/p, or ``None`` when p divides the denominator."""
    if (x.den % p).is_zero():
        return None
    return (x.num * inverse_mod(x.den, p)) % p


def _reduced_model(curve: CurveModel, p: Poly) -> tuple[Poly, ...] | None:
    out = []
    for c in curve.a:
        r = _reduce(c, p)
        if r is None:
            return None
        out.append(r)
    return tuple(out)


def _absolute_trace(w: Poly, p: Poly, k: int) -> Poly:
    """Tr_{A/p → F_2}(w) for a field A/p of 2^k elements."""
    total = Poly.zero(w.field)
    x = w
    for _ in range(k):
        total = (total + x) % p
        x = (x * x) % p
    return total


def _residue_field_bits(F: FiniteField, p: Poly) -> int:
    return F.e * p.degree


def _solutions(h: Poly, g: Poly, p: Poly, Q: int, F: FiniteField) -> int:
    """#{y ∈ A/p : y² + h·y = g}."""
    if F.p != 2:
        four = Poly.constant(F, F.from_int(4))
        disc = (h * h + four * g) % p
        if disc.is_zero():
            return 1
        chi = powmod(disc, (Q - 1) // 2, p)
        return 2 if chi == Poly.one(F) else 0
    if h.is_zero():
        return 1
    w = (g * inverse_mod((h * h) % p, p)) % p
    return 2 if _absolute_trace(w, p, _residue_field_bits(F, p)).is_zero() else 0


def count_points(coeffs: tuple[Poly, ...], p: Poly) -> int:
    """#Ē(A/p) by running over x and counting y with a quadratic-solvability test."""
    a1, a2, a3, a4, a6 = coeffs
    F = p.field
    Q = F.q**p.degree
    total = 1
    for x in enumerate_polys(F, p.degree - 1):
        h = (a1 * x + a3) % p
        g = (x * x * x + a2 * x * x + a4 * x + a6) % p
        total += _solutions(h, g, p, Q, F)
    return total


def count_points_naive(coeffs: tuple[Poly, ...], p: Poly) -> int:
    """#Ē(A/p) over the full (x, y)-plane."""
    a1, a2, a3, a4, a6 = coeffs
    F = p.field
    residues = list(enumerate_polys(F, p.degree - 1))
    total = 1
    for x in residues:
        rhs = (x * x * x + a2 * x * x + a4 * x + a6) % p
        for y in residues:
            if ((y * y + a1 * x * y + a3 * y) % p) == rhs:
                total += 1
    return total


def ap_at_prime(curve: CurveModel, p: Poly) -> int:
    """a_p = |p| + 1 - #Ē(A/p) at good primes; 1, -1 or 0 at bad ones by declared type."""
    if not p.is_monic() or not is_irreducible(p):
        raise ValueError(f"{format_poly(p)} is not a monic prime")
    if p in curve.bad:
        return REDUCTION_TYPES[curve.bad[p]]
    if p.divides(curve.conductor):
        raise ValueError(f"{format_poly(p)} divides the conductor but has no declared reduction type")
    reduced = _reduced_model(curve, p)
    if reduced is None:
        raise ValueError(f"model is not integral at {format_poly(p)}")
    disc = _reduce(curve.discriminant(), p)
    if disc is None or disc.is_zero():
        raise ValueError(f"bad reduction at {format_poly(p)} without a declared reduction type")
    Q = curve.q**p.degree
    ap = Q + 1 - count_points(reduced, p)
    if ap * ap > 4 * Q:
        raise InvariantError(f"a_p = {ap} at {format_poly(p)} violates the Hasse bound")
    return ap


@dataclass(slots=True)
class APTable:
    """a_p for every monic prime p with deg p <= ``bound``."""

    q: int
    conductor: Poly
    bound: int
    entries: dict[Poly, int]
    bad: dict[Poly, str] = field(default_factory=dict)

    def __getitem__(self, p: Poly) -> int:
        if p not in self.entries:
            raise KeyError(f"no a_p recorded for {format_poly(p)}")
        return self.entries[p]

    def to_json(self) -> dict[str, Any]:
        return {
            "schema": SCHEMA,
            "q": self.q,
            "conductor": format_poly(self.conductor),
            "bound": self.bound,
            "entries": [{"p": format_poly(p), "ap": ap} for p, ap in self.entries.items()],
            "bad": [{"p": format_poly(p), "type": t} for p, t in self.bad.items()],
        }

    @classmethod
    def from_json(cls, data: dict[str, Any]) -> "APTable":
        q = int(data["q"])
        F = GF(q)
        entries = {parse_poly(F, e["p"]): int(e["ap"]) for e in data.get("entries", [])}
        bad = {parse_poly(F, b["p"]): b["type"] for b in data.get("bad", [])}
        for p, kind in bad.items():
            if kind not in REDUCTION_TYPES:
                raise ValueError(f"unknown reduction type {kind!r} at {format_poly(p)}")
            entries.setdefault(p, REDUCTION_TYPES[kind])
        bound = data.get("bound")
        if bound is None:
            bound = _complete_degree(F, entries)
        return cls(q, parse_poly(F, data["conductor"]), int(bound), entries, bad)

    @classmethod
    def load(cls, path: Path) -> "APTable":
        return cls.from_json(read_json(path))


def _complete_degree(F: FiniteField, entries: dict[Poly, int]) -> int:
    """Largest D such that every monic prime of degree <= D has an entry."""
    top = max((p.degree for p in entries), default=0)
    primes = monic_irreducibles(F, top)
    D = 0
    for deg in range(1, top + 1):
        if all(p in entries for p in primes if p.degree == deg):
            D = deg
        else:
            break
    return D


def ap_table(curve: CurveModel, max_deg: int) -> APTable:
    F = curve.field
    entries = {}
    for p in monic_irreducibles(F, max_deg):
        entries[p] = ap_at_prime(curve, p)
    _logger.info("a_p table for q=%d up to degree %d: %d primes", curve.q, max_deg, len(entries))
    return APTable(curve.q, curve.conductor, max_deg, entries, dict(curve.bad))


def check_isogenous(t1: APTable, t2: APTable, level: Level | None = None) -> str:
    """Compare a_p up to the isogeny bound of the common conductor.

    A disagreement inside the range both tables cover is conclusive even when the
    tables are too short for the bound.
    """
    if t1.q != t2.q or t1.conductor != t2.conductor:
        raise ValueError(
            f"conductor mismatch: {format_poly(t1.conductor)} (q={t1.q}) vs "
            f"{format_poly(t2.conductor)} (q={t2.q})"
        )
    level = level or Level(t1.conductor)
    if level.n != t1.conductor:
        raise ValueError(f"level {level} differs from the tables' conductor {format_poly(t1.conductor)}")
    required = isogeny_bound(level)
    common = min(t1.bound, t2.bound, max(required, 0))
    for p in monic_irreducibles(GF(t1.q), common):
        if t1[p] != t2[p]:
            _logger.info("a_p differs at %s: %d vs %d", format_poly(p), t1[p], t2[p])
            return "not_isogenous"
    if min(t1.bound, t2.bound) < required:
        return "insufficient_data"
    return "isogenous"
