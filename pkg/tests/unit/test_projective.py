from __future__ import annotations

import pytest

from ffsturm.fields import GF
from ffsturm.polynomials import Poly, enumerate_polys, gcd, parse_poly
from ffsturm.projective import (
    Level,
    ProjPoint,
    canonicalize,
    cusps,
    enumerate_proj_line,
    gamma_infinity_order,
    index_kappa,
    kappa_formula,
    lift_to_gamma,
    stabilizer_order,
    width,
)

LEVELS = [
    (2, "1"),
    (2, "T"),
    (2, "T^2"),
    (2, "T + T^2"),
    (2, "1 + T + T^3"),
    (2, "T^4"),
    (2, "T + T^2 + T^3 + T^4"),
    (3, "T^2 + 1"),
    (3, "T^3"),
    (3, "T + T^2"),
    (4, "T^2"),
]


def level(q: int, text: str) -> Level:
    return Level.parse(q, text)


@pytest.mark.parametrize("q,text", LEVELS)
def test_index_matches_closed_form(q: int, text: str) -> None:
    lv = level(q, text)
    assert index_kappa(lv) == kappa_formula(lv)


def test_level_must_be_monic_and_nonzero():
    F = GF(3)
    with pytest.raises(ValueError):
        Level(Poly(F, (1, 2)))
    with pytest.raises(ValueError):
        Level(Poly.zero(F))


def test_canonical_form_is_unit_invariant():
    lv = level(3, "T^2 + 1")
    F = lv.field
    for c in enumerate_polys(F, 1):
        for d in enumerate_polys(F, 1):
            if gcd(gcd(c, d), lv.n).degree != 0:
                continue
            pt = canonicalize(c, d, lv)
            assert canonicalize(c.scale(2), d.scale(2), lv) == pt
            assert canonicalize(c + d * lv.n, d, lv) == pt


def test_non_unimodular_point_rejected():
    lv = level(2, "T^2")
    F = lv.field
    with pytest.raises(ValueError):
        canonicalize(Poly.theta(F), Poly.zero(F), lv)


@pytest.mark.parametrize("q,text", LEVELS)
def test_lift_to_gamma(q: int, text: str) -> None:
    lv = level(q, text)
    one = Poly.one(lv.field)
    for pt in lv.proj_line.points:
        a, b, c, d = lift_to_gamma(pt, lv)
        assert a * d - b * c == one
        assert canonicalize(c, d, lv) == pt


@pytest.mark.parametrize("q,text", LEVELS)
def test_first_cusp_is_zero_one(q: int, text: str) -> None:
    lv = level(q, text)
    F = lv.field
    assert cusps(lv)[0].rep == ProjPoint(Poly.zero(F), Poly.one(F))


@pytest.mark.parametrize("q,text", [(2, "1 + T + T^3"), (3, "T^2 + 1"), (2, "T")])
def test_prime_levels_have_two_cusps(q: int, text: str) -> None:
    assert len(cusps(level(q, text))) == 2


def test_trivial_level_has_one_cusp():
    assert len(cusps(level(3, "1"))) == 1


@pytest.mark.parametrize("q,text,r", [(2, "T^2", 0), (2, "T^3", 1), (3, "T^2", 1), (2, "T + T^2 + T^3", 1)])
def test_stabilizer_orders_by_enumeration(q: int, text: str, r: int) -> None:
    lv = level(q, text)
    F = lv.field
    line = lv.proj_line
    zero = Poly.zero(F)
    group = [
        (Poly.constant(F, a), b, zero, Poly.constant(F, d))
        for a in F.units
        for d in F.units
        for b in enumerate_polys(F, r)
    ]
    assert len(group) == gamma_infinity_order(q, r)
    for i, pt in enumerate(line.points):
        fixed = sum(1 for m in group if line.act(i, m) == i)
        assert stabilizer_order(pt, r, lv, "edge") == fixed


def test_stabilizer_rejects_bad_kind():
    lv = level(2, "T^2")
    with pytest.raises(ValueError):
        stabilizer_order(lv.proj_line.points[0], 0, lv, "face")


@pytest.mark.parametrize("q,text", [(2, "T^3"), (3, "T + T^2"), (2, "1 + T + T^3")])
def test_proj_line_size_and_widths(q: int, text: str) -> None:
    lv = Level.parse(q, text)
    points = enumerate_proj_line(lv)
    assert len(points) == index_kappa(lv)
    for pt in points:
        w = width(pt, lv)
        assert w.is_monic() and w.divides(lv.n)
    F = lv.field
    assert width(ProjPoint(Poly.one(F), Poly.zero(F)), lv) == lv.n
    assert width(ProjPoint(Poly.zero(F), Poly.one(F)), lv) == Poly.one(F)
