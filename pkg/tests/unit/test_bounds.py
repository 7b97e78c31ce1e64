from __future__ import annotations

import random
import time

import pytest

from ffsturm.bounds import (
    TTableEntry,
    _t_direct,
    b_prime,
    b_true,
    bounds,
    canonical_planes,
    delta_eps,
    echelon,
    ell_of_level,
    isogeny_bound,
    t_cdm,
    t_exceeds,
    t_mn,
    t_of_level,
    t_row,
    tau,
)
from ffsturm.fields import GF
from ffsturm.polynomials import Poly, enumerate_polys, gcd, monic_polys, parse_poly
from ffsturm.projective import Level


def random_coprime_pairs(q: int, deg_c: int, deg_d: int, count: int, seed: int) -> list[tuple[Poly, Poly]]:
    F = GF(q)
    rng = random.Random(seed)
    cs = [p for p in enumerate_polys(F, deg_c) if p.degree == deg_c]
    ds = [p for p in enumerate_polys(F, deg_d) if p.degree >= 0]
    out = []
    while len(out) < count:
        c, d = rng.choice(cs), rng.choice(ds)
        if gcd(c, d).degree == 0:
            out.append((c, d))
    return out


def max_over_degree(q: int, deg: int, func) -> int:
    return max(func(Level(n)) for n in monic_polys(GF(q), deg))


# -- δ, ε, ℓ ----------------------------------------------------------------------


def test_delta_eps_at_the_two_basic_points():
    lv = Level.parse(2, "1 + T + T^3")
    F = lv.field
    zero, one = Poly.zero(F), Poly.one(F)
    assert delta_eps(one, zero, lv) == (0, 0)
    assert delta_eps(zero, one, lv) == (0, 1)


def test_delta_eps_needs_a_coprime_pair():
    lv = Level.parse(2, "1 + T + T^3")
    F = lv.field
    with pytest.raises(ValueError):
        delta_eps(parse_poly(F, "T"), parse_poly(F, "T^2"), lv)


@pytest.mark.parametrize("q,text", [(2, "T^4"), (2, "T + T^2 + T^3 + T^4"), (3, "T^3")])
def test_ell_is_small(q: int, text: str) -> None:
    lv = Level.parse(q, text)
    ell = ell_of_level(lv)
    assert 1 <= ell <= 2 * tau(lv) + 1


# -- t(c, d; m) -------------------------------------------------------------------


@pytest.mark.parametrize(
    "q,m,deg_c,deg_d",
    [(2, 1, 3, 1), (2, 1, 4, 2), (2, 2, 4, 3), (3, 1, 3, 2), (2, 1, 2, 1)],
)
def test_t_cdm_agrees_with_direct_gcds(q: int, m: int, deg_c: int, deg_d: int) -> None:
    for c, d in random_coprime_pairs(q, deg_c, deg_d, 4, seed=q * 100 + m * 10 + deg_c):
        assert t_cdm(c, d, m) == _t_direct(c, d, m)


def test_t_cdm_depends_only_on_the_plane():
    F = GF(3)
    c, d = parse_poly(F, "1 + T^3"), parse_poly(F, "2 + T")
    expected = t_cdm(c, d, 1)
    assert t_cdm(d, c, 1) == expected
    assert t_cdm(c + d, d.scale(2), 1) == expected
    assert t_cdm(c.compose_affine(2, 1), d.compose_affine(2, 1), 1) == expected


def test_t_cdm_rejects_bad_arguments():
    F = GF(2)
    with pytest.raises(ValueError):
        t_cdm(parse_poly(F, "T"), parse_poly(F, "T^3"), 1)
    with pytest.raises(ValueError):
        t_cdm(parse_poly(F, "T"), parse_poly(F, "1"), -1)


def test_echelon_form():
    F = GF(3)
    hi, lo = echelon(parse_poly(F, "2*T^3 + T"), parse_poly(F, "1 + 2*T"))
    assert hi.is_monic() and lo.is_monic()
    assert hi.degree == 3 and lo.degree == 1
    assert hi.coeff(1) == 0
    assert echelon(parse_poly(F, "T"), parse_poly(F, "2*T")) is None


def test_canonical_planes_are_echelon_and_coprime():
    F = GF(2)
    planes = list(canonical_planes(F, 3))
    assert planes
    for c, d in planes:
        assert c.degree == 3 and d.degree < 3
        assert c.coeff(d.degree) == 0
        assert gcd(c, d).degree == 0


# -- t(m, n) ----------------------------------------------------------------------


@pytest.mark.parametrize("q", [2, 3])
def test_t_of_row_zero(q: int) -> None:
    for n in range(3, 6):
        assert t_mn(q, 0, n).value == q + 1


def test_t_row_binary_m1():
    row = t_row(2, 1, 8)
    assert [e.value for e in row[:4]] == [None] * 4
    assert [e.value for e in row[4:]] == [5] * 5
    assert all(e.status == "ok" for e in row)


def test_t_row_binary_m2():
    row = t_row(2, 2, 6, jobs=2)
    assert [e.value for e in row[5:]] == [11, 11]


def test_t_row_ternary_m1():
    assert [e.value for e in t_row(3, 1, 5)[4:]] == [12, 10]


def test_t_exceeds_matches_t_mn():
    value = t_mn(2, 2, 6).value
    assert t_exceeds(2, 2, 6, value - 1)
    assert not t_exceeds(2, 2, 6, value)
    assert t_exceeds(2, 2, 4, 10**6)


def test_table_entry_display():
    assert TTableEntry(2, 1, 3, None).display == "∞"
    assert TTableEntry(2, 1, 7, None, "timeout").display == "timeout"
    assert TTableEntry(2, 1, 7, 5).conjecture_ok is True
    assert TTableEntry(3, 2, 7, 9).conjecture_ok is False
    assert TTableEntry(2, 1, 2, None).conjecture_ok is None


# -- level bounds -----------------------------------------------------------------


def test_b_prime_of_a_product_of_three_primes():
    lv = Level.parse(2, "T + T^4")
    assert t_of_level(lv) == 3
    assert b_prime(lv) == 5


@pytest.mark.parametrize(
    "q,expected",
    [(2, [2, 5, 6, 7, 8, 9, 10, 13]), (3, [2, 3, 6, 7, 8])],
)
def test_b_prime_maxima(q: int, expected: list[int]) -> None:
    got = [max_over_degree(q, deg, b_prime) for deg in range(3, 3 + len(expected))]
    assert got == expected


@pytest.mark.parametrize("q,expected", [(2, [1, 3, 5]), (3, [1])])
def test_b_true_maxima(q: int, expected: list[int]) -> None:
    def value(lv: Level) -> int:
        return b_true(lv) or 0

    assert [max_over_degree(q, deg, value) for deg in range(3, 3 + len(expected))] == expected


def test_b_true_is_none_in_genus_zero():
    assert b_true(Level.parse(2, "T^2 + T")) is None
    assert b_true(Level.parse(3, "T^2 + 1")) is None


def test_b_true_honours_an_expired_deadline():
    level = Level.parse(2, "1 + T + T^4")
    with pytest.raises(TimeoutError):
        b_true(level, deadline=time.time() - 1.0)
    assert b_true(level, deadline=time.time() + 3600.0) == b_true(level)


@pytest.mark.parametrize("text", ["1 + T + T^3", "T^4", "T + T^4", "T^2 + T^4", "1 + T^2 + T^3 + T^4"])
def test_bounds_report_is_consistent(text: str) -> None:
    lv = Level.parse(2, text)
    report = bounds(lv, with_true=True)
    deg = lv.degree
    assert report.tau == tau(lv)
    assert report.ell <= 2 * report.tau + 1
    assert report.thm04 <= report.prop45
    assert report.thm04_new <= report.thm04
    assert report.coarse_cuspidal == 2 * deg - 4
    assert report.b_true is None or 0 <= report.b_true <= report.coarse_cuspidal


def test_prime_power_levels_use_the_short_bound():
    for text in ["1 + T + T^3", "T^4", "1 + T + T^2 + T^3 + T^4"]:
        lv = Level.parse(2, text)
        assert bounds(lv).thm04 == lv.degree - 2
        assert isogeny_bound(lv) == lv.degree - 2


def test_isogeny_bound_outside_the_special_shapes():
    lv = Level.parse(2, "T^2 + T^4")
    assert isogeny_bound(lv) == lv.degree - 2 + ell_of_level(lv)


def test_small_levels_are_trivial():
    data = bounds(Level.parse(3, "T^2 + 1"), with_true=True).to_json()
    assert data["trivial"] is True
    assert data["b_true"] == "trivial"
    assert data["schema"] == "ffsturm/1"
