from __future__ import annotations

from fractions import Fraction

import pytest

from ffsturm.fields import GF
from ffsturm.polynomials import (
    LaurentTail,
    Poly,
    RationalFn,
    bezout,
    crt,
    enumerate_polys,
    factorize,
    format_poly,
    format_rational,
    gcd,
    inverse_mod,
    is_irreducible,
    monic_divisors,
    monic_irreducibles,
    monic_polys,
    parse_poly,
    parse_rational,
    squarefree_decomposition,
)


def P(q: int, *coeffs: int) -> Poly:
    return Poly(GF(q), coeffs)


def test_gcd_and_bezout_small_example():
    # (θ² + 1, θ) over F_3
    a, b = P(3, 1, 0, 1), P(3, 0, 1)
    g, s, t = bezout(a, b)
    assert g == Poly.one(GF(3))
    assert s * a + t * b == g
    assert gcd(a, b) == g


@pytest.mark.parametrize("q", [2, 3, 4])
def test_bezout_identity_exhaustive(q: int) -> None:
    F = GF(q)
    polys = list(enumerate_polys(F, 2))
    for a in polys:
        for b in polys:
            if a.is_zero() and b.is_zero():
                continue
            g, s, t = bezout(a, b)
            assert s * a + t * b == g
            assert g.is_monic()
            assert g.divides(a) and g.divides(b)


def test_bezout_rejects_two_zeros() -> None:
    F = GF(3)
    with pytest.raises(ValueError):
        bezout(Poly.zero(F), Poly.zero(F))
    g, s, t = bezout(Poly.zero(F), P(3, 0, 2))
    assert g == Poly.theta(F)
    assert t * P(3, 0, 2) == g


@pytest.mark.parametrize("q,counts", [(2, [2, 1, 2, 3]), (3, [3, 3, 8]), (4, [4, 6])])
def test_irreducible_counts(q: int, counts: list[int]) -> None:
    F = GF(q)
    primes = monic_irreducibles(F, len(counts))
    for d, expected in enumerate(counts, start=1):
        assert sum(1 for p in primes if p.degree == d) == expected


@pytest.mark.parametrize("q", [2, 3])
def test_irreducible_matches_trial_division(q: int) -> None:
    F = GF(q)
    for f in monic_polys(F, 4):
        has_factor = any(g.divides(f) for d in (1, 2) for g in monic_polys(F, d))
        assert is_irreducible(f) == (not has_factor)


@pytest.mark.parametrize("q", [2, 3])
def test_factorize_reconstructs(q: int) -> None:
    F = GF(q)
    for f in monic_polys(F, 4):
        acc = Poly.one(F)
        for p, e in factorize(f):
            assert is_irreducible(p) and p.is_monic()
            acc = acc * p**e
        assert acc == f


def _factor_by_trial_division(f: Poly) -> list[tuple[Poly, int]]:
    out = []
    rest = f.monic()
    for p in monic_irreducibles(f.field, f.degree):
        if rest.degree < 1:
            break
        e = 0
        while p.divides(rest):
            rest = rest // p
            e += 1
        if e:
            out.append((p, e))
    return out


@pytest.mark.parametrize("q,deg", [(2, 8), (3, 5), (4, 4), (5, 3), (9, 2)])
def test_factorize_matches_trial_division(q: int, deg: int) -> None:
    F = GF(q)
    for d in range(1, deg + 1):
        for f in monic_polys(F, d):
            assert factorize(f) == _factor_by_trial_division(f), format_poly(f)


def test_factorize_drops_the_unit_and_handles_pth_powers() -> None:
    F = GF(3)
    a, b = P(3, 0, 1), P(3, 1, 0, 1)  # θ, θ² + 1
    f = (a**3 * b**2).scale(2)
    assert factorize(f) == [(a, 3), (b, 2)]
    assert factorize(b**6) == [(b, 6)]
    with pytest.raises(ValueError):
        factorize(Poly.zero(F))


@pytest.mark.parametrize("q", [4, 8, 9])
def test_squarefree_decomposition_extracts_pth_roots(q: int) -> None:
    F = GF(q)
    g = F.generator
    lin = Poly(F, (g, 1))  # θ + g
    other = Poly(F, (1, 1))  # θ + 1
    f = lin ** F.p * other
    parts = squarefree_decomposition(f)
    assert sorted(parts, key=lambda pe: pe[1]) == [(other, 1), (lin, F.p)]


def test_monic_divisors_count():
    F = GF(2)
    n = P(2, 0, 0, 1) * P(2, 1, 1)  # θ²(θ + 1)
    assert len(monic_divisors(n)) == 6
    assert all(d.divides(n) for d in monic_divisors(n))


def test_inverse_mod():
    F = GF(3)
    m = P(3, 1, 0, 1)
    for a in enumerate_polys(F, 1):
        if a.is_zero():
            continue
        assert (a * inverse_mod(a, m)) % m == Poly.one(F)
    with pytest.raises(ValueError):
        inverse_mod(P(3, 0, 1), P(3, 0, 0, 1))


def test_crt():
    x = crt([P(2, 1), P(2)], [P(2, 0, 1), P(2, 1, 1)])
    assert x == P(2, 1, 1)


def test_text_format():
    F = GF(2)
    f = parse_poly(F, "1 + T + T^3")
    assert f == P(2, 1, 1, 0, 1)
    assert parse_poly(F, "1,1,0,1") == f
    assert parse_poly(F, format_poly(f)) == f
    assert format_poly(Poly.zero(F)) == "0"


def test_text_format_prime_power_field():
    F = GF(4)
    g = F.generator
    f = Poly(F, (F.mul[g][g], g, 1))
    assert parse_poly(F, format_poly(f)) == f
    assert "g" in format_poly(f)


@pytest.mark.parametrize("text", ["", "T^x", "1 + + T", "2T"])
def test_malformed_text(text: str) -> None:
    with pytest.raises(ValueError):
        parse_poly(GF(3), text)


def test_compose_affine():
    assert P(2, 0, 0, 1).compose_affine(1, 1) == P(2, 1, 0, 1)


def test_rational_functions():
    F = GF(3)
    x = RationalFn(Poly.one(F), P(3, 0, 1))
    assert x.valuation() == 1
    assert RationalFn(P(3, 0, 0, 1)).abs_value() == Fraction(9)
    poly, frac = RationalFn(P(3, 1, 1, 1), P(3, 0, 1)).split()
    assert poly == P(3, 1, 1)
    assert frac == x
    assert x * RationalFn(P(3, 0, 1)) == RationalFn(Poly.one(F))
    y = parse_rational(F, format_rational(RationalFn(P(3, 1, 1), P(3, 0, 0, 1))))
    assert y == RationalFn(P(3, 1, 1), P(3, 0, 0, 1))
    with pytest.raises(ValueError):
        parse_rational(F, "1 / 0")


def test_laurent_expansion():
    F = GF(3)
    # 1/(θ - 1) = π∞ + π∞² + π∞³ + ...
    x = RationalFn(Poly.one(F), P(3, 2, 1))
    assert LaurentTail.from_rational(x, 1, 3).coeffs == (1, 1, 1)
    tail = LaurentTail(F, 1, (1, 0, 1))
    assert tail.to_rational() == RationalFn(P(3, 1, 0, 1), P(3, 0, 0, 0, 1))
