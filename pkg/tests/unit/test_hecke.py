from __future__ import annotations

from fractions import Fraction

import pytest
import sympy

from ffsturm.bounds import b_true, bounds
from ffsturm.fields import GF
from ffsturm.harmonic import fourier, harmonic_space
from ffsturm.hecke import (
    atkin_lehner,
    atkin_lehner_matrix,
    degeneracy,
    hecke_T,
    hecke_terms,
    is_sturm_sound,
    new_subspace,
    operator_matrix,
    pairing_rank,
    petersson,
)
from ffsturm.polynomials import Poly, format_poly, gcd, monic_divisors, monic_polys, parse_poly
from ffsturm.projective import Level
from ffsturm.reduction import Mat2K
from ffsturm.tables import cmd_compare_bounds


def level(q: int, text: str) -> Level:
    return Level.parse(q, text)


def test_hecke_terms_for_degree_one_index():
    lv = level(2, "1 + T + T^3")
    m = parse_poly(lv.field, "T")
    assert len(hecke_terms(lv, m)) == lv.q + 1
    with pytest.raises(ValueError):
        hecke_terms(lv, parse_poly(lv.field, "0"))


def test_hecke_operators_commute():
    lv = level(2, "1 + T + T^3")
    sp = harmonic_space(lv)
    t1 = hecke_T(sp, parse_poly(lv.field, "T")).matrix
    t2 = hecke_T(sp, parse_poly(lv.field, "1 + T")).matrix
    assert t1 * t2 == t2 * t1


@pytest.mark.parametrize("kind", ["cuspidal", "full"])
def test_evaluation_methods_agree(kind: str) -> None:
    lv = level(2, "T + T^2 + T^3")
    sp = harmonic_space(lv, kind)
    m = parse_poly(lv.field, "1 + T + T^2")
    assert hecke_T(sp, m).matrix == hecke_T(sp, m, method="determining").matrix
    with pytest.raises(ValueError):
        hecke_T(sp, m, method="guess")


@pytest.mark.parametrize("q,text", [(2, "1 + T + T^3"), (3, "1 + 2*T + T^3"), (2, "T^4")])
def test_full_atkin_lehner_is_an_involution(q: int, text: str) -> None:
    lv = level(q, text)
    sp = harmonic_space(lv)
    w = atkin_lehner(sp, lv.n).matrix
    assert w * w == sympy.eye(sp.dim)


def test_atkin_lehner_needs_an_exact_divisor():
    lv = level(2, "T^4")
    with pytest.raises(ValueError):
        atkin_lehner(harmonic_space(lv), parse_poly(lv.field, "T^2"))
    with pytest.raises(ValueError):
        atkin_lehner(harmonic_space(lv), parse_poly(lv.field, "1 + T"))


@pytest.mark.parametrize("q,text", [(2, "T^4"), (2, "T + T^2 + T^3"), (2, "1 + T + T^3")])
def test_new_and_old_split_the_cuspidal_space(q: int, text: str) -> None:
    sp = harmonic_space(level(q, text))
    new = new_subspace(sp)
    assert new.dim + new.old_dim == sp.dim
    t = hecke_T(sp, parse_poly(sp.level.field, "1 + T"))
    assert new.restrict(t).matrix.shape == (new.dim, new.dim)


def test_prime_level_has_no_old_forms():
    sp = harmonic_space(level(2, "1 + T + T^3"))
    assert new_subspace(sp).old_dim == 0


def test_petersson_product():
    sp = harmonic_space(level(3, "1 + 2*T + T^3"))
    for f in sp.basis:
        assert petersson(f, f) > 0
    f, h = sp.basis[0], sp.basis[1]
    assert petersson(f, h) == petersson(h, f)
    with pytest.raises(ValueError):
        petersson(f, harmonic_space(level(3, "1 + 2*T + T^3"), "full").basis[0])


@pytest.mark.parametrize("q,text", [(2, "1 + T + T^3"), (2, "1 + T + T^4"), (3, "1 + 2*T + T^3")])
def test_proven_bounds_determine_cusp_forms(q: int, text: str) -> None:
    lv = level(q, text)
    sp = harmonic_space(lv)
    report = bounds(lv)
    assert pairing_rank(sp, report.thm04) == sp.dim
    assert is_sturm_sound(sp, b_true(lv))


def test_pairing_rank_edge_cases():
    sp = harmonic_space(level(2, "1 + T + T^3"))
    assert pairing_rank(sp, -1) == 0
    assert pairing_rank(sp, 3, []) == 0


def test_hecke_operators_are_multiplicative_on_coprime_indices():
    lv = level(2, "T + T^2 + T^4")
    sp = harmonic_space(lv)
    F = lv.field
    u = hecke_T(sp, parse_poly(F, "T")).matrix
    t = hecke_T(sp, parse_poly(F, "1 + T")).matrix
    assert u * t == hecke_T(sp, parse_poly(F, "T + T^2")).matrix


@pytest.mark.parametrize("q,text", [(2, "1 + T + T^3"), (3, "1 + 2*T + T^3")])
def test_atkin_lehner_is_minus_hecke_at_prime_level(q: int, text: str) -> None:
    lv = level(q, text)
    sp = harmonic_space(lv)
    u = hecke_T(sp, lv.n).matrix
    w = atkin_lehner(sp, lv.n).matrix
    assert u + w == sympy.zeros(sp.dim, sp.dim)


def _image(sp, matrix: sympy.Matrix, j: int):
    return sp.cochain([Fraction(int(x.p), int(x.q)) for x in matrix.col(j)])


def _exact_divisors(lv: Level) -> list[Poly]:
    n = lv.n
    return [m for m in monic_divisors(n) if gcd(m, n // m).degree == 0]


@pytest.mark.parametrize("text", ["1 + T + T^3", "T + T^2 + T^3", "T + T^2 + T^4"])
def test_first_coefficient_of_hecke_image_is_the_mth_coefficient(text: str) -> None:
    lv = level(2, text)
    sp = harmonic_space(lv)
    F = lv.field
    one = Poly.one(F)
    coeffs = [fourier(f, 2).coeffs for f in sp.basis]
    for d in range(3):
        for m in monic_polys(F, d):
            t = hecke_T(sp, m).matrix
            for j in range(sp.dim):
                assert fourier(_image(sp, t, j), 0).coeffs[one] == coeffs[j][m], format_poly(m)


@pytest.mark.parametrize(
    "q,text,p",
    [
        (2, "1 + T + T^3", "T"),
        (2, "1 + T + T^3", "1 + T + T^2"),
        (2, "T + T^2 + T^3", "T"),
        (2, "T + T^2 + T^3", "1 + T"),
        (3, "1 + 2*T + T^3", "T"),
    ],
)
def test_prime_power_recurrence(q: int, text: str, p: str) -> None:
    lv = level(q, text)
    sp = harmonic_space(lv)
    prime = parse_poly(lv.field, p)
    weight = 0 if prime.divides(lv.n) else q**prime.degree
    t1 = hecke_T(sp, prime).matrix
    t2 = hecke_T(sp, prime**2).matrix
    t3 = hecke_T(sp, prime**3).matrix
    assert t2 == t1 * t1 - weight * sympy.eye(sp.dim)
    assert t3 == t2 * t1 - weight * t1


@pytest.mark.parametrize("q,text", [(2, "T + T^4"), (2, "T^2 + T^3"), (2, "T + T^3 + T^4"), (3, "2*T + T^3")])
def test_every_atkin_lehner_involution_squares_to_one(q: int, text: str) -> None:
    lv = level(q, text)
    sp = harmonic_space(lv)
    for m in _exact_divisors(lv):
        w = atkin_lehner(sp, m).matrix
        assert w * w == sympy.eye(sp.dim), format_poly(m)


def test_atkin_lehner_does_not_depend_on_the_bezout_solution():
    lv = level(2, "T + T^4")
    sp = harmonic_space(lv)
    F = lv.field
    one, zero, theta = Poly.one(F), Poly.zero(F), Poly.theta(F)
    for m in _exact_divisors(lv):
        base = atkin_lehner(sp, m).matrix
        shifted = atkin_lehner_matrix(lv, m, shift=theta + one)
        assert operator_matrix(sp, [shifted]) == base
        moved = atkin_lehner_matrix(lv, m) @ Mat2K.of(one, theta, zero, one)
        assert operator_matrix(sp, [moved]) == base


def test_b_true_is_sharp_at_witness_levels():
    for row in cmd_compare_bounds(2, 3, 4):
        lv = level(2, row.witness)
        sp = harmonic_space(lv)
        assert pairing_rank(sp, row.b_true - 1) < sp.dim
        assert pairing_rank(sp, row.b_true) == sp.dim


def _square_free_levels(q: int, deg: int) -> list[Level]:
    F = GF(q)
    out = []
    for n in monic_polys(F, deg):
        lv = Level(n)
        if all(e == 1 for _, e in lv.factorization):
            out.append(lv)
    return out


def _assert_newforms_are_killed_by_t_plus_w(lv: Level) -> None:
    sp = harmonic_space(lv)
    new = new_subspace(sp)
    for p, _ in lv.factorization:
        total = hecke_T(sp, p).matrix + atkin_lehner(sp, p).matrix
        for c in new.coefficients:
            vec = sympy.Matrix([sympy.Rational(x.numerator, x.denominator) for x in c])
            assert total * vec == sympy.zeros(sp.dim, 1), f"{lv} at {format_poly(p)}"


@pytest.mark.parametrize("q", [2, 3])
def test_new_space_of_square_free_cubic_levels(q: int) -> None:
    for lv in _square_free_levels(q, 3):
        _assert_newforms_are_killed_by_t_plus_w(lv)
        new = new_subspace(harmonic_space(lv))
        assert pairing_rank(new.space, 1, new.basis) == new.dim


@pytest.mark.parametrize("text", ["T + T^4", "T + T^3 + T^4"])
def test_new_space_at_composite_levels_with_old_forms(text: str) -> None:
    lv = level(2, text)
    _assert_newforms_are_killed_by_t_plus_w(lv)
    sp = harmonic_space(lv)
    new = new_subspace(sp)
    assert new.dim + new.old_dim == sp.dim
    if text == "T + T^3 + T^4":
        assert new.old_dim > 0


def test_degeneracy_maps_compose():
    F = GF(2)
    source = harmonic_space(level(2, "1 + T + T^3"))
    middle = harmonic_space(level(2, "T + T^2 + T^4"))
    target = harmonic_space(level(2, "T^2 + T^3 + T^5"))
    theta = Poly.theta(F)
    for f in source.basis:
        once = degeneracy(f, middle, theta)
        assert degeneracy(once, target, theta).values == degeneracy(f, target, theta**2).values
        assert degeneracy(f, middle, Poly.one(F)).values != once.values


def test_degeneracy_needs_a_divisor():
    F = GF(2)
    source = harmonic_space(level(2, "1 + T + T^3"))
    target = harmonic_space(level(2, "T + T^2 + T^4"))
    with pytest.raises(ValueError):
        degeneracy(source.basis[0], target, Poly.theta(F) ** 2)
