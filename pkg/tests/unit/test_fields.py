from __future__ import annotations

import pytest

from ffsturm.fields import GF, FqElem, format_coeff, parse_coeff, prime_power


@pytest.mark.parametrize("q,expected", [(2, (2, 1)), (4, (2, 2)), (8, (2, 3)), (9, (3, 2)), (7, (7, 1))])
def test_prime_power(q: int, expected: tuple[int, int]) -> None:
    assert prime_power(q) == expected


@pytest.mark.parametrize("q", [0, 1, 6, 10, 12])
def test_prime_power_rejects(q: int) -> None:
    with pytest.raises(ValueError):
        prime_power(q)


def test_gf_rejects_large_q():
    with pytest.raises(ValueError):
        GF(11)
    with pytest.raises(ValueError):
        GF(16)


def test_gf_is_cached():
    assert GF(4) is GF(4)


@pytest.mark.parametrize("q", [2, 3, 4, 5, 7, 8, 9])
def test_field_axioms(q: int) -> None:
    F = GF(q)
    for a in F.elements:
        assert F.add[a][0] == a
        assert F.mul[a][1] == a
        assert F.add[a][F.neg[a]] == 0
        if a:
            assert F.mul[a][F.inv[a]] == 1
        for b in F.elements:
            assert F.add[a][b] == F.add[b][a]
            assert F.mul[a][b] == F.mul[b][a]
            for c in F.elements:
                assert F.mul[a][F.add[b][c]] == F.add[F.mul[a][b]][F.mul[a][c]]


@pytest.mark.parametrize("q", [2, 3, 4, 5, 7, 8, 9])
def test_generator_is_primitive(q: int) -> None:
    F = GF(q)
    powers = {F.gen_power(k) for k in range(q - 1)}
    assert powers == set(F.units)


@pytest.mark.parametrize("q", [4, 8, 9])
def test_trace_is_balanced(q: int) -> None:
    F = GF(q)
    traces = [F.trace(a) for a in F.elements]
    assert all(t < F.p for t in traces)
    assert traces.count(0) == q // F.p


@pytest.mark.parametrize("q", [3, 4, 8, 9])
def test_coeff_text_round_trip(q: int) -> None:
    F = GF(q)
    for a in F.elements:
        assert parse_coeff(F, format_coeff(F, a)) == a


def test_prime_field_reads_integers_mod_p():
    F = GF(9)
    assert F.from_int(3) == 0
    assert F.from_int(4) == 1


def test_fq_elem_operators():
    F = GF(5)
    a = FqElem(F, 2)
    assert a + 3 == 0
    assert a * 3 == 1
    assert (a / a) == 1
    assert a ** 4 == 1
    with pytest.raises(ValueError):
        FqElem(F, 5)
