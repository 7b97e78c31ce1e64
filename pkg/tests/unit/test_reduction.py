from __future__ import annotations

import pytest

from ffsturm.fields import GF
from ffsturm.graph import build_graph
from ffsturm.polynomials import LaurentTail, Poly, RationalFn
from ffsturm.projective import Level, ProjPoint
from ffsturm.reduction import (
    EdgeCoord,
    Mat2K,
    act_and_reduce,
    edge_matrix,
    in_gl2_oinf_orbit,
    reduce_edge,
    tail_edge,
    weil_decompose,
)


def origin(level: Level) -> ProjPoint:
    F = level.field
    return ProjPoint(Poly.zero(F), Poly.one(F))


@pytest.mark.parametrize("r", [0, 1, 2, 5])
def test_standard_edges(r: int) -> None:
    lv = Level.parse(2, "1 + T + T^3")
    F = lv.field
    g = Mat2K.diag_theta(F, r)
    assert reduce_edge(g, lv) == EdgeCoord(origin(lv), r, 1)
    assert reduce_edge(g @ Mat2K.reversal(F), lv) == EdgeCoord(origin(lv), r, -1)
    assert weil_decompose(g)[1] == r


@pytest.mark.parametrize("q,text", [(2, "1 + T + T^3"), (3, "T^2 + 1"), (2, "T^4"), (2, "T + T^2 + T^3")])
def test_edge_matrix_round_trip(q: int, text: str) -> None:
    lv = Level.parse(q, text)
    g = build_graph(lv)
    for k in range(g.undirected_count):
        e = g.edge_rep(k)
        assert reduce_edge(edge_matrix(e, lv), lv) == e
        assert reduce_edge(edge_matrix(e.opposite(), lv), lv) == e.opposite()


@pytest.mark.parametrize("q,text", [(2, "1 + T + T^3"), (3, "T^2 + 1")])
def test_reduction_is_gamma0_invariant(q: int, text: str) -> None:
    lv = Level.parse(q, text)
    F = lv.field
    one, zero, theta = Poly.one(F), Poly.zero(F), Poly.theta(F)
    gammas = [
        Mat2K.of(one, theta, zero, one),
        Mat2K.of(one, zero, lv.n, one),
    ]
    gammas.append(gammas[0] @ gammas[1] @ gammas[0])
    edges = []
    for r in (2, 3, 4):
        for digits in [(1,) * (r - 1), tuple(range(r - 1)), (0,) * (r - 1)]:
            digits = tuple(x % q for x in digits)
            edges.append(tail_edge(F, r, LaurentTail(F, 1, digits).to_rational()))
    for g in edges:
        base = reduce_edge(g, lv)
        for gamma in gammas:
            assert gamma.det() == Mat2K.identity(F).det()
            assert reduce_edge(gamma @ g, lv) == base


def test_gl2_oinf_orbit():
    F = GF(3)
    assert in_gl2_oinf_orbit(Mat2K.identity(F))
    one, zero, theta = Poly.one(F), Poly.zero(F), Poly.theta(F)
    pi = RationalFn(one, theta)
    assert in_gl2_oinf_orbit(Mat2K.of(one, pi, zero, one))
    assert in_gl2_oinf_orbit(Mat2K.of(theta, one, zero, theta))
    assert not in_gl2_oinf_orbit(Mat2K.diag_theta(F, 1))


def test_singular_matrix_rejected():
    F = GF(2)
    zero = Poly.zero(F)
    with pytest.raises(ValueError):
        reduce_edge(Mat2K.of(zero, zero, zero, zero), Level.parse(2, "T"))


def test_act_and_reduce_fixes_classes_under_gamma0():
    lv = Level.parse(2, "T + T^2 + T^3")
    F = lv.field
    one, zero, theta = Poly.one(F), Poly.zero(F), Poly.theta(F)
    gamma = Mat2K.of(one, theta, zero, one) @ Mat2K.of(one, zero, lv.n, one)
    g = build_graph(lv)
    for k in range(g.undirected_count):
        e = g.edge_rep(k)
        assert act_and_reduce(gamma, e, lv) == e
