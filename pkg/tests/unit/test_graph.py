from __future__ import annotations

import pytest

from ffsturm.fields import GF
from ffsturm.graph import build_graph, pruned_subgraph
from ffsturm.polynomials import monic_polys
from ffsturm.projective import Level
from ffsturm.serialization import SCHEMA


def graph(q: int, text: str):
    return build_graph(Level.parse(q, text))


@pytest.mark.parametrize(
    "q,text,genus",
    [
        (2, "1 + T + T^3", 2),
        (2, "1 + T + T^4", 4),
        (3, "1 + 2*T + T^3", 3),
    ],
)
def test_genus_of_prime_levels(q: int, text: str, genus: int) -> None:
    assert graph(q, text).genus() == genus


@pytest.mark.parametrize("q", [2, 3])
def test_small_degree_levels_have_genus_zero(q: int) -> None:
    F = GF(q)
    for deg in range(3):
        for n in monic_polys(F, deg):
            assert build_graph(Level(n)).genus() == 0


def test_trivial_level():
    g = graph(3, "1")
    assert len(g.vertices) == 1
    assert g.undirected_count == 0
    assert len(g.cusps) == 1


@pytest.mark.parametrize("q,text", [(2, "1 + T + T^3"), (2, "T^4"), (3, "T^2 + 1"), (2, "T + T^3")])
def test_every_vertex_has_q_plus_one_neighbours(q: int, text: str) -> None:
    g = graph(q, text)
    for v in range(len(g.vertices)):
        assert len(g.out_edges(v)) == q + 1


@pytest.mark.parametrize("q,text", [(2, "1 + T + T^3"), (3, "T^2 + 1")])
def test_edges_pair_with_their_reverse(q: int, text: str) -> None:
    g = graph(q, text)
    for e in g.edges:
        rev = g.edges[e.reverse]
        assert rev.reverse == e.id
        assert (rev.origin, rev.terminus) == (e.terminus, e.origin)


def test_classification_of_opposite_edges():
    g = graph(2, "1 + T + T^3")
    for k in range(g.undirected_count):
        e = g.edge_rep(k)
        ec, rc = g.classify(e), g.classify(e.opposite())
        assert (ec.index, ec.sign) == (k, 1)
        assert (rc.index, rc.sign) == (k, -1)


def test_json_dump():
    g = graph(2, "1 + T + T^3")
    data = g.to_json()
    assert data["schema"] == SCHEMA
    assert data["level"] == "1 + T + T^3"
    assert len(data["edges"]) == 2 * g.undirected_count
    assert len(data["cusps"]) == 2
    assert data["genus"] == 2


@pytest.mark.parametrize("q,text", [(2, "1 + T + T^3"), (2, "T^2 + T^4"), (3, "1 + 2*T + T^3")])
def test_pruned_subgraph_is_acyclic_at_the_coarse_bound(q: int, text: str) -> None:
    g = graph(q, text)
    deg = g.level.degree
    assert pruned_subgraph(g, 0).cycle_rank() <= g.genus()
    assert pruned_subgraph(g, 2 * deg - 4).cycle_rank() == 0


def test_pruned_subgraph_rejects_negative_ell():
    with pytest.raises(ValueError):
        pruned_subgraph(graph(2, "T^3"), -1)
