"""The quotient graph Γ₀(n)\\T.

Vertex classes are GL₂(F_q)-orbits of P¹(A/n) at r = 0 and Γ∞^(r)-orbits at
1 <= r <= deg(width) - 1; edge classes are Γ∞^(r)-orbits at r <= deg(width) - 2.
Everything else lies on one of the cusp ends, which are half-lines attached at
level ℓ_s = max(0, deg(width) - 1).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product
import logging
from typing import Any

import networkx as nx

from .linalg import InvariantError
from .polynomials import LaurentTail, Poly, format_poly
from .projective import (
    Cusp,
    Level,
    ProjPoint,
    cusps,
    gamma_infinity_order,
    gl2_order,
)
from .reduction import EdgeCoord, reduce_edge, tail_edge
from .serialization import SCHEMA

_logger = logging.getLogger(__name__)


@dataclass(frozen=True, slots=True)
class QVertex:
    id: int
    r: int
    rep: ProjPoint
    stab_order: int


@dataclass(frozen=True, slots=True)
class QEdge:
    """Directed edge class. ``undirected`` pairs an edge with its reverse."""

    id: int
    undirected: int
    origin: int
    terminus: int
    reverse: int
    r: int
    rep: ProjPoint
    orient: int
    stab_order: int


@dataclass(frozen=True, slots=True)
class End:
    cusp: Cusp
    attach: int


@dataclass(frozen=True, slots=True)
class EdgeClass:
    """Where a tree edge lands: a finite undirected class (with sign) or a cusp end.

    For an end, ``index`` is the cusp index and ``depth`` counts edges beyond the
    attach vertex.
    """

    finite: bool
    index: int
    sign: int
    depth: int = 0


class QuotientGraph:
    """Finite part of Γ₀(n)\\T with its cusp ends."""

    def __init__(self, level: Level):
        self.level = level
        self.q = level.q
        self.line = level.proj_line
        self.cusps: list[Cusp] = cusps(level)
        self.vertices: list[QVertex] = []
        self.edges: list[QEdge] = []
        self.ends: list[End] = []
        self._vertex_of: dict[tuple[int, int], int] = {}
        self._edge_of: dict[tuple[int, int], int] = {}
        self._tail_cache: dict[int, list[EdgeClass]] = {}
        self._build()

    # -- construction ---------------------------------------------------------

    def _vertex_label(self, i: int, r: int) -> int:
        return self.line.gl2_labels[i] if r == 0 else self.line.orbit_label(i, r)

    def _build(self) -> None:
        line = self.line
        q = self.q
        points = line.points
        for label in sorted(set(line.gl2_labels)):
            self._add_vertex(0, label, gl2_order(q) // line.gl2_sizes[label])
        for r in range(1, self.level.degree):
            labels = sorted(
                {line.orbit_label(i, r) for i in range(len(points)) if line.width_degree[i] >= r + 1}
            )
            for label in labels:
                self._add_vertex(r, label, gamma_infinity_order(q, r) // line.orbit_size(label, r))
        for r in range(0, self.level.degree - 1):
            labels = sorted(
                {line.orbit_label(i, r) for i in range(len(points)) if line.width_degree[i] >= r + 2}
            )
            for label in labels:
                k = len(self._edge_of)
                self._edge_of[(r, label)] = k
                origin = self._vertex_of[(0, line.gl2_labels[label])] if r == 0 else self._vertex_of[(r, label)]
                terminus = self._vertex_of[(r + 1, line.orbit_label(label, r + 1))]
                stab = gamma_infinity_order(q, r) // line.orbit_size(label, r)
                pt = points[label]
                self.edges.append(QEdge(2 * k, k, origin, terminus, 2 * k + 1, r, pt, 1, stab))
                self.edges.append(QEdge(2 * k + 1, k, terminus, origin, 2 * k, r, pt, -1, stab))
        for cusp in self.cusps:
            label = line.index[cusp.rep.key]
            self.ends.append(End(cusp, self._vertex_of[(cusp.ell, self._vertex_label(label, cusp.ell))]))
        _logger.debug(
            "quotient graph for %s: %d vertices, %d edges, %d cusps",
            self.level,
            len(self.vertices),
            self.undirected_count,
            len(self.cusps),
        )

    def _add_vertex(self, r: int, label: int, stab: int) -> None:
        vid = len(self.vertices)
        self._vertex_of[(r, label)] = vid
        self.vertices.append(QVertex(vid, r, self.line.points[label], stab))

    # -- queries ----------------------------------------------------------------

    @property
    def undirected_count(self) -> int:
        return len(self._edge_of)

    def undirected_edges(self) -> list[QEdge]:
        """The +-oriented representative of each undirected class."""
        return self.edges[0::2]

    def classify(self, e: EdgeCoord) -> EdgeClass:
        line = self.line
        i = line.index[e.pt.key]
        if e.r <= line.width_degree[i] - 2:
            return EdgeClass(True, self._edge_of[(e.r, line.orbit_label(i, e.r))], e.orient)
        s = line.cusp_index(i)
        depth = e.r - self.cusps[s].ell
        if depth < 0:
            raise InvariantError(f"edge at r={e.r} lies below the end of cusp {s}")
        return EdgeClass(False, s, e.orient, depth)

    def directed_id(self, ec: EdgeClass) -> int:
        if not ec.finite:
            raise ValueError("end edges have no directed id in the finite part")
        return 2 * ec.index + (0 if ec.sign > 0 else 1)

    def out_edges(self, v: int) -> list[EdgeCoord]:
        """The q + 1 tree edges leaving a lift of vertex class ``v``."""
        vertex = self.vertices[v]
        line = self.line
        F = self.level.field
        one, zero = Poly.one(F), Poly.zero(F)
        i = line.index[vertex.rep.key]
        out: list[EdgeCoord] = []
        if vertex.r == 0:
            for eps in F.elements:
                j = line.act(i, (one, zero, Poly.constant(F, eps), one))
                out.append(EdgeCoord(line.points[j], 0, 1))
            j = line.act(i, (zero, one, one, zero))
            out.append(EdgeCoord(line.points[j], 0, 1))
            return out
        out.append(EdgeCoord(vertex.rep, vertex.r, 1))
        for eps in F.elements:
            j = line.act(i, (one, Poly.monomial(F, vertex.r, eps), zero, one))
            out.append(EdgeCoord(line.points[j], vertex.r - 1, -1))
        return out

    def edge_rep(self, k: int) -> EdgeCoord:
        edge = self.edges[2 * k]
        return EdgeCoord(edge.rep, edge.r, 1)

    def tail_classes(self, r: int) -> list[EdgeClass]:
        """Classes of (π∞^r, u; 0, 1) for u = u_1π∞ + .. + u_(r-1)π∞^(r-1).

        The list is indexed by the digits (u_1, .., u_(r-1)) in lexicographic order.
        """
        cached = self._tail_cache.get(r)
        if cached is not None:
            return cached
        F = self.level.field
        out = []
        for digits in product(F.elements, repeat=r - 1):
            u = LaurentTail(F, 1, tuple(digits)).to_rational()
            out.append(self.classify(reduce_edge(tail_edge(F, r, u), self.level)))
        self._tail_cache[r] = out
        return out

    # -- topology ---------------------------------------------------------------

    def to_networkx(self, keep: set[int] | None = None) -> nx.MultiGraph:
        """Undirected multigraph on vertex ids; ``keep`` restricts the edge classes."""
        g = nx.MultiGraph()
        g.add_nodes_from(range(len(self.vertices)))
        for edge in self.undirected_edges():
            if keep is None or edge.undirected in keep:
                g.add_edge(edge.origin, edge.terminus, key=edge.undirected)
        return g

    def genus(self) -> int:
        g = self.to_networkx()
        if not nx.is_connected(g):
            raise InvariantError(f"quotient graph of level {self.level} is disconnected")
        return cycle_rank(g)

    def to_json(self) -> dict[str, Any]:
        return {
            "schema": SCHEMA,
            "q": self.q,
            "level": format_poly(self.level.n),
            "vertices": [
                {"id": v.id, "r": v.r, "rep": [format_poly(v.rep.c), format_poly(v.rep.d)], "stab": v.stab_order}
                for v in self.vertices
            ],
            "edges": [
                {
                    "id": e.id,
                    "o": e.origin,
                    "t": e.terminus,
                    "rev": e.reverse,
                    "r": e.r,
                    "rep": [format_poly(e.rep.c), format_poly(e.rep.d)],
                    "orient": e.orient,
                    "stab": e.stab_order,
                }
                for e in self.edges
            ],
            "cusps": [
                {
                    "rep": [format_poly(end.cusp.rep.c), format_poly(end.cusp.rep.d)],
                    "attach": end.attach,
                    "ell": end.cusp.ell,
                }
                for end in self.ends
            ],
            "genus": self.genus(),
        }


def cycle_rank(g: nx.MultiGraph) -> int:
    """First Betti number E - V + (number of components)."""
    return g.number_of_edges() - g.number_of_nodes() + nx.number_connected_components(g)


@lru_cache(maxsize=128)
def build_graph(level: Level) -> QuotientGraph:
    return QuotientGraph(level)


def genus(g: QuotientGraph) -> int:
    return g.genus()


@dataclass(slots=True)
class PrunedSubgraph:
    """The quotient graph minus every edge class met by (π∞^(ℓ'+2), u; 0, 1), ℓ' <= ell."""

    graph: QuotientGraph
    ell: int
    removed: set[int] = field(default_factory=set)

    def cycle_rank(self) -> int:
        keep = set(range(self.graph.undirected_count)) - self.removed
        return cycle_rank(self.graph.to_networkx(keep))


def removed_edges(g: QuotientGraph, ell: int) -> set[int]:
    """Undirected classes carrying the Fourier data c_0 and c_m, deg m <= ell."""
    out: set[int] = set()
    for r in range(2, ell + 3):
        out.update(ec.index for ec in g.tail_classes(r) if ec.finite)
    return out


def pruned_subgraph(g: QuotientGraph, ell: int) -> PrunedSubgraph:
    if ell < 0:
        raise ValueError(f"ell must be non-negative, got {ell}")
    return PrunedSubgraph(g, ell, removed_edges(g, ell))
