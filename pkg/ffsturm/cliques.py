"""Exact maximum clique on small dense graphs given as adjacency bitsets.

Branch and bound in the style of Tomita's MCQ: candidates are greedily colored,
and a branch is cut as soon as the clique size plus the color bound cannot beat
the incumbent. Vertex ``v`` is bit ``v`` of an ``int``.
"""

from __future__ import annotations

import time
from typing import Sequence

__all__ = ["max_clique", "max_clique_size", "greedy_clique", "bitset", "members"]

_CHECK_EVERY = 4096


class _Reached(Exception):
    pass


def bitset(vertices) -> int:
    out = 0
    for v in vertices:
        out |= 1 << v
    return out


def members(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def greedy_clique(adj: Sequence[int], vertices: int) -> list[int]:
    """Repeatedly take the candidate with most candidate neighbours."""
    clique: list[int] = []
    cand = vertices
    while cand:
        best_v, best_deg = -1, -1
        for v in members(cand):
            deg = (adj[v] & cand).bit_count()
            if deg > best_deg:
                best_v, best_deg = v, deg
        clique.append(best_v)
        cand &= adj[best_v]
    return clique


def _color_sort(adj: Sequence[int], cand: int) -> tuple[list[int], list[int]]:
    """Sequential greedy coloring; returns vertices with their (non-decreasing) colors."""
    order: list[int] = []
    colors: list[int] = []
    color = 0
    uncolored = cand
    while uncolored:
        color += 1
        avail = uncolored
        while avail:
            low = avail & -avail
            v = low.bit_length() - 1
            avail &= ~adj[v]
            avail &= ~low
            uncolored &= ~low
            order.append(v)
            colors.append(color)
    return order, colors


def max_clique(
    adj: Sequence[int],
    vertices: int | None = None,
    *,
    lower: int = 0,
    stop_at: int | None = None,
    deadline: float | None = None,
) -> list[int]:
    """A maximum clique of the graph induced on ``vertices``.

    Only cliques larger than ``lower`` are searched for; if none exists the
    result is the best clique seen, possibly empty. With ``stop_at`` the search
    returns the first clique of at least that size. ``deadline`` is a
    ``time.time()`` value; passing it raises ``TimeoutError``.
    """
    if vertices is None:
        vertices = (1 << len(adj)) - 1
    best: list[int] = greedy_clique(adj, vertices)
    if len(best) <= lower:
        best = []
    best_size = max(lower, len(best))
    if stop_at is not None and len(best) >= stop_at:
        return best
    stack: list[int] = []
    nodes = 0

    def expand(cand: int) -> None:
        nonlocal best, best_size, nodes
        nodes += 1
        if deadline is not None and nodes % _CHECK_EVERY == 0 and time.time() > deadline:
            raise TimeoutError("maximum clique search exceeded its deadline")
        order, colors = _color_sort(adj, cand)
        for idx in range(len(order) - 1, -1, -1):
            if len(stack) + colors[idx] <= best_size:
                return
            v = order[idx]
            stack.append(v)
            new = cand & adj[v]
            if new:
                expand(new)
            elif len(stack) > best_size:
                best = list(stack)
                best_size = len(stack)
                if stop_at is not None and best_size >= stop_at:
                    raise _Reached
            stack.pop()
            cand &= ~(1 << v)

    try:
        expand(vertices)
    except _Reached:
        pass
    return best


def max_clique_size(
    adj: Sequence[int],
    vertices: int | None = None,
    *,
    lower: int = 0,
    stop_at: int | None = None,
    deadline: float | None = None,
) -> int:
    """Clique number, or ``max(clique number, lower)``; see :func:`max_clique`."""
    found = max_clique(adj, vertices, lower=lower, stop_at=stop_at, deadline=deadline)
    return max(lower, len(found))
