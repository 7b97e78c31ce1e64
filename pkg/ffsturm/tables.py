"""Batch drivers: the t(m,n) grid, degree-wise bound comparison and per-level reports."""

from __future__ import annotations

from dataclasses import dataclass, field
import logging
from typing import Any, Optional

from .bounds import TTableEntry, b_prime, b_true, bounds, t_row
from .cache import ResultCache
from .fields import GF
from .harmonic import harmonic_space
from .hecke import new_subspace, pairing_rank
from .graph import build_graph
from .polynomials import Poly, format_poly, monic_polys
from .projective import Level
from .runner import BatchRunner
from .serialization import SCHEMA, format_table

_logger = logging.getLogger(__name__)


# -- t(m, n) grid -----------------------------------------------------------------


@dataclass(slots=True)
class TTable:
    q: int
    n_max: int
    rows: dict[int, list[TTableEntry]] = field(default_factory=dict)

    @property
    def partial(self) -> bool:
        return any(e.status != "ok" for row in self.rows.values() for e in row)

    def columns(self) -> list[int]:
        return list(range(3, self.n_max + 1))

    def render(self) -> str:
        header = ["m \\ n"] + [str(n) for n in self.columns()]
        body = [[str(m)] + [row[n].display for n in self.columns()] for m, row in self.rows.items()]
        return format_table(header, body)

    def to_json(self) -> dict[str, Any]:
        return {
            "schema": SCHEMA,
            "q": self.q,
            "n_max": self.n_max,
            "rows": [
                {
                    "m": m,
                    "cells": [
                        {"n": e.n, "t": e.display, "predicted_lower_bound_ok": e.conjecture_ok}
                        for e in row
                        if e.n >= 3
                    ],
                }
                for m, row in self.rows.items()
            ],
        }


def _entries_from_json(q: int, m: int, cells: list[dict]) -> list[TTableEntry]:
    out = []
    for c in cells:
        value = None if c["value"] is None else int(c["value"])
        out.append(TTableEntry(q, m, int(c["n"]), value, c["status"]))
    return out


def cmd_table_v2(
    q: int,
    m_values: list[int],
    n_max: int,
    *,
    jobs: int = 1,
    timeout: Optional[float] = None,
    cache: Optional[ResultCache] = None,
) -> TTable:
    """t(m, n) for the given rows m and 0 <= n <= n_max, with ∞ where n < m + 3."""
    GF(q)
    cache = cache or ResultCache(None)
    table = TTable(q, n_max)
    for m in m_values:
        key = cache.key(q, "", "ttable-row", m=m, n_max=n_max)
        cached = cache.get(key)
        if cached is not None:
            table.rows[m] = _entries_from_json(q, m, cached["cells"])
            continue
        row = t_row(q, m, n_max, jobs=jobs, timeout=timeout)
        table.rows[m] = row
        for e in row:
            if e.conjecture_ok is False:
                _logger.warning("t(%d, %d) = %d is below (m + 1)q + 1 for q=%d", m, e.n, e.value, q)
        if all(e.status == "ok" for e in row):
            cache.put(
                key,
                {"cells": [{"n": e.n, "value": e.value, "status": e.status} for e in row]},
            )
    return table


# -- compare bounds ---------------------------------------------------------------


@dataclass(slots=True)
class CompareRow:
    degree: int
    b_true: Optional[int]
    b_prime: int
    witness: Optional[str]
    levels: int
    status: str = "ok"

    def cells(self) -> list[str]:
        true = self.status if self.status != "ok" else ("-" if self.b_true is None else str(self.b_true))
        return [str(self.degree), true, str(self.b_prime), self.witness or "-", str(self.levels)]


def _level_values(key: tuple[int, tuple[int, ...]], deadline: Optional[float]) -> dict[str, Any]:
    q, coeffs = key
    level = Level(Poly(GF(q), coeffs))
    return {"b_true": b_true(level, deadline=deadline), "b_prime": b_prime(level)}


def cmd_compare_bounds(
    q: int,
    n_min: int,
    n_max: int,
    *,
    jobs: int = 1,
    timeout: Optional[float] = None,
    cache: Optional[ResultCache] = None,
) -> list[CompareRow]:
    """Degree-wise maxima of b_true(n) and b′(n) over all monic n of each degree."""
    F = GF(q)
    cache = cache or ResultCache(None)
    runner = BatchRunner(jobs=jobs, timeout=timeout)
    rows = []
    for deg in range(n_min, n_max + 1):
        levels = list(monic_polys(F, deg))
        values: dict[Poly, dict[str, Any]] = {}
        todo = []
        for n in levels:
            hit = cache.get(cache.key(q, format_poly(n), "level-bounds"))
            if hit is not None:
                values[n] = hit
            else:
                todo.append((q, n.coeffs))
        status = "ok"
        for res in runner.run(_level_values, todo):
            n = Poly(F, res.key[1])
            if not res.is_success:
                status = res.status
                continue
            values[n] = res.value
            cache.put(cache.key(q, format_poly(n), "level-bounds"), res.value)
        best_true, witness = None, None
        for n in levels:
            v = values.get(n)
            if v is None or v["b_true"] is None:
                continue
            if best_true is None or v["b_true"] > best_true:
                best_true, witness = v["b_true"], format_poly(n)
        best_prime = max(b_prime(Level(n)) for n in levels)
        rows.append(CompareRow(deg, best_true, best_prime, witness, len(levels), status))
        _logger.info("degree %d: b_true %s, b' %d over %d levels", deg, best_true, best_prime, len(levels))
    return rows


def render_compare(rows: list[CompareRow]) -> str:
    return format_table(["deg n", "b_true", "b'", "witness", "levels"], [r.cells() for r in rows])


def compare_to_json(q: int, rows: list[CompareRow]) -> dict[str, Any]:
    return {
        "schema": SCHEMA,
        "q": q,
        "rows": [
            {
                "degree": r.degree,
                "b_true": r.b_true,
                "b_prime": r.b_prime,
                "witness": r.witness,
                "levels": r.levels,
                "status": r.status,
            }
            for r in rows
        ],
    }


# -- per-level report --------------------------------------------------------------


def cmd_report(level: Level, *, with_true: bool = True, jobs: int = 1, selfcheck: bool = True) -> dict[str, Any]:
    """Every bound of ``level`` with dimensions and pairing-rank certificates."""
    report = bounds(level, with_true=with_true, jobs=jobs)
    graph = build_graph(level)
    cusp_space = harmonic_space(level, "cuspidal", selfcheck)
    full_space = harmonic_space(level, "full", selfcheck)
    out = report.to_json()
    out["genus"] = graph.genus()
    out["cusps"] = len(graph.cusps)
    out["dim_cuspidal"] = cusp_space.dim
    out["dim_full"] = full_space.dim
    certificates: dict[str, Any] = {}
    if cusp_space.dim:
        cusp_bounds = {"coarse_cuspidal": report.coarse_cuspidal, "thm03": report.thm03, "thm04": report.thm04}
        if report.b_true is not None:
            cusp_bounds["b_true"] = report.b_true
        certificates["cuspidal"] = {
            name: {"bound": b, "rank": pairing_rank(cusp_space, b), "dim": cusp_space.dim}
            for name, b in cusp_bounds.items()
        }
        new = new_subspace(cusp_space)
        out["dim_new"] = new.dim
        certificates["new"] = {
            "thm04_new": {
                "bound": report.thm04_new,
                "rank": pairing_rank(cusp_space, report.thm04_new, new.basis),
                "dim": new.dim,
            }
        }
    else:
        out["dim_new"] = 0
    full_bounds = {"coarse_full": report.coarse_full, "thm03": report.thm03, "full_improved": report.full_improved}
    certificates["full"] = {
        name: {"bound": b, "rank": pairing_rank(full_space, b), "dim": full_space.dim}
        for name, b in full_bounds.items()
    }
    out["certificates"] = certificates
    return out
