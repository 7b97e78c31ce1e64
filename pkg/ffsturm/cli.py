"""ffsturm CLI: quotient graphs, harmonic cochains, Sturm bounds and the table drivers.

Subcommands:
  - graph:           dump the quotient graph Γ₀(n)\\T
  - fourier:         basis cochains of H₀(n) or H(n) with their Fourier coefficients
  - hecke:           matrix of T_m or W_m on the cuspidal, full or new space
  - bounds:          every Sturm-type bound of a level (b_true with --true)
  - ttable:          rows of the t(m, n) grid
  - compare-bounds:  degree-wise maxima of b_true(n) and b'(n)
  - report:          bounds, dimensions and pairing-rank certificates of one level
  - ap:              a_p table of an elliptic curve
  - isogeny:         isogeny verdict from two a_p tables
  - drinfeld-bound:  coefficient cutoff for Drinfeld modular forms

Exit codes: 0 success, 2 partial output (timeouts), 3 input error,
4 internal invariant violation.
"""

from __future__ import annotations

import argparse
import logging
from pathlib import Path
import sys
from typing import Any, Optional

from .bounds import bounds as level_bounds, b_prime, b_true, isogeny_bound
from .cache import ResultCache
from .config import Config
from .drinfeld import DrinfeldBoundQuery, drinfeld_sturm
from .elliptic import APTable, CurveModel, ap_table, check_isogenous
from .fields import GF
from .graph import build_graph
from .harmonic import KINDS, fourier, harmonic_space
from .hecke import atkin_lehner, hecke_T, new_subspace
from .linalg import InvariantError
from .polynomials import format_poly, parse_poly
from .projective import Level
from .serialization import SCHEMA, dumps, format_table, write_json
from .tables import cmd_compare_bounds, cmd_report, cmd_table_v2, compare_to_json, render_compare

_logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_PARTIAL = 2
EXIT_INPUT = 3
EXIT_INVARIANT = 4

LOG_FORMAT = "%(asctime)s [%(levelname)s] %(name)s: %(message)s"


class _Parser(argparse.ArgumentParser):
    """Usage errors are input errors."""

    def error(self, message: str) -> None:  # type: ignore[override]
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def _config(args: argparse.Namespace, *, need_level: bool = True) -> Config:
    if args.q is None:
        raise ValueError("--q is required")
    level = None
    if args.level is not None:
        level = parse_poly(GF(args.q), args.level)
    elif need_level:
        raise ValueError("--level is required")
    cfg = Config(
        q=args.q,
        level=level,
        output=args.output,
        jobs=args.jobs,
        cache_dir=Path(args.cache_dir) if args.cache_dir else None,
        timeout=args.timeout,
        selfcheck=not args.no_selfcheck,
    )
    cfg.validate()
    return cfg


def _level(cfg: Config) -> Level:
    assert cfg.level is not None
    return Level(cfg.level)


def _render_mapping(data: dict[str, Any]) -> str:
    rows = [[k, v] for k, v in data.items() if k != "schema" and not isinstance(v, (dict, list))]
    return format_table(["field", "value"], rows)


def _emit(args: argparse.Namespace, data: dict[str, Any], text: Optional[str] = None) -> None:
    """Print ``data`` (or its table rendering) and write it to ``--json`` if given."""
    if args.json:
        write_json(Path(args.json), data)
    if args.output == "table":
        print(text if text is not None else _render_mapping(data))
    else:
        print(dumps(data))


# -- subcommands ------------------------------------------------------------------


def _graph(args: argparse.Namespace) -> int:
    level = _level(_config(args))
    g = build_graph(level)
    data = g.to_json()
    text = format_table(
        ["level", "vertices", "edges", "cusps", "genus"],
        [[format_poly(level.n), len(g.vertices), g.undirected_count, len(g.cusps), data["genus"]]],
    )
    _emit(args, data, text)
    return EXIT_OK


def _fourier(args: argparse.Namespace) -> int:
    cfg = _config(args)
    level = _level(cfg)
    space = harmonic_space(level, args.space, cfg.selfcheck)
    upto = args.upto if args.upto is not None else level.degree
    expansions = [fourier(f, upto) for f in space.basis]
    entries = []
    for i, (f, coeffs) in enumerate(zip(space.basis, expansions)):
        entries.append(
            {
                "basis_index": i,
                "edge_values": [{"edge": 2 * k, "value": str(f.values[k])} for k in range(space.edge_count)],
                "end_values": [{"cusp": s, "value": str(x)} for s, x in enumerate(f.values[space.edge_count :])],
                "fourier": coeffs.to_json(),
            }
        )
    data = {
        "schema": SCHEMA,
        "q": level.q,
        "level": format_poly(level.n),
        "space": args.space,
        "dim": space.dim,
        "upto": upto,
        "cochains": entries,
    }
    header = ["f", "c0"]
    if expansions:
        header += [f"c[{format_poly(m)}]" for m in expansions[0].coeffs]
    rows = [[i, c.c0] + list(c.coeffs.values()) for i, c in enumerate(expansions)]
    _emit(args, data, format_table(header, rows))
    return EXIT_OK


def _hecke(args: argparse.Namespace) -> int:
    cfg = _config(args)
    level = _level(cfg)
    m = parse_poly(level.field, args.m)
    kind = "cuspidal" if args.space == "new" else args.space
    space = harmonic_space(level, kind, cfg.selfcheck)
    if args.operator == "T":
        op = hecke_T(space, m, method=args.method)
    else:
        op = atkin_lehner(space, m, method=args.method)
    if args.space == "new":
        op = new_subspace(space).restrict(op)
    data = op.to_json(level)
    text = format_table([f"{op.name}_{format_poly(m)}"] + [str(j) for j in range(op.matrix.cols)],
                        [[i] + list(row) for i, row in enumerate(data["matrix"])])
    _emit(args, data, text)
    return EXIT_OK


def _bounds(args: argparse.Namespace) -> int:
    cfg = _config(args)
    report = level_bounds(_level(cfg), with_true=args.true, jobs=cfg.jobs)
    _emit(args, report.to_json())
    return EXIT_OK


def _ttable(args: argparse.Namespace) -> int:
    cfg = _config(args, need_level=False)
    cache = ResultCache(cfg.resolved_cache_dir())
    table = cmd_table_v2(cfg.q, args.m, args.nmax, jobs=cfg.jobs, timeout=cfg.timeout, cache=cache)
    _emit(args, table.to_json(), table.render())
    return EXIT_PARTIAL if table.partial else EXIT_OK


def _compare_bounds(args: argparse.Namespace) -> int:
    cfg = _config(args, need_level=False)
    if cfg.level is not None:
        level = _level(cfg)
        data = {
            "schema": SCHEMA,
            "q": cfg.q,
            "level": format_poly(level.n),
            "degree": level.degree,
            "b_true": b_true(level) if level.degree >= 3 else "trivial",
            "b_prime": b_prime(level),
        }
        _emit(args, data)
        return EXIT_OK
    cache = ResultCache(cfg.resolved_cache_dir())
    rows = cmd_compare_bounds(cfg.q, args.nmin, args.nmax, jobs=cfg.jobs, timeout=cfg.timeout, cache=cache)
    _emit(args, compare_to_json(cfg.q, rows), render_compare(rows))
    return EXIT_PARTIAL if any(r.status != "ok" for r in rows) else EXIT_OK


def _report(args: argparse.Namespace) -> int:
    cfg = _config(args)
    data = cmd_report(_level(cfg), with_true=not args.no_true, jobs=cfg.jobs, selfcheck=cfg.selfcheck)
    _emit(args, data)
    return EXIT_OK


def _ap(args: argparse.Namespace) -> int:
    curve = CurveModel.load(Path(args.curve))
    if args.q is not None and args.q != curve.q:
        raise ValueError(f"--q {args.q} does not match the curve's q = {curve.q}")
    table = ap_table(curve, args.maxdeg)
    data = table.to_json()
    text = format_table(["p", "a_p"], [[format_poly(p), ap] for p, ap in table.entries.items()])
    _emit(args, data, text)
    return EXIT_OK


def _isogeny(args: argparse.Namespace) -> int:
    t1 = APTable.load(Path(args.t1))
    t2 = APTable.load(Path(args.t2))
    q = args.q if args.q is not None else t1.q
    level = Level(parse_poly(GF(q), args.conductor)) if args.conductor else Level(t1.conductor)
    verdict = check_isogenous(t1, t2, level)
    data = {
        "schema": SCHEMA,
        "q": q,
        "conductor": format_poly(level.n),
        "bound": isogeny_bound(level),
        "verdict": verdict,
    }
    _emit(args, data)
    return EXIT_OK


def _drinfeld_bound(args: argparse.Namespace) -> int:
    cfg = _config(args)
    query = DrinfeldBoundQuery(_level(cfg), args.k, args.type, args.ell)
    _emit(args, drinfeld_sturm(query).to_json(query))
    return EXIT_OK


# -- entry point ------------------------------------------------------------------


def _common() -> argparse.ArgumentParser:
    c = argparse.ArgumentParser(add_help=False)
    c.add_argument("--q", type=int, help="Size of the constant field (prime power, 2..9)")
    c.add_argument("--level", help="Level polynomial, e.g. '1 + T + T^3' or '1,1,0,1'")
    c.add_argument("--json", metavar="PATH", help="Also write the JSON document to PATH")
    c.add_argument("--output", choices=("json", "table"), default="json", help="Stdout format (default: json)")
    c.add_argument("--jobs", type=int, default=1, help="Worker processes (default: 1)")
    c.add_argument("--cache-dir", help="On-disk result cache; FFSTURM_CACHE overrides it")
    c.add_argument("--timeout", type=float, help="Per-cell time limit in seconds for batch drivers")
    c.add_argument(
        "--log-level",
        choices=("DEBUG", "INFO", "WARNING", "ERROR"),
        default="WARNING",
        help="Logging threshold (default: WARNING)",
    )
    c.add_argument(
        "--no-selfcheck",
        action="store_true",
        help="Skip the harmonicity check on constructed cochains",
    )
    return c


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    ap = _Parser(prog="ffsturm", description="Sturm bounds for harmonic cochains over F_q(T)")
    sub = ap.add_subparsers(dest="cmd", required=True, parser_class=_Parser)

    g = sub.add_parser("graph", parents=[common], help="Dump the quotient graph")
    g.set_defaults(func=_graph)

    f = sub.add_parser("fourier", parents=[common], help="Basis cochains and Fourier coefficients")
    f.add_argument("--upto", type=int, help="Largest deg m of c_m (default: deg n)")
    f.add_argument("--space", choices=KINDS, default="cuspidal")
    f.set_defaults(func=_fourier)

    h = sub.add_parser("hecke", parents=[common], help="Hecke or Atkin-Lehner matrix")
    h.add_argument("--m", required=True, help="Monic polynomial index of the operator")
    h.add_argument("--operator", choices=("T", "W"), default="T")
    h.add_argument("--space", choices=KINDS + ("new",), default="cuspidal")
    h.add_argument("--method", choices=("all_edges", "determining"), default="all_edges")
    h.set_defaults(func=_hecke)

    b = sub.add_parser("bounds", parents=[common], help="Sturm-type bounds of a level")
    b.add_argument("--true", action="store_true", help="Also compute b_true from the quotient graph")
    b.set_defaults(func=_bounds)

    t = sub.add_parser("ttable", parents=[common], help="Rows of the t(m, n) grid")
    t.add_argument("--m", type=int, nargs="+", default=[1], help="Row indices m (default: 1)")
    t.add_argument("--nmax", type=int, required=True)
    t.set_defaults(func=_ttable)

    cb = sub.add_parser("compare-bounds", parents=[common], help="Degree-wise maxima of b_true and b'")
    cb.add_argument("--nmin", type=int, default=3)
    cb.add_argument("--nmax", type=int, default=6)
    cb.set_defaults(func=_compare_bounds)

    r = sub.add_parser("report", parents=[common], help="Full per-level report")
    r.add_argument("--no-true", action="store_true", help="Skip b_true")
    r.set_defaults(func=_report)

    a = sub.add_parser("ap", parents=[common], help="a_p table of an elliptic curve")
    a.add_argument("--curve", required=True, help="Curve JSON path")
    a.add_argument("--maxdeg", type=int, required=True)
    a.set_defaults(func=_ap)

    i = sub.add_parser("isogeny", parents=[common], help="Isogeny verdict from two a_p tables")
    i.add_argument("--conductor", help="Conductor (default: the tables' conductor)")
    i.add_argument("--t1", required=True)
    i.add_argument("--t2", required=True)
    i.set_defaults(func=_isogeny)

    d = sub.add_parser("drinfeld-bound", parents=[common], help="Coefficient cutoff for Drinfeld modular forms")
    d.add_argument("--k", type=int, required=True, help="Weight")
    d.add_argument("--type", type=int, default=0, help="Type m, 0 <= m <= q - 2")
    d.add_argument("--ell", type=int, default=0, help="Cuspidality order")
    d.set_defaults(func=_drinfeld_bound)
    return ap


def main(argv: list[str] | None = None) -> int:
    ns = build_parser().parse_args(argv)
    logging.basicConfig(level=getattr(logging, ns.log_level), format=LOG_FORMAT)
    try:
        return ns.func(ns)
    except InvariantError as exc:
        _logger.error("invariant violated: %s", exc)
        print(f"error: invariant violated: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    except (ValueError, KeyError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    raise SystemExit(main())
