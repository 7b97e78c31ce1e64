"""ffsturm: Sturm bounds for harmonic cochains on Γ₀(n)\\T over F_q(T).

Public API:
- Arithmetic: GF, FiniteField, Poly, RationalFn, parse_poly, format_poly
- Levels and graphs: Level, build_graph, QuotientGraph, reduce_edge
- Cochains: HarmonicSpace, harmonic_space, fourier, hecke_T, atkin_lehner, new_subspace
- Bounds: bounds, BoundReport, t_cdm, t_mn, tau, b_true, b_prime, ell_of_level
- Curves: CurveModel, APTable, ap_table, check_isogenous
- Drinfeld forms: DrinfeldBoundQuery, drinfeld_sturm
- CLI: python -m ffsturm.cli

Python >= 3.10
"""

from .fields import GF, FiniteField
from .polynomials import Poly, RationalFn, format_poly, parse_poly
from .projective import Level, index_kappa
from .reduction import EdgeCoord, Mat2K, reduce_edge
from .graph import QuotientGraph, build_graph, pruned_subgraph
from .linalg import InvariantError
from .harmonic import HarmonicCochain, HarmonicSpace, fourier, harmonic_space
from .hecke import atkin_lehner, hecke_T, new_subspace, pairing_rank, petersson
from .bounds import (
    BoundReport,
    b_prime,
    b_true,
    bounds,
    ell_of_level,
    isogeny_bound,
    t_cdm,
    t_mn,
    tau,
)
from .elliptic import APTable, CurveModel, ap_table, check_isogenous
from .drinfeld import DrinfeldBound, DrinfeldBoundQuery, drinfeld_sturm
from .config import Config
from .runner import BatchRunner, TaskResult

__all__ = [
    "GF",
    "FiniteField",
    "Poly",
    "RationalFn",
    "format_poly",
    "parse_poly",
    "Level",
    "index_kappa",
    "EdgeCoord",
    "Mat2K",
    "reduce_edge",
    "QuotientGraph",
    "build_graph",
    "pruned_subgraph",
    "InvariantError",
    "HarmonicCochain",
    "HarmonicSpace",
    "fourier",
    "harmonic_space",
    "atkin_lehner",
    "hecke_T",
    "new_subspace",
    "pairing_rank",
    "petersson",
    "BoundReport",
    "b_prime",
    "b_true",
    "bounds",
    "ell_of_level",
    "isogeny_bound",
    "t_cdm",
    "t_mn",
    "tau",
    "APTable",
    "CurveModel",
    "ap_table",
    "check_isogenous",
    "DrinfeldBound",
    "DrinfeldBoundQuery",
    "drinfeld_sturm",
    "Config",
    "BatchRunner",
    "TaskResult",
]
