"""Arithmetic bound quantities: δ, ε, ℓ(n), t(c,d;m), t(m,n), τ(n) and the Sturm bounds.

t(c,d;m) only depends on the F_q-plane V = ⟨c, d⟩ and is invariant under the
substitutions θ ↦ αθ + β, so t(m,n) runs over planes in reduced echelon form
(c monic of degree D, d monic of degree e < D, θ^e-coefficient of c zero) that
are minimal in their affine orbit.

For D >= m + 2 the map (x, y) ↦ xc + yd on pairs of degree <= m is injective.
Two non-unit images α, β then share a prime factor iff they share one of degree
<= 2m, or (x, y) and (x', y') are proportional over K with a non-unit primitive
image. The coprimality graph is built from that criterion with bitsets.
"""

from __future__ import annotations

from concurrent.futures import FIRST_COMPLETED, ProcessPoolExecutor, wait
from dataclasses import asdict, dataclass, field
from functools import lru_cache
import logging
import math
import time
from typing import Any, Iterator

from .cliques import max_clique_size, members
from .fields import GF, FiniteField
from .graph import build_graph, pruned_subgraph
from .linalg import InvariantError
from .polynomials import (
    Poly,
    enumerate_polys,
    format_poly,
    gcd,
    inverse_mod,
    monic_irreducibles,
    monic_polys,
)
from .projective import Level, lift_to_gamma
from .serialization import SCHEMA

_logger = logging.getLogger(__name__)

INF = math.inf
CHUNK = 64


# -- δ, ε, ℓ ----------------------------------------------------------------------


def _pairs_of_degree(F: FiniteField, D: int) -> Iterator[tuple[Poly, Poly]]:
    """(x, y) != (0, 0) with max(deg x, deg y) == D."""
    low = list(enumerate_polys(F, D - 1))
    top = [p for p in enumerate_polys(F, D) if p.degree == D]
    for x in top:
        for y in low + top:
            yield x, y
    for y in top:
        for x in low:
            yield x, y


def delta_eps(c: Poly, d: Poly, level: Level) -> tuple[int, int]:
    """(δ_n(c,d), ε_n(c,d)) for a coprime pair.

    δ is the least max(deg x, deg y) with gcd(cx + dy, n) = 1; ε is 0 when some
    witness at that degree has deg y < deg x, and 1 otherwise.
    """
    if gcd(c, d).degree != 0:
        raise ValueError(f"({format_poly(c)}, {format_poly(d)}) is not a coprime pair")
    n = level.n
    F = level.field
    limit = level.degree + max(c.degree, d.degree) + 1
    for D in range(limit + 1):
        found = False
        for x, y in _pairs_of_degree(F, D):
            if gcd((c * x + d * y) % n, n).degree != 0:
                continue
            if y.degree < x.degree:
                return D, 0
            found = True
        if found:
            return D, 1
    raise InvariantError(f"no δ witness for ({format_poly(c)}, {format_poly(d)}) at level {level}")


def ell_of_level(level: Level) -> int:
    """ℓ(n) = max of 2δ + ε over P¹(A/n), through coprime lifts."""
    best = 0
    for pt in level.proj_line.points:
        _, _, c, d = lift_to_gamma(pt, level)
        delta, eps = delta_eps(c, d, level)
        best = max(best, 2 * delta + eps)
    return best


def t_of_level(level: Level) -> int:
    """Number of distinct monic primes dividing n."""
    return len(level.factorization)


# -- t(c, d; m) -------------------------------------------------------------------


class _SpanTables:
    """Plane-independent data for pairs (x, y) with deg x, deg y <= m."""

    def __init__(self, q: int, m: int):
        F = GF(q)
        self.q, self.m, self.F = q, m, F
        self.xs = list(enumerate_polys(F, m))
        N = self.N = len(self.xs)
        index = {x.coeffs: i for i, x in enumerate(self.xs)}
        self.index = index

        # projective classes of pairs
        self.class_of = [-1] * (N * N)
        self.class_pairs: list[tuple[int, int]] = []
        for i, x in enumerate(self.xs):
            for j, y in enumerate(self.xs):
                if (i == 0 and j == 0) or self.class_of[i * N + j] >= 0:
                    continue
                k = len(self.class_pairs)
                lead = x.lc if not x.is_zero() else y.lc
                inv = F.inv[lead]
                self.class_pairs.append((index[x.scale(inv).coeffs], index[y.scale(inv).coeffs]))
                for u in F.units:
                    self.class_of[index[x.scale(u).coeffs] * N + index[y.scale(u).coeffs]] = k
        ncls = self.ncls = len(self.class_pairs)

        # lines through the origin of K², via primitive directions
        line_ids: dict[tuple, int] = {}
        self.line_of = [0] * ncls
        for k, (i, j) in enumerate(self.class_pairs):
            x, y = self.xs[i], self.xs[j]
            g = gcd(x, y)
            x0, y0 = x // g, y // g
            lead = x0.lc if not x0.is_zero() else y0.lc
            inv = F.inv[lead]
            key = (x0.scale(inv).coeffs, y0.scale(inv).coeffs)
            self.line_of[k] = line_ids.setdefault(key, len(line_ids))
        self.line_members = [0] * len(line_ids)
        for k, line in enumerate(self.line_of):
            self.line_members[line] |= 1 << k

        # small primes with residues of every x
        self.primes = monic_irreducibles(F, 2 * m) if m > 0 else []
        self.residues: list[list[int]] = []
        self.by_residue: list[dict[int, list[int]]] = []
        self.times_rho: list[list[list[int]]] = []
        for P in self.primes:
            size = q**P.degree
            res = [_encode(x % P, q) for x in self.xs]
            groups: dict[int, list[int]] = {}
            for j, r in enumerate(res):
                groups.setdefault(r, []).append(j)
            residue_polys = [_decode(F, r) for r in range(size)]
            self.residues.append(res)
            self.by_residue.append(groups)
            self.times_rho.append(
                [[_encode((x * rho) % P, q) for rho in residue_polys] for x in self.xs]
            )
        self.all_classes = (1 << ncls) - 1

    def unit_pair(self, c: Poly, d: Poly) -> tuple[int, int] | None:
        """Indices of (s, t) with sc + td = 1, if both have degree <= m."""
        F = self.F
        if d.degree == 0:
            s, t = Poly.zero(F), Poly.constant(F, F.inv[d.lc])
        else:
            s = inverse_mod(c, d)
            t = (Poly.one(F) - s * c) // d
        if s.degree > self.m or t.degree > self.m:
            return None
        return self.index[s.coeffs], self.index[t.coeffs]

    def coprimality_graph(self, c: Poly, d: Poly) -> tuple[list[int], int, int]:
        """Adjacency bitsets over the pair classes, the non-unit vertex set and #units."""
        N = self.N
        class_of = self.class_of
        prime_sets: list[int] = []
        for pi, P in enumerate(self.primes):
            dbar = d % P
            bits = 0
            if dbar.is_zero():
                for i, r in enumerate(self.residues[pi]):
                    if r == 0:
                        for j in range(N):
                            k = class_of[i * N + j]
                            if k >= 0:
                                bits |= 1 << k
            else:
                rho = _encode((-(c % P) * inverse_mod(dbar, P)) % P, self.q)
                rows = self.times_rho[pi]
                groups = self.by_residue[pi]
                for i in range(N):
                    for j in groups.get(rows[i][rho], ()):
                        k = class_of[i * N + j]
                        if k >= 0:
                            bits |= 1 << k
            prime_sets.append(bits)

        nonadj = [1 << k for k in range(self.ncls)]
        for bits in prime_sets:
            for k in members(bits):
                nonadj[k] |= bits

        vertices = self.all_classes
        units = 0
        unit_line = -1
        pair = self.unit_pair(c, d)
        if pair is not None:
            units = self.q - 1
            unit_class = class_of[pair[0] * N + pair[1]]
            unit_line = self.line_of[unit_class]
            vertices &= ~(1 << unit_class)
        for k in range(self.ncls):
            line = self.line_of[k]
            if line != unit_line:
                nonadj[k] |= self.line_members[line]
        adj = [vertices & ~mask for mask in nonadj]
        return adj, vertices, units


def _encode(f: Poly, q: int) -> int:
    acc = 0
    for c in reversed(f.coeffs):
        acc = acc * q + c
    return acc


def _decode(F: FiniteField, r: int) -> Poly:
    coeffs = []
    while r:
        r, c = divmod(r, F.q)
        coeffs.append(c)
    return Poly(F, coeffs)


@lru_cache(maxsize=16)
def _span_tables(q: int, m: int) -> _SpanTables:
    _logger.debug("building span tables for q=%d, m=%d", q, m)
    return _SpanTables(q, m)


def echelon(c: Poly, d: Poly) -> tuple[Poly, Poly] | None:
    """Reduced echelon basis of ⟨c, d⟩, or ``None`` when c, d are dependent."""
    if c.is_zero() or d.is_zero():
        return None
    if c.degree == d.degree:
        c = c - d.scale(c.field.div(c.lc, d.lc))
        if c.is_zero():
            return None
    hi, lo = (c, d) if c.degree > d.degree else (d, c)
    hi, lo = hi.monic(), lo.monic()
    hi = hi - lo.scale(hi.coeff(lo.degree))
    return hi, lo


def _plane_value(tables: _SpanTables, c: Poly, d: Poly, cap: float, deadline: float | None) -> float:
    """min(t(c,d;m), cap) for an echelon plane with deg c >= m + 2."""
    adj, vertices, units = tables.coprimality_graph(c, d)
    stop = None
    if cap != INF:
        stop = int(cap) - units
        if stop <= 0:
            return cap
    value = units + max_clique_size(adj, vertices, stop_at=stop, deadline=deadline)
    return min(value, cap)


def _t_direct(c: Poly, d: Poly, m: int) -> int:
    """t(c,d;m) from the elements of S(c,d;m) and literal gcds."""
    F = c.field
    xs = list(enumerate_polys(F, m))
    classes: dict[Poly, None] = {}
    units: set[Poly] = set()
    for x in xs:
        for y in xs:
            a = x * c + y * d
            if a.is_zero():
                continue
            if a.is_unit():
                units.add(a)
            else:
                classes[a.monic()] = None
    verts = list(classes)
    adj = [0] * len(verts)
    for i in range(len(verts)):
        for j in range(i + 1, len(verts)):
            if gcd(verts[i], verts[j]).degree == 0:
                adj[i] |= 1 << j
                adj[j] |= 1 << i
    return len(units) + max_clique_size(adj)


def t_cdm(c: Poly, d: Poly, m: int) -> int:
    """Largest pairwise coprime subset of S(c,d;m) = {xc + yd : deg x, deg y <= m}."""
    if m < 0:
        raise ValueError(f"m must be non-negative, got {m}")
    if gcd(c, d).degree != 0:
        raise ValueError(f"({format_poly(c)}, {format_poly(d)}) is not a coprime pair")
    basis = echelon(c, d)
    if basis is None or basis[0].degree < m + 2:
        return _t_direct(c, d, m)
    return int(_plane_value(_span_tables(c.q, m), basis[0], basis[1], INF, None))


# -- t(m, n) ----------------------------------------------------------------------


def _affine_minimal(c: Poly, d: Poly) -> bool:
    F = c.field
    key = (c.key, d.key)
    e = d.degree
    for a in F.units:
        for b in F.elements:
            if a == 1 and b == 0:
                continue
            c2 = c.compose_affine(a, b).monic()
            d2 = d.compose_affine(a, b).monic()
            c2 = c2 - d2.scale(c2.coeff(e))
            if (c2.key, d2.key) < key:
                return False
    return True


def canonical_planes(F: FiniteField, D: int) -> Iterator[tuple[Poly, Poly]]:
    """One echelon basis per affine class of coprime planes with top degree D."""
    for e in range(D):
        for d in monic_polys(F, e):
            for c in monic_polys(F, D):
                if c.coeff(e) != 0 or gcd(c, d).degree != 0:
                    continue
                if _affine_minimal(c, d):
                    yield c, d


def _chunk_minimum(q: int, m: int, chunk: list[tuple[tuple[int, ...], tuple[int, ...]]], cap: float, stop_below: float | None, deadline: float | None) -> float:
    F = GF(q)
    tables = _span_tables(q, m)
    for cc, dc in chunk:
        cap = _plane_value(tables, Poly(F, cc), Poly(F, dc), cap, deadline)
        if stop_below is not None and cap < stop_below:
            break
    return cap


def _chunks(planes: Iterator[tuple[Poly, Poly]], size: int) -> Iterator[list[tuple[tuple[int, ...], tuple[int, ...]]]]:
    chunk = []
    for c, d in planes:
        chunk.append((c.coeffs, d.coeffs))
        if len(chunk) == size:
            yield chunk
            chunk = []
    if chunk:
        yield chunk


def degree_minimum(
    q: int,
    m: int,
    D: int,
    cap: float = INF,
    *,
    stop_below: float | None = None,
    jobs: int = 1,
    deadline: float | None = None,
) -> float:
    """min(cap, t(c,d;m)) over planes of top degree D (D >= m + 2).

    With ``stop_below`` the search returns as soon as the minimum drops below it.
    """
    if D < m + 2:
        raise ValueError(f"top degree {D} is below m + 2 = {m + 2}")
    F = GF(q)
    if jobs <= 1:
        tables = _span_tables(q, m)
        for c, d in canonical_planes(F, D):
            cap = _plane_value(tables, c, d, cap, deadline)
            if stop_below is not None and cap < stop_below:
                break
        return cap
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        pending = set()
        for chunk in _chunks(canonical_planes(F, D), CHUNK):
            if stop_below is not None and cap < stop_below:
                break
            if len(pending) >= 2 * jobs:
                done, pending = wait(pending, return_when=FIRST_COMPLETED)
                for fut in done:
                    cap = min(cap, fut.result())
            pending.add(pool.submit(_chunk_minimum, q, m, chunk, cap, stop_below, deadline))
        for fut in pending:
            cap = min(cap, fut.result())
    return cap


@dataclass(slots=True)
class TTableEntry:
    """t(m, n); ``value`` is ``None`` for +∞ (n < m + 3)."""

    q: int
    m: int
    n: int
    value: int | None
    status: str = "ok"

    @property
    def display(self) -> str:
        if self.status != "ok":
            return self.status
        return "∞" if self.value is None else str(self.value)

    @property
    def conjecture_ok(self) -> bool | None:
        """t(m, n) >= (m + 1)q + 1, the predicted lower bound."""
        if self.value is None or self.status != "ok":
            return None
        return self.value >= (self.m + 1) * self.q + 1


def t_row(q: int, m: int, n_max: int, *, jobs: int = 1, timeout: float | None = None) -> list[TTableEntry]:
    """t(m, n) for n = 0..n_max, each degree D searched once with the running minimum.

    ``timeout`` applies per top degree; cells from the first timed-out one on are
    marked ``"timeout"``.
    """
    GF(q)
    if m < 0:
        raise ValueError(f"m must be non-negative, got {m}")
    row = [TTableEntry(q, m, n, None) for n in range(min(n_max, m + 2) + 1)]
    best = INF
    for D in range(m + 2, n_max):
        deadline = time.time() + timeout if timeout is not None else None
        try:
            best = degree_minimum(q, m, D, best, jobs=jobs, deadline=deadline)
        except TimeoutError:
            _logger.warning("t(%d, %d) for q=%d timed out", m, D + 1, q)
            row.extend(TTableEntry(q, m, n, None, "timeout") for n in range(D + 1, n_max + 1))
            return row
        row.append(TTableEntry(q, m, D + 1, int(best)))
        _logger.info("t(%d, %d) = %d (q=%d)", m, D + 1, int(best), q)
    return row[: n_max + 1]


def t_mn(q: int, m: int, n: int, *, jobs: int = 1, timeout: float | None = None) -> TTableEntry:
    """t(m, n) = min t(c,d;m) over coprime (c, d) with m + 1 < max(deg c, deg d) < n."""
    if n < 0:
        raise ValueError(f"n must be non-negative, got {n}")
    return t_row(q, m, n, jobs=jobs, timeout=timeout)[n]


def t_exceeds(q: int, m: int, n: int, bound: int, *, jobs: int = 1) -> bool:
    """Whether t(m, n) > bound, stopping at the first plane that refutes it."""
    if n < m + 3:
        return True
    if m == 0:
        return q + 1 > bound
    if m == 1 and bound <= 2 * q:
        return True
    for D in range(m + 2, n):
        if degree_minimum(q, m, D, bound + 1, stop_below=bound + 1, jobs=jobs) <= bound:
            return False
    return True


def tau(level: Level, *, jobs: int = 1) -> int:
    """τ(n) = min{m >= 0 : t(n) < t(m, deg n)}."""
    tn = t_of_level(level)
    N = level.degree
    m = 0
    while not t_exceeds(level.q, m, N, tn, jobs=jobs):
        m += 1
    return m


# -- bounds -----------------------------------------------------------------------


def _shape(level: Level) -> tuple[bool, bool, bool]:
    exps = [e for _, e in level.factorization]
    prime_power = len(exps) <= 1
    square_free = all(e == 1 for e in exps)
    p2q = sorted(exps) == [1, 2] and next(p for p, e in level.factorization if e == 1).degree == 1
    return prime_power, square_free, p2q


def _check_deadline(deadline: float | None, what: str) -> None:
    if deadline is not None and time.time() > deadline:
        raise TimeoutError(f"{what} exceeded its deadline")


def b_true(level: Level, *, deadline: float | None = None) -> int | None:
    """Least ℓ >= 0 whose pruned quotient graph has no cycles; ``None`` when H₀(n) = 0.

    ``deadline`` is a ``time.time()`` value checked before each pruned graph;
    ``TimeoutError`` is raised once it has passed.
    """
    _check_deadline(deadline, f"b_true of level {level}")
    g = build_graph(level)
    if g.genus() == 0:
        return None
    limit = max(2 * level.degree - 4, 0)
    for ell in range(limit + 1):
        _check_deadline(deadline, f"b_true of level {level}")
        if pruned_subgraph(g, ell).cycle_rank() == 0:
            return ell
    raise InvariantError(f"pruned graphs of level {level} keep cycles up to ℓ = {limit}")


def b_prime(level: Level) -> int:
    """deg n - 1 + 2⌊(t(n) - 1)/q⌋."""
    return level.degree - 1 + 2 * ((t_of_level(level) - 1) // level.q)


def isogeny_bound(level: Level) -> int:
    """Degree bound for comparing a_p of two curves of conductor n·∞."""
    prime_power, square_free, p2q = _shape(level)
    if prime_power or square_free or p2q:
        return level.degree - 2
    return level.degree - 2 + ell_of_level(level)


@dataclass(slots=True)
class BoundReport:
    q: int
    level: str
    degree: int
    t_of_n: int
    tau: int
    ell: int
    coarse_cuspidal: int
    coarse_full: int
    thm03: int
    prop45: int
    thm04: int
    thm04_new: int
    full_improved: int
    b_prime: int
    prime_power: bool
    square_free: bool
    p2q: bool
    trivial: bool
    tau_conjecture_ok: bool | None = None
    b_true: int | None = None
    extras: dict[str, Any] = field(default_factory=dict)

    def to_json(self) -> dict[str, Any]:
        out = {"schema": SCHEMA}
        out.update(asdict(self))
        if self.trivial:
            out["b_true"] = "trivial"
        return out


def bounds(level: Level, *, with_true: bool = False, jobs: int = 1) -> BoundReport:
    deg = level.degree
    tn = t_of_level(level)
    tau_n = tau(level, jobs=jobs)
    ell = ell_of_level(level)
    prime_power, square_free, p2q = _shape(level)
    if ell > 2 * tau_n + 1:
        raise InvariantError(f"ℓ = {ell} exceeds 2τ + 1 = {2 * tau_n + 1} at level {level}")
    conjecture = None
    if tn >= 1:
        conjecture = tau_n <= (tn - 1) // level.q
        if not conjecture:
            _logger.warning("τ(%s) = %d exceeds ⌊(t(n) - 1)/q⌋ = %d", level, tau_n, (tn - 1) // level.q)
    report = BoundReport(
        q=level.q,
        level=format_poly(level.n),
        degree=deg,
        t_of_n=tn,
        tau=tau_n,
        ell=ell,
        coarse_cuspidal=2 * deg - 4,
        coarse_full=max(2 * deg - 3, deg - 1),
        thm03=deg - 1 + 2 * tau_n,
        prop45=deg - 2 + ell,
        thm04=deg - 2 if prime_power else deg - 2 + ell,
        thm04_new=deg - 2 if (prime_power or square_free or p2q) else deg - 2 + ell,
        full_improved=max(deg - 2 + ell, deg - 1),
        b_prime=b_prime(level),
        prime_power=prime_power,
        square_free=square_free,
        p2q=p2q,
        trivial=deg < 3,
        tau_conjecture_ok=conjecture,
    )
    if with_true and not report.trivial:
        report.b_true = b_true(level)
    return report
