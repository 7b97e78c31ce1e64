"""Polynomials over F_q, rational functions in θ and truncated π∞-expansions.

Coefficients are stored lowest degree first as tuples of encoded field elements
(see :mod:`ffsturm.fields`). The zero polynomial has the empty tuple and degree -1,
which sorts below every genuine degree.

Text format used throughout the package (levels, curve coefficients, JSON)::

    1 + T + T^2          # q prime: decimal coefficients
    g + g^3*T^2          # q = p^e, e > 1: coefficients written as powers of g
    1,0,1                # coefficient list, lowest first
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cache
from itertools import product
import math
from typing import Iterable, Iterator, Sequence

from .fields import FiniteField, GF, format_coeff, parse_coeff

Coeffs = tuple[int, ...]
VAR = "T"


def _trim(c: Sequence[int]) -> Coeffs:
    n = len(c)
    while n and not c[n - 1]:
        n -= 1
    return tuple(c[:n])


def _add(F: FiniteField, a: Coeffs, b: Coeffs) -> Coeffs:
    if len(a) < len(b):
        a, b = b, a
    add = F.add
    out = list(a)
    for i, y in enumerate(b):
        out[i] = add[out[i]][y]
    return _trim(out)


def _neg(F: FiniteField, a: Coeffs) -> Coeffs:
    neg = F.neg
    return tuple(neg[x] for x in a)


def _sub(F: FiniteField, a: Coeffs, b: Coeffs) -> Coeffs:
    return _add(F, a, _neg(F, b))


def _scale(F: FiniteField, a: Coeffs, s: int) -> Coeffs:
    if not s:
        return ()
    row = F.mul[s]
    return tuple(row[x] for x in a)


def _mul(F: FiniteField, a: Coeffs, b: Coeffs) -> Coeffs:
    if not a or not b:
        return ()
    add, mul = F.add, F.mul
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            row = mul[x]
            for j, y in enumerate(b):
                if y:
                    out[i + j] = add[out[i + j]][row[y]]
    return _trim(out)


def _divmod(F: FiniteField, a: Coeffs, b: Coeffs) -> tuple[Coeffs, Coeffs]:
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    db = len(b) - 1
    if len(a) <= db:
        return (), a
    add, mul, neg = F.add, F.mul, F.neg
    inv_lc = F.inv[b[-1]]
    r = list(a)
    quot = [0] * (len(a) - db)
    for i in range(len(a) - 1, db - 1, -1):
        c = r[i]
        if c:
            f = mul[c][inv_lc]
            quot[i - db] = f
            row = mul[neg[f]]
            for j, y in enumerate(b):
                if y:
                    r[i - db + j] = add[r[i - db + j]][row[y]]
    return _trim(quot), _trim(r[:db])


class Poly:
    """Element of A = F_q[θ]. Immutable; hashable by coefficient tuple."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field: FiniteField, coeffs: Iterable[int] = ()):
        self.field = field
        self.coeffs = _trim(tuple(coeffs))

    @classmethod
    def zero(cls, field: FiniteField) -> "Poly":
        return cls(field, ())

    @classmethod
    def one(cls, field: FiniteField) -> "Poly":
        return cls(field, (1,))

    @classmethod
    def constant(cls, field: FiniteField, c: int) -> "Poly":
        return cls(field, (c,))

    @classmethod
    def monomial(cls, field: FiniteField, k: int, c: int = 1) -> "Poly":
        return cls(field, (0,) * k + (c,))

    @classmethod
    def theta(cls, field: FiniteField) -> "Poly":
        return cls(field, (0, 1))

    @property
    def q(self) -> int:
        return self.field.q

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def lc(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_unit(self) -> bool:
        return len(self.coeffs) == 1

    def is_monic(self) -> bool:
        return self.lc == 1

    def monic(self) -> "Poly":
        if not self.coeffs or self.coeffs[-1] == 1:
            return self
        return Poly(self.field, _scale(self.field, self.coeffs, self.field.inv[self.coeffs[-1]]))

    def scale(self, c: int) -> "Poly":
        return Poly(self.field, _scale(self.field, self.coeffs, c))

    def coeff(self, i: int) -> int:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else 0

    def _wrap(self, other: "Poly | int") -> Coeffs:
        if isinstance(other, Poly):
            return other.coeffs
        return _trim((self.field.from_int(other),))

    def __add__(self, other: "Poly | int") -> "Poly":
        return Poly(self.field, _add(self.field, self.coeffs, self._wrap(other)))

    __radd__ = __add__

    def __sub__(self, other: "Poly | int") -> "Poly":
        return Poly(self.field, _sub(self.field, self.coeffs, self._wrap(other)))

    def __rsub__(self, other: "Poly | int") -> "Poly":
        return Poly(self.field, _sub(self.field, self._wrap(other), self.coeffs))

    def __neg__(self) -> "Poly":
        return Poly(self.field, _neg(self.field, self.coeffs))

    def __mul__(self, other: "Poly | int") -> "Poly":
        return Poly(self.field, _mul(self.field, self.coeffs, self._wrap(other)))

    __rmul__ = __mul__

    def __divmod__(self, other: "Poly") -> tuple["Poly", "Poly"]:
        quot, rem = _divmod(self.field, self.coeffs, other.coeffs)
        return Poly(self.field, quot), Poly(self.field, rem)

    def __floordiv__(self, other: "Poly") -> "Poly":
        return divmod(self, other)[0]

    def __mod__(self, other: "Poly") -> "Poly":
        if other.degree == 0:
            return Poly(self.field, ())
        return Poly(self.field, _divmod(self.field, self.coeffs, other.coeffs)[1])

    def __pow__(self, k: int) -> "Poly":
        if k < 0:
            raise ValueError("negative power of a polynomial")
        result = Poly.one(self.field)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def divides(self, other: "Poly") -> bool:
        if self.is_zero():
            return other.is_zero()
        return (other % self).is_zero()

    def exact_div(self, other: "Poly") -> "Poly":
        quot, rem = divmod(self, other)
        if not rem.is_zero():
            raise ValueError(f"{format_poly(other)} does not divide {format_poly(self)}")
        return quot

    def __call__(self, x: int) -> int:
        """Evaluate at an encoded field element (Horner)."""
        add, mul = self.field.add, self.field.mul
        acc = 0
        for c in reversed(self.coeffs):
            acc = add[mul[acc][x]][c]
        return acc

    def compose_affine(self, a: int, b: int) -> "Poly":
        """Substitute θ -> aθ + b."""
        lin = Poly(self.field, (b, a))
        acc = Poly.zero(self.field)
        for c in reversed(self.coeffs):
            acc = acc * lin + Poly.constant(self.field, c)
        return acc

    @property
    def key(self) -> tuple[int, Coeffs]:
        """Canonical sort key: by degree, then coefficients from the leading one."""
        return (self.degree, tuple(reversed(self.coeffs)))

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Poly):
            return self.coeffs == other.coeffs and self.field.q == other.field.q
        if isinstance(other, int):
            return self.coeffs == _trim((self.field.from_int(other),))
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __lt__(self, other: "Poly") -> bool:
        return self.key < other.key

    def __repr__(self) -> str:
        return f"Poly({format_poly(self)!r}, q={self.field.q})"

    def __str__(self) -> str:
        return format_poly(self)

    def __reduce__(self):
        return (_rebuild_poly, (self.field.q, self.coeffs))


def _rebuild_poly(q: int, coeffs: Coeffs) -> Poly:
    return Poly(GF(q), coeffs)


def gcd(a: Poly, b: Poly) -> Poly:
    """Monic greatest common divisor (``gcd(0, 0) == 0``)."""
    F = a.field
    x, y = a.coeffs, b.coeffs
    while y:
        x, y = y, _divmod(F, x, y)[1]
    return Poly(F, x).monic()


def bezout(a: Poly, b: Poly) -> tuple[Poly, Poly, Poly]:
    """Return ``(g, s, t)`` with ``s*a + t*b == g`` and ``g`` the monic gcd.

    Raises:
        ValueError: if both inputs are zero.
    """
    if a.is_zero() and b.is_zero():
        raise ValueError("bezout of two zero polynomials")
    F = a.field
    r0, r1 = a, b
    s0, s1 = Poly.one(F), Poly.zero(F)
    t0, t1 = Poly.zero(F), Poly.one(F)
    while not r1.is_zero():
        quot, rem = divmod(r0, r1)
        r0, r1 = r1, rem
        s0, s1 = s1, s0 - quot * s1
        t0, t1 = t1, t0 - quot * t1
    k = F.inv[r0.lc]
    return r0.scale(k), s0.scale(k), t0.scale(k)


def lcm(a: Poly, b: Poly) -> Poly:
    if a.is_zero() or b.is_zero():
        return Poly.zero(a.field)
    return (a * b // gcd(a, b)).monic()


def inverse_mod(a: Poly, m: Poly) -> Poly:
    """Inverse of ``a`` modulo ``m``; ``ValueError`` when they are not coprime."""
    g, s, _ = bezout(a % m, m)
    if g.degree != 0:
        raise ValueError(f"{format_poly(a)} is not invertible modulo {format_poly(m)}")
    return s % m


def powmod(a: Poly, k: int, m: Poly) -> Poly:
    result = Poly.one(a.field) % m
    base = a % m
    while k:
        if k & 1:
            result = (result * base) % m
        base = (base * base) % m
        k >>= 1
    return result


def _prime_divisors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def is_irreducible(f: Poly) -> bool:
    """Rabin's test: θ^(q^d) ≡ θ mod f and gcd(θ^(q^(d/r)) - θ, f) = 1 for primes r | d."""
    d = f.degree
    if d < 1:
        return False
    if d == 1:
        return True
    F = f.field
    f = f.monic()
    theta = Poly.theta(F)
    for r in _prime_divisors(d):
        x = theta
        for _ in range(d // r):
            x = powmod(x, F.q, f)
        if gcd(x - theta, f).degree != 0:
            return False
    x = theta
    for _ in range(d):
        x = powmod(x, F.q, f)
    return (x - theta) % f == Poly.zero(F)


def monic_polys(F: FiniteField, deg: int) -> Iterator[Poly]:
    """All monic polynomials of exact degree ``deg`` in canonical order."""
    if deg < 0:
        return
    for high_first in product(range(F.q), repeat=deg):
        yield Poly(F, tuple(reversed(high_first)) + (1,))


def enumerate_polys(F: FiniteField, max_deg: int, *, monic: bool = False) -> Iterator[Poly]:
    """Polynomials of degree <= ``max_deg`` in canonical order (by degree, then
    coefficients read from the leading one). The zero polynomial comes first
    unless ``monic`` is set."""
    if not monic:
        yield Poly.zero(F)
    for deg in range(max_deg + 1):
        if monic:
            yield from monic_polys(F, deg)
            continue
        for lead in F.units:
            for high_first in product(range(F.q), repeat=deg):
                yield Poly(F, tuple(reversed(high_first)) + (lead,))


@cache
def _irreducibles_of_degree(q: int, deg: int) -> tuple[Poly, ...]:
    F = GF(q)
    return tuple(f for f in monic_polys(F, deg) if is_irreducible(f))


def monic_irreducibles(F: FiniteField, max_deg: int, *, min_deg: int = 1) -> list[Poly]:
    """Monic irreducibles with ``min_deg <= degree <= max_deg``, canonical order."""
    out: list[Poly] = []
    for d in range(max(1, min_deg), max_deg + 1):
        out.extend(_irreducibles_of_degree(F.q, d))
    return out


def derivative(f: Poly) -> Poly:
    F = f.field
    mul = F.mul
    return Poly(F, [mul[F.from_int(i)][c] for i, c in enumerate(f.coeffs)][1:])


def _pth_root(f: Poly) -> Poly:
    """g with g^p == f, for f whose derivative vanishes."""
    F = f.field
    k = F.q // F.p
    return Poly(F, [F.power(c, k) for c in f.coeffs[:: F.p]])


def squarefree_decomposition(f: Poly) -> list[tuple[Poly, int]]:
    """Pairs ``(g, i)`` of squarefree, pairwise coprime monic g with f = Π g^i (up to a unit)."""
    out: list[tuple[Poly, int]] = []
    _squarefree_into(f.monic(), 1, out)
    return out


def _squarefree_into(f: Poly, mult: int, out: list[tuple[Poly, int]]) -> None:
    if f.degree < 1:
        return
    p = f.field.p
    df = derivative(f)
    if df.is_zero():
        _squarefree_into(_pth_root(f), mult * p, out)
        return
    c = gcd(f, df)
    w = f // c
    i = 1
    while w.degree > 0:
        y = gcd(w, c)
        part = w // y
        if part.degree > 0:
            out.append((part, i * mult))
        w, c = y, c // y
        i += 1
    if c.degree > 0:
        _squarefree_into(_pth_root(c), mult * p, out)


def distinct_degree(f: Poly) -> list[tuple[Poly, int]]:
    """Split squarefree monic ``f`` into ``(g, d)``, g the product of its degree-d prime factors."""
    F = f.field
    theta = Poly.theta(F)
    out: list[tuple[Poly, int]] = []
    rest = f
    h = theta % rest
    d = 1
    while rest.degree >= 2 * d:
        h = powmod(h, F.q, rest)
        g = gcd(h - theta, rest)
        if g.degree > 0:
            out.append((g, d))
            rest = rest // g
            h = h % rest
        d += 1
    if rest.degree > 0:
        out.append((rest, rest.degree))
    return out


def _splitter(a: Poly, f: Poly, d: int) -> Poly:
    F = f.field
    if F.p == 2:
        # absolute trace from F_{q^d} to F_2
        acc = a % f
        x = acc
        for _ in range(F.e * d - 1):
            x = (x * x) % f
            acc = acc + x
        return acc
    return powmod(a, (F.q**d - 1) // 2, f) - Poly.one(F)


def equal_degree(f: Poly, d: int) -> list[Poly]:
    """Monic prime factors of squarefree monic ``f`` whose factors all have degree d.

    Splitting candidates run over the non-constant residues in canonical order, so
    the result is deterministic. Some residue always separates two factors.
    """
    if f.degree <= d:
        return [f]
    for a in enumerate_polys(f.field, f.degree - 1):
        if a.degree < 1:
            continue
        g = gcd(_splitter(a, f, d), f)
        if 0 < g.degree < f.degree:
            return equal_degree(g, d) + equal_degree(f // g, d)
    raise RuntimeError(f"no splitting element for {format_poly(f)}")  # pragma: no cover


def factorize(f: Poly) -> list[tuple[Poly, int]]:
    """Factor ``f`` into monic irreducibles.

    Squarefree decomposition, then distinct-degree and equal-degree splitting.
    Returns a list of ``(prime, exponent)`` sorted canonically; the unit factor
    (leading coefficient) is dropped.
    """
    if f.is_zero():
        raise ValueError("cannot factor the zero polynomial")
    out: list[tuple[Poly, int]] = []
    for part, e in squarefree_decomposition(f):
        for block, d in distinct_degree(part):
            out.extend((p, e) for p in equal_degree(block, d))
    out.sort(key=lambda pe: pe[0].key)
    return out


def radical(f: Poly) -> Poly:
    acc = Poly.one(f.field)
    for p, _ in factorize(f):
        acc = acc * p
    return acc


def monic_divisors(f: Poly) -> list[Poly]:
    """All monic divisors of ``f``, sorted canonically."""
    divs = [Poly.one(f.field)]
    for p, e in factorize(f):
        divs = [d * p**k for d in divs for k in range(e + 1)]
    return sorted(divs, key=lambda d: d.key)


def crt(residues: Sequence[Poly], moduli: Sequence[Poly]) -> Poly:
    """Solve x ≡ r_i mod m_i for pairwise coprime moduli; result reduced mod Π m_i."""
    F = moduli[0].field if moduli else residues[0].field
    x = Poly.zero(F)
    m = Poly.one(F)
    for r, mi in zip(residues, moduli):
        # x + m*t ≡ r mod mi
        t = ((r - x) * inverse_mod(m, mi)) % mi
        x = x + m * t
        m = m * mi
    return x % m if m.degree > 0 else Poly.zero(F)


# -- text format --------------------------------------------------------------


def format_poly(f: Poly) -> str:
    if f.is_zero():
        return "0"
    F = f.field
    terms = []
    for i, c in enumerate(f.coeffs):
        if not c:
            continue
        coeff = format_coeff(F, c)
        if i == 0:
            terms.append(coeff)
            continue
        mono = VAR if i == 1 else f"{VAR}^{i}"
        terms.append(mono if c == 1 else f"{coeff}*{mono}")
    return " + ".join(terms)


def parse_poly(F: FiniteField, text: str) -> Poly:
    """Parse the text format (or a comma-separated coefficient list, lowest first)."""
    s = text.strip().replace(" ", "")
    if not s:
        raise ValueError("empty polynomial text")
    if s.startswith("(") and s.endswith(")"):
        s = s[1:-1]
    if "," in s:
        return Poly(F, [parse_coeff(F, part) for part in s.split(",")])
    acc: dict[int, int] = {}
    for term in s.split("+"):
        if not term:
            raise ValueError(f"malformed polynomial: {text!r}")
        if VAR in term:
            head, _, tail = term.partition(VAR)
            if head and not head.endswith("*"):
                raise ValueError(f"malformed term {term!r} in {text!r}")
            c = parse_coeff(F, head[:-1]) if head else 1
            if not tail:
                k = 1
            elif tail.startswith("^") and tail[1:].isdigit():
                k = int(tail[1:])
            else:
                raise ValueError(f"malformed exponent in term {term!r}")
        else:
            c, k = parse_coeff(F, term), 0
        acc[k] = F.add[acc.get(k, 0)][c]
    deg = max(acc)
    return Poly(F, [acc.get(i, 0) for i in range(deg + 1)])


# -- rational functions ---------------------------------------------------------


class RationalFn:
    """Element of K = F_q(θ) as a reduced fraction with monic denominator."""

    __slots__ = ("num", "den")

    def __init__(self, num: Poly, den: Poly | None = None, *, reduced: bool = False):
        F = num.field
        if den is None:
            self.num, self.den = num, Poly.one(F)
            return
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        if not reduced:
            g = gcd(num, den)
            if g.degree > 0:
                num, den = num // g, den // g
        if den.lc != 1:
            k = F.inv[den.lc]
            num, den = num.scale(k), den.scale(k)
        self.num, self.den = num, den

    @property
    def field(self) -> FiniteField:
        return self.num.field

    @classmethod
    def of(cls, x: "RationalFn | Poly") -> "RationalFn":
        return x if isinstance(x, RationalFn) else cls(x)

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_polynomial(self) -> bool:
        return self.den.degree == 0

    def valuation(self) -> float:
        """ν∞ = deg(den) - deg(num); ``math.inf`` for zero."""
        if self.num.is_zero():
            return math.inf
        return self.den.degree - self.num.degree

    def abs_value(self) -> Fraction:
        """|x|∞ = q^(-ν∞(x)) as an exact fraction."""
        if self.num.is_zero():
            return Fraction(0)
        return Fraction(self.field.q) ** (self.num.degree - self.den.degree)

    def split(self) -> tuple[Poly, "RationalFn"]:
        """Polynomial part and fractional part (the latter has ν∞ >= 1 or is zero)."""
        quot, rem = divmod(self.num, self.den)
        return quot, RationalFn(rem, self.den, reduced=True)

    def inverse(self) -> "RationalFn":
        if self.num.is_zero():
            raise ZeroDivisionError("inverse of zero")
        return RationalFn(self.den, self.num, reduced=True)

    def __add__(self, other: "RationalFn | Poly") -> "RationalFn":
        o = RationalFn.of(other)
        if self.den == o.den:
            return RationalFn(self.num + o.num, self.den)
        return RationalFn(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self) -> "RationalFn":
        return RationalFn(-self.num, self.den, reduced=True)

    def __sub__(self, other: "RationalFn | Poly") -> "RationalFn":
        return self + (-RationalFn.of(other))

    def __rsub__(self, other: "RationalFn | Poly") -> "RationalFn":
        return RationalFn.of(other) - self

    def __mul__(self, other: "RationalFn | Poly") -> "RationalFn":
        o = RationalFn.of(other)
        return RationalFn(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other: "RationalFn | Poly") -> "RationalFn":
        return self * RationalFn.of(other).inverse()

    def __rtruediv__(self, other: "RationalFn | Poly") -> "RationalFn":
        return RationalFn.of(other) * self.inverse()

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Poly):
            other = RationalFn(other)
        if isinstance(other, RationalFn):
            return self.num == other.num and self.den == other.den
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.num.coeffs, self.den.coeffs))

    def __repr__(self) -> str:
        return f"RationalFn({format_rational(self)!r})"

    def __str__(self) -> str:
        return format_rational(self)


def format_rational(x: RationalFn) -> str:
    if x.is_polynomial():
        return format_poly(x.num)
    return f"({format_poly(x.num)})/({format_poly(x.den)})"


def parse_rational(F: FiniteField, text: str) -> RationalFn:
    """Parse ``"num"`` or ``"num / den"`` (each side in the polynomial text format)."""
    num_text, sep, den_text = text.partition("/")
    num = parse_poly(F, num_text)
    if not sep:
        return RationalFn(num)
    den = parse_poly(F, den_text)
    if den.is_zero():
        raise ValueError(f"zero denominator in {text!r}")
    return RationalFn(num, den)


# -- π∞-adic expansions ----------------------------------------------------------


@dataclass(frozen=True, slots=True)
class LaurentTail:
    """Finite π∞-expansion Σ coeffs[i]·π∞^(start+i), with π∞ = 1/θ."""

    field: FiniteField
    start: int
    coeffs: Coeffs

    def to_rational(self) -> RationalFn:
        F = self.field
        if not any(self.coeffs):
            return RationalFn(Poly.zero(F))
        top = self.start + len(self.coeffs) - 1
        # θ^top · value is the polynomial with the coefficients reversed
        p = Poly(F, tuple(reversed(self.coeffs)))
        if top >= 0:
            return RationalFn(p, Poly.monomial(F, top))
        return RationalFn(p * Poly.monomial(F, -top))

    @classmethod
    def from_rational(cls, x: RationalFn, start: int, length: int) -> "LaurentTail":
        """Coefficients of π∞^start .. π∞^(start+length-1) in the expansion of ``x``."""
        F = x.field
        if x.is_zero():
            return cls(F, start, (0,) * length)
        shift = x.den.degree - x.num.degree
        a = tuple(reversed(x.num.coeffs))
        b = tuple(reversed(x.den.coeffs))
        need = start + length - shift
        series: list[int] = []
        inv_b0 = F.inv[b[0]]
        for j in range(max(0, need)):
            acc = a[j] if j < len(a) else 0
            for i in range(1, min(j, len(b) - 1) + 1):
                acc = F.sub(acc, F.mul[b[i]][series[j - i]])
            series.append(F.mul[acc][inv_b0])
        out = []
        for e in range(start, start + length):
            j = e - shift
            out.append(series[j] if 0 <= j < len(series) else 0)
        return cls(F, start, tuple(out))
