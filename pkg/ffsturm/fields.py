"""Finite fields F_q for small prime powers q, backed by lookup tables.

Elements are encoded as integers ``0 .. q-1``: the base-p digits of the integer
are the coefficients (lowest first) of the residue polynomial modulo the
defining polynomial of the field. For prime q the encoding is the residue itself.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cache
from itertools import product
import logging

_logger = logging.getLogger(__name__)

MAX_Q = 9


def prime_power(q: int) -> tuple[int, int]:
    """Return ``(p, e)`` with ``q == p**e`` or raise ``ValueError``."""
    if q < 2:
        raise ValueError(f"q must be a prime power >= 2, got {q}")
    p = next(d for d in range(2, q + 1) if q % d == 0)
    e = 0
    rest = q
    while rest % p == 0:
        rest //= p
        e += 1
    if rest != 1:
        raise ValueError(f"q must be a prime power, got {q}")
    return p, e


def _prime_poly_mod(a: list[int], m: tuple[int, ...], p: int) -> list[int]:
    # m is monic, coefficients lowest first
    a = a[:]
    dm = len(m) - 1
    for i in range(len(a) - 1, dm - 1, -1):
        c = a[i] % p
        if c:
            for j in range(dm + 1):
                a[i - dm + j] = (a[i - dm + j] - c * m[j]) % p
    return [x % p for x in a[:dm]] + [0] * max(0, dm - len(a))


def _prime_poly_mul(a: list[int], b: list[int], p: int) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return out


def _is_irreducible_over_prime(m: tuple[int, ...], p: int) -> bool:
    """Trial division by every monic polynomial of degree 1 .. deg/2."""
    deg = len(m) - 1
    for d in range(1, deg // 2 + 1):
        for low in product(range(p), repeat=d):
            divisor = tuple(low) + (1,)
            if not any(_prime_poly_mod(list(m), divisor, p)):
                return False
    return True


def _least_irreducible(p: int, e: int) -> tuple[int, ...]:
    """Lexicographically least monic irreducible of degree ``e`` over F_p.

    Candidates are ordered by their integer encoding ``sum c_i p^i``.
    """
    for code in range(p**e, 2 * p**e):
        coeffs = tuple((code // p**i) % p for i in range(e + 1))
        if _is_irreducible_over_prime(coeffs, p):
            return coeffs
    raise RuntimeError(f"no irreducible polynomial of degree {e} over F_{p}")  # pragma: no cover


@dataclass(eq=False)
class FiniteField:
    """Table-driven arithmetic in F_q.

    Attributes:
        q, p, e: field size, characteristic and degree over F_p.
        modulus: defining polynomial over F_p (lowest coefficient first).
        add, mul: ``q x q`` tables indexed by encoded elements.
        neg, inv: negation and inversion tables (``inv[0]`` is 0 and never used).
        generator: least primitive element under the integer encoding.
    """

    q: int
    p: int
    e: int
    modulus: tuple[int, ...]
    add: tuple[tuple[int, ...], ...]
    mul: tuple[tuple[int, ...], ...]
    neg: tuple[int, ...]
    inv: tuple[int, ...]
    generator: int
    log: dict[int, int]

    @property
    def elements(self) -> range:
        return range(self.q)

    @property
    def units(self) -> range:
        return range(1, self.q)

    @property
    def prime_basis(self) -> tuple[int, ...]:
        """An F_p-basis of F_q: the encodings of 1, x, .., x^(e-1)."""
        return tuple(self.p**i for i in range(self.e))

    def sub(self, a: int, b: int) -> int:
        return self.add[a][self.neg[b]]

    def div(self, a: int, b: int) -> int:
        if b == 0:
            raise ZeroDivisionError("division by zero in F_q")
        return self.mul[a][self.inv[b]]

    def power(self, a: int, k: int) -> int:
        if a == 0:
            return 0 if k > 0 else 1
        k %= self.q - 1
        return self.gen_power(self.log[a] * k)

    def gen_power(self, k: int) -> int:
        """g^k for the distinguished generator g."""
        return self._powers[k % (self.q - 1)]

    def from_int(self, n: int) -> int:
        """Image of the rational integer ``n`` in F_q."""
        return n % self.p

    def trace(self, a: int) -> int:
        """Absolute trace F_q -> F_p, returned as an element of the prime field."""
        t = 0
        x = a
        for _ in range(self.e):
            t = self.add[t][x]
            x = self.power(x, self.p)
        return t

    def __repr__(self) -> str:
        return f"GF({self.q})"

    def __reduce__(self):
        return (GF, (self.q,))

    @property
    def _powers(self) -> tuple[int, ...]:
        return _generator_powers(self.q)


@cache
def _generator_powers(q: int) -> tuple[int, ...]:
    F = GF(q)
    out = [1]
    for _ in range(q - 2):
        out.append(F.mul[out[-1]][F.generator])
    return tuple(out)


@cache
def GF(q: int) -> FiniteField:
    """Return the (cached) finite field with ``q`` elements, ``2 <= q <= 9``."""
    p, e = prime_power(q)
    if q > MAX_Q:
        raise ValueError(f"q must be at most {MAX_Q}, got {q}")
    modulus = _least_irreducible(p, e) if e > 1 else (0, 1)

    def decode(a: int) -> list[int]:
        return [(a // p**i) % p for i in range(e)]

    def encode(coeffs: list[int]) -> int:
        return sum((c % p) * p**i for i, c in enumerate(coeffs[:e]))

    add = tuple(
        tuple(encode([x + y for x, y in zip(decode(a), decode(b))]) for b in range(q))
        for a in range(q)
    )
    mul = tuple(
        tuple(
            encode(_prime_poly_mod(_prime_poly_mul(decode(a), decode(b), p), modulus, p))
            if e > 1
            else (a * b) % p
            for b in range(q)
        )
        for a in range(q)
    )
    neg = tuple(encode([-c for c in decode(a)]) for a in range(q))
    inv = [0] * q
    for a in range(1, q):
        inv[a] = next(b for b in range(1, q) if mul[a][b] == 1)

    generator = 0
    log: dict[int, int] = {}
    for cand in range(1, q):
        seen = {}
        x = 1
        for k in range(q - 1):
            seen.setdefault(x, k)
            x = mul[x][cand]
        if len(seen) == q - 1:
            generator = cand
            log = seen
            break
    _logger.debug("constructed GF(%d) with modulus %s, generator %d", q, modulus, generator)
    return FiniteField(
        q=q,
        p=p,
        e=e,
        modulus=modulus,
        add=add,
        mul=mul,
        neg=neg,
        inv=tuple(inv),
        generator=generator,
        log=log,
    )


@dataclass(frozen=True, slots=True)
class FqElem:
    """An element of F_q with operator overloading; polynomials store raw encodings."""

    field: FiniteField
    value: int

    def __post_init__(self) -> None:
        if not 0 <= self.value < self.field.q:
            raise ValueError(f"{self.value} is not an element of {self.field!r}")

    def _coerce(self, other: "FqElem | int") -> int:
        if isinstance(other, FqElem):
            if other.field.q != self.field.q:
                raise ValueError("elements of different fields")
            return other.value
        return self.field.from_int(other)

    def __add__(self, other: "FqElem | int") -> "FqElem":
        return FqElem(self.field, self.field.add[self.value][self._coerce(other)])

    __radd__ = __add__

    def __sub__(self, other: "FqElem | int") -> "FqElem":
        return FqElem(self.field, self.field.sub(self.value, self._coerce(other)))

    def __neg__(self) -> "FqElem":
        return FqElem(self.field, self.field.neg[self.value])

    def __mul__(self, other: "FqElem | int") -> "FqElem":
        return FqElem(self.field, self.field.mul[self.value][self._coerce(other)])

    __rmul__ = __mul__

    def __truediv__(self, other: "FqElem | int") -> "FqElem":
        return FqElem(self.field, self.field.div(self.value, self._coerce(other)))

    def __pow__(self, k: int) -> "FqElem":
        if k < 0:
            return FqElem(self.field, self.field.inv[self.value]) ** (-k)
        return FqElem(self.field, self.field.power(self.value, k))

    def __eq__(self, other: object) -> bool:
        if isinstance(other, FqElem):
            return self.field.q == other.field.q and self.value == other.value
        if isinstance(other, int):
            return self.value == self.field.from_int(other)
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.field.q, self.value))

    def __bool__(self) -> bool:
        return self.value != 0

    def __repr__(self) -> str:
        return f"FqElem(q={self.field.q}, {format_coeff(self.field, self.value)})"


def format_coeff(F: FiniteField, a: int) -> str:
    """Text form of a coefficient: decimal for prime q, ``g^k`` otherwise."""
    if F.e == 1 or a in (0, 1):
        return str(a)
    k = F.log[a]
    return "g" if k == 1 else f"g^{k}"


def parse_coeff(F: FiniteField, text: str) -> int:
    """Inverse of :func:`format_coeff`; plain integers are read modulo p."""
    text = text.strip()
    if text.startswith("g"):
        rest = text[1:].strip()
        if not rest:
            return F.generator
        if not rest.startswith("^"):
            raise ValueError(f"malformed coefficient: {text!r}")
        return F.gen_power(int(rest[1:]))
    try:
        n = int(text)
    except ValueError as exc:
        raise ValueError(f"malformed coefficient: {text!r}") from exc
    if F.e == 1:
        if not 0 <= n < F.q:
            raise ValueError(f"coefficient {n} outside F_{F.q}")
        return n
    if not 0 <= n < F.p:
        raise ValueError(f"coefficient {n} outside the prime field of F_{F.q}; use g^k")
    return n
