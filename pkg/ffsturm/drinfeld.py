"""Coefficient cutoff for ℓ-cuspidal Drinfeld modular forms of weight k and type m.

A form on Γ₀(n) whose t-expansion coefficients b_j vanish for 0 <= j <= B is
zero, where

    B = κ(n)·(k/(q²-1) - ℓ/((q-1)|n|)) + (ℓ - m|n|)/((q-1)|n|)

and κ(n) = [GL₂(A) : Γ₀(n)].
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
import logging
import math
from typing import Any

from .polynomials import format_poly
from .projective import Level, index_kappa, kappa_formula
from .serialization import SCHEMA

_logger = logging.getLogger(__name__)

__all__ = ["DrinfeldBoundQuery", "DrinfeldBound", "drinfeld_sturm", "index_kappa", "kappa_formula"]


@dataclass(slots=True)
class DrinfeldBoundQuery:
    level: Level
    k: int
    m: int
    ell: int = 0

    def validate(self) -> None:
        q = self.level.q
        if self.k < 0:
            raise ValueError(f"weight must be non-negative, got {self.k}")
        if not 0 <= self.m <= q - 2:
            raise ValueError(f"type must satisfy 0 <= m <= q - 2 = {q - 2}, got {self.m}")
        if self.ell < 0:
            raise ValueError(f"cuspidality order must be non-negative, got {self.ell}")

    @property
    def q(self) -> int:
        return self.level.q

    def warning(self) -> str | None:
        q = self.q
        if (self.k - 2 * self.m) % (q - 1):
            return f"M_{{k,m}}(n) = 0 since k = {self.k} is not congruent to 2m = {2 * self.m} mod {q - 1}"
        return None


@dataclass(slots=True)
class DrinfeldBound:
    B: Fraction
    kappa: int
    warning: str | None = None

    @property
    def j_max(self) -> int:
        """Largest index j with j <= B (coefficients b_0..b_j determine the form)."""
        return math.floor(self.B)

    def to_json(self, query: DrinfeldBoundQuery) -> dict[str, Any]:
        out: dict[str, Any] = {
            "schema": SCHEMA,
            "q": query.q,
            "level": format_poly(query.level.n),
            "k": query.k,
            "type": query.m,
            "ell": query.ell,
            "B": str(self.B),
            "j_max": self.j_max,
            "kappa": self.kappa,
        }
        if self.warning:
            out["warning"] = self.warning
        return out


def drinfeld_sturm(query: DrinfeldBoundQuery) -> DrinfeldBound:
    query.validate()
    q = query.q
    norm = query.level.norm
    kappa = index_kappa(query.level)
    B = kappa * (Fraction(query.k, q * q - 1) - Fraction(query.ell, (q - 1) * norm)) + Fraction(
        query.ell - query.m * norm, (q - 1) * norm
    )
    warning = query.warning()
    if warning:
        _logger.warning("%s", warning)
    return DrinfeldBound(B, kappa, warning)
