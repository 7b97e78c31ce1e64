from __future__ import annotations

import os
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from .fields import MAX_Q, prime_power
from .polynomials import Poly, format_poly

CACHE_ENV = "FFSTURM_CACHE"
OUTPUTS = ("json", "table")


@dataclass(slots=True)
class Config:
    """Run settings shared by every subcommand.

    - q: prime power with 2 <= q <= 9
    - level: monic nonzero polynomial, when the command takes one
    - output: "json" or "table"
    - jobs: worker processes (>= 1); changes wall time only
    - cache_dir: on-disk result cache; the ``FFSTURM_CACHE`` environment variable
      overrides it
    - timeout: per-cell time limit in seconds for batch drivers
    """

    q: int
    level: Optional[Poly] = None
    output: str = "json"
    jobs: int = 1
    cache_dir: Optional[Path] = None
    timeout: Optional[float] = None
    selfcheck: bool = True

    def validate(self) -> None:
        if not 2 <= self.q <= MAX_Q:
            raise ValueError(f"q must satisfy 2 <= q <= {MAX_Q}, got {self.q}")
        prime_power(self.q)
        if self.level is not None:
            if self.level.q != self.q:
                raise ValueError(f"level {format_poly(self.level)} lives over F_{self.level.q}, not F_{self.q}")
            if self.level.is_zero() or not self.level.is_monic():
                raise ValueError(f"level must be monic and nonzero, got {format_poly(self.level)}")
        if self.output not in OUTPUTS:
            raise ValueError(f"output must be one of {OUTPUTS}, got {self.output!r}")
        if self.jobs < 1:
            raise ValueError(f"jobs must be at least 1, got {self.jobs}")
        if self.timeout is not None and self.timeout <= 0:
            raise ValueError("timeout must be positive")

    def resolved_cache_dir(self) -> Optional[Path]:
        env = os.getenv(CACHE_ENV)
        if env:
            return Path(env)
        return self.cache_dir
