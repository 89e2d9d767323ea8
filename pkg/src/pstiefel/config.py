"""Run configuration shared by the CLI and the experiment scripts."""

from __future__ import annotations

import os
from dataclasses import dataclass

from .plocal import odd_primes_upto


@dataclass(frozen=True)
class GridConfig:
    """Oracle grid: all 2 <= n <= n_max, 1 <= k <= n, odd primes p <= p_max."""

    n_max: int = 6
    p_max: int = 13
    n_min: int = 2
    workers: int = 1
    # safety caps for the spectral-sequence engine
    n_cap: int = 7
    p_cap: int = 61
    max_degree: int | None = None

    def primes(self) -> list[int]:
        return odd_primes_upto(self.p_max)

    def points(self) -> list[tuple[int, int, int]]:
        return [
            (n, k, p)
            for n in range(self.n_min, self.n_max + 1)
            for k in range(1, n + 1)
            for p in self.primes()
        ]

    def within_cap(self) -> bool:
        return self.n_max <= self.n_cap and self.p_max <= self.p_cap


@dataclass(frozen=True)
class TableConfig:
    space: str = "PW"
    n_values: tuple[int, ...] = tuple(range(2, 9))
    k_values: tuple[int, ...] | None = None
    primes: tuple[int, ...] = (5, 7, 11, 13)
    m: int | None = None
    workers: int = 1

    def points(self) -> list[tuple[int, int, int]]:
        out = []
        for n in sorted(set(self.n_values)):
            ks = range(1, n + 1) if self.k_values is None else sorted(k for k in set(self.k_values) if k <= n)
            for k in ks:
                for p in sorted(set(self.primes)):
                    out.append((n, k, p))
        return out


@dataclass(frozen=True)
class OutputConfig:
    """Rendering knobs; read from PSTIEFEL_WIDTH and PSTIEFEL_COLOR."""

    width: int = 100
    color: bool = False
    fmt: str = "json"

    @classmethod
    def from_env(cls, fmt: str = "json", environ: dict | None = None) -> "OutputConfig":
        env = os.environ if environ is None else environ
        try:
            width = int(env.get("PSTIEFEL_WIDTH", "100"))
        except ValueError:
            width = 100
        color = env.get("PSTIEFEL_COLOR", "").lower() in ("1", "true", "yes", "always")
        return cls(max(width, 20), color, fmt)


DEFAULT_GRID = GridConfig()
