"""Grid drivers: oracle verification and verdict tables, optionally fanned out to workers.

Results are always assembled in input order, so output does not depend on the
number of workers or on completion order.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

from .algebra import graded_table
from .errors import DomainError
from .serre import compare_tables, perturbed, run_spectral_sequence, pw_configuration, wm_spectral_sequence
from .spaces import PW, W, WM, SpaceDescriptor, presentation
from .verdict import M_bound_check, full_verdict, stable_range_check, theorem_A_bound


@dataclass(frozen=True)
class PointResult:
    space: str
    n: int
    k: int
    p: int
    m: int | None
    truncation: int
    equal: bool
    first_mismatch: dict | None
    dd_checks: int
    dd_failures: int
    converged: bool
    survivor: bool | None = None

    @property
    def ok(self) -> bool:
        good = self.equal and not self.dd_failures and self.converged
        return good and self.survivor is not False

    def to_json(self) -> dict:
        out = {
            "space": self.space, "n": self.n, "k": self.k, "p": self.p,
            "truncation": self.truncation, "equal": self.equal,
            "first_mismatch": self.first_mismatch, "dd_checks": self.dd_checks,
            "dd_failures": self.dd_failures, "converged": self.converged, "ok": self.ok,
        }
        if self.m is not None:
            out["m"] = self.m
        if self.survivor is not None:
            out["survivor_present"] = self.survivor
        return out


def verify_pw(n: int, k: int, p: int, truncation: int | None = None,
              perturb: int | None = None) -> PointResult:
    """Spectral-sequence table of PW_{n,k} against the closed-form presentation table."""
    cfg = pw_configuration(n, k, p, truncation)
    res = run_spectral_sequence(cfg)
    expected = graded_table(presentation(PW(n, k), p), cfg.truncation)
    if perturb is not None:
        expected = perturbed(expected, perturb)
    cmp = compare_tables(res.table, expected)
    return PointResult("PW", n, k, p, None, cfg.truncation, cmp.equal, cmp.first_mismatch,
                       res.dd_checks, len(res.dd_failures), res.converged)


def verify_wm(n: int, k: int, m: int, p: int, truncation: int | None = None,
              perturb: int | None = None) -> PointResult:
    res = wm_spectral_sequence(n, k, m, p, truncation)
    T = res.config.truncation
    expected = graded_table(presentation(WM(n, k, m), p), T)
    if perturb is not None:
        expected = perturbed(expected, perturb)
    cmp = compare_tables(res.table, expected)
    return PointResult("WM", n, k, p, m, T, cmp.equal, cmp.first_mismatch, res.dd_checks,
                       len(res.dd_failures), res.converged, bool(res.survivor["present"]))


def _verify_task(args: tuple) -> dict:
    n, k, p, trunc = args
    return verify_pw(n, k, p, trunc).to_json()


def ordered_map(fn: Callable, items: Sequence, workers: int = 1) -> list:
    if workers <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items, chunksize=1))


def verify_grid(points: Iterable[tuple[int, int, int]], workers: int = 1,
                max_degree: int | None = None) -> list[dict]:
    items = []
    for n, k, p in points:
        dim = 2 * n * k - k * k - 1
        if max_degree is not None and max_degree < dim + 2:
            raise DomainError(f"PW({n},{k}) needs truncation {dim + 2} > max degree {max_degree}")
        items.append((n, k, p, None))
    return ordered_map(_verify_task, items, workers)


def _descriptor(space: str, n: int, k: int, m: int | None) -> SpaceDescriptor:
    if space == "PW":
        return PW(n, k)
    if space == "W":
        return W(n, k)
    if space == "WM":
        if m is None:
            raise DomainError("WM table needs m")
        return WM(n, k, m)
    raise DomainError(f"table supports PW, W and WM, not {space}")


def verdict_row(args: tuple) -> dict:
    space, n, k, p, m = args
    s = _descriptor(space, n, k, m)
    v = full_verdict(s, p)
    return {
        "space": space,
        "n": n,
        "k": k,
        "p": p,
        "dim": s.dimension,
        "theorem": v.theorem or "none",
        "stable": v.stable,
        "A_bound": str(theorem_A_bound(n, k)),
        "M_pass": M_bound_check(n, k, p).passed,
        "stable_range_pass": stable_range_check(n, k, p).passed,
    }


def verdict_table(space: str, points: Iterable[tuple[int, int, int]], m: int | None = None,
                  workers: int = 1) -> list[dict]:
    items = [(space, n, k, p, m) for n, k, p in sorted(points)]
    return ordered_map(verdict_row, items, workers)


TABLE_COLUMNS = ("space", "n", "k", "p", "dim", "theorem", "stable", "A_bound", "M_pass", "stable_range_pass")
