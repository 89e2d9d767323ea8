"""Serre spectral sequences of the fibrations W -> PW -> CP^oo and S^1 -> W_{n,k;m} -> PW.

The E_2 page is (base) (x) Lambda(fiber) with transgressive fiber generators
d(z) = c x^j. That algebra, with the Leibniz extension of the transgressions
as its differential, is a filtered cochain complex (filtration = base degree)
whose spectral sequence is the one we want. Pages are computed from

    E_r^s = Z_r^s / (Z_{r-1}^{s+1} + d Z_{r-1}^{s-r+1}),
    Z_r^s = {a in F^s : d a in F^{s+r}},

using lattice kernels and Smith forms over Z_(p). Weight (x -> 1, z -> j,
base odd classes -> 0) and the base exterior word are preserved by d, so the
complex splits into small blocks.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction

from gmpy2 import mpq
from typing import Iterable

from .algebra import GradedModuleTable, graded_table
from .errors import DomainError
from .plocal import INF, binomial, check_prime, vp
from .smith import ZERO, CoordinateSolver, kernel_basis, matvec, smith_form, zeros
from .spaces import PW, presentation


@dataclass(frozen=True)
class FiberGenerator:
    name: str
    degree: int
    coefficient: Fraction
    x_power: int

    def __post_init__(self):
        if self.degree % 2 == 0:
            raise DomainError("fiber generators must have odd degree")
        if self.coefficient != 0 and self.degree + 1 != 2 * self.x_power:
            raise DomainError(f"{self.name} is not transgressive onto x^{self.x_power}")


@dataclass(frozen=True)
class SSConfiguration:
    """Base Z_(p)[x]/(x^x_bound) (x) Lambda(base_odd), fiber Lambda(fiber)."""

    p: int
    fiber: tuple[FiberGenerator, ...]
    base_odd: tuple[tuple[str, int], ...]
    x_bound: int
    truncation: int
    total_dimension: int
    label: str = ""

    def __post_init__(self):
        check_prime(self.p)
        for z in self.fiber:
            if vp(z.coefficient, self.p) < 0:
                raise DomainError("transgression coefficients must lie in Z_(p)")


# a monomial gamma_O x^i z_J of the E_2 algebra
Mono = tuple[tuple[int, ...], int, tuple[int, ...]]


@dataclass
class PageEntry:
    free: int
    torsion: list[int]
    # adapted generators: (ambient vector, order exponent or None for free)
    gens: list[tuple[list[Fraction], int | None]]
    solver: CoordinateSolver
    P: list[list[Fraction]]
    survivors: list[int]


@dataclass
class SpectralSequenceResult:
    config: SSConfiguration
    table: GradedModuleTable
    pages: dict[int, dict[tuple[int, int], tuple[int, tuple[int, ...]]]]
    einf: dict[tuple[int, int], tuple[int, tuple[int, ...]]]
    dd_checks: int = 0
    dd_failures: list[str] = field(default_factory=list)
    survivor: dict | None = None

    @property
    def converged(self) -> bool:
        """E_oo vanishes above the dimension of the total space."""
        return self.table.top_nonzero_degree() <= self.config.total_dimension

    def trace_json(self) -> dict:
        def dump(page):
            return [
                {"s": s, "t": t, "free_rank": f, "torsion": list(tor)}
                for (s, t), (f, tor) in sorted(page.items())
                if f or tor
            ]

        return {
            "label": self.config.label,
            "prime": self.config.p,
            "truncation": self.config.truncation,
            "pages": {str(r): dump(pg) for r, pg in sorted(self.pages.items())},
            "E_infinity": dump(self.einf),
            "dd_checks": self.dd_checks,
            "dd_failures": self.dd_failures,
        }


def monomial_degree(cfg: SSConfiguration, m: Mono) -> int:
    O, i, J = m
    return sum(cfg.base_odd[o][1] for o in O) + 2 * i + sum(cfg.fiber[j].degree for j in J)


def filtration(cfg: SSConfiguration, m: Mono) -> int:
    O, i, _ = m
    return sum(cfg.base_odd[o][1] for o in O) + 2 * i


def koszul_differential(cfg: SSConfiguration, m: Mono) -> dict[Mono, Fraction]:
    """d(gamma_O x^i z_J) = (-1)^|O| gamma_O x^i sum_a (-1)^(a) c_a x^{j_a} z_{J - j_a}."""
    O, i, J = m
    out: dict[Mono, Fraction] = {}
    base_sign = -1 if len(O) % 2 else 1
    for a, j in enumerate(J):
        z = cfg.fiber[j]
        if z.coefficient == 0:
            continue
        i2 = i + z.x_power
        if i2 >= cfg.x_bound:
            continue
        target = (O, i2, J[:a] + J[a + 1:])
        sign = base_sign * (-1 if a % 2 else 1)
        out[target] = out.get(target, ZERO) + sign * z.coefficient
    return {t: c for t, c in out.items() if c}


def _blocks(cfg: SSConfiguration, order_seed: int | None) -> dict:
    top = cfg.truncation + 1
    blocks: dict[tuple, dict[int, list[Mono]]] = {}
    nf = len(cfg.fiber)
    for r in range(len(cfg.base_odd) + 1):
        for O in itertools.combinations(range(len(cfg.base_odd)), r):
            for q in range(nf + 1):
                for J in itertools.combinations(range(nf), q):
                    for i in range(cfg.x_bound):
                        m = (O, i, J)
                        d = monomial_degree(cfg, m)
                        if d > top:
                            break
                        w = i + sum(cfg.fiber[j].x_power for j in J)
                        blocks.setdefault((O, w), {}).setdefault(d, []).append(m)
    rng = random.Random(order_seed) if order_seed is not None else None
    for per_deg in blocks.values():
        for d in per_deg:
            per_deg[d].sort()
            if rng is not None:
                rng.shuffle(per_deg[d])
    return blocks


class _Block:
    def __init__(self, cfg: SSConfiguration, basis: dict[int, list[Mono]]):
        self.cfg = cfg
        self.basis = basis
        self.filt = {d: [filtration(cfg, m) for m in ms] for d, ms in basis.items()}
        self.D: dict[int, list[list[Fraction]]] = {}
        for d, ms in basis.items():
            tgt = basis.get(d + 1, [])
            index = {m: i for i, m in enumerate(tgt)}
            mat = zeros(len(tgt), len(ms))
            for j, m in enumerate(ms):
                for t, c in koszul_differential(cfg, m).items():
                    if t in index:  # targets above the degree cutoff are quotiented away
                        mat[index[t]][j] += c
            self.D[d] = mat
        self._z_cache: dict = {}

    def apply_d(self, d: int, v: list[Fraction]) -> list[Fraction]:
        mat = self.D.get(d)
        if not mat:
            return []
        return matvec(mat, v)

    def z_lattice(self, d: int, s: int, r: int) -> list[list[Fraction]]:
        """Basis of Z_r^s in degree d as ambient vectors."""
        key = (d, s, r)
        if key in self._z_cache:
            return self._z_cache[key]
        ms = self.basis.get(d, [])
        cols = [j for j, f in enumerate(self.filt.get(d, [])) if f >= s]
        tgt_f = self.filt.get(d + 1, [])
        rows = [i for i, f in enumerate(tgt_f) if f < s + r]
        D = self.D.get(d, [])
        sub = [[D[i][j] for j in cols] for i in rows]
        ker = kernel_basis(sub, self.cfg.p, len(rows), len(cols))
        out = []
        for kv in ker:
            v = [ZERO] * len(ms)
            for j, c in zip(cols, kv):
                v[j] = c
            out.append(v)
        self._z_cache[key] = out
        return out

    def page_entry(self, d: int, s: int, r: int) -> PageEntry:
        p = self.cfg.p
        Z = self.z_lattice(d, s, r)
        rels = list(self.z_lattice(d, s + 1, r - 1))
        if d - 1 in self.basis:
            for a in self.z_lattice(d - 1, s - r + 1, r - 1):
                b = self.apply_d(d - 1, a)
                if any(b):
                    rels.append(b)
        solver = CoordinateSolver(Z)
        coords = []
        for rel in rels:
            c = solver.coords(rel)
            if c is None or any(x and vp(x, p) < 0 for x in c):
                raise AssertionError(f"relation outside Z_r lattice at d={d}, s={s}, r={r}")
            coords.append(c)
        nz = len(Z)
        R = zeros(nz, len(coords))
        for j, c in enumerate(coords):
            for i in range(nz):
                R[i][j] = c[i]
        sf = smith_form(R, p, nz, len(coords), cols=False)
        gens = []
        survivors = []
        torsion = []
        amb = len(Z[0]) if Z else 0
        for i in range(nz):
            vec = [ZERO] * amb
            for k in range(nz):
                f = sf.p_inv[k][i]
                if f:
                    for a, x in enumerate(Z[k]):
                        if x:
                            vec[a] += f * x
            if i < sf.rank:
                v = sf.valuations[i]
                gens.append((vec, v))
                if v > 0:
                    survivors.append(i)
                    torsion.append(v)
            else:
                gens.append((vec, None))
                survivors.append(i)
        return PageEntry(nz - sf.rank, sorted(torsion), gens, solver, sf.P, survivors)

    def express(self, entry: PageEntry, v: list[Fraction]) -> list[Fraction]:
        """Coordinates of a cycle in the adapted generators of `entry` (survivors only)."""
        c = entry.solver.coords(v)
        if c is None:
            raise AssertionError("image of d_r is not in the target Z_r lattice")
        adapted = matvec(entry.P, c) if entry.P else []
        return [adapted[i] for i in entry.survivors]


def _page_numbers(cfg: SSConfiguration) -> list[int]:
    return sorted({2} | {2 * z.x_power for z in cfg.fiber if z.coefficient != 0})


def run_spectral_sequence(cfg: SSConfiguration, order_seed: int | None = None,
                          check_dd: bool = True) -> SpectralSequenceResult:
    p = cfg.p
    blocks = _blocks(cfg, order_seed)
    pages: dict[int, dict] = {r: {} for r in _page_numbers(cfg)}
    einf: dict[tuple[int, int], tuple[int, tuple[int, ...]]] = {}
    free: dict[int, int] = {}
    tors: dict[int, list[int]] = {}
    dd_checks = 0
    failures: list[str] = []
    survivor_vectors: dict = {}

    def add(page, key, f, t):
        f0, t0 = page.get(key, (0, ()))
        page[key] = (f0 + f, tuple(sorted(t0 + tuple(t))))

    for key, basis in sorted(blocks.items()):
        blk = _Block(cfg, basis)
        degrees = sorted(d for d in basis if d <= cfg.truncation)
        all_f = [f for fs in blk.filt.values() for f in fs]
        span = max(all_f) - min(all_f)
        r_inf = span + 2
        inf_entries = {}
        for d in degrees:
            for s in sorted(set(blk.filt[d])):
                e = blk.page_entry(d, s, r_inf)
                inf_entries[(d, s)] = e
                add(einf, (s, d - s), e.free, e.torsion)
                free[d] = free.get(d, 0) + e.free
                tors.setdefault(d, []).extend(e.torsion)
                if e.free or e.torsion:
                    survivor_vectors[(key, d, s)] = (basis[d], e)
        for r in pages:
            if r >= r_inf:
                # d_r and all later differentials vanish inside this block
                for (d, s), e in inf_entries.items():
                    add(pages[r], (s, d - s), e.free, e.torsion)
                continue
            entries = {}
            for d in sorted(basis):
                for s in sorted(set(blk.filt[d])):
                    entries[(d, s)] = blk.page_entry(d, s, r)
                    if d <= cfg.truncation:
                        e = entries[(d, s)]
                        add(pages[r], (s, d - s), e.free, e.torsion)
            if not check_dd:
                continue
            mats = {}
            for (d, s), e in entries.items():
                tgt = entries.get((d + 1, s + r))
                if tgt is None or d + 1 > cfg.truncation + 1:
                    continue
                cols = []
                for i in e.survivors:
                    img = blk.apply_d(d, e.gens[i][0])
                    cols.append(blk.express(tgt, img) if img else [ZERO] * len(tgt.survivors))
                mats[(d, s)] = cols
            for (d, s), cols in mats.items():
                nxt = mats.get((d + 1, s + r))
                if nxt is None:
                    continue
                tgt = entries[(d + 2, s + 2 * r)]
                dd_checks += 1
                for col in cols:
                    comp = [ZERO] * len(tgt.survivors)
                    for j, cj in enumerate(col):
                        if cj:
                            for i, x in enumerate(nxt[j]):
                                comp[i] += cj * x
                    for i, val in enumerate(comp):
                        order = tgt.gens[tgt.survivors[i]][1]
                        bad = val != 0 if order is None else (val != 0 and vp(val, p) < order)
                        if bad:
                            failures.append(f"block {key} r={r} d={d} s={s}")
    table = GradedModuleTable(cfg.truncation, free, {d: tuple(t) for d, t in tors.items()})
    res = SpectralSequenceResult(cfg, table, pages, einf, dd_checks, failures)
    res._survivors = survivor_vectors  # type: ignore[attr-defined]
    return res


def pw_configuration(n: int, k: int, p: int, truncation_degree: int | None = None,
                     coefficients: dict[int, int] | None = None) -> SSConfiguration:
    """W_{n,k} -> PW_{n,k} -> CP^oo with d_{2j}(z_j) = C(n,j) x^j.

    `coefficients` overrides the transgression coefficients (used for P_l W).
    """
    if not 1 <= k <= n:
        raise DomainError("need 1 <= k <= n")
    dim = 2 * n * k - k * k - 1
    T = dim + 2 if truncation_degree is None else truncation_degree
    if T < dim + 2:
        raise DomainError(
            f"truncation {T} below 2nk-k^2+1 = {dim + 2}: convergence would be incomplete"
        )
    N = n - k + 1
    coeffs = coefficients or {j: binomial(n, j) for j in range(N, n + 1)}
    fiber = tuple(FiberGenerator(f"z_{j}", 2 * j - 1, mpq(coeffs[j]), j) for j in range(N, n + 1))
    return SSConfiguration(p, fiber, (), math.ceil(T / 2) + 2, T, dim, f"PW({n},{k}) p={p}")


def run_pw_fibration(n: int, k: int, p: int, truncation_degree: int | None = None,
                     order_seed: int | None = None) -> GradedModuleTable:
    return run_spectral_sequence(pw_configuration(n, k, p, truncation_degree), order_seed).table


def wm_configuration(n: int, k: int, m: int, p: int, truncation_degree: int | None = None) -> SSConfiguration:
    """S^1 -> W_{n,k;m} -> PW_{n,k} with d_2(e) = m x over the torsion-free PW ring."""
    check_prime(p)
    if m % p != 0:
        raise DomainError(f"run_wm_fibration needs p | m (p={p}, m={m})")
    if p <= n:
        raise DomainError(f"run_wm_fibration needs p > n (p={p}, n={n})")
    if not 1 <= k <= n:
        raise DomainError("need 1 <= k <= n")
    base = presentation(PW(n, k), p)
    if not graded_table(base).is_torsion_free():
        raise DomainError("base cohomology must be torsion free")
    x_bound = base._truncation[0]
    dim = 2 * n * k - k * k
    T = dim + 2 if truncation_degree is None else truncation_degree
    if T < dim + 2:
        raise DomainError("truncation below dim + 2")
    base_odd = tuple((g.name, g.degree) for g in base.odd_gens)
    fiber = (FiberGenerator("e", 1, mpq(m), 1),)
    return SSConfiguration(p, fiber, base_odd, x_bound, T, dim, f"WM({n},{k};{m}) p={p}")


def wm_spectral_sequence(n: int, k: int, m: int, p: int, truncation_degree: int | None = None,
                         order_seed: int | None = None) -> SpectralSequenceResult:
    cfg = wm_configuration(n, k, m, p, truncation_degree)
    res = run_spectral_sequence(cfg, order_seed)
    N = n - k + 1
    target = ((), N - 1, (0,))
    d, s = 2 * N - 1, 2 * N - 2
    present = False
    for (key, dd, ss), (basis, entry) in res._survivors.items():  # type: ignore[attr-defined]
        if dd != d or ss != s or key[0] != ():
            continue
        for i in entry.survivors:
            vec, order = entry.gens[i]
            if order is None and target in basis:
                idx = basis.index(target)
                others = any(c for j, c in enumerate(vec) if j != idx)
                if vec[idx] and vp(vec[idx], p) == 0 and not others:
                    present = True
    res.survivor = {
        "class": f"e*x^{N - 1}",
        "detects": f"gamma_{N}",
        "degree": d,
        "bidegree": [s, 1],
        "present": present,
    }
    return res


def run_wm_fibration(n: int, k: int, m: int, p: int, truncation_degree: int | None = None) -> GradedModuleTable:
    return wm_spectral_sequence(n, k, m, p, truncation_degree).table


@dataclass
class TableComparison:
    mismatches: list[dict]

    @property
    def equal(self) -> bool:
        return not self.mismatches

    @property
    def first_mismatch(self) -> dict | None:
        return self.mismatches[0] if self.mismatches else None

    def to_json(self) -> dict:
        return {"equal": self.equal, "mismatches": self.mismatches}


def compare_tables(a: GradedModuleTable, b: GradedModuleTable) -> TableComparison:
    if a.top_degree != b.top_degree:
        raise DomainError(f"tables truncated differently ({a.top_degree} vs {b.top_degree})")
    diffs = []
    for d in range(a.top_degree + 1):
        if a.rank(d) != b.rank(d) or a.torsion_at(d) != b.torsion_at(d):
            diffs.append({
                "degree": d,
                "left": {"free_rank": a.rank(d), "torsion": list(a.torsion_at(d))},
                "right": {"free_rank": b.rank(d), "torsion": list(b.torsion_at(d))},
            })
    return TableComparison(diffs)


def perturbed(table: GradedModuleTable, degree: int) -> GradedModuleTable:
    """Copy of `table` with one extra free summand in `degree` (self-test fixture)."""
    free = dict(table.free)
    free[degree] = free.get(degree, 0) + 1
    return GradedModuleTable(table.top_degree, free, dict(table.torsion))


__all__: Iterable[str] = (
    "FiberGenerator", "SSConfiguration", "SpectralSequenceResult", "run_spectral_sequence",
    "pw_configuration", "run_pw_fibration", "wm_configuration", "wm_spectral_sequence",
    "run_wm_fibration", "compare_tables", "perturbed", "koszul_differential", "INF",
)
