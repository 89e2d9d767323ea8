"""Closed-form cohomology presentations for Stiefel manifolds and their quotients."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

from .algebra import (
    Element,
    Generator,
    GradedModuleTable,
    RingPresentation,
    apply_derivation,
    graded_table,
    tensor_tables,
)
from .errors import DomainError, UnsupportedRegime
from .plocal import LocalScalar, binomial, check_prime, complete_symmetric_sum, gcd_all, vp

VARIANTS = ("W", "PW", "PLW", "WM", "Y", "Lens", "SphereProduct", "CP", "Product")


@dataclass(frozen=True)
class SpaceDescriptor:
    space: str
    n: int | None = None
    k: int | None = None
    l: tuple[int, ...] | None = None
    m: int | None = None
    degrees: tuple[int, ...] | None = None
    factors: tuple["SpaceDescriptor", ...] | None = None

    def __post_init__(self):
        if self.l is not None:
            object.__setattr__(self, "l", tuple(self.l))
        if self.degrees is not None:
            object.__setattr__(self, "degrees", tuple(self.degrees))
        if self.factors is not None:
            object.__setattr__(self, "factors", tuple(self.factors))
        self.validate()

    def validate(self) -> None:
        s = self.space
        if s not in VARIANTS:
            raise DomainError(f"unknown space {s!r}")
        if s in ("W", "PW", "PLW", "WM", "Y"):
            if self.n is None or self.k is None:
                raise DomainError(f"{s} needs n and k")
            if not 1 <= self.k <= self.n:
                raise DomainError(f"need 1 <= k <= n, got n={self.n}, k={self.k}")
        if s == "PLW":
            if self.l is None or len(self.l) != self.k:
                raise DomainError("PLW needs a weight tuple l of length k")
            if gcd_all(self.l) != 1:
                raise DomainError("PLW weights must have gcd 1")
        if s in ("WM", "Lens"):
            if self.m is None or self.m < 2:
                raise DomainError(f"{s} needs m >= 2")
        if s == "Lens":
            if self.n is None or self.n < 1 or self.n % 2 == 0:
                raise DomainError("Lens(m, d) needs odd dimension d stored in n")
        if s == "CP":
            if self.n is None or self.n < 0:
                raise DomainError("CP needs n >= 0")
        if s == "SphereProduct":
            if self.degrees is None or any(d <= 0 or d % 2 == 0 for d in self.degrees):
                raise DomainError("SphereProduct needs positive odd degrees")
        if s == "Product":
            if not self.factors:
                raise DomainError("Product needs factors")

    @property
    def dimension(self) -> int:
        s, n, k = self.space, self.n, self.k
        if s in ("W", "WM"):
            return 2 * n * k - k * k
        if s in ("PW", "PLW", "Y"):
            return 2 * n * k - k * k - 1
        if s == "Lens":
            return n
        if s == "CP":
            return 2 * n
        if s == "SphereProduct":
            return sum(self.degrees)
        return sum(f.dimension for f in self.factors)

    def label(self) -> str:
        s, n, k = self.space, self.n, self.k
        if s == "PW":
            return f"PW_{{{n},{k}}}"
        if s == "W":
            return f"W_{{{n},{k}}}"
        if s == "PLW":
            return f"P_{self.l}W_{{{n},{k}}}"
        if s == "WM":
            return f"W_{{{n},{k};{self.m}}}"
        if s == "Y":
            return f"Y_{{{n},{k}}}"
        if s == "Lens":
            return f"L_{self.m}({n})"
        if s == "CP":
            return f"CP^{n}"
        if s == "SphereProduct":
            return " × ".join(f"S^{d}" for d in self.degrees) or "pt"
        return " × ".join(f.label() for f in self.factors)

    def to_json(self) -> dict:
        out: dict = {"space": self.space}
        for key in ("n", "k", "m"):
            v = getattr(self, key)
            if v is not None:
                out[key] = v
        if self.l is not None:
            out["l"] = list(self.l)
        if self.degrees is not None:
            out["degrees"] = list(self.degrees)
        if self.factors is not None:
            out["factors"] = [f.to_json() for f in self.factors]
        return out

    @classmethod
    def from_json(cls, data: Mapping) -> "SpaceDescriptor":
        factors = data.get("factors")
        return cls(
            space=data["space"],
            n=data.get("n"),
            k=data.get("k"),
            l=tuple(data["l"]) if data.get("l") is not None else None,
            m=data.get("m"),
            degrees=tuple(data["degrees"]) if data.get("degrees") is not None else None,
            factors=tuple(cls.from_json(f) for f in factors) if factors else None,
        )


def PW(n: int, k: int) -> SpaceDescriptor:
    return SpaceDescriptor("PW", n, k)


def W(n: int, k: int) -> SpaceDescriptor:
    return SpaceDescriptor("W", n, k)


def PLW(n: int, k: int, l) -> SpaceDescriptor:
    return SpaceDescriptor("PLW", n, k, l=tuple(l))


def WM(n: int, k: int, m: int) -> SpaceDescriptor:
    return SpaceDescriptor("WM", n, k, m=m)


def Lens(m: int, dim: int) -> SpaceDescriptor:
    return SpaceDescriptor("Lens", dim, m=m)


def spheres(degrees) -> SpaceDescriptor:
    return SpaceDescriptor("SphereProduct", degrees=tuple(degrees))


def _gamma(j: int) -> Generator:
    return Generator(f"gamma_{j}", 2 * j - 1)


def _projective(n: int, k: int, p: int, coeffs: dict[int, int], dim: int, notice=None) -> RingPresentation:
    """Lambda(gamma_{n-k+2..n}) (x) Z_(p)[x] / (c_j x^j)."""
    gens = [Generator("x", 2)] + [_gamma(j) for j in range(n - k + 2, n + 1)]
    ideal = [(c, {"x": j}) for j, c in sorted(coeffs.items()) if c != 0]
    return RingPresentation(p, gens, ideal, dimension=dim, notice=notice)


def presentation(s: SpaceDescriptor, p: int) -> RingPresentation:
    check_prime(p)
    n, k = s.n, s.k
    if s.space == "PW":
        return _projective(n, k, p, {j: binomial(n, j) for j in range(n - k + 1, n + 1)}, s.dimension)
    if s.space == "PLW":
        # (-1)^j is a unit, so h_j(l) is stored unsigned
        coeffs = {j: complete_symmetric_sum(s.l, j) for j in range(n - k + 1, n + 1)}
        return _projective(n, k, p, coeffs, s.dimension)
    if s.space == "Y":
        return _projective(n, k, p, {n - k + 1: 1}, s.dimension)
    if s.space == "W":
        gens = [Generator(f"z_{j}", 2 * j - 1) for j in range(n - k + 1, n + 1)]
        return RingPresentation(p, gens, dimension=s.dimension)
    if s.space == "WM":
        if s.m % p != 0:
            base = presentation(W(n, k), p)
            return RingPresentation(
                p, base.generators, dimension=s.dimension,
                notice=f"p={p} does not divide m={s.m}: W_{{n,k;m}} has the cohomology of W_{{{n},{k}}}",
            )
        if p <= n:
            raise UnsupportedRegime(
                f"W_{{n,k;m}} presentation is only built for p > n (got p={p}, n={n})"
            )
        N = n - k + 1
        gens = [Generator("x", 2)] + [_gamma(j) for j in range(N, n + 1)]
        ideal = [(s.m, {"x": 1}), (1, {"x": N}), (1, {"x": 1, f"gamma_{N}": 1})]
        return RingPresentation(p, gens, ideal, dimension=s.dimension)
    if s.space == "Lens":
        # L_m(2t+1): Z_(p)[x]/(m x, x^{t+1}, e x) (x) Lambda(e), |e| = 2t+1
        t = (s.n - 1) // 2
        gens = [Generator("x", 2), Generator("e", s.n)]
        ideal = [(s.m, {"x": 1}), (1, {"x": t + 1}), (1, {"x": 1, "e": 1})]
        return RingPresentation(p, gens, ideal, dimension=s.dimension)
    if s.space == "CP":
        return RingPresentation(p, [Generator("x", 2)], [(1, {"x": s.n + 1})], dimension=s.dimension)
    if s.space == "SphereProduct":
        gens = [Generator(f"s{i}_{d}", d) for i, d in enumerate(s.degrees)]
        return RingPresentation(p, gens, dimension=s.dimension)
    raise DomainError(f"no single presentation for {s.space}; use kunneth_table")


def comparison_space(s: SpaceDescriptor) -> SpaceDescriptor:
    n, k = s.n, s.k
    if s.space in ("PW", "PLW"):
        return SpaceDescriptor("Y", n, k)
    if s.space == "W":
        return spheres(range(2 * (n - k) + 1, 2 * n, 2))
    if s.space == "WM":
        tail = tuple(range(2 * n - 2 * k + 3, 2 * n, 2))
        lens = Lens(s.m, 2 * n - 2 * k + 1)
        return SpaceDescriptor("Product", factors=(lens, spheres(tail))) if tail else lens
    raise DomainError(f"no comparison space for {s.space}")


def factor_list(s: SpaceDescriptor) -> list[SpaceDescriptor]:
    """Split a model space into irreducible factors (CP, Lens, single spheres)."""
    if s.space == "Y":
        out = [SpaceDescriptor("CP", s.n - s.k)]
        out += [spheres((2 * j - 1,)) for j in range(s.n - s.k + 2, s.n + 1)]
        return out
    if s.space == "SphereProduct":
        return [spheres((d,)) for d in s.degrees]
    if s.space == "Product":
        return [f for fac in s.factors for f in factor_list(fac)]
    return [s]


def kunneth_table(s: SpaceDescriptor, p: int, top_degree: int) -> GradedModuleTable:
    """Table of a product space assembled factor by factor via the Kunneth formula."""
    table = GradedModuleTable(top_degree, {0: 1})
    for f in factor_list(s):
        table = tensor_tables(table, graded_table(presentation(f, p), top_degree))
    return table


@dataclass(frozen=True)
class RhoEntry:
    j: int
    x_power: int
    coefficient: LocalScalar
    in_zp: bool


@dataclass(frozen=True)
class GeneratorLedger:
    """Bookkeeping for the classes gamma_j^H of PW_{n,k}.

    rho_j = u_j - x^{j-(n-k+1)} (mu_j / mu_{n-k+1}) u_{n-k+1}, mu_j = C(n,j).
    """

    n: int
    k: int
    p: int
    mu: dict[int, int] = field(default_factory=dict)
    rho: tuple[RhoEntry, ...] = ()

    @property
    def defined(self) -> bool:
        return vp(self.mu[self.n - self.k + 1], self.p) == 0

    def to_json(self) -> dict:
        return {
            "symbols": ["x"] + [f"gamma_{r.j}^H" for r in self.rho],
            "mu": {str(j): c for j, c in self.mu.items()},
            "rho": [
                {
                    "j": r.j,
                    "x_power": r.x_power,
                    "coefficient": str(r.coefficient),
                    "in_Zp": r.in_zp,
                }
                for r in self.rho
            ],
            "defined": self.defined,
        }


def generator_ledger(n: int, k: int, p: int) -> GeneratorLedger:
    check_prime(p)
    N = n - k + 1
    mu = {j: binomial(n, j) for j in range(N, n + 1)}
    rho = []
    for j in range(N + 1, n + 1):
        c = LocalScalar(Fraction(mu[j], mu[N]), p)
        rho.append(RhoEntry(j, j - N, c, c.is_local()))
    return GeneratorLedger(n, k, p, mu, tuple(rho))


@dataclass
class MinimalModel:
    """Free graded-commutative algebra with differential, stored as data."""

    n: int
    k: int
    algebra: RingPresentation
    differential: dict[str, Element]

    def d(self, elem: Element) -> Element:
        return apply_derivation(self.differential, elem)

    def d_squared_vanishes(self) -> bool:
        return all(not self.d(self.d(Element.generator(self.algebra, g.name))) for g in self.algebra.generators)

    def to_json(self) -> dict:
        return {
            "generators": [{"name": g.name, "degree": g.degree} for g in self.algebra.generators],
            "differential": {
                g.name: repr(self.differential.get(g.name, Element(self.algebra)))
                for g in self.algebra.generators
            },
        }


def minimal_model(n: int, k: int, p: int = 3) -> MinimalModel:
    """P(x~) (x) Lambda(y~_{n-k+1..n}) with d(y~_{n-k+1}) = x~^{n-k+1}, other gens cycles.

    The prime only labels the coefficient ring; the model is rational data.
    """
    if not 1 <= k <= n:
        raise DomainError("need 1 <= k <= n")
    N = n - k + 1
    gens = [Generator("xt", 2)] + [Generator(f"yt_{j}", 2 * j - 1) for j in range(N, n + 1)]
    A = RingPresentation(p, gens, bounded=False)
    d = {f"yt_{N}": Element(A, {A.monomial({"xt": N}): 1})}
    return MinimalModel(n, k, A, d)


def k_theory_presentation(n: int, k: int) -> dict:
    """Documentation-only record of the K-theory presentation for p > n.

    Exterior generators are indexed from n-k+3 as published, while ordinary
    cohomology starts at n-k+2; the two index ranges are left unreconciled.
    """
    return {
        "exterior": [f"gamma_{j}^K" for j in range(n - k + 3, n + 1)],
        "polynomial": "x",
        "relation": f"x^{n - k + 1}",
        "cohomology_exterior": [f"gamma_{j}^H" for j in range(n - k + 2, n + 1)],
        "verified": False,
    }
