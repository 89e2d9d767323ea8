"""Stable splitting certificate for PW_{n,k} and P_l W_{n,k}.

A finite p-local complex of dimension below 2p^2 - 2p, with torsion-free
cohomology and Chern character landing in Z_(p)-cohomology, splits stably
into a wedge of p-local spheres. The third condition is checked on the
generators: ch(x) = e^x - 1 truncated at x^{n-k+1}, and the classes of the
exterior part through the window of Adams' denominators m(r).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .algebra import graded_table
from .errors import DomainError
from .plocal import LocalScalar, adams_m_valuation, check_prime, complete_symmetric_sum, factorial_valuation, vp
from .spaces import SpaceDescriptor, presentation


@dataclass(frozen=True)
class ChernExpansion:
    """ch(x) = sum a_i x^i for i = 1..n-k with a_i = 1/i!."""

    p: int
    coefficients: tuple[LocalScalar, ...]

    @property
    def valuations(self) -> tuple[int, ...]:
        return tuple(int(a.valuation()) for a in self.coefficients)

    @property
    def integral(self) -> bool:
        return all(v >= 0 for v in self.valuations)

    def first_failure(self) -> int | None:
        return next((i + 1 for i, v in enumerate(self.valuations) if v < 0), None)

    def to_json(self) -> dict:
        return {
            "prime": self.p,
            "terms": [
                {"i": i + 1, "coefficient": str(a.value), "valuation": v}
                for i, (a, v) in enumerate(zip(self.coefficients, self.valuations))
            ],
            "integral": self.integral,
        }


def chern_x_expansion(n: int, k: int, p: int) -> ChernExpansion:
    if not 1 <= k <= n:
        raise DomainError("need 1 <= k <= n")
    check_prime(p)
    coeffs = tuple(LocalScalar(Fraction(1, math.factorial(i)), p) for i in range(1, n - k + 1))
    return ChernExpansion(p, coeffs)


@dataclass(frozen=True)
class WindowReport:
    n: int
    k: int
    p: int
    rows: tuple[tuple[int, int], ...]  # (r, v_p(m(r))) for r < n - 1
    top_term_degree: int
    notes: tuple[str, ...] = ()

    @property
    def passed(self) -> bool:
        return all(v == 0 for _, v in self.rows)

    def first_failure(self) -> int | None:
        return next((r for r, v in self.rows if v), None)

    def to_json(self) -> dict:
        return {
            "rows": [{"r": r, "valuation": v} for r, v in self.rows],
            "top_term": f"gamma_{self.n} x^{self.n - self.k}",
            "top_term_degree": self.top_term_degree,
            "pass": self.passed,
            "notes": list(self.notes),
        }


def gamma_integrality_window(n: int, k: int, p: int) -> WindowReport:
    """Adams' valuations for r < n - 1; above that ch_{2(n-k)+1+2r} vanishes for degree reasons.

    ch(gamma_j^K) is a rational combination of gamma_s^H x^t whose top term
    is gamma_n x^{n-k}, so it sits in degrees up to 2n - 1 + 2(n - k).
    """
    check_prime(p)
    if not 1 <= k <= n:
        raise DomainError("need 1 <= k <= n")
    rows = tuple((r, adams_m_valuation(r, p)) for r in range(max(n - 1, 0)))
    notes = []
    if p == n:
        notes.append("p = n: the window closes exactly at r = p - 1, outside the range p > n")
    return WindowReport(n, k, p, rows, 2 * n - 1 + 2 * (n - k), tuple(notes))


@dataclass(frozen=True)
class Condition:
    id: int
    name: str
    passed: bool
    witness: dict

    def to_json(self) -> dict:
        return {"id": self.id, "name": self.name, "pass": self.passed, "witness": self.witness}


@dataclass(frozen=True)
class StableSplitCertificate:
    space: SpaceDescriptor
    p: int
    conditions: tuple[Condition, ...]
    within_hypotheses: bool
    notes: tuple[str, ...] = field(default=())

    @property
    def verdict(self) -> bool:
        return all(c.passed for c in self.conditions)

    def to_json(self) -> dict:
        out = {
            "space": self.space.to_json(),
            "prime": self.p,
            "conditions": [c.to_json() for c in self.conditions],
            "verdict": self.verdict,
        }
        if not self.within_hypotheses:
            out["stamp"] = "outside theorem hypotheses"
        if self.notes:
            out["notes"] = list(self.notes)
        return out


def _torsion_condition(s: SpaceDescriptor, p: int) -> Condition:
    P = presentation(s, p)
    table = graded_table(P)
    terms = [
        {"monomial": P.name_of(t.monomial), "coefficient": str(t.coefficient),
         "valuation": int(vp(t.coefficient, p))}
        for t in P.ideal
    ]
    torsion_degrees = sorted(d for d, t in table.torsion.items() if t)
    witness: dict = {"ideal": terms, "torsion_degrees": torsion_degrees}
    passed = table.is_torsion_free()
    if s.space == "PLW":
        N = s.n - s.k + 1
        h = complete_symmetric_sum(s.l, N)
        witness["h"] = {"j": N, "value": h, "divisible": h % p == 0}
        passed = passed and h % p != 0
    return Condition(2, "torsion-free cohomology", passed, witness)


def stable_split_certificate(s: SpaceDescriptor, p: int) -> StableSplitCertificate:
    if s.space not in ("PW", "PLW"):
        raise DomainError(f"stable certificate covers PW and PLW, not {s.space}")
    check_prime(p)
    n, k = s.n, s.k
    dim = s.dimension
    bound = 2 * p * p - 2 * p
    w1 = {"dim": dim, "bound": bound, "inequality": f"{dim} < {bound}"}
    if p > n:
        w1["chain"] = "k <= n < p gives dim < 2p^2 - 2p"
    c1 = Condition(1, "dimension below 2p^2 - 2p", dim < bound, w1)
    c2 = _torsion_condition(s, p)
    ch = chern_x_expansion(n, k, p)
    window = gamma_integrality_window(n, k, p)
    fact = [{"i": i, "valuation": factorial_valuation(i, p)} for i in range(1, n - k + 1)]
    c3 = Condition(
        3,
        "Chern character integral",
        ch.integral and window.passed,
        {"ch_x": ch.to_json(), "factorials": fact, "adams_window": window.to_json()},
    )
    notes = ()
    if p <= n:
        notes = (f"p = {p} <= n = {n}: evaluated mechanically",)
    return StableSplitCertificate(s, p, (c1, c2, c3), p > n, notes)
