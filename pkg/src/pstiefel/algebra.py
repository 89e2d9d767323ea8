"""Graded-commutative algebra over Z_(p).

A presentation is exterior generators (odd degree) tensor polynomial
generators (even degree), modulo an ideal spanned by (scalar x monomial)
terms. For such ideals the ideal's degree-d piece is spanned by scalar
multiples of single monomials, so the quotient splits monomial by monomial:
each monomial contributes Z_(p), Z/p^v or nothing.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, NamedTuple, Sequence

from .errors import DomainError, UnsupportedIdeal
from .plocal import INF, Rational, check_prime, in_zp, vp
from .smith import cokernel, zeros


@dataclass(frozen=True)
class Generator:
    name: str
    degree: int

    def __post_init__(self):
        if self.degree <= 0:
            raise DomainError(f"generator {self.name} needs positive degree")

    @property
    def odd(self) -> bool:
        return self.degree % 2 == 1


class Monomial(NamedTuple):
    """Indices into a presentation's odd and even generator lists.

    `odd` is strictly increasing; `even` holds one exponent per even generator.
    """

    odd: tuple[int, ...]
    even: tuple[int, ...]


@dataclass(frozen=True)
class IdealTerm:
    coefficient: Fraction
    monomial: Monomial


def koszul_merge(a: Sequence[int], b: Sequence[int]) -> tuple[int, tuple[int, ...]]:
    """Sign and sorted union of two exterior words; sign 0 on a repeated letter."""
    if set(a) & set(b):
        return 0, ()
    inversions = sum(1 for x in a for y in b if x > y)
    return (-1 if inversions % 2 else 1), tuple(sorted((*a, *b)))


def divides(small: Monomial, big: Monomial) -> bool:
    return set(small.odd) <= set(big.odd) and all(
        s <= b for s, b in zip(small.even, big.even)
    )


class RingPresentation:
    """Immutable presentation Lambda(odd gens) (x) Z_(p)[even gens] / ideal."""

    def __init__(
        self,
        p: int,
        generators: Sequence[Generator],
        ideal: Iterable[tuple[Rational, Monomial | Mapping[str, int]]] = (),
        *,
        dimension: int | None = None,
        notice: str | None = None,
        bounded: bool = True,
    ):
        check_prime(p)
        names = [g.name for g in generators]
        if len(set(names)) != len(names):
            raise DomainError("generator names must be unique")
        self.p = p
        self.generators = tuple(generators)
        self.odd_gens = tuple(g for g in generators if g.odd)
        self.even_gens = tuple(g for g in generators if not g.odd)
        self.dimension = dimension
        self.notice = notice
        terms = []
        for coeff, mono in ideal:
            coeff = Fraction(coeff)
            if coeff == 0:
                raise UnsupportedIdeal("ideal coefficients must be nonzero")
            if not in_zp(coeff, p):
                raise UnsupportedIdeal(f"ideal coefficient {coeff} is not in Z_({p})")
            if not isinstance(mono, Monomial):
                mono = self.monomial(mono)
            terms.append(IdealTerm(coeff, mono))
        self.ideal = tuple(terms)
        self._truncation = self._unit_truncation()
        if bounded and any(t is None for t in self._truncation):
            raise UnsupportedIdeal(
                "presentation is not bounded: some even generator has no unit pure power in the ideal"
            )

    def _unit_truncation(self) -> tuple[int | None, ...]:
        out: list[int | None] = []
        for idx in range(len(self.even_gens)):
            best = None
            for t in self.ideal:
                pure = not t.monomial.odd and all(
                    e == 0 for i, e in enumerate(t.monomial.even) if i != idx
                )
                if pure and vp(t.coefficient, self.p) == 0:
                    e = t.monomial.even[idx]
                    if e > 0 and (best is None or e < best):
                        best = e
            out.append(best)
        return tuple(out)

    @property
    def is_bounded(self) -> bool:
        return all(t is not None for t in self._truncation)

    def monomial(self, spec: Mapping[str, int]) -> Monomial:
        """Build a monomial from {name: exponent}; odd exponents must be 0 or 1."""
        known = {g.name for g in self.generators}
        unknown = set(spec) - known
        if unknown:
            raise DomainError(f"unknown generators {sorted(unknown)}")
        odd = []
        for i, g in enumerate(self.odd_gens):
            e = spec.get(g.name, 0)
            if e not in (0, 1):
                if e > 1:
                    raise DomainError("exterior generators square to zero")
                raise DomainError("negative exponent")
            if e:
                odd.append(i)
        even = []
        for g in self.even_gens:
            e = spec.get(g.name, 0)
            if e < 0:
                raise DomainError("negative exponent")
            even.append(e)
        return Monomial(tuple(odd), tuple(even))

    def degree(self, m: Monomial) -> int:
        return sum(self.odd_gens[i].degree for i in m.odd) + sum(
            e * g.degree for e, g in zip(m.even, self.even_gens)
        )

    def one(self) -> Monomial:
        return Monomial((), (0,) * len(self.even_gens))

    def name_of(self, m: Monomial) -> str:
        parts = [self.odd_gens[i].name for i in m.odd]
        for e, g in zip(m.even, self.even_gens):
            if e == 1:
                parts.append(g.name)
            elif e > 1:
                parts.append(f"{g.name}^{e}")
        return "*".join(parts) or "1"

    def monomial_valuation(self, m: Monomial) -> float | int:
        """min v_p(c) over ideal terms c*u dividing m; INF if none divide."""
        return min(
            (vp(t.coefficient, self.p) for t in self.ideal if divides(t.monomial, m)),
            default=INF,
        )

    def is_killed(self, m: Monomial) -> bool:
        return self.monomial_valuation(m) == 0

    def monomials_of_degree(self, d: int, bounded: bool = True) -> list[Monomial]:
        """All monomials of degree d; with `bounded`, exponents stop below the unit truncation."""
        out = []
        odd_deg = [g.degree for g in self.odd_gens]
        for r in range(len(self.odd_gens) + 1):
            for subset in itertools.combinations(range(len(self.odd_gens)), r):
                rest = d - sum(odd_deg[i] for i in subset)
                if rest < 0:
                    continue
                for exps in self._even_exponents(rest, 0, bounded):
                    out.append(Monomial(subset, exps))
        return sorted(out)

    def _even_exponents(self, d: int, idx: int, bounded: bool) -> Iterator[tuple[int, ...]]:
        if idx == len(self.even_gens):
            if d == 0:
                yield ()
            return
        g = self.even_gens[idx]
        cap = d // g.degree
        if bounded and self._truncation[idx] is not None:
            cap = min(cap, self._truncation[idx] - 1)
        for e in range(cap + 1):
            for tail in self._even_exponents(d - e * g.degree, idx + 1, bounded):
                yield (e, *tail)

    def top_degree(self) -> int:
        """Largest degree of a monomial surviving the unit truncations."""
        if not self.is_bounded:
            raise UnsupportedIdeal("unbounded presentation has no top degree")
        return sum(g.degree for g in self.odd_gens) + sum(
            (t - 1) * g.degree for t, g in zip(self._truncation, self.even_gens)
        )

    def default_top_degree(self) -> int:
        base = self.dimension if self.dimension is not None else self.top_degree()
        return base + 2

    def normalized_ideal(self) -> list[tuple[int, Monomial]]:
        """Ideal as (v_p(c), monomial) with redundant terms removed."""
        terms = sorted({(int(vp(t.coefficient, self.p)), t.monomial) for t in self.ideal},
                       key=lambda vm: (vm[0], sum(vm[1].even), vm[1]))
        kept: list[tuple[int, Monomial]] = []
        for v, m in terms:
            if any(kv <= v and divides(km, m) for kv, km in kept):
                continue
            kept.append((v, m))
        return sorted(kept, key=lambda vm: (self.degree(vm[1]), vm[1]))

    def render(self) -> str:
        ext = ", ".join(g.name for g in self.odd_gens)
        poly = ", ".join(g.name for g in self.even_gens)
        parts = []
        if self.odd_gens:
            parts.append(f"Λ({ext})")
        if self.even_gens:
            rels = []
            for v, m in self.normalized_ideal():
                c = "" if v == 0 else (f"{self.p}" if v == 1 else f"{self.p}^{v}")
                rels.append(f"{c}{self.name_of(m)}")
            ring = f"Z_({self.p})[{poly}]"
            parts.append(f"{ring}/({', '.join(rels)})" if rels else ring)
        elif self.ideal:
            rels = [self.name_of(m) for _, m in self.normalized_ideal()]
            parts[-1] += f"/({', '.join(rels)})"
        return " ⊗ ".join(parts) if parts else f"Z_({self.p})"

    def to_json(self) -> dict:
        def mono(m: Monomial) -> dict:
            return {
                "odd": [self.odd_gens[i].name for i in m.odd],
                "even": {g.name: e for g, e in zip(self.even_gens, m.even) if e},
            }

        out = {
            "prime": self.p,
            "generators": [
                {"name": g.name, "degree": g.degree, "parity": "odd" if g.odd else "even"}
                for g in self.generators
            ],
            "ideal": [
                {"coefficient": str(t.coefficient), "monomial": mono(t.monomial)}
                for t in self.ideal
            ],
            "rendered": self.render(),
        }
        if self.dimension is not None:
            out["dimension"] = self.dimension
        if self.notice:
            out["notice"] = self.notice
        return out

    @classmethod
    def from_json(cls, data: Mapping) -> "RingPresentation":
        gens = [Generator(g["name"], int(g["degree"])) for g in data["generators"]]
        probe = cls(int(data["prime"]), gens, bounded=False)
        ideal = []
        for t in data["ideal"]:
            spec = {name: 1 for name in t["monomial"]["odd"]}
            spec.update(t["monomial"]["even"])
            ideal.append((Fraction(t["coefficient"]), probe.monomial(spec)))
        return cls(
            int(data["prime"]), gens, ideal,
            dimension=data.get("dimension"), notice=data.get("notice"), bounded=False,
        )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, RingPresentation):
            return NotImplemented
        return (self.p, self.generators, self.ideal) == (other.p, other.generators, other.ideal)

    def __hash__(self) -> int:
        return hash((self.p, self.generators, self.ideal))

    def __repr__(self) -> str:
        return f"RingPresentation({self.render()!r})"


class Element:
    """Z_(p)-linear combination of monomials of one presentation."""

    __slots__ = ("presentation", "terms")

    def __init__(self, presentation: RingPresentation, terms: Mapping[Monomial, Rational] | None = None):
        self.presentation = presentation
        self.terms: dict[Monomial, Fraction] = {}
        for m, c in (terms or {}).items():
            c = Fraction(c)
            if c and not presentation.is_killed(m):
                self.terms[m] = self.terms.get(m, Fraction(0)) + c
        self.terms = {m: c for m, c in self.terms.items() if c}

    @classmethod
    def generator(cls, presentation: RingPresentation, name: str, coeff: Rational = 1) -> "Element":
        return cls(presentation, {presentation.monomial({name: 1}): coeff})

    @classmethod
    def scalar(cls, presentation: RingPresentation, c: Rational) -> "Element":
        return cls(presentation, {presentation.one(): c})

    def _check(self, other: "Element") -> None:
        if other.presentation is not self.presentation and other.presentation != self.presentation:
            raise DomainError("elements of different presentations")

    def __add__(self, other: "Element") -> "Element":
        self._check(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, Fraction(0)) + c
        return Element(self.presentation, out)

    def __neg__(self) -> "Element":
        return Element(self.presentation, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other: "Element") -> "Element":
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return Element(self.presentation, {m: c * other for m, c in self.terms.items()})
        return multiply(self, other)

    __rmul__ = __mul__

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Element):
            return NotImplemented
        return self.presentation == other.presentation and self.terms == other.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def degrees(self) -> set[int]:
        return {self.presentation.degree(m) for m in self.terms}

    def is_homogeneous(self) -> bool:
        return len(self.degrees()) <= 1

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(f"{c}*{self.presentation.name_of(m)}" for m, c in sorted(self.terms.items()))


def multiply_monomials(a: Monomial, b: Monomial) -> tuple[int, Monomial]:
    sign, odd = koszul_merge(a.odd, b.odd)
    if sign == 0:
        return 0, a
    return sign, Monomial(odd, tuple(x + y for x, y in zip(a.even, b.even)))


def multiply(a: Element, b: Element) -> Element:
    """Graded-commutative product; exterior letters anticommute and square to 0."""
    a._check(b)
    out: dict[Monomial, Fraction] = {}
    for ma, ca in a.terms.items():
        for mb, cb in b.terms.items():
            sign, m = multiply_monomials(ma, mb)
            if sign:
                out[m] = out.get(m, Fraction(0)) + sign * ca * cb
    return Element(a.presentation, out)


def apply_derivation(images: Mapping[str, Element], elem: Element) -> Element:
    """Extend generator images to a degree +1 derivation by the Leibniz rule.

    Generators absent from `images` are cycles.
    """
    P = elem.presentation
    zero = Element(P)
    total = zero
    for m, c in elem.terms.items():
        # d(o_1 ... o_r x^e) = sum_i (-1)^(i) o_1..d(o_i)..o_r x^e + (-1)^r o_1..o_r d(x^e)
        letters = [("odd", i) for i in m.odd]
        for idx, e in enumerate(m.even):
            letters.extend([("even", idx)] * e)
        acc = zero
        for pos, (kind, gi) in enumerate(letters):
            g = P.odd_gens[gi] if kind == "odd" else P.even_gens[gi]
            if g.name not in images:
                continue
            left = _word(P, letters[:pos])
            right = _word(P, letters[pos + 1:])
            sign = -1 if sum(_letter_degree(P, l) for l in letters[:pos]) % 2 else 1
            acc = acc + multiply(multiply(left, images[g.name]), right) * sign
        total = total + acc * c
    return total


def _letter_degree(P: RingPresentation, letter) -> int:
    kind, gi = letter
    return (P.odd_gens[gi] if kind == "odd" else P.even_gens[gi]).degree


def _word(P: RingPresentation, letters) -> Element:
    out = Element.scalar(P, 1)
    for kind, gi in letters:
        g = P.odd_gens[gi] if kind == "odd" else P.even_gens[gi]
        out = multiply(out, Element.generator(P, g.name))
    return out


@dataclass
class GradedModuleTable:
    """Per-degree Z_(p)-module: free rank plus torsion exponents {v : Z/p^v}."""

    top_degree: int
    free: dict[int, int] = field(default_factory=dict)
    torsion: dict[int, tuple[int, ...]] = field(default_factory=dict)

    def __post_init__(self):
        self.free = {d: r for d, r in sorted(self.free.items()) if r and d <= self.top_degree}
        self.torsion = {
            d: tuple(sorted(t)) for d, t in sorted(self.torsion.items()) if t and d <= self.top_degree
        }
        if any(r < 0 for r in self.free.values()) or any(
            v <= 0 for t in self.torsion.values() for v in t
        ):
            raise DomainError("ranks must be non-negative and torsion exponents positive")

    def rank(self, d: int) -> int:
        return self.free.get(d, 0)

    def torsion_at(self, d: int) -> tuple[int, ...]:
        return self.torsion.get(d, ())

    def is_torsion_free(self) -> bool:
        return not self.torsion

    def top_nonzero_degree(self) -> int:
        degs = list(self.free) + list(self.torsion)
        return max(degs) if degs else -1

    def truncated(self, top: int) -> "GradedModuleTable":
        return GradedModuleTable(min(top, self.top_degree), dict(self.free), dict(self.torsion))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GradedModuleTable):
            return NotImplemented
        return (self.top_degree, self.free, self.torsion) == (other.top_degree, other.free, other.torsion)

    def to_json(self) -> dict:
        return {
            "top_degree": self.top_degree,
            "degrees": [
                {"degree": d, "free_rank": self.rank(d), "torsion": list(self.torsion_at(d))}
                for d in range(self.top_degree + 1)
                if self.rank(d) or self.torsion_at(d)
            ],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "GradedModuleTable":
        free = {int(r["degree"]): int(r["free_rank"]) for r in data["degrees"]}
        tors = {int(r["degree"]): tuple(r["torsion"]) for r in data["degrees"]}
        return cls(int(data["top_degree"]), free, tors)

    def describe(self, d: int, p: int) -> str:
        parts = []
        r = self.rank(d)
        if r:
            parts.append(f"Z_({p})" + (f"^{r}" if r > 1 else ""))
        for v in self.torsion_at(d):
            parts.append(f"Z/{p}" + (f"^{v}" if v > 1 else ""))
        return " ⊕ ".join(parts) or "0"


def graded_table(P: RingPresentation, top_degree: int | None = None) -> GradedModuleTable:
    """Per-degree structure of a monomial-ideal quotient.

    Each monomial m contributes Z_(p)/(p^v) where v is the least valuation of
    an ideal coefficient whose monomial divides m.
    """
    top = P.default_top_degree() if top_degree is None else top_degree
    free: dict[int, int] = {}
    tors: dict[int, list[int]] = {}
    for d in range(top + 1):
        for m in P.monomials_of_degree(d, bounded=P.is_bounded):
            v = P.monomial_valuation(m)
            if v == INF:
                free[d] = free.get(d, 0) + 1
            elif v > 0:
                tors.setdefault(d, []).append(int(v))
    return GradedModuleTable(top, free, {d: tuple(t) for d, t in tors.items()})


def graded_table_bruteforce(P: RingPresentation, top_degree: int | None = None) -> GradedModuleTable:
    """Same table by explicit linear algebra.

    Spans the ideal in each degree by multiplying every ideal term with every
    monomial of complementary degree in the free algebra, then reads off the
    cokernel by Smith reduction.
    """
    top = P.default_top_degree() if top_degree is None else top_degree
    free_alg = RingPresentation(P.p, P.generators, bounded=False)
    free: dict[int, int] = {}
    tors: dict[int, tuple[int, ...]] = {}
    for d in range(top + 1):
        basis = free_alg.monomials_of_degree(d, bounded=False)
        index = {m: i for i, m in enumerate(basis)}
        cols = []
        for t in P.ideal:
            rest = d - P.degree(t.monomial)
            if rest < 0:
                continue
            gen = Element(free_alg, {t.monomial: t.coefficient})
            for q in free_alg.monomials_of_degree(rest, bounded=False):
                prod = multiply(gen, Element(free_alg, {q: 1}))
                if prod:
                    col = [Fraction(0)] * len(basis)
                    for m, c in prod.terms.items():
                        col[index[m]] += c
                    cols.append(col)
        A = zeros(len(basis), len(cols))
        for j, col in enumerate(cols):
            for i, c in enumerate(col):
                A[i][j] = c
        r, t = cokernel(A, P.p, len(basis), len(cols))
        free[d] = r
        tors[d] = tuple(t)
    return GradedModuleTable(top, free, tors)


def poincare_polynomial(T: GradedModuleTable) -> tuple[int, ...]:
    """Coefficients of sum_d rank_d t^d (torsion excluded), trailing zeros trimmed."""
    top = max(T.free, default=-1)
    return tuple(T.rank(d) for d in range(top + 1))


def evaluate_polynomial(coeffs: Sequence[int], t: int) -> int:
    return sum(c * t**d for d, c in enumerate(coeffs))


def multiply_polynomials(a: Sequence[int], b: Sequence[int]) -> tuple[int, ...]:
    out = [0] * (len(a) + len(b) - 1) if a and b else []
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    while out and out[-1] == 0:
        out.pop()
    return tuple(out)


def tensor_tables(a: GradedModuleTable, b: GradedModuleTable) -> GradedModuleTable:
    """Kunneth formula over Z_(p) for cohomology of a product.

    H^d(X x Y) = sum_{i+j=d} H^i (x) H^j  +  sum_{i+j=d+1} Tor(H^i, H^j).
    """
    top = min(a.top_degree, b.top_degree)
    free: dict[int, int] = {}
    tors: dict[int, list[int]] = {}
    for i in range(a.top_degree + 1):
        for j in range(b.top_degree + 1):
            d = i + j
            ra, rb = a.rank(i), b.rank(j)
            ta, tb = a.torsion_at(i), b.torsion_at(j)
            if d <= top:
                free[d] = free.get(d, 0) + ra * rb
                bucket = tors.setdefault(d, [])
                bucket.extend(list(tb) * ra)
                bucket.extend(list(ta) * rb)
                bucket.extend(min(x, y) for x in ta for y in tb)
            if ta and tb and 0 <= d - 1 <= top:
                tors.setdefault(d - 1, []).extend(min(x, y) for x in ta for y in tb)
    return GradedModuleTable(top, free, {d: tuple(t) for d, t in tors.items()})
