"""Hypothesis-by-hypothesis verdicts for the splitting theorems.

Every bound is decided in exact arithmetic. Square-root bounds
k <= p + n - sqrt(D) are squared out: they hold iff p + n - k >= 0 and
(p + n - k)^2 >= D.

The theorems give sufficient conditions only, so a failed verdict reads
"no splitting theorem applies" and never claims that a space does not split.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .chern import stable_split_certificate
from .errors import DomainError
from .plocal import check_prime, complete_symmetric_sum
from .spaces import SpaceDescriptor, comparison_space

SCHEMA_VERSION = 1
NO_THEOREM = "no splitting theorem applies"

THEOREM_IDS = (
    "A-largepdec", "A-ell", "B-projstsplit", "B-ell", "C-unsplit", "eqstief",
    "splitquot-WM", "splitquot-ell", "eqsplitlarg", "wnklarg",
)


@dataclass(frozen=True)
class BoundReport:
    name: str
    formula: str
    value: dict
    passed: bool

    def to_json(self) -> dict:
        return {"name": self.name, "formula": self.formula, "value": self.value, "pass": self.passed}


@dataclass(frozen=True)
class TheoremCheck:
    theorem: str
    hypotheses: tuple[BoundReport, ...]
    conclusion: SpaceDescriptor | None
    stable: bool = False

    @property
    def passed(self) -> bool:
        return all(h.passed for h in self.hypotheses)

    def to_json(self) -> dict:
        return {
            "theorem": self.theorem,
            "pass": self.passed,
            "stable": self.stable,
            "hypotheses": [h.to_json() for h in self.hypotheses],
        }


@dataclass(frozen=True)
class SplitVerdict:
    space: SpaceDescriptor
    p: int
    theorem: str | None
    hypotheses: tuple[BoundReport, ...]
    conclusion: SpaceDescriptor | None
    stable: bool
    evaluated: tuple[TheoremCheck, ...]
    diagnostics: tuple[BoundReport, ...] = ()
    caveats: tuple[str, ...] = field(default=())

    @property
    def applies(self) -> bool:
        return self.theorem is not None

    def conclusion_text(self) -> str:
        if self.conclusion is None:
            return NO_THEOREM
        target = _model_label(self.conclusion)
        if self.stable:
            return f"Σ^∞ {self.space.label()} ≃_(p) Σ^∞ {target} (wedge of p-local spheres)"
        return f"{self.space.label()} ≃_(p) {target}"

    def to_json(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "space": self.space.to_json(),
            "prime": self.p,
            "theorem": self.theorem,
            "stable": self.stable,
            "conclusion": self.conclusion.to_json() if self.conclusion else None,
            "conclusion_text": self.conclusion_text(),
            "hypotheses": [h.to_json() for h in self.hypotheses],
            "evaluated": [t.to_json() for t in self.evaluated],
            "diagnostics": [d.to_json() for d in self.diagnostics],
            "caveats": list(self.caveats),
        }

    def to_markdown(self) -> str:
        lines = [f"## {self.space.label()} at p = {self.p}", ""]
        lines.append(f"**Verdict:** {self.theorem or 'none'}: {self.conclusion_text()}")
        lines.append("")
        for t in self.evaluated:
            mark = "pass" if t.passed else "fail"
            lines.append(f"### {t.theorem} ({mark})")
            lines.append("")
            lines.append("| hypothesis | check | result |")
            lines.append("|---|---|---|")
            for h in t.hypotheses:
                lines.append(f"| {h.name} | `{h.formula}` | {'pass' if h.passed else 'fail'} |")
            lines.append("")
        if self.diagnostics:
            lines.append("### diagnostics")
            lines.append("")
            for d in self.diagnostics:
                lines.append(f"- {d.name}: `{d.formula}` ({'pass' if d.passed else 'fail'})")
            lines.append("")
        for c in self.caveats:
            lines.append(f"> {c}")
        return "\n".join(lines).rstrip() + "\n"


def _model_label(s: SpaceDescriptor) -> str:
    if s.space == "Y":
        n, k = s.n, s.k
        parts = [f"CP^{n - k}"] + [f"S^{2 * j - 1}" for j in range(n - k + 2, n + 1)]
        return " × ".join(parts)
    return s.label()


def theorem_A_bound(n: int, k: int) -> Fraction:
    """(2nk - k^2 - 1)/2 + k - n; Theorem A needs p strictly above it."""
    if not 1 <= k <= n:
        raise DomainError("need 1 <= k <= n")
    return Fraction(2 * n * k - k * k - 1, 2) + k - n


def _A_report(n: int, k: int, p: int) -> BoundReport:
    b = theorem_A_bound(n, k)
    return BoundReport(
        "large prime", f"p > (2nk-k^2-1)/2 + k - n = {b}",
        {"p": p, "bound": str(b)}, p > b,
    )


def _discriminant(n: int, p: int, variant: str) -> int:
    if variant == "unsplit":
        return p * p + n * n - 4 * p + 2
    if variant == "retcp":
        return p * p + n * n - 2 * p + 1
    raise DomainError(f"unknown M-bound variant {variant!r}")


def M_bound_check(n: int, k: int, p: int, variant: str = "unsplit") -> BoundReport:
    """k <= min(n, p + n - sqrt(D)) decided by squaring."""
    check_prime(p)
    D = _discriminant(n, p, variant)
    assert D >= 0
    lhs = p + n - k
    root_ok = lhs >= 0 and lhs * lhs >= D
    name = "M(n,p) bound" if variant == "unsplit" else "retraction bound"
    return BoundReport(
        name,
        f"k <= min(n, {p + n} - sqrt({D})) ⇔ k <= n and ({lhs})^2 = {lhs * lhs} >= {D}",
        {"k": k, "n": n, "p_plus_n": p + n, "D": D, "square": lhs * lhs},
        k <= n and root_ok,
    )


def stable_range_check(n: int, k: int, p: int) -> BoundReport:
    """dim - 1 <= 2(n-k)p + 2p - 3 and dim <= 2p(n-k+r) + 2p - 4 for 1 <= r <= k-1."""
    dim = 2 * n * k - k * k - 1
    first = 2 * (n - k) * p + 2 * p - 3
    rows = [{"r": r, "bound": 2 * p * (n - k + r) + 2 * p - 4} for r in range(1, k)]
    for row in rows:
        row["pass"] = dim <= row["bound"]
    # for k = n the retraction onto CP^0 is trivial
    ok_first = k == n or dim - 1 <= first
    failing = next((row["r"] for row in rows if not row["pass"]), None)
    value = {"dim": dim, "retraction_bound": first, "retraction_pass": ok_first, "spheres": rows}
    if failing is not None:
        value["first_failing_r"] = failing
    return BoundReport(
        "stable range",
        f"{dim - 1} <= {first}" + (f"; {dim} <= {rows[0]['bound']} (r = 1 worst)" if rows else ""),
        value,
        ok_first and failing is None,
    )


def _gt(name: str, p: int, bound: int) -> BoundReport:
    return BoundReport(name, f"p > {bound}", {"p": p, "bound": bound}, p > bound)


def _h_report(s: SpaceDescriptor, p: int) -> BoundReport:
    N = s.n - s.k + 1
    h = complete_symmetric_sum(s.l, N)
    return BoundReport(
        "weight sum prime to p", f"p ∤ h_{N}(l) = {h}", {"h": h, "j": N}, h % p != 0,
    )


def _certificate_reports(s: SpaceDescriptor, p: int) -> tuple[BoundReport, ...]:
    cert = stable_split_certificate(s, p)
    out = [_gt("theorem range", p, s.n)]
    for c in cert.conditions:
        out.append(BoundReport(f"condition {c.id}: {c.name}", _condition_formula(c.id, c.witness, p),
                               c.witness, c.passed))
    return tuple(out)


def _condition_formula(cid: int, witness: dict, p: int) -> str:
    if cid == 1:
        return witness["inequality"]
    if cid == 2:
        degs = witness["torsion_degrees"]
        return "no p-torsion" if not degs else f"p-torsion in degrees {degs}"
    return f"v_p(i!) = 0 for i <= n-k and floor(r/{p - 1}) = 0 for r < n-1"


def _candidates(s: SpaceDescriptor, p: int) -> list[TheoremCheck]:
    n, k = s.n, s.k
    model = comparison_space(s)
    A = _A_report(n, k, p)
    C = (_gt("prime above n+1", p, n + 1), M_bound_check(n, k, p, "unsplit"))
    if s.space == "PW":
        return [
            TheoremCheck("A-largepdec", (A,), model),
            TheoremCheck("C-unsplit", C, model),
            TheoremCheck("B-projstsplit", _certificate_reports(s, p), model, stable=True),
        ]
    if s.space == "PLW":
        h = _h_report(s, p)
        return [
            TheoremCheck("A-ell", (A, h), model),
            TheoremCheck("splitquot-ell", C + (h,), model),
            TheoremCheck("B-ell", _certificate_reports(s, p), model, stable=True),
        ]
    if s.space == "W":
        return [
            TheoremCheck("eqsplitlarg", (A,), model),
            TheoremCheck("eqstief", C, model),
        ]
    if s.space == "WM":
        div = BoundReport("p divides m", f"{p} | {s.m}", {"m": s.m}, s.m % p == 0)
        return [
            TheoremCheck("wnklarg", (A,), model),
            TheoremCheck("splitquot-WM", C + (div,), model),
        ]
    raise DomainError(f"no splitting theorem concerns {s.space}")


def full_verdict(s: SpaceDescriptor, p: int) -> SplitVerdict:
    """Strongest passing theorem, tried in the order A, C, B."""
    check_prime(p)
    checks = _candidates(s, p)
    chosen = next((t for t in checks if t.passed), None)
    diagnostics: tuple[BoundReport, ...] = ()
    caveats: list[str] = []
    if s.space in ("PW", "PLW", "W", "WM"):
        diagnostics = (M_bound_check(s.n, s.k, p, "retcp"), stable_range_check(s.n, s.k, p))
    if chosen is not None and not chosen.stable and p <= s.n and s.space in ("PW", "PLW"):
        from .algebra import graded_table
        from .spaces import presentation

        if not graded_table(presentation(s, p)).is_torsion_free():
            caveats.append(
                f"p = {p} <= n = {s.n}: the cohomology of {s.space} has p-torsion while the "
                "conclusion's cohomology is torsion free"
            )
    if chosen is None:
        return SplitVerdict(s, p, None, (), None, False, tuple(checks), diagnostics, tuple(caveats))
    return SplitVerdict(
        s, p, chosen.theorem, chosen.hypotheses, chosen.conclusion, chosen.stable,
        tuple(checks), diagnostics, tuple(caveats),
    )
