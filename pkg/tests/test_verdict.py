import json
import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from pstiefel.algebra import graded_table
from pstiefel.chern import stable_split_certificate
from pstiefel.errors import DomainError
from pstiefel.plocal import odd_primes_upto
from pstiefel.spaces import PLW, PW, WM, W, comparison_space, kunneth_table, presentation
from pstiefel.verdict import (
    NO_THEOREM,
    SCHEMA_VERSION,
    M_bound_check,
    full_verdict,
    stable_range_check,
    theorem_A_bound,
)


def test_theorem_A_bound_examples():
    assert theorem_A_bound(4, 2) == Fraction(7, 2)
    assert 5 > theorem_A_bound(4, 2)
    assert theorem_A_bound(5, 2) == Fraction(9, 2)
    for n in range(1, 10):
        assert theorem_A_bound(n, 1) == 0


def test_M_examples():
    ok = M_bound_check(5, 5, 7)
    assert ok.passed and ok.value["square"] == 49 and ok.value["D"] == 48
    assert not M_bound_check(5, 6, 7).passed
    with pytest.raises(DomainError):
        M_bound_check(5, 2, 7, "other")


@given(st.integers(2, 40), st.integers(1, 40), st.sampled_from(odd_primes_upto(97)))
def test_M_matches_float_away_from_boundary(n, k, p):
    D = p * p + n * n - 4 * p + 2
    M = p + n - math.sqrt(D)
    if abs(min(n, M) - k) > 1e-6:
        assert M_bound_check(n, k, p).passed == (k <= min(n, M))


def test_stable_range_example():
    r = stable_range_check(5, 2, 7)
    assert r.passed and r.value["dim"] == 15 and r.value["retraction_bound"] == 53


def test_stable_range_monotone_in_r():
    for n in range(2, 12):
        for k in range(2, n + 1):
            for p in (3, 5, 7):
                bounds = [row["bound"] for row in stable_range_check(n, k, p).value["spheres"]]
                assert bounds == sorted(bounds)


def test_verdict_examples():
    v = full_verdict(PW(5, 2), 5)
    assert v.theorem == "A-largepdec" and not v.stable
    assert v.conclusion_text() == "PW_{5,2} ≃_(p) CP^3 × S^9"
    assert v.caveats
    c = full_verdict(PW(9, 3), 11)
    assert c.theorem == "C-unsplit"
    assert "CP^6 × S^15 × S^17" in c.conclusion_text()
    b = full_verdict(PW(9, 8), 11)
    assert b.theorem == "B-projstsplit" and b.stable
    none = full_verdict(PW(5, 2), 3)
    assert not none.applies and none.conclusion_text() == NO_THEOREM


def test_other_spaces():
    assert full_verdict(W(4, 2), 7).theorem == "eqsplitlarg"
    assert full_verdict(WM(4, 2, 5), 5).theorem == "wnklarg"
    # h_2 = 7 at p = 7 blocks every P_l W theorem
    assert not full_verdict(PLW(3, 2, (1, 2)), 7).applies
    assert full_verdict(PLW(3, 2, (1, 2)), 5).applies


def test_A_implies_C_above_n_plus_1():
    for n in range(2, 12):
        for k in range(1, n + 1):
            for p in [q for q in odd_primes_upto(41) if q > n + 1]:
                if p > theorem_A_bound(n, k):
                    assert M_bound_check(n, k, p).passed, (n, k, p)


def test_k_below_half_n_satisfies_M():
    for n in range(2, 21):
        for p in [q for q in odd_primes_upto(61) if q > n + 1]:
            for k in range(1, n + 1):
                if 2 * k < n:
                    assert M_bound_check(n, k, p).passed, (n, k, p)


def test_unstable_verdict_has_certificate():
    for n in range(2, 9):
        for k in range(1, n + 1):
            for p in [q for q in odd_primes_upto(23) if q > n]:
                v = full_verdict(PW(n, k), p)
                if v.applies and not v.stable:
                    assert stable_split_certificate(PW(n, k), p).verdict


@pytest.mark.parametrize("n,k,p", [(5, 2, 7), (9, 3, 11), (6, 2, 7), (4, 1, 5)])
def test_conclusion_consistent_with_cohomology(n, k, p):
    v = full_verdict(PW(n, k), p)
    assert v.applies and not v.stable
    T = graded_table(presentation(PW(n, k), p))
    assert T == kunneth_table(comparison_space(PW(n, k)), p, T.top_degree)


def test_json_and_markdown():
    v = full_verdict(PW(9, 3), 11)
    data = json.loads(json.dumps(v.to_json()))
    assert data["schema_version"] == SCHEMA_VERSION
    assert data["theorem"] == "C-unsplit" and data["conclusion"]["space"] == "Y"
    assert {d["name"] for d in data["diagnostics"]} >= {"stable range"}
    md = v.to_markdown()
    assert md.startswith("## PW_{9,3} at p = 11") and "C-unsplit" in md
