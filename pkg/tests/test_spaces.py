from fractions import Fraction

import pytest

from pstiefel.algebra import Element, graded_table, poincare_polynomial
from pstiefel.errors import DomainError, UnsupportedRegime
from pstiefel.plocal import complete_symmetric_sum, odd_primes_upto
from pstiefel.spaces import (
    PLW,
    PW,
    WM,
    Lens,
    SpaceDescriptor,
    W,
    comparison_space,
    generator_ledger,
    k_theory_presentation,
    kunneth_table,
    minimal_model,
    presentation,
    spheres,
)


def test_pw52_p7_presentation():
    P = presentation(PW(5, 2), 7)
    assert [g.name for g in P.odd_gens] == ["gamma_5"]
    assert P.render() == "Λ(gamma_5) ⊗ Z_(7)[x]/(x^4)"


def test_plw_coefficients():
    P = presentation(PLW(3, 2, (1, 2)), 5)
    coeffs = {P.name_of(t.monomial): t.coefficient for t in P.ideal}
    assert coeffs == {"x^2": 7, "x^3": 15}
    assert complete_symmetric_sum((1, 2), 3) == 15
    # h_2 = 7 is a unit at 5, so x^2 truncates
    assert P.render() == "Λ(gamma_3) ⊗ Z_(5)[x]/(x^2)"


def test_w_presentation():
    P = presentation(W(3, 2), 5)
    assert [(g.name, g.degree) for g in P.generators] == [("z_2", 3), ("z_3", 5)]
    assert graded_table(P).free == {0: 1, 3: 1, 5: 1, 8: 1}


def test_wm_regimes():
    P = presentation(WM(4, 2, 10), 5)
    assert P.render() == "Λ(gamma_3, gamma_4) ⊗ Z_(5)[x]/(5x, x^3, gamma_3*x)"
    notice = presentation(WM(4, 2, 7), 5)
    assert notice.notice and graded_table(notice) == graded_table(presentation(W(4, 2), 5))
    with pytest.raises(UnsupportedRegime):
        presentation(WM(4, 2, 9), 3)


@pytest.mark.parametrize("bad", [
    dict(space="PW", n=2, k=3), dict(space="PLW", n=3, k=2, l=(2, 4)), dict(space="WM", n=3, k=2, m=1),
    dict(space="Lens", n=4, m=3), dict(space="Q", n=1, k=1),
])
def test_invalid_descriptors(bad):
    with pytest.raises(DomainError):
        SpaceDescriptor(**bad)


def test_dimensions():
    assert PW(5, 2).dimension == 15 == PLW(5, 2, (1, 1)).dimension
    assert WM(5, 2, 3).dimension == 16 == W(5, 2).dimension


def test_descriptor_json_round_trip():
    for s in (PW(5, 2), PLW(3, 2, (1, 2)), comparison_space(WM(4, 2, 5)), spheres((3, 5))):
        assert SpaceDescriptor.from_json(s.to_json()) == s


def test_comparison_spaces():
    assert comparison_space(PW(5, 2)) == SpaceDescriptor("Y", 5, 2)
    assert comparison_space(W(4, 2)) == spheres((5, 7))
    c = comparison_space(WM(4, 2, 6))
    assert c.label() == "L_6(5) × S^7"


@pytest.mark.parametrize("n", range(1, 7))
def test_pw_equals_product_for_large_p(n):
    for k in range(1, n + 1):
        for p in [q for q in odd_primes_upto(17) if q > n]:
            s = PW(n, k)
            T = graded_table(presentation(s, p))
            assert T == kunneth_table(comparison_space(s), p, T.top_degree)


def test_plw_matches_pw_for_unit_h():
    for ell in [(1, 2), (1, 3), (2, 3)]:
        for p in (5, 7, 11):
            s = PLW(4, 2, ell)
            if complete_symmetric_sum(ell, 3) % p == 0:
                continue
            assert graded_table(presentation(s, p)) == graded_table(presentation(PW(4, 2), p))


def test_wm_matches_lens_product():
    for n, k, m, p in [(4, 2, 5, 5), (3, 1, 25, 5), (6, 3, 7, 7), (5, 5, 14, 7)]:
        s = WM(n, k, m)
        T = graded_table(presentation(s, p))
        assert T == kunneth_table(comparison_space(s), p, T.top_degree)


def test_lens_table():
    T = graded_table(presentation(Lens(25, 5), 5), 7)
    assert T.free == {0: 1, 5: 1}
    assert T.torsion == {2: (2,), 4: (2,)}


def test_generator_ledger():
    led = generator_ledger(5, 2, 7)
    assert led.mu == {4: 5, 5: 1}
    assert led.defined
    (rho,) = led.rho
    assert rho.coefficient.value == Fraction(1, 5) and rho.in_zp
    flagged = generator_ledger(5, 2, 5)
    assert not flagged.defined and not flagged.rho[0].in_zp


def test_minimal_model():
    mm = minimal_model(5, 2)
    assert [g.name for g in mm.algebra.generators] == ["xt", "yt_4", "yt_5"]
    assert mm.d_squared_vanishes()
    y4 = Element.generator(mm.algebra, "yt_4")
    assert mm.d(y4) == Element(mm.algebra, {mm.algebra.monomial({"xt": 4}): 1})
    edge = minimal_model(3, 3)
    assert repr(edge.d(Element.generator(edge.algebra, "yt_1"))) == "1*xt"
    for g in mm.algebra.generators:
        image = mm.d(Element.generator(mm.algebra, g.name))
        assert not image or image.degrees() == {g.degree + 1}


def test_k_theory_is_documentation_only():
    doc = k_theory_presentation(5, 3)
    assert doc["exterior"][0] == "gamma_5^K"
    assert doc["cohomology_exterior"][0] == "gamma_4^H"
    assert doc["verified"] is False


def test_poincare_of_cp():
    for n in range(1, 6):
        poly = poincare_polynomial(graded_table(presentation(PW(n, 1), 3)))
        assert poly == tuple(1 if d % 2 == 0 else 0 for d in range(2 * n - 1))
