import random
from fractions import Fraction

from hypothesis import given, settings, strategies as st

from pstiefel.plocal import vp
from pstiefel.smith import (
    CoordinateSolver,
    cokernel,
    identity,
    kernel_basis,
    matmul,
    matvec,
    smith_form,
    solve_coordinates,
)


def _mat(rows):
    return [[Fraction(x) for x in r] for r in rows]


def test_diagonal_valuations():
    A = _mat([[25, 0], [0, 5]])
    assert sorted(smith_form(A, 5, 2, 2).valuations) == [1, 2]


def test_cokernel_of_pw_like_relation():
    # Z^2 / <(3, 0), (0, 9)> localised at 3
    assert cokernel(_mat([[3, 0], [0, 9]]), 3, 2, 2) == (0, [1, 2])
    assert cokernel(_mat([[3], [1]]), 3, 2, 1) == (1, [])


def test_empty_shapes():
    assert cokernel([], 3, 0, 0) == (0, [])
    assert cokernel([[], []], 3, 2, 0) == (2, [])
    assert kernel_basis([], 3, 0, 2) == identity(2)


def test_units_of_zp_are_units():
    A = _mat([[Fraction(1, 2), 0], [0, Fraction(7, 4)]])
    assert smith_form(A, 3, 2, 2).valuations == [0, 0]


matrices = st.integers(1, 4).flatmap(
    lambda r: st.integers(1, 4).flatmap(
        lambda c: st.lists(
            st.lists(st.integers(-30, 30), min_size=c, max_size=c), min_size=r, max_size=r
        )
    )
)


@settings(max_examples=80, deadline=None)
@given(matrices, st.sampled_from([3, 5, 7]))
def test_transforms_diagonalise(A, p):
    r, c = len(A), len(A[0])
    M = _mat(A)
    sf = smith_form(M, p, r, c)
    D = matmul(matmul(sf.P, M), sf.Q)
    for i in range(r):
        for j in range(c):
            if i == j and i < sf.rank:
                assert D[i][j] == Fraction(p) ** sf.valuations[i]
            else:
                assert D[i][j] == 0
    assert matmul(sf.P, sf.p_inv) == identity(r)
    # transforms live in Z_(p)
    for T in (sf.P, sf.p_inv, sf.Q):
        assert all(vp(x, p) >= 0 for row in T for x in row if x)


@settings(max_examples=60, deadline=None)
@given(matrices, st.sampled_from([3, 5]))
def test_kernel_is_saturated(A, p):
    r, c = len(A), len(A[0])
    M = _mat(A)
    ker = kernel_basis(M, p, r, c)
    for v in ker:
        assert not any(matvec(M, v))
    # saturation: basis vectors stay independent mod p
    if ker:
        modp = [[int(x) % p if vp(x, p) >= 0 else None for x in v] for v in ker]
        assert all(None not in row for row in modp)
        assert _rank_mod_p(modp, p) == len(ker)


def _rank_mod_p(rows, p):
    rows = [list(r) for r in rows]
    rank = 0
    ncol = len(rows[0])
    for col in range(ncol):
        piv = next((i for i in range(rank, len(rows)) if rows[i][col] % p), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = pow(rows[rank][col], -1, p)
        for i in range(len(rows)):
            if i != rank and rows[i][col] % p:
                f = rows[i][col] * inv
                rows[i] = [(a - f * b) % p for a, b in zip(rows[i], rows[rank])]
        rank += 1
    return rank


def test_coordinate_solver():
    rng = random.Random(4)
    basis = [[Fraction(rng.randint(-5, 5)) for _ in range(5)] for _ in range(3)]
    solver = CoordinateSolver(basis)
    c = [Fraction(2), Fraction(-1, 3), Fraction(5)]
    v = [sum(ci * b[i] for ci, b in zip(c, basis)) for i in range(5)]
    assert solver.coords(v) == c
    assert solve_coordinates(basis, [Fraction(0)] * 5) == [0, 0, 0]


def test_coordinate_solver_rejects_outside_span():
    basis = [[Fraction(1), Fraction(0), Fraction(0)], [Fraction(0), Fraction(3), Fraction(0)]]
    assert solve_coordinates(basis, [Fraction(2), Fraction(1), Fraction(0)]) == [2, Fraction(1, 3)]
    assert solve_coordinates(basis, [Fraction(0), Fraction(0), Fraction(1)]) is None
