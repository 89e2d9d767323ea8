"""Linear algebra over the discrete valuation ring Z_(p).

Matrices are lists of rows of exact rationals lying in Z_(p). Every matrix
diagonalises to powers of p, so pivots are always chosen by minimal
valuation; eliminating with such a pivot only ever multiplies by elements of
Z_(p), which keeps all transforms unimodular.

Entries are held as gmpy2 ``mpq`` (exact, and far cheaper than
``fractions.Fraction`` in the inner loops); Fractions are accepted on input.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from gmpy2 import mpq

from .plocal import INF, vp

Matrix = list[list[mpq]]
Vector = list[mpq]

ZERO = mpq(0)
ONE = mpq(1)


def identity(n: int) -> Matrix:
    return [[ONE if i == j else ZERO for j in range(n)] for i in range(n)]


def zeros(rows: int, cols: int) -> Matrix:
    return [[ZERO] * cols for _ in range(rows)]


def as_matrix(A) -> Matrix:
    return [[mpq(x) for x in row] for row in A]


def matmul(a: Matrix, b: Matrix) -> Matrix:
    if not a:
        return []
    n = len(b[0]) if b else 0
    out = zeros(len(a), n)
    for i, row in enumerate(a):
        orow = out[i]
        for t, c in enumerate(row):
            if c:
                for j, y in enumerate(b[t]):
                    if y:
                        orow[j] += c * y
    return out


def matvec(a: Matrix, v: Sequence) -> Vector:
    nz = [(t, x) for t, x in enumerate(v) if x]
    return [sum((row[t] * x for t, x in nz if row[t]), ZERO) for row in a]


@dataclass
class SmithForm:
    """P * A * Q = D with D diagonal entries p^v (v listed in `valuations`).

    `p_inv` is the inverse of P, so the columns of `p_inv` form the adapted
    basis of the target lattice. Untracked transforms are None.
    """

    valuations: list[int]
    P: Matrix | None
    p_inv: Matrix | None
    Q: Matrix | None

    @property
    def rank(self) -> int:
        return len(self.valuations)


def smith_form(A, p: int, nrows: int, ncols: int, *, rows: bool = True, cols: bool = True) -> SmithForm:
    """Valuation-pivot Smith normal form over Z_(p).

    `nrows`/`ncols` are explicit so empty matrices keep their shape; `rows`
    and `cols` switch off tracking of P (with its inverse) and Q.
    """
    M = as_matrix(A)
    P = identity(nrows) if rows else None
    Pinv = identity(nrows) if rows else None
    Q = identity(ncols) if cols else None
    vals: list[int] = []
    pm = mpq(p)
    t = 0
    while t < min(nrows, ncols):
        best = None
        for i in range(t, nrows):
            row = M[i]
            for j in range(t, ncols):
                x = row[j]
                if x:
                    v = vp(x, p)
                    if v < 0:
                        raise ValueError("matrix entry outside Z_(p)")
                    if best is None or v < best[0]:
                        best = (v, i, j)
                        if v == 0:
                            break
            if best is not None and best[0] == 0:
                break
        if best is None:
            break
        v, i, j = best
        if i != t:
            M[i], M[t] = M[t], M[i]
            if rows:
                P[i], P[t] = P[t], P[i]
                for row in Pinv:
                    row[i], row[t] = row[t], row[i]
        if j != t:
            for row in M:
                row[j], row[t] = row[t], row[j]
            if cols:
                for row in Q:
                    row[j], row[t] = row[t], row[j]
        # normalise the pivot to p^v by a unit row scaling
        unit = M[t][t] / pm**v
        if unit != 1:
            inv = 1 / unit
            M[t] = [c * inv if c else c for c in M[t]]
            if rows:
                P[t] = [c * inv if c else c for c in P[t]]
                for row in Pinv:
                    if row[t]:
                        row[t] *= unit
        piv = M[t][t]
        prow = M[t]
        for i2 in range(t + 1, nrows):
            c = M[i2][t]
            if c:
                f = c / piv
                M[i2] = [a - f * b if b else a for a, b in zip(M[i2], prow)]
                if rows:
                    P[i2] = [a - f * b if b else a for a, b in zip(P[i2], P[t])]
                    for row in Pinv:
                        if row[i2]:
                            row[t] += f * row[i2]
        for j2 in range(t + 1, ncols):
            c = prow[j2]
            if c:
                f = c / piv
                for row in M:
                    if row[t]:
                        row[j2] -= f * row[t]
                if cols:
                    for row in Q:
                        if row[t]:
                            row[j2] -= f * row[t]
        vals.append(int(v))
        t += 1
    return SmithForm(vals, P, Pinv, Q)


def invariant_valuations(A, p: int, nrows: int, ncols: int) -> list[int]:
    return smith_form(A, p, nrows, ncols, rows=False, cols=False).valuations


def cokernel(A, p: int, nrows: int, ncols: int) -> tuple[int, list[int]]:
    """Structure of Z_(p)^nrows / column span of A: (free rank, torsion exponents)."""
    vals = invariant_valuations(A, p, nrows, ncols)
    return nrows - len(vals), sorted(v for v in vals if v > 0)


def kernel_basis(A, p: int, nrows: int, ncols: int) -> list[Vector]:
    """Basis of the saturated lattice {v in Z_(p)^ncols : A v = 0}."""
    if ncols == 0:
        return []
    if nrows == 0:
        return identity(ncols)
    sf = smith_form(A, p, nrows, ncols, rows=False)
    return [[sf.Q[i][j] for i in range(ncols)] for j in range(sf.rank, ncols)]


class CoordinateSolver:
    """Coordinates in a fixed independent family, with one elimination up front.

    Finds L with L * B = I (B = basis as columns); coords(v) = L v, checked by
    reconstructing v.
    """

    def __init__(self, basis: Sequence[Sequence]):
        self.basis = [[mpq(x) for x in b] for b in basis]
        m = len(basis)
        n = len(basis[0]) if basis else 0
        self.m, self.n = m, n
        rows = [
            [self.basis[j][i] for j in range(m)] + [ONE if i == t else ZERO for t in range(n)]
            for i in range(n)
        ]
        r = 0
        for c in range(m):
            piv = next((i for i in range(r, n) if rows[i][c]), None)
            if piv is None:
                raise ValueError("basis vectors are linearly dependent")
            rows[r], rows[piv] = rows[piv], rows[r]
            inv = 1 / rows[r][c]
            rows[r] = [x * inv if x else x for x in rows[r]]
            pr = rows[r]
            for i in range(n):
                if i != r and rows[i][c]:
                    f = rows[i][c]
                    rows[i] = [a - f * b if b else a for a, b in zip(rows[i], pr)]
            r += 1
        self._left = [[(t, x) for t, x in enumerate(row[m:]) if x] for row in rows[:m]]
        self._cols = [[(i, x) for i, x in enumerate(b) if x] for b in self.basis]

    def coords(self, v: Sequence) -> Vector | None:
        """Coordinates of v, or None if v is outside the rational span."""
        if self.m == 0:
            return [] if not any(v) else None
        c = [sum((x * v[t] for t, x in row if v[t]), ZERO) for row in self._left]
        recon = [ZERO] * self.n
        for j, col in enumerate(self._cols):
            if c[j]:
                for i, x in col:
                    recon[i] += x * c[j]
        if any(a != b for a, b in zip(recon, v)):
            return None
        return c


def solve_coordinates(basis: Sequence[Sequence], v: Sequence) -> Vector | None:
    return CoordinateSolver(basis).coords(v)


def min_valuation(entries: Sequence, p: int) -> float | int:
    return min((vp(e, p) for e in entries if e), default=INF)
