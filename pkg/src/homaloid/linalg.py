"""Exact linear algebra over the rationals.

Elimination is fraction-free (Bareiss): every row is first scaled to integers,
the echelon form is computed with exact integer divisions, and only the final
back-substitution works in :class:`Fraction`.  Matrices are plain lists of
rows.

The modular helpers at the bottom reduce large integral systems modulo word
sized primes with FLINT.  They are used to *prove* rank facts cheaply (the
rank of a p-integral rational matrix can only drop modulo p) and to recover
rational solutions by reconstruction, which callers then verify exactly.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, isqrt, lcm
from typing import Sequence

import numpy as np

Matrix = list[list[Fraction]]


@dataclass
class LinearSolution:
    status: str  # "inconsistent" | "unique" | "affine"
    rank: int
    pivots: tuple[int, ...]
    solution: tuple[Fraction, ...] | None = None
    basis: list[tuple[Fraction, ...]] = field(default_factory=list)

    @property
    def consistent(self) -> bool:
        return self.status != "inconsistent"


def _integer_row(row: Sequence) -> tuple[list[int], int]:
    """Scale a rational row to integers; returns (row, scale factor)."""
    den = 1
    for v in row:
        d = Fraction(v).denominator
        if d != 1:
            den = lcm(den, d)
    return [int(Fraction(v) * den) for v in row], den


def ff_echelon(M: list[list[int]], pivot_cols: int) -> tuple[list[list[int]], list[int], int]:
    """Bareiss fraction-free row echelon form, in place.

    Pivots are searched in the first ``pivot_cols`` columns only; any further
    columns are carried along (right-hand sides).  Returns the matrix, the
    pivot columns and the number of row swaps.
    """
    m = len(M)
    if m == 0:
        return M, [], 0
    width = len(M[0])
    prev = 1
    r = 0
    swaps = 0
    pivots: list[int] = []
    for c in range(pivot_cols):
        if r == m:
            break
        piv_row = next((i for i in range(r, m) if M[i][c] != 0), None)
        if piv_row is None:
            continue
        if piv_row != r:
            M[r], M[piv_row] = M[piv_row], M[r]
            swaps += 1
        row_r = M[r]
        piv = row_r[c]
        tail = range(c + 1, width)
        for i in range(r + 1, m):
            row_i = M[i]
            a = row_i[c]
            if a == 0:
                if piv != prev:
                    for j in tail:
                        if row_i[j]:
                            row_i[j] = (piv * row_i[j]) // prev
                continue
            for j in tail:
                row_i[j] = (piv * row_i[j] - a * row_r[j]) // prev
            row_i[c] = 0
        prev = piv
        pivots.append(c)
        r += 1
    return M, pivots, swaps


def _back_substitute(E: list[list[int]], pivots: list[int], ncols: int, rhs_col: int | None,
                     free_values: dict[int, Fraction]) -> list[Fraction]:
    x = [Fraction(0)] * ncols
    for c, v in free_values.items():
        x[c] = v
    for r in range(len(pivots) - 1, -1, -1):
        pc = pivots[r]
        row = E[r]
        s = Fraction(row[rhs_col]) if rhs_col is not None else Fraction(0)
        for j in range(pc + 1, ncols):
            if row[j] and x[j]:
                s -= row[j] * x[j]
        x[pc] = s / row[pc]
    return x


def solve_linear(M: Sequence[Sequence], b: Sequence) -> LinearSolution:
    """Solve ``M x = b`` exactly.

    Returns the status (inconsistent, unique or affine), the rank of ``M``,
    a particular solution, and a basis of the homogeneous solutions.
    """
    m = len(M)
    if len(b) != m:
        raise ValueError(f"right-hand side has length {len(b)}, expected {m}")
    ncols = len(M[0]) if m else 0
    rows = [_integer_row(list(M[i]) + [b[i]])[0] for i in range(m)]
    E, pivots, _ = ff_echelon(rows, ncols)
    rank = len(pivots)
    for r in range(rank, m):
        if E[r][ncols] != 0:
            return LinearSolution("inconsistent", rank, tuple(pivots))
    free = [c for c in range(ncols) if c not in set(pivots)]
    sol = _back_substitute(E, pivots, ncols, ncols, {})
    basis = []
    for fc in free:
        v = _back_substitute(E, pivots, ncols, None, {fc: Fraction(1)})
        basis.append(tuple(v))
    status = "unique" if not free else "affine"
    return LinearSolution(status, rank, tuple(pivots), tuple(sol), basis)


def nullspace(M: Sequence[Sequence], ncols: int | None = None) -> list[tuple[Fraction, ...]]:
    if ncols is None:
        ncols = len(M[0])
    if not M:
        return [tuple(Fraction(int(i == j)) for j in range(ncols)) for i in range(ncols)]
    rows = [_integer_row(r)[0] for r in M]
    E, pivots, _ = ff_echelon(rows, ncols)
    pset = set(pivots)
    return [
        tuple(_back_substitute(E, pivots, ncols, None, {fc: Fraction(1)}))
        for fc in range(ncols)
        if fc not in pset
    ]


def rank(M: Sequence[Sequence]) -> int:
    if not M:
        return 0
    rows = [_integer_row(r)[0] for r in M]
    return len(ff_echelon(rows, len(rows[0]))[1])


def det(M: Sequence[Sequence]) -> Fraction:
    n = len(M)
    if n == 0:
        return Fraction(1)
    if any(len(r) != n for r in M):
        raise ValueError("determinant of a non-square matrix")
    scale = 1
    rows = []
    for r in M:
        ir, s = _integer_row(r)
        rows.append(ir)
        scale *= s
    E, pivots, swaps = ff_echelon(rows, n)
    if len(pivots) < n:
        return Fraction(0)
    d = E[n - 1][n - 1]
    return Fraction(-d if swaps % 2 else d, scale)


class SingularMatrixError(ArithmeticError):
    pass


def inverse(M: Sequence[Sequence]) -> Matrix:
    n = len(M)
    rows = []
    for i, r in enumerate(M):
        if len(r) != n:
            raise ValueError("inverse of a non-square matrix")
        rows.append(_integer_row(list(r) + [int(i == j) for j in range(n)])[0])
    E, pivots, _ = ff_echelon(rows, n)
    if len(pivots) < n:
        raise SingularMatrixError("matrix is singular")
    cols = [_back_substitute(E, pivots, n, n + j, {}) for j in range(n)]
    return [[cols[j][i] for j in range(n)] for i in range(n)]


def solve_square(M: Sequence[Sequence], b: Sequence) -> list[Fraction]:
    sol = solve_linear(M, b)
    if sol.status != "unique":
        raise SingularMatrixError(f"system is {sol.status}")
    return list(sol.solution)


# -- small dense helpers ----------------------------------------------------


def identity(n: int) -> Matrix:
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


def matmul(A: Sequence[Sequence], B: Sequence[Sequence]) -> Matrix:
    Bt = list(zip(*B))
    out = []
    for row in A:
        nz = [(k, a) for k, a in enumerate(row) if a]
        out.append([sum((a * col[k] for k, a in nz), Fraction(0)) for col in Bt])
    return out


def matvec(A: Sequence[Sequence], x: Sequence) -> list[Fraction]:
    nz = [(k, v) for k, v in enumerate(x) if v]
    return [sum((row[k] * v for k, v in nz), Fraction(0)) for row in A]


def transpose(A: Sequence[Sequence]) -> Matrix:
    return [list(c) for c in zip(*A)]


def is_identity(A: Sequence[Sequence]) -> bool:
    return all(A[i][j] == (1 if i == j else 0) for i in range(len(A)) for j in range(len(A)))


def proportional(u: Sequence, v: Sequence) -> bool:
    """True iff u and v span at most a line (zero vectors count as proportional)."""
    i0 = next((i for i, a in enumerate(u) if a), None)
    if i0 is None:
        return True
    ratio = Fraction(v[i0]) / u[i0]
    return all(b == ratio * a for a, b in zip(u, v))


def span_rank(vectors: Sequence[Sequence]) -> int:
    return rank([list(v) for v in vectors]) if vectors else 0


# -- modular arithmetic -----------------------------------------------------


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    for q in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if p % q == 0:
            return p == q
    d, s = p - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, p)
        if x in (1, p - 1):
            continue
        for _ in range(s - 1):
            x = x * x % p
            if x == p - 1:
                break
        else:
            return False
    return True


def _prime_list(start: int, count: int) -> tuple[int, ...]:
    out = []
    p = start
    while len(out) < count:
        if _is_prime(p):
            out.append(p)
        p -= 1
    return tuple(out)


# below 2**31 so that products of two residues fit in int64
PRIMES = _prime_list(2**31 - 1, 16)


def residue(x: Fraction, p: int) -> int:
    """Image of a p-integral rational in Z/p; raises ZeroDivisionError otherwise."""
    x = Fraction(x)
    d = x.denominator % p
    if d == 0:
        raise ZeroDivisionError(f"{p} divides the denominator of {x}")
    return x.numerator * pow(d, -1, p) % p


def rational_reconstruct(a: int, m: int) -> Fraction | None:
    """The unique r/s with |r|, s <= sqrt(m/2) and r = a*s (mod m), if any."""
    bound = isqrt(m // 2)
    r0, r1 = m, a % m
    s0, s1 = 0, 1
    while r1 > bound:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        s0, s1 = s1, s0 - q * s1
    if s1 == 0 or abs(s1) > bound or gcd(r1, abs(s1)) != 1:
        return None
    return Fraction(r1, s1)


def crt(r1: int, m1: int, r2: int, m2: int) -> tuple[int, int]:
    t = (r2 - r1) * pow(m1, -1, m2) % m2
    return r1 + m1 * t, m1 * m2


@dataclass
class ModularEchelon:
    prime: int
    rank: int
    pivots: list[int]
    rref: object  # flint.nmod_mat

    def entry(self, i: int, j: int) -> int:
        return int(self.rref[i, j])


def modular_rref(A: np.ndarray, p: int) -> ModularEchelon:
    """Reduced row echelon form of an int64 residue matrix modulo ``p``."""
    import flint

    m, ncols = A.shape
    M = flint.nmod_mat(m, ncols, A.ravel().tolist(), p)
    R, r = M.rref()
    pivots = []
    c = 0
    for i in range(r):
        while int(R[i, c]) == 0:
            c += 1
        pivots.append(c)
        c += 1
    return ModularEchelon(p, r, pivots, R)
