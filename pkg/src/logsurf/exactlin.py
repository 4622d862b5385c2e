"""Exact rational linear algebra.

Everything here works over :class:`fractions.Fraction`; there is no floating
point anywhere.  Matrices are small (tens of rows), so plain dense Gaussian
elimination is used throughout.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import NotSymmetric, SingularMatrix

Rational = Fraction


def as_rational(value) -> Fraction:
    """Coerce an int, Fraction or ``"p/q"`` string to a Fraction.

    Floats are rejected: a binary float is almost never the number the user
    meant, and silently converting it would defeat exact arithmetic.
    """
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"not a rational literal: {value!r}") from exc
    raise TypeError(f"cannot interpret {value!r} as an exact rational")


def format_rational(q: Fraction):
    """JSON form of a rational: an int when integral, else ``"p/q"``."""
    q = Fraction(q)
    if q.denominator == 1:
        return q.numerator
    return f"{q.numerator}/{q.denominator}"


@dataclass(frozen=True)
class QMatrix:
    """Immutable dense matrix of Fractions, stored row-major."""

    rows: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        rows = tuple(tuple(as_rational(x) for x in r) for r in self.rows)
        if rows and len({len(r) for r in rows}) != 1:
            raise ValueError("ragged matrix")
        object.__setattr__(self, "rows", rows)

    @classmethod
    def of(cls, rows: Iterable[Iterable]) -> "QMatrix":
        return cls(tuple(tuple(r) for r in rows))

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @property
    def ncols(self) -> int:
        return len(self.rows[0]) if self.rows else 0

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nrows, self.ncols)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def is_square(self) -> bool:
        return self.nrows == self.ncols

    def is_symmetric(self) -> bool:
        n = self.nrows
        return self.is_square() and all(
            self.rows[i][j] == self.rows[j][i] for i in range(n) for j in range(i + 1, n)
        )

    def submatrix(self, idx: Sequence[int]) -> "QMatrix":
        return QMatrix(tuple(tuple(self.rows[i][j] for j in idx) for i in idx))

    def matvec(self, x: Sequence) -> list[Fraction]:
        return [sum((a * b for a, b in zip(row, x)), Fraction(0)) for row in self.rows]

    def quad(self, x: Sequence) -> Fraction:
        return sum((a * b for a, b in zip(x, self.matvec(x))), Fraction(0))

    def negated(self) -> "QMatrix":
        return QMatrix(tuple(tuple(-a for a in r) for r in self.rows))

    def tolist(self) -> list[list[Fraction]]:
        return [list(r) for r in self.rows]


def _as_qmatrix(A) -> QMatrix:
    return A if isinstance(A, QMatrix) else QMatrix.of(A)


def _row_reduce(M: list[list[Fraction]]) -> tuple[list[list[Fraction]], list[int], int]:
    """In-place reduced row echelon form. Returns (M, pivot columns, row swaps)."""
    nrows = len(M)
    ncols = len(M[0]) if M else 0
    pivots: list[int] = []
    swaps = 0
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        p = next((i for i in range(r, nrows) if M[i][c] != 0), None)
        if p is None:
            continue
        if p != r:
            M[r], M[p] = M[p], M[r]
            swaps += 1
        inv = 1 / M[r][c]
        M[r] = [x * inv for x in M[r]]
        for i in range(nrows):
            if i != r and M[i][c] != 0:
                f = M[i][c]
                M[i] = [a - f * b for a, b in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
    return M, pivots, swaps


def solve_linear(A, b: Sequence) -> list[Fraction]:
    """Solve ``A x = b`` exactly for square nonsingular ``A``."""
    A = _as_qmatrix(A)
    if not A.is_square():
        raise ValueError(f"solve_linear needs a square matrix, got {A.shape}")
    n = A.nrows
    if len(b) != n:
        raise ValueError("right-hand side has wrong length")
    if n == 0:
        return []
    M = [list(row) + [as_rational(bi)] for row, bi in zip(A.rows, b)]
    M, pivots, _ = _row_reduce(M)
    if pivots[:n] != list(range(n)):
        raise SingularMatrix("matrix is singular")
    return [M[i][n] for i in range(n)]


def determinant(A) -> Fraction:
    A = _as_qmatrix(A)
    if not A.is_square():
        raise ValueError("determinant of a non-square matrix")
    n = A.nrows
    M = [list(r) for r in A.rows]
    det = Fraction(1)
    for c in range(n):
        p = next((i for i in range(c, n) if M[i][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            M[c], M[p] = M[p], M[c]
            det = -det
        det *= M[c][c]
        for i in range(c + 1, n):
            if M[i][c] != 0:
                f = M[i][c] / M[c][c]
                M[i] = [a - f * bb for a, bb in zip(M[i], M[c])]
    return det


def rank(A) -> int:
    A = _as_qmatrix(A)
    if A.nrows == 0 or A.ncols == 0:
        return 0
    _, pivots, _ = _row_reduce(A.tolist())
    return len(pivots)


def leading_minors(A) -> list[Fraction]:
    A = _as_qmatrix(A)
    return [determinant(A.submatrix(range(k))) for k in range(1, A.nrows + 1)]


def is_negative_definite(A) -> bool:
    """Sylvester's criterion: leading minors alternate in sign, starting negative."""
    A = _as_qmatrix(A)
    if not A.is_symmetric():
        raise NotSymmetric("negative-definiteness is only defined for symmetric matrices")
    # the k-th leading minor must have sign (-1)^k
    return all(m * (-1) ** k > 0 for k, m in enumerate(leading_minors(A), start=1))


def in_cone(v: Sequence, generators: Sequence[Sequence]) -> bool:
    """Is ``v`` a nonnegative combination of ``generators``?

    Phase-one simplex on ``G lam = v, lam >= 0`` with Bland's rule, exact.
    """
    v = [as_rational(x) for x in v]
    m = len(v)
    k = len(generators)
    if all(x == 0 for x in v):
        return True
    if k == 0:
        return False
    # rows of the constraint system; flip signs so the right-hand side is >= 0
    A = [[as_rational(generators[j][i]) for j in range(k)] for i in range(m)]
    b = list(v)
    for i in range(m):
        if b[i] < 0:
            A[i] = [-a for a in A[i]]
            b[i] = -b[i]
    # tableau columns: k structural + m artificial
    T = [A[i] + [Fraction(int(i == j)) for j in range(m)] + [b[i]] for i in range(m)]
    basis = [k + i for i in range(m)]
    ncols = k + m
    cost = [Fraction(0)] * k + [Fraction(1)] * m

    def reduced_costs():
        return [
            cost[j] - sum((cost[basis[i]] * T[i][j] for i in range(m)), Fraction(0))
            for j in range(ncols)
        ]

    while True:
        rc = reduced_costs()
        enter = next((j for j in range(ncols) if rc[j] < 0), None)
        if enter is None:
            break
        best = None
        for i in range(m):
            if T[i][enter] > 0:
                ratio = T[i][-1] / T[i][enter]
                key = (ratio, basis[i])
                if best is None or key < best[0]:
                    best = (key, i)
        if best is None:
            # unbounded direction cannot occur in phase one (objective >= 0)
            break
        r = best[1]
        piv = T[r][enter]
        T[r] = [x / piv for x in T[r]]
        for i in range(m):
            if i != r and T[i][enter] != 0:
                f = T[i][enter]
                T[i] = [a - f * c for a, c in zip(T[i], T[r])]
        basis[r] = enter
    infeasibility = sum((T[i][-1] for i in range(m) if basis[i] >= k), Fraction(0))
    return infeasibility == 0
