"""Exact integer and rational linear algebra used throughout the package.

Matrices are plain lists (or tuples) of rows. Entries are Python ``int`` or
``fractions.Fraction``; nothing in here ever touches a float.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Sequence

Vector = tuple
Matrix = Sequence[Sequence]


def _check_square(M: Matrix) -> int:
    n = len(M)
    if any(len(row) != n for row in M):
        raise ValueError("matrix is not square")
    return n


def det(M: Matrix):
    """Determinant by fraction-free (Bareiss) elimination.

    Integer input gives an ``int``; rational input gives a ``Fraction``.
    """
    n = _check_square(M)
    if n == 0:
        return 1
    A = [list(row) for row in M]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if A[k][k] == 0:
            for i in range(k + 1, n):
                if A[i][k] != 0:
                    A[k], A[i] = A[i], A[k]
                    sign = -sign
                    break
            else:
                return 0 * A[0][0]
        akk = A[k][k]
        rowk = A[k]
        for i in range(k + 1, n):
            rowi = A[i]
            aik = rowi[k]
            for j in range(k + 1, n):
                v = rowi[j] * akk - aik * rowk[j]
                rowi[j] = v // prev if isinstance(v, int) and isinstance(prev, int) else v / prev
            rowi[k] = 0
        prev = akk
    return sign * A[n - 1][n - 1]


def orientation(points: Sequence[Sequence[int]]) -> int:
    """Sign of det of the rows (1, p) for n+1 points in dimension n."""
    d = det([[1] + list(p) for p in points])
    return (d > 0) - (d < 0)


def matmul(A: Matrix, B: Matrix) -> list:
    Bt = list(zip(*B))
    return [[sum(a * b for a, b in zip(row, col)) for col in Bt] for row in A]


def matvec(A: Matrix, x: Sequence) -> tuple:
    return tuple(sum(a * b for a, b in zip(row, x)) for row in A)


def transpose(A: Matrix) -> list:
    return [list(c) for c in zip(*A)]


def identity(n: int) -> list:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def rref(M: Matrix):
    """Reduced row echelon form over the rationals.

    Returns:
        (R, pivots) where R is a list of Fraction rows and pivots the pivot
        column indices.
    """
    R = [[Fraction(x) for x in row] for row in M]
    rows = len(R)
    cols = len(R[0]) if rows else 0
    pivots = []
    r = 0
    for c in range(cols):
        p = next((i for i in range(r, rows) if R[i][c] != 0), None)
        if p is None:
            continue
        R[r], R[p] = R[p], R[r]
        inv = 1 / R[r][c]
        R[r] = [x * inv for x in R[r]]
        for i in range(rows):
            if i != r and R[i][c] != 0:
                f = R[i][c]
                R[i] = [a - f * b for a, b in zip(R[i], R[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return R, pivots


def rank(M: Matrix) -> int:
    if not M:
        return 0
    return len(rref(M)[1])


def nullspace(M: Matrix, ncols: int | None = None) -> list:
    """Basis of the right kernel of M as a list of Fraction vectors."""
    if not M:
        if ncols is None:
            raise ValueError("empty matrix needs an explicit column count")
        return [tuple(Fraction(int(i == j)) for j in range(ncols)) for i in range(ncols)]
    R, pivots = rref(M)
    cols = len(M[0])
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * cols
        v[f] = Fraction(1)
        for i, p in enumerate(pivots):
            v[p] = -R[i][f]
        basis.append(tuple(v))
    return basis


def solve(A: Matrix, b: Sequence) -> tuple | None:
    """Solve A x = b exactly; None when inconsistent. Picks free variables = 0."""
    aug = [list(row) + [bi] for row, bi in zip(A, b)]
    R, pivots = rref(aug)
    ncols = len(A[0])
    if ncols in pivots:
        return None
    x = [Fraction(0)] * ncols
    for i, p in enumerate(pivots):
        x[p] = R[i][-1]
    return tuple(x)


def inverse(A: Matrix) -> list:
    n = _check_square(A)
    aug = [list(row) + [int(i == j) for j in range(n)] for i, row in enumerate(A)]
    R, pivots = rref(aug)
    if pivots[:n] != list(range(n)):
        raise ZeroDivisionError("matrix is singular")
    return [row[n:] for row in R[:n]]


def integer_inverse(A: Matrix) -> list:
    """Inverse of a unimodular integer matrix, as ints."""
    inv = inverse(A)
    out = []
    for row in inv:
        if any(x.denominator != 1 for x in row):
            raise ValueError("matrix is not unimodular")
        out.append([int(x) for x in row])
    return out


def primitive(v: Sequence) -> tuple:
    """Scale a rational vector to coprime integers, preserving sign."""
    den = 1
    for x in v:
        den = den * Fraction(x).denominator // gcd(den, Fraction(x).denominator)
    ints = [int(Fraction(x) * den) for x in v]
    g = 0
    for x in ints:
        g = gcd(g, x)
    if g == 0:
        return tuple(ints)
    return tuple(x // g for x in ints)


def hnf(M: Matrix):
    """Hermite normal form by unimodular row operations.

    Returns (H, U) with H = U M upper triangular (row echelon), positive
    pivots, and entries above each pivot reduced into [0, pivot).
    """
    rows = len(M)
    cols = len(M[0]) if rows else 0
    H = [list(map(int, row)) for row in M]
    U = identity(rows)
    r = 0
    for c in range(cols):
        if r == rows:
            break
        # Euclid down the column until one nonzero entry remains at row r.
        while True:
            nz = [i for i in range(r, rows) if H[i][c] != 0]
            if not nz:
                break
            p = min(nz, key=lambda i: abs(H[i][c]))
            H[r], H[p] = H[p], H[r]
            U[r], U[p] = U[p], U[r]
            done = True
            for i in range(r + 1, rows):
                if H[i][c] != 0:
                    q = H[i][c] // H[r][c]
                    H[i] = [a - q * b for a, b in zip(H[i], H[r])]
                    U[i] = [a - q * b for a, b in zip(U[i], U[r])]
                    if H[i][c] != 0:
                        done = False
            if done:
                break
        if r >= rows or H[r][c] == 0:
            continue
        if H[r][c] < 0:
            H[r] = [-a for a in H[r]]
            U[r] = [-a for a in U[r]]
        for i in range(r):
            q = H[i][c] // H[r][c]
            if q:
                H[i] = [a - q * b for a, b in zip(H[i], H[r])]
                U[i] = [a - q * b for a, b in zip(U[i], U[r])]
        r += 1
    return H, U


@dataclass(frozen=True)
class AffineDependence:
    """The unique affine relation among n+2 points spanning R^n.

    ``sum(coeffs) == 0`` and ``sum(c * p) == 0``; coefficients are coprime
    integers with the first nonzero one positive.
    """

    points: tuple
    coeffs: tuple

    @property
    def plus(self) -> tuple:
        return tuple(i for i, a in enumerate(self.coeffs) if a > 0)

    @property
    def minus(self) -> tuple:
        return tuple(i for i, a in enumerate(self.coeffs) if a < 0)

    @property
    def zero(self) -> tuple:
        return tuple(i for i, a in enumerate(self.coeffs) if a == 0)

    @property
    def support(self) -> tuple:
        return tuple(i for i, a in enumerate(self.coeffs) if a != 0)


def affine_dependence(points: Sequence[Sequence[int]]) -> AffineDependence:
    """Affine dependence of n+2 points in dimension n.

    Raises:
        ValueError: if the points do not affinely span R^n, so that the
            relation is not unique up to scale.
    """
    pts = tuple(tuple(p) for p in points)
    n = len(pts[0])
    if len(pts) != n + 2:
        raise ValueError(f"need {n + 2} points in dimension {n}, got {len(pts)}")
    rows = [[1] * len(pts)] + [[p[k] for p in pts] for k in range(n)]
    ker = nullspace(rows)
    if len(ker) != 1:
        raise ValueError("points do not affinely span the ambient space")
    c = primitive(ker[0])
    first = next(x for x in c if x != 0)
    if first < 0:
        c = tuple(-x for x in c)
    return AffineDependence(pts, c)


def barycentric(vertices: Sequence[Sequence[int]], x: Sequence) -> tuple:
    """Barycentric coordinates of x with respect to an n-simplex."""
    n = len(x)
    A = [[1] * (n + 1)] + [[v[k] for v in vertices] for k in range(n)]
    sol = solve(A, [1] + list(x))
    if sol is None:
        raise ValueError("degenerate simplex")
    return sol


@dataclass(frozen=True)
class QuadForm:
    """Symmetric rational n x n matrix A, evaluated as A[x] = x^T A x."""

    matrix: tuple

    def __post_init__(self):
        M = tuple(tuple(Fraction(x) for x in row) for row in self.matrix)
        n = len(M)
        if any(len(row) != n for row in M):
            raise ValueError("quadratic form must be square")
        for i in range(n):
            for j in range(i):
                if M[i][j] != M[j][i]:
                    raise ValueError("quadratic form must be symmetric")
        object.__setattr__(self, "matrix", M)

    @property
    def n(self) -> int:
        return len(self.matrix)

    def __call__(self, x: Sequence) -> Fraction:
        M = self.matrix
        return sum(M[i][j] * x[i] * x[j] for i in range(len(x)) for j in range(len(x)))

    def coords(self) -> tuple:
        """Upper-triangular coordinates (a11, a12, ..., a1n, a22, ..., ann)."""
        n = self.n
        return tuple(self.matrix[i][j] for i in range(n) for j in range(i, n))

    @classmethod
    def from_coords(cls, n: int, coords: Sequence) -> "QuadForm":
        M = [[Fraction(0)] * n for _ in range(n)]
        it = iter(coords)
        for i in range(n):
            for j in range(i, n):
                M[i][j] = M[j][i] = Fraction(next(it))
        return cls(tuple(map(tuple, M)))

    @classmethod
    def identity(cls, n: int) -> "QuadForm":
        return cls(tuple(tuple(int(i == j) for j in range(n)) for i in range(n)))

    def transform(self, g: Matrix) -> "QuadForm":
        """The form x -> A[g x], i.e. g^T A g."""
        return QuadForm(tuple(map(tuple, matmul(transpose(g), matmul(self.matrix, g)))))


def form_coordinate_vector(x: Sequence) -> tuple:
    """Linear functional A -> A[x] in upper-triangular form coordinates."""
    n = len(x)
    return tuple(x[i] * x[j] * (1 if i == j else 2) for i in range(n) for j in range(i, n))


def is_positive_definite(A) -> bool:
    """Sylvester's criterion on exact leading principal minors."""
    M = A.matrix if isinstance(A, QuadForm) else A
    n = len(M)
    for i in range(n):
        for j in range(i):
            if M[i][j] != M[j][i]:
                raise ValueError("matrix is not symmetric")
    return all(det([row[:k] for row in M[:k]]) > 0 for k in range(1, n + 1))
