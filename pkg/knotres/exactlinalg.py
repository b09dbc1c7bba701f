"""Exact rational linear algebra on sympy matrices."""

import logging
from dataclasses import dataclass

from sympy import Matrix, Poly, Rational, eye, ones, zeros

from knotres.errors import NonSquare, PenroseViolation, Singular, SingularInterior

logger = logging.getLogger(__name__)

# Matrices are plain sympy Matrix objects holding sympy Rational entries.
RationalMatrix = Matrix


@dataclass(frozen=True)
class Polynomial:
    """Single-variable polynomial with exact rational coefficients, constant term first."""

    coeffs: tuple = ()

    def __post_init__(self):
        coeffs = [Rational(c) for c in self.coeffs]
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        object.__setattr__(self, "coeffs", tuple(coeffs))

    @classmethod
    def from_expr(cls, expr, var):
        """Build from a sympy expression polynomial in `var`."""
        poly = Poly(expr, var)
        return cls(tuple(reversed(poly.all_coeffs())))

    @property
    def degree(self):
        """Degree; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    @property
    def is_zero(self):
        return not self.coeffs

    def to_expr(self, var):
        return sum((c * var**k for k, c in enumerate(self.coeffs)), Rational(0))

    def normalized(self):
        """Divide out the largest power of the variable and make the constant term positive."""
        coeffs = list(self.coeffs)
        while coeffs and coeffs[0] == 0:
            coeffs.pop(0)
        if coeffs and coeffs[0] < 0:
            coeffs = [-c for c in coeffs]
        return Polynomial(tuple(coeffs))

    def __getitem__(self, k):
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else Rational(0)


def to_matrix(rows):
    """Build a RationalMatrix from nested rows of ints, Fractions or "p/q" strings."""
    return Matrix([[Rational(entry) for entry in row] for row in rows])


def _require_square(M, operation):
    if M.rows != M.cols:
        raise NonSquare(f"{operation} needs a square matrix, got {M.rows}x{M.cols}")


def _bareiss(M):
    """Fraction-free elimination; returns (rows, rank, sign of row swaps, full-pivot flag)."""
    A = [[Rational(x) for x in row] for row in M.tolist()]
    rows, cols = M.rows, M.cols
    prev = Rational(1)
    rank = 0
    sign = 1
    skipped = False
    for c in range(cols):
        if rank == rows:
            break
        pivot = next((i for i in range(rank, rows) if A[i][c] != 0), None)
        if pivot is None:
            skipped = True
            continue
        if pivot != rank:
            A[pivot], A[rank] = A[rank], A[pivot]
            sign = -sign
        p = A[rank][c]
        for i in range(rank + 1, rows):
            for j in range(c + 1, cols):
                A[i][j] = (p * A[i][j] - A[i][c] * A[rank][j]) / prev
            A[i][c] = Rational(0)
        prev = p
        rank += 1
    return A, rank, sign, not skipped


def rank(M):
    """Exact rank by fraction-free row reduction."""
    if M.rows == 0 or M.cols == 0:
        return 0
    return _bareiss(M)[1]


def det(M):
    """Exact determinant by Bareiss elimination."""
    _require_square(M, "det")
    n = M.rows
    if n == 0:
        return Rational(1)
    A, r, sign, _ = _bareiss(M)
    if r < n:
        return Rational(0)
    return sign * A[n - 1][n - 1]


def inverse(M):
    """Exact inverse; raises Singular when det(M) = 0."""
    _require_square(M, "inverse")
    if det(M) == 0:
        raise Singular(f"matrix of size {M.rows} is singular")
    return M.inv()


def penrose_conditions(M, P):
    """The four Penrose conditions for P as pseudoinverse of M, each checked exactly."""
    MP = M * P
    PM = P * M
    return {
        "MPM=M": MP * M == M,
        "PMP=P": PM * P == P,
        "(MP)^T=MP": MP.T == MP,
        "(PM)^T=PM": PM.T == PM,
    }


def _ones_span_kernels(M):
    n = M.rows
    one = ones(n, 1)
    return M * one == zeros(n, 1) and one.T * M == zeros(1, n) and rank(M) == n - 1


def _rank_factorization(M):
    reduced, pivots = M.rref()
    r = len(pivots)
    B = M.extract(list(range(M.rows)), list(pivots))
    C = reduced.extract(list(range(r)), list(range(M.cols)))
    return B, C


def pseudoinverse(M):
    """Moore-Penrose pseudoinverse, verified against all four Penrose conditions."""
    _require_square(M, "pseudoinverse")
    n = M.rows
    if M.is_zero_matrix:
        P = zeros(n, n)
    elif _ones_span_kernels(M):
        J = ones(n, n) / n
        P = inverse(M + J) - J
        logger.debug(f"Pseudoinverse of {n}x{n} matrix via the balanced-Laplacian path")
    else:
        B, C = _rank_factorization(M)
        P = C.T * inverse(C * C.T) * inverse(B.T * B) * B.T
        logger.debug(f"Pseudoinverse of {n}x{n} matrix via rank factorization (rank {B.cols})")

    failed = [name for name, ok in penrose_conditions(M, P).items() if not ok]
    if failed:
        raise PenroseViolation(f"pseudoinverse fails Penrose conditions: {', '.join(failed)}")
    return P


def char_poly(M):
    """det(M - lambda*I) by Faddeev-LeVerrier."""
    _require_square(M, "char_poly")
    n = M.rows
    # c[k] is the coefficient of lambda^k in det(lambda*I - M)
    c = [Rational(0)] * (n + 1)
    c[n] = Rational(1)
    Mk = zeros(n, n)
    I = eye(n)
    for k in range(1, n + 1):
        Mk = M * Mk + c[n - k + 1] * I
        c[n - k] = -(M * Mk).trace() / k
    sign = -1 if n % 2 else 1
    return Polynomial(tuple(sign * coeff for coeff in c))


def schur_complement(M, boundary):
    """M_ext - M_eb * M_int^-1 * M_ie for the given boundary index set."""
    _require_square(M, "schur_complement")
    boundary = sorted(set(boundary))
    interior = [i for i in range(M.rows) if i not in boundary]
    M_ext = M.extract(boundary, boundary)
    if not interior:
        return M_ext
    M_int = M.extract(interior, interior)
    if det(M_int) == 0:
        raise SingularInterior(f"interior block on vertices {interior} is singular")
    M_eb = M.extract(boundary, interior)
    M_ie = M.extract(interior, boundary)
    return M_ext - M_eb * M_int.inv() * M_ie


def permutation_matrix(perm):
    """P with P[i, perm[i]] = 1, so P*M*P.T relabels vertex perm[i] as i."""
    n = len(perm)
    P = zeros(n, n)
    for i, j in enumerate(perm):
        P[i, j] = 1
    return P
