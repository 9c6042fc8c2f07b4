"""Small dense-matrix kernels: exponential, principal log, polar factor,
Hermitian bases, and an exact integer Smith normal form.

The exponential is scaling-and-squaring with a Taylor core, accurate to
~1e-13 relative for inputs of norm up to ~5; scipy provides the principal
logarithm and square root behind an explicit eigenvalue gate so that
failures surface as :class:`DomainError` instead of silent complex drift.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np
import scipy.linalg

from .errors import DomainError, ValidationError

__all__ = [
    "expm_ss",
    "hermitian_basis",
    "opnorm",
    "polar_unitary",
    "principal_log",
    "smith_normal_form",
    "solve_mod1",
]


def opnorm(M) -> float:
    """Operator (spectral) norm."""
    return float(np.linalg.norm(np.asarray(M), 2))


def expm_ss(M, terms: int = 24) -> np.ndarray:
    """Matrix exponential by scaling-and-squaring over a Taylor core."""
    M = np.asarray(M, dtype=complex)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValidationError(f"expm_ss requires a square matrix, got shape {M.shape}")
    norm = np.linalg.norm(M, 1)
    squarings = max(0, int(np.ceil(np.log2(norm / 0.25))) if norm > 0.25 else 0)
    A = M / (2 ** squarings)
    out = np.eye(M.shape[0], dtype=complex)
    term = np.eye(M.shape[0], dtype=complex)
    for k in range(1, terms + 1):
        term = term @ A / k
        out = out + term
        if np.max(np.abs(term)) < 1e-18 * max(1.0, np.max(np.abs(out))):
            break
    for _ in range(squarings):
        out = out @ out
    return out


def principal_log(M, axis_tol: float = 1e-12) -> np.ndarray:
    """Principal matrix logarithm, refusing the cut locus explicitly."""
    M = np.asarray(M, dtype=complex)
    eigs = np.linalg.eigvals(M)
    scale = max(1.0, float(np.max(np.abs(eigs))))
    for lam in eigs:
        if abs(lam) < axis_tol * scale:
            raise DomainError("matrix is singular; no logarithm", eigenvalue=complex(lam))
        if lam.real < 0 and abs(lam.imag) <= axis_tol * abs(lam):
            raise DomainError(
                "eigenvalue on the negative real axis; principal logarithm undefined",
                eigenvalue=complex(lam),
            )
    out = scipy.linalg.logm(M)
    return np.asarray(out, dtype=complex)


def principal_sqrt(M) -> np.ndarray:
    """Principal matrix square root (spectrum gate as in principal_log)."""
    M = np.asarray(M, dtype=complex)
    eigs = np.linalg.eigvals(M)
    scale = max(1.0, float(np.max(np.abs(eigs))))
    for lam in eigs:
        if abs(lam) < 1e-14 * scale:
            raise DomainError("matrix is singular; no square root", eigenvalue=complex(lam))
    return np.asarray(scipy.linalg.sqrtm(M), dtype=complex)


def polar_unitary(A, cond_tol: float = 1e-8) -> np.ndarray:
    """Unitary polar factor of an invertible matrix; DomainError if singular."""
    A = np.asarray(A, dtype=complex)
    W, s, Vh = np.linalg.svd(A)
    if s[-1] <= cond_tol * s[0]:
        raise DomainError(
            "matrix is numerically singular; no unitary polar factor",
            smallest_singular_value=float(s[-1]),
        )
    return W @ Vh


def hermitian_basis(n: int) -> list[np.ndarray]:
    """Orthonormal (Frobenius) real basis of the n x n Hermitian matrices."""
    out = []
    for i in range(n):
        E = np.zeros((n, n), dtype=complex)
        E[i, i] = 1.0
        out.append(E)
    r = 1.0 / np.sqrt(2.0)
    for i in range(n):
        for j in range(i + 1, n):
            E = np.zeros((n, n), dtype=complex)
            E[i, j] = r
            E[j, i] = r
            out.append(E)
            E = np.zeros((n, n), dtype=complex)
            E[i, j] = -1j * r
            E[j, i] = 1j * r
            out.append(E)
    return out


# -- exact integer Smith normal form --------------------------------------------


def smith_normal_form(mat) -> tuple[list[list[int]], list[list[int]], list[list[int]]]:
    """Return (S, U, V) with U @ mat @ V = S, U and V unimodular, S diagonal
    with nonnegative entries d_1 | d_2 | ... ; exact integer arithmetic."""
    A = [[int(x) for x in row] for row in mat]
    m = len(A)
    n = len(A[0]) if m else 0
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    V = [[int(i == j) for j in range(n)] for i in range(n)]

    def row_add(i, j, k):  # row_i += k * row_j
        Ai, Aj = A[i], A[j]
        for c in range(n):
            Ai[c] += k * Aj[c]
        Ui, Uj = U[i], U[j]
        for c in range(m):
            Ui[c] += k * Uj[c]

    def col_add(i, j, k):  # col_i += k * col_j
        for r in range(m):
            A[r][i] += k * A[r][j]
        for r in range(n):
            V[r][i] += k * V[r][j]

    def row_swap(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]

    def col_swap(i, j):
        for r in range(m):
            A[r][i], A[r][j] = A[r][j], A[r][i]
        for r in range(n):
            V[r][i], V[r][j] = V[r][j], V[r][i]

    def row_negate(i):
        A[i] = [-x for x in A[i]]
        U[i] = [-x for x in U[i]]

    t = 0
    while t < min(m, n):
        # pivot: smallest nonzero magnitude in the trailing submatrix
        pivot = None
        for i in range(t, m):
            for j in range(t, n):
                if A[i][j] != 0 and (pivot is None or abs(A[i][j]) < abs(A[pivot[0]][pivot[1]])):
                    pivot = (i, j)
        if pivot is None:
            break
        row_swap(t, pivot[0])
        col_swap(t, pivot[1])
        while True:
            # clear column t with Euclidean steps
            dirty = False
            for i in range(m):
                if i != t and A[i][t] != 0:
                    q = A[i][t] // A[t][t]
                    row_add(i, t, -q)
                    if A[i][t] != 0:  # remainder beats the pivot; rotate it in
                        row_swap(i, t)
                        dirty = True
            for j in range(n):
                if j != t and A[t][j] != 0:
                    q = A[t][j] // A[t][t]
                    col_add(j, t, -q)
                    if A[t][j] != 0:
                        col_swap(j, t)
                        dirty = True
            if dirty:
                continue
            # divisibility: pivot must divide the whole trailing block
            culprit = None
            for i in range(t + 1, m):
                for j in range(t + 1, n):
                    if A[i][j] % A[t][t] != 0:
                        culprit = i
                        break
                if culprit is not None:
                    break
            if culprit is None:
                break
            row_add(t, culprit, 1)
        if A[t][t] < 0:
            row_negate(t)
        t += 1
    return A, U, V


def solve_mod1(A, rhs) -> list[Fraction] | None:
    """Solve A x = rhs (mod 1) for rational x, with A integer and rhs rational.

    Returns one solution as Fractions in [0, 1), or None when no solution
    exists.  Decided exactly through the Smith normal form of A.
    """
    rhs = [Fraction(v) for v in rhs]
    m = len(rhs)
    S, U, V = smith_normal_form(A)
    n = len(V)
    c = [sum(Fraction(U[i][j]) * rhs[j] for j in range(m)) for i in range(m)]
    y = [Fraction(0)] * n
    for i in range(m):
        d = S[i][i] if i < min(m, n) else 0
        if i < n and d != 0:
            y[i] = Fraction(c[i], d)
        else:
            frac = c[i] - int(c[i])  # solvable iff the residue is an integer
            if frac != 0:
                return None
    x = [sum(Fraction(V[i][j]) * y[j] for j in range(n)) for i in range(n)]
    return [v - (v.numerator // v.denominator) for v in x]
