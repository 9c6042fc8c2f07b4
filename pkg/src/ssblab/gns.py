"""Finite-dimensional *-algebras, states, and GNS machinery.

A StarAlgebra is given by a rational multiplication tensor, a rational
involution matrix acting antilinearly on coefficients, and a unit vector.
States are complex linear functionals; positivity is the positive
semidefiniteness of the Gram matrix G[a,b] = f(basis_a* basis_b) with the
inner product taken linear in the second argument.

The GNS carrier is the algebra modulo the Gram null space (relative
eigenvalue threshold), operators act by left multiplication, and the cyclic
vector is the class of the unit.  Stationary states induce the canonical
unitary U[x] = [rho(x)], which fixes the cyclic vector and implements the
automorphism on operators.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import (
    NoGeneratorError,
    PreconditionError,
    ValidationError,
)
from .lie import ValidationIssue, ValidationReport, as_fraction
from .linalg import expm_ss, hermitian_basis

__all__ = [
    "Automorphism",
    "Derivation",
    "EvolveReport",
    "GNSRep",
    "StarAlgebra",
    "State",
    "derivation_hamiltonian",
    "evolve_check",
    "gns_construct",
    "gram_matrix",
    "pullback_state",
    "stationary_unitary",
    "validate_state",
]


class StarAlgebra:
    """Finite-dimensional involutive algebra over rational structure data."""

    def __init__(self, basis_labels: Sequence[str], m, star, unit, validate: bool = True):
        self.basis_labels = tuple(str(lbl) for lbl in basis_labels)
        self.dim = len(self.basis_labels)
        n = self.dim
        mt = np.empty((n, n, n), dtype=object)
        for a in range(n):
            for b in range(n):
                for d in range(n):
                    mt[a, b, d] = as_fraction(m[a][b][d])
        st = np.empty((n, n), dtype=object)
        for i in range(n):
            for j in range(n):
                st[i, j] = as_fraction(star[i][j])
        un = np.array([as_fraction(v) for v in unit], dtype=object)
        for arr in (mt, st, un):
            arr.setflags(write=False)
        self.m, self.star, self.unit = mt, st, un
        self.m_float = np.array([[[float(mt[a, b, d]) for d in range(n)]
                                  for b in range(n)] for a in range(n)])
        self.star_float = np.array([[float(st[i, j]) for j in range(n)] for i in range(n)])
        self.unit_float = np.array([float(v) for v in un])
        if validate:
            self.validate().raise_if_failed("*-algebra axioms")

    def validate(self) -> ValidationReport:
        issues = []
        n = self.dim
        m, s = self.m, self.star
        for a in range(n):
            for b in range(n):
                for g in range(n):
                    for d in range(n):
                        lhs = sum((m[a, b, e] * m[e, g, d] for e in range(n)), Fraction(0))
                        rhs = sum((m[b, g, e] * m[a, e, d] for e in range(n)), Fraction(0))
                        if lhs != rhs:
                            issues.append(ValidationIssue(
                                "associativity", (a, b, g, d),
                                f"associativity fails at ({a},{b},{g},{d})",
                            ))
        # involution: squares to identity, antihomomorphism
        for i in range(n):
            for j in range(n):
                sq = sum((s[i, e] * s[e, j] for e in range(n)), Fraction(0))
                if sq != (1 if i == j else 0):
                    issues.append(ValidationIssue(
                        "involution", (i, j), "involution does not square to identity",
                    ))
        for a in range(n):
            for b in range(n):
                for e in range(n):
                    lhs = sum((m[a, b, d] * s[e, d] for d in range(n)), Fraction(0))
                    rhs = sum(
                        (s[p, b] * s[q, a] * m[p, q, e]
                         for p in range(n) for q in range(n)),
                        Fraction(0),
                    )
                    if lhs != rhs:
                        issues.append(ValidationIssue(
                            "antihomomorphism", (a, b, e),
                            f"(ab)* != b* a* at ({a},{b},{e})",
                        ))
        for a in range(n):
            left = [sum((self.unit[p] * m[p, a, d] for p in range(n)), Fraction(0))
                    for d in range(n)]
            right = [sum((self.unit[p] * m[a, p, d] for p in range(n)), Fraction(0))
                     for d in range(n)]
            expected = [Fraction(1) if d == a else Fraction(0) for d in range(n)]
            if left != expected or right != expected:
                issues.append(ValidationIssue(
                    "unit", (a,), f"unit fails to act as identity on basis {a}",
                ))
        return ValidationReport(tuple(issues))

    # -- coefficient-space operations ------------------------------------------

    def multiply(self, x, y) -> np.ndarray:
        x = np.asarray(x, dtype=complex)
        y = np.asarray(y, dtype=complex)
        return np.einsum("abd,a,b->d", self.m_float, x, y)

    def star_of(self, x) -> np.ndarray:
        return self.star_float @ np.conj(np.asarray(x, dtype=complex))

    def left_mult_matrix(self, a: int) -> np.ndarray:
        return self.m_float[a].T.astype(complex)

    def index(self, label: str) -> int:
        try:
            return self.basis_labels.index(label)
        except ValueError:
            raise ValidationError(
                f"unknown basis label {label!r}; have {list(self.basis_labels)}"
            )

    def __repr__(self):
        return f"<StarAlgebra dim={self.dim} basis={list(self.basis_labels)}>"


@dataclass(frozen=True)
class State:
    """Linear functional by its values on the basis."""

    values: tuple

    def __init__(self, values):
        vals = tuple(complex(v) for v in values)
        object.__setattr__(self, "values", vals)

    def vector(self) -> np.ndarray:
        return np.asarray(self.values, dtype=complex)


def gram_matrix(A: StarAlgebra, f: State) -> np.ndarray:
    """G[a,b] = f(basis_a* . basis_b)."""
    return np.einsum("pa,pbd,d->ab", A.star_float, A.m_float, f.vector())


def validate_state(A: StarAlgebra, f: State, tol: float = 1e-10) -> ValidationReport:
    issues = []
    vec = f.vector()
    if len(vec) != A.dim:
        return ValidationReport((ValidationIssue(
            "shape", (len(vec),), f"state has {len(vec)} values, expected {A.dim}"),))
    f_unit = complex(np.dot(vec, A.unit_float))
    if abs(f_unit - 1.0) > tol:
        issues.append(ValidationIssue(
            "normalization", (), f"f(unit) = {f_unit}, expected 1"))
    G = gram_matrix(A, f)
    herm_dev = float(np.max(np.abs(G - G.conj().T)))
    if herm_dev > tol:
        issues.append(ValidationIssue(
            "hermiticity", (), f"Gram matrix deviates from Hermitian by {herm_dev}"))
    else:
        w = np.linalg.eigvalsh((G + G.conj().T) / 2)
        if w.min() < -tol:
            issues.append(ValidationIssue(
                "positivity", (), f"Gram matrix has eigenvalue {w.min()}"))
    return ValidationReport(tuple(issues))


@dataclass(frozen=True)
class GNSRep:
    """Cyclic representation data produced by :func:`gns_construct`."""

    algebra: StarAlgebra
    carrier_dim: int
    operators: tuple
    cyclic_vector: np.ndarray
    quotient_map: np.ndarray
    lift: np.ndarray

    def pi(self, coeffs) -> np.ndarray:
        coeffs = np.asarray(coeffs, dtype=complex)
        out = np.zeros((self.carrier_dim, self.carrier_dim), dtype=complex)
        for a, v in enumerate(coeffs):
            if v != 0:
                out += v * self.operators[a]
        return out

    def pi_of_label(self, label: str) -> np.ndarray:
        return self.operators[self.algebra.index(label)]


def gns_construct(A: StarAlgebra, f: State, tol: float = 1e-12) -> GNSRep:
    """Carrier = algebra mod the Gram null space; operators act by left
    multiplication; the cyclic vector is the class of the unit."""
    report = validate_state(A, f, tol=max(tol, 1e-10))
    report.raise_if_failed("state")
    G = gram_matrix(A, f)
    G = (G + G.conj().T) / 2
    w, V = np.linalg.eigh(G)
    w_max = float(w.max(initial=0.0))
    keep = w > tol * max(w_max, 1.0)
    if not np.any(keep):
        raise ValidationError("state is null on the whole algebra")
    w_kept = w[keep]
    V_kept = V[:, keep]
    T = np.diag(np.sqrt(w_kept)) @ V_kept.conj().T
    lift = V_kept @ np.diag(1.0 / np.sqrt(w_kept))
    ops = tuple(T @ A.left_mult_matrix(a) @ lift for a in range(A.dim))
    theta = T @ A.unit_float.astype(complex)
    rep = GNSRep(
        algebra=A,
        carrier_dim=int(keep.sum()),
        operators=ops,
        cyclic_vector=theta,
        quotient_map=T,
        lift=lift,
    )
    _check_gns(A, f, rep, tol=1e-9)
    return rep


def _check_gns(A: StarAlgebra, f: State, rep: GNSRep, tol: float):
    n, r = A.dim, rep.carrier_dim
    theta = rep.cyclic_vector
    unit_op = rep.pi(A.unit_float)
    if np.max(np.abs(unit_op - np.eye(r))) > tol:
        raise ValidationError("GNS unit is not the identity operator")
    for a in range(n):
        for b in range(n):
            prod = sum(float(A.m_float[a, b, d]) * rep.operators[d] for d in range(n))
            dev = np.max(np.abs(rep.operators[a] @ rep.operators[b] - prod))
            if dev > tol:
                raise ValidationError(
                    f"GNS operators violate multiplicativity at ({a},{b})",
                    deviation=float(dev),
                )
        star_op = rep.pi(A.star_float[:, a])
        if np.max(np.abs(rep.operators[a].conj().T - star_op)) > tol:
            raise ValidationError(f"GNS operators violate the involution at {a}")
        got = np.vdot(theta, rep.operators[a] @ theta)
        if abs(got - complex(f.values[a])) > tol:
            raise ValidationError(
                f"GNS identity fails on basis {a}", expected=complex(f.values[a]),
                got=complex(got),
            )
    orbit = np.stack([op @ theta for op in rep.operators], axis=1)
    rank = int(np.linalg.matrix_rank(orbit, tol=1e-10 * max(1.0, float(np.abs(orbit).max()))))
    if rank != r:
        raise ValidationError(f"cyclic vector spans rank {rank}, expected {r}")


class Automorphism:
    """Linear *-automorphism, given by its matrix on basis coefficients."""

    def __init__(self, algebra: StarAlgebra, matrix, tol: float = 1e-10,
                 validate: bool = True):
        self.algebra = algebra
        self.matrix = np.asarray(matrix, dtype=complex)
        if self.matrix.shape != (algebra.dim, algebra.dim):
            raise ValidationError(
                f"automorphism matrix has shape {self.matrix.shape}, "
                f"expected {(algebra.dim,) * 2}"
            )
        if validate:
            self._check(tol)

    def _check(self, tol: float):
        A, R = self.algebra, self.matrix
        if np.linalg.cond(R) > 1e12:
            raise ValidationError("automorphism matrix is numerically singular")
        if np.max(np.abs(R @ A.unit_float - A.unit_float)) > tol:
            raise ValidationError("automorphism does not preserve the unit")
        if np.max(np.abs(R @ A.star_float - A.star_float @ np.conj(R))) > tol:
            raise ValidationError("automorphism does not commute with the involution")
        n = A.dim
        for a in range(n):
            for b in range(n):
                lhs = R @ A.m_float[a, b, :].astype(complex)
                rhs = A.multiply(R[:, a], R[:, b])
                if np.max(np.abs(lhs - rhs)) > tol:
                    raise ValidationError(
                        f"automorphism does not preserve products at ({a},{b})",
                        deviation=float(np.max(np.abs(lhs - rhs))),
                    )

    def apply(self, coeffs) -> np.ndarray:
        return self.matrix @ np.asarray(coeffs, dtype=complex)

    def inverse_matrix(self) -> np.ndarray:
        return np.linalg.inv(self.matrix)


class Derivation:
    """Linear map with the Leibniz property and *-compatibility."""

    def __init__(self, algebra: StarAlgebra, matrix, tol: float = 1e-10,
                 validate: bool = True):
        self.algebra = algebra
        self.matrix = np.asarray(matrix, dtype=complex)
        if self.matrix.shape != (algebra.dim, algebra.dim):
            raise ValidationError(
                f"derivation matrix has shape {self.matrix.shape}, "
                f"expected {(algebra.dim,) * 2}"
            )
        if validate:
            self._check(tol)

    def _check(self, tol: float):
        A, D = self.algebra, self.matrix
        n = A.dim
        for a in range(n):
            for b in range(n):
                lhs = D @ A.m_float[a, b, :].astype(complex)
                ea = np.zeros(n, dtype=complex)
                eb = np.zeros(n, dtype=complex)
                ea[a] = 1.0
                eb[b] = 1.0
                rhs = A.multiply(D[:, a], eb) + A.multiply(ea, D[:, b])
                if np.max(np.abs(lhs - rhs)) > tol:
                    raise ValidationError(
                        f"Leibniz rule fails at ({a},{b})",
                        deviation=float(np.max(np.abs(lhs - rhs))),
                    )
        if np.max(np.abs(D @ A.star_float - A.star_float @ np.conj(D))) > tol:
            raise ValidationError("derivation is not *-compatible")


def pullback_state(f: State, rho: Automorphism) -> State:
    """(rho f)(a) = f(rho(a)); positivity is re-validated on the result."""
    new_values = f.vector() @ rho.matrix
    out = State(new_values)
    validate_state(rho.algebra, out).raise_if_failed("pulled-back state")
    return out


def stationary_unitary(
    A: StarAlgebra,
    f: State,
    rho: Automorphism,
    tol: float = 1e-10,
    rep: GNSRep | None = None,
) -> np.ndarray:
    """Unitary on the GNS carrier with U pi(a) U^-1 = pi(rho(a)) and U theta = theta.

    Requires the state to be stationary on the basis; the offending basis
    element is reported otherwise.
    """
    fvec = f.vector()
    pulled = fvec @ rho.matrix
    dev = np.abs(pulled - fvec)
    worst = int(np.argmax(dev))
    if dev[worst] > tol:
        raise PreconditionError(
            "state is not stationary under the automorphism",
            basis_label=A.basis_labels[worst],
            deviation=float(dev[worst]),
        )
    rep = rep or gns_construct(A, f)
    U = rep.quotient_map @ rho.matrix @ rep.lift
    checks = {
        "unitarity": float(np.max(np.abs(U.conj().T @ U - np.eye(rep.carrier_dim)))),
        "cyclic_vector": float(np.max(np.abs(U @ rep.cyclic_vector - rep.cyclic_vector))),
    }
    Uinv = U.conj().T
    worst_op = 0.0
    for a in range(A.dim):
        lhs = U @ rep.operators[a] @ Uinv
        rhs = rep.pi(rho.matrix[:, a])
        worst_op = max(worst_op, float(np.max(np.abs(lhs - rhs))))
    checks["intertwining"] = worst_op
    bad = {k: v for k, v in checks.items() if v > tol}
    if bad:
        raise ValidationError(
            "constructed stationary unitary fails its defining identities", **bad
        )
    return U


def derivation_hamiltonian(
    A: StarAlgebra,
    rep,
    delta: Derivation,
    tol: float = 1e-10,
) -> np.ndarray:
    """Hermitian H with pi(delta(a)) = -i [H, pi(a)], least-squares over the
    Hermitian matrices; the minimum-norm solution kills every commutant
    component, so H comes out traceless on each invariant block."""
    ops = rep.operators if isinstance(rep, GNSRep) else tuple(
        np.asarray(m, dtype=complex) for m in rep
    )
    r = ops[0].shape[0]
    basis = hermitian_basis(r)
    cols = []
    for B in basis:
        col = np.concatenate([(-1j * (B @ P - P @ B)).reshape(-1) for P in ops])
        cols.append(col)
    M = np.stack(cols, axis=1)
    rhs_blocks = []
    D = delta.matrix
    for a in range(A.dim):
        img = sum(D[e, a] * ops[e] for e in range(A.dim))
        rhs_blocks.append(np.asarray(img, dtype=complex).reshape(-1))
    rhs = np.concatenate(rhs_blocks)
    M_real = np.vstack([M.real, M.imag])
    rhs_real = np.concatenate([rhs.real, rhs.imag])
    x, *_ = np.linalg.lstsq(M_real, rhs_real, rcond=None)
    H = sum(float(xk) * B for xk, B in zip(x, basis))
    H = (H + H.conj().T) / 2
    worst = 0.0
    for a in range(A.dim):
        img = sum(D[e, a] * ops[e] for e in range(A.dim))
        devmat = img + 1j * (H @ ops[a] - ops[a] @ H)
        worst = max(worst, float(np.max(np.abs(devmat))))
    if worst > tol:
        raise NoGeneratorError(
            "derivation is not implementable in this representation",
            residual=worst,
        )
    return H


@dataclass(frozen=True)
class EvolveReport:
    entries: tuple
    max_deviation: float

    def to_report(self) -> dict:
        return {
            "grid": [{"t": t, "deviation": d} for t, d in self.entries],
            "max_deviation": self.max_deviation,
        }


def evolve_check(
    A: StarAlgebra,
    rep,
    H: np.ndarray,
    delta: Derivation,
    t_grid: Sequence[float],
) -> EvolveReport:
    """Compare conjugation by exp(-itH) against the exponentiated derivation."""
    ops = rep.operators if isinstance(rep, GNSRep) else tuple(
        np.asarray(m, dtype=complex) for m in rep
    )
    H = np.asarray(H, dtype=complex)
    D = delta.matrix
    entries = []
    for t in t_grid:
        Ut = expm_ss(-1j * t * H)
        Ut_inv = expm_ss(1j * t * H)
        flow = expm_ss(t * D)
        worst = 0.0
        for a in range(A.dim):
            lhs = Ut @ ops[a] @ Ut_inv
            rhs = sum(flow[e, a] * ops[e] for e in range(A.dim))
            worst = max(worst, float(np.max(np.abs(lhs - rhs))))
        entries.append((float(t), worst))
    return EvolveReport(
        entries=tuple(entries),
        max_deviation=max((d for _, d in entries), default=0.0),
    )
