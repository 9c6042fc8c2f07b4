"""Ground-truth engine on matrix representations.

`coset_factorize` inverts g = exp(F) exp(I) by a damped Gauss-Newton
iteration on the stacked (F, I) coefficients, seeded by the split projection
of the principal logarithm of g.  `velocity_check` differentiates that
factorization by central differences and reports the componentwise gap to
the literal series realization, which agrees with the group law to first
order in the coset point only.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .coset import HRepresentation, RealizationConfig, RealizationOutput, realize
from .errors import DomainError, NonConvergenceError, ValidationError
from .lie import AlgebraElement, LieAlgebra, ReductiveSplit
from .linalg import expm_ss, opnorm, principal_log, principal_sqrt

__all__ = [
    "FactorizationResult",
    "MatrixRepresentation",
    "VelocityCheck",
    "coset_factorize",
    "exp_element",
    "velocity_check",
]


class MatrixRepresentation:
    """One square matrix per basis generator, closed under the bracket."""

    def __init__(self, algebra: LieAlgebra, mats: Sequence, tol: float = 1e-10,
                 validate: bool = True):
        self.algebra = algebra
        self.mats = tuple(np.asarray(m, dtype=complex) for m in mats)
        if len(self.mats) != algebra.dim:
            raise ValidationError(
                f"need {algebra.dim} generator matrices, got {len(self.mats)}"
            )
        shapes = {m.shape for m in self.mats}
        if len(shapes) != 1 or any(s[0] != s[1] for s in shapes):
            raise ValidationError("generator matrices must be square and same-shaped")
        self.rep_dim = self.mats[0].shape[0]
        if validate:
            self._check_closure(tol)

    def _check_closure(self, tol: float):
        A = self.algebra
        for a in range(A.dim):
            for b in range(A.dim):
                lhs = self.mats[a] @ self.mats[b] - self.mats[b] @ self.mats[a]
                rhs = np.zeros_like(lhs)
                for d in range(A.dim):
                    q = A.c[a, b, d]
                    if q != 0:
                        rhs = rhs + float(q) * self.mats[d]
                dev = float(np.max(np.abs(lhs - rhs)))
                if dev > tol:
                    raise ValidationError(
                        f"matrices do not close under the bracket at pair ({a},{b})",
                        deviation=dev,
                    )

    def element_matrix(self, x: AlgebraElement) -> np.ndarray:
        if x.algebra is not self.algebra:
            raise ValidationError("element belongs to a different algebra")
        out = np.zeros((self.rep_dim, self.rep_dim), dtype=complex)
        for i, v in enumerate(x.to_float()):
            if v != 0.0:
                out += v * self.mats[i]
        return out

    def h_representation(self, split: ReductiveSplit) -> HRepresentation:
        return HRepresentation(
            self.algebra, split, {i: self.mats[i] for i in split.h_indices}
        )

    def __repr__(self):
        return f"<MatrixRepresentation dim={self.algebra.dim} rep_dim={self.rep_dim}>"


@dataclass(frozen=True)
class FactorizationResult:
    F: AlgebraElement
    I: AlgebraElement
    residual: float
    iterations: int

    def to_report(self) -> dict:
        return {
            "F": {k: float(v) for k, v in self.F.to_mapping().items()},
            "I": {k: float(v) for k, v in self.I.to_mapping().items()},
            "residual": self.residual,
            "iterations": self.iterations,
        }


def exp_element(x: AlgebraElement, rep: MatrixRepresentation) -> np.ndarray:
    """Matrix exponential of the represented element."""
    return expm_ss(rep.element_matrix(x))


def _basis_projection(rep: MatrixRepresentation, M: np.ndarray) -> np.ndarray:
    """Least-squares coefficients x with sum x_a mats_a ~ M."""
    cols = [m.reshape(-1) for m in rep.mats]
    B = np.stack(cols, axis=1)
    Br = np.vstack([B.real, B.imag])
    rhs = np.concatenate([M.reshape(-1).real, M.reshape(-1).imag])
    coeffs, *_ = np.linalg.lstsq(Br, rhs, rcond=None)
    return coeffs


def coset_factorize(
    g: np.ndarray,
    split: ReductiveSplit,
    rep: MatrixRepresentation,
    tol: float = 1e-12,
    max_iter: int = 80,
) -> FactorizationResult:
    """Solve g = exp(F) exp(I) with F in 𝔣 and I in 𝔥 by damped Gauss-Newton."""
    g = np.asarray(g, dtype=complex)
    if g.shape != (rep.rep_dim, rep.rep_dim):
        raise ValidationError(
            f"group element has shape {g.shape}, expected {(rep.rep_dim,) * 2}"
        )
    A = rep.algebra
    f_idx, h_idx = list(split.f_indices), list(split.h_indices)

    try:
        L = principal_log(g)
    except DomainError:
        # retry through the group square root (halved element)
        L = 2.0 * principal_log(principal_sqrt(g))
    seed = _basis_projection(rep, L)
    u = np.concatenate([seed[f_idx], seed[h_idx]])

    def unpack(vec):
        coeffs = np.zeros(A.dim)
        coeffs[f_idx] = vec[: len(f_idx)]
        coeffs[h_idx] = vec[len(f_idx):]
        F = AlgebraElement(A, coeffs, exact=False).project(f_idx)
        I = AlgebraElement(A, coeffs, exact=False).project(h_idx)
        return F, I

    def group_point(vec):
        F, I = unpack(vec)
        return exp_element(F, rep) @ exp_element(I, rep)

    def residual_vec(vec):
        R = group_point(vec) - g
        return np.concatenate([R.reshape(-1).real, R.reshape(-1).imag])

    scale = max(1.0, opnorm(g))
    target = max(tol * 1e-2, 1e-15 * scale)
    r = residual_vec(u)
    best_u, best_norm = u.copy(), opnorm(group_point(u) - g)
    iterations = 0
    stale = 0
    for iterations in range(1, max_iter + 1):
        if best_norm <= target:
            break
        # finite-difference Jacobian of the full map
        J = np.empty((r.size, u.size))
        for k in range(u.size):
            h = 1e-6 * max(1.0, abs(u[k]))
            up, um = u.copy(), u.copy()
            up[k] += h
            um[k] -= h
            J[:, k] = (residual_vec(up) - residual_vec(um)) / (2 * h)
        step, *_ = np.linalg.lstsq(J, -r, rcond=None)
        lam, accepted = 1.0, False
        r_norm = np.linalg.norm(r)
        for _ in range(25):
            trial = u + lam * step
            r_trial = residual_vec(trial)
            if np.linalg.norm(r_trial) < r_norm:
                u, r = trial, r_trial
                accepted = True
                break
            lam *= 0.5
        now = opnorm(group_point(u) - g)
        if now < best_norm:
            best_u, best_norm = u.copy(), now
            stale = 0
        else:
            stale += 1
        if not accepted or stale >= 3:
            break
    F, I = unpack(best_u)
    result = FactorizationResult(F=F, I=I, residual=best_norm, iterations=iterations)
    if best_norm > tol:
        raise NonConvergenceError(
            "coset factorization stagnated above tolerance",
            residual=best_norm,
            iterations=iterations,
            best=result.to_report(),
        )
    return result


@dataclass(frozen=True)
class VelocityCheck:
    d_f: AlgebraElement
    d_i: AlgebraElement
    series: RealizationOutput
    gap_f: float
    gap_i: float
    eps: float

    def to_report(self) -> dict:
        def coeffs(el):
            return {k: float(v) for k, v in el.to_mapping().items()}

        return {
            "dF": coeffs(self.d_f),
            "dI": coeffs(self.d_i),
            "series_F": coeffs(self.series.f_prime),
            "series_I": coeffs(self.series.i_prime),
            "gap_norms": {"F": self.gap_f, "I": self.gap_i},
            "eps": self.eps,
        }


def velocity_check(
    gen: AlgebraElement,
    F: AlgebraElement,
    split: ReductiveSplit,
    rep: MatrixRepresentation,
    eps: float = 1e-5,
    cfg: RealizationConfig = RealizationConfig(),
    tol: float = 1e-12,
) -> VelocityCheck:
    """Central-difference velocity of t -> factorize(exp(t gen) exp(F)) at 0,
    compared componentwise against the series realization."""
    if eps <= 0:
        raise ValidationError("eps must be positive")
    base = exp_element(F, rep)
    gen_mat = rep.element_matrix(gen)
    results = {}
    for sign in (+1, -1):
        g = expm_ss(sign * eps * gen_mat) @ base
        results[sign] = coset_factorize(g, split, rep, tol=tol)
    inv_2eps = 1.0 / (2.0 * eps)
    d_f = inv_2eps * (results[+1].F - results[-1].F)
    d_i = inv_2eps * (results[+1].I - results[-1].I)
    series = realize(gen, F, split, cfg)
    gap_f = float(np.max(np.abs(d_f.to_float() - series.f_prime.to_float())))
    gap_i = float(np.max(np.abs(d_i.to_float() - series.i_prime.to_float())))
    return VelocityCheck(d_f=d_f, d_i=d_i, series=series, gap_f=gap_f, gap_i=gap_i, eps=eps)
