"""Nonlinear coset realizations via the nested-commutator series.

The series coefficients l_n solve, exactly in rational arithmetic,

    n/(n+1)! = sum_{i=1..n} l_i / (n+1-i)!

and the realization of a generator on a coset point F in 𝔣 follows the
nested right-bracketing convention: R_F(X) = [X, F], so the depth-n term of
a series is l_n * R_F^n(seed).

For a broken generator Fa in 𝔣:

    I' = sum_{k>=1} l_{2k-1} R_F^{2k-1}(Fa)
    F' = Fa + sum_{k>=1} l_{2k} R_F^{2k}(Fa) - sum_{n>=1} l_n R_{I'}^n(F)

(I' is evaluated first and substituted into the F' correction).  For an
unbroken generator Ia in 𝔥:

    F' = 2 * sum_{k>=1} l_{2k-1} R_F^{2k-1}(Ia),      I' = Ia.

The series is evaluated literally as printed; it is not resummed and not
corrected against the group law (the oracle module quantifies the gap).
Each series is truncated when its latest term max-norm drops below ``tol``
or errors out at ``max_order`` with diagnostics attached.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial
from typing import Sequence

import numpy as np

from .errors import NonConvergenceError, ValidationError
from .lie import (
    AlgebraElement,
    LieAlgebra,
    ReductiveSplit,
    bracket,
    even_subalgebra,
    map_split_to_subalgebra,
    validate_split,
)

__all__ = [
    "HRepresentation",
    "RealizationConfig",
    "RealizationOutput",
    "SeriesCoefficients",
    "l_coefficients",
    "realize",
    "realize_broken",
    "realize_even_super",
    "realize_on_product",
    "realize_unbroken",
]

_l_cache: list[Fraction] = []


@dataclass(frozen=True)
class SeriesCoefficients:
    values: tuple[Fraction, ...]

    def residuals(self) -> tuple[Fraction, ...]:
        """Exact residual of the defining recursion at each order (all zero)."""
        out = []
        for n in range(1, len(self.values) + 1):
            lhs = Fraction(n, factorial(n + 1))
            rhs = sum(
                (self.values[i - 1] / factorial(n + 1 - i) for i in range(1, n + 1)),
                Fraction(0),
            )
            out.append(lhs - rhs)
        return tuple(out)

    def __getitem__(self, n: int) -> Fraction:
        """1-based access: self[n] = l_n."""
        return self.values[n - 1]

    def __len__(self):
        return len(self.values)


def l_coefficients(n_max: int) -> SeriesCoefficients:
    """First n_max series coefficients, solved from the recursion in order."""
    if n_max < 0:
        raise ValidationError("n_max must be >= 0")
    while len(_l_cache) < n_max:
        n = len(_l_cache) + 1
        value = Fraction(n, factorial(n + 1))
        for i in range(1, n):
            value -= _l_cache[i - 1] / factorial(n + 1 - i)
        _l_cache.append(value)
    return SeriesCoefficients(tuple(_l_cache[:n_max]))


@dataclass(frozen=True)
class RealizationConfig:
    """Truncation policy for the series; the only evaluation mode is the
    literal term-by-term one."""

    max_order: int = 20
    tol: float = 1e-12
    mode: str = "series"

    def __post_init__(self):
        if self.max_order < 1:
            raise ValidationError("max_order must be >= 1")
        if not self.tol > 0:
            raise ValidationError("tol must be positive")
        if self.mode != "series":
            raise ValidationError(f"unsupported mode {self.mode!r}")


@dataclass(frozen=True)
class RealizationOutput:
    f_prime: AlgebraElement
    i_prime: AlgebraElement
    terms_used: int
    last_term_norm: float
    converged: bool

    def to_report(self) -> dict:
        def coeffs(el: AlgebraElement):
            return {
                lbl: (str(v) if el.exact else float(v))
                for lbl, v in el.to_mapping().items()
            }

        return {
            "F_prime": coeffs(self.f_prime),
            "I_prime": coeffs(self.i_prime),
            "terms_used": self.terms_used,
            "last_term_norm": self.last_term_norm,
            "converged": self.converged,
        }


@dataclass(frozen=True)
class HRepresentation:
    """Generator matrices for the 𝔥 part of a split, acting on a carrier V."""

    algebra: LieAlgebra
    split: ReductiveSplit
    mats: dict
    dim: int

    def __init__(self, algebra, split, mats, tol: float = 1e-10, validate: bool = True):
        mats = {int(i): np.asarray(m, dtype=complex) for i, m in mats.items()}
        if set(mats) != set(split.h_indices):
            raise ValidationError(
                "HRepresentation must provide one matrix per h-index",
                have=sorted(mats), expected=list(split.h_indices),
            )
        dims = {m.shape for m in mats.values()}
        if len(dims) != 1 or any(s[0] != s[1] for s in dims):
            raise ValidationError("h-generator matrices must be square and same-shaped")
        object.__setattr__(self, "algebra", algebra)
        object.__setattr__(self, "split", split)
        object.__setattr__(self, "mats", mats)
        object.__setattr__(self, "dim", next(iter(dims))[0])
        if validate:
            self._check_homomorphism(tol)

    def _check_homomorphism(self, tol: float):
        A = self.algebra
        h = self.split.h_indices
        for a in h:
            for b in h:
                lhs = self.mats[a] @ self.mats[b] - self.mats[b] @ self.mats[a]
                rhs = np.zeros_like(lhs)
                for d in h:
                    q = A.c[a, b, d]
                    if q != 0:
                        rhs = rhs + float(q) * self.mats[d]
                if np.max(np.abs(lhs - rhs)) > tol:
                    raise ValidationError(
                        f"h-representation is not a homomorphism at pair ({a},{b})",
                        deviation=float(np.max(np.abs(lhs - rhs))),
                    )

    def act(self, element: AlgebraElement) -> np.ndarray:
        """Matrix of the h-component of an algebra element."""
        out = np.zeros((self.dim, self.dim), dtype=complex)
        for i in self.split.h_indices:
            v = float(element.coeffs[i]) if element.exact else element.coeffs[i]
            if v != 0:
                out += v * self.mats[i]
        return out


class _Series:
    """One truncated series: accumulates terms, tracks convergence."""

    def __init__(self, zero: AlgebraElement, tol: float):
        self.total = zero
        self.tol = tol
        self.converged = False
        self.last_term_norm = 0.0

    def add(self, term: AlgebraElement):
        if self.converged:
            return
        self.total = self.total + term
        self.last_term_norm = term.norm_max()
        if self.last_term_norm < self.tol:
            self.converged = True


def _require_support(x: AlgebraElement, indices, tol: float, what: str) -> AlgebraElement:
    leak = x.leakage(indices)
    if leak > tol:
        raise ValidationError(
            f"{what} must be supported on the index set {sorted(indices)}",
            leakage=leak,
        )
    return x.project(indices)


def _bracket_power_step(prev: AlgebraElement, by: AlgebraElement) -> AlgebraElement:
    return bracket(prev, by)


def _check_split(algebra: LieAlgebra, split: ReductiveSplit):
    validate_split(algebra, split).raise_if_failed("reductive split")


def realize_broken(
    f_gen: AlgebraElement,
    F: AlgebraElement,
    split: ReductiveSplit,
    cfg: RealizationConfig = RealizationConfig(),
) -> RealizationOutput:
    """Series action of a broken (𝔣) generator at the coset point F."""
    A = f_gen.algebra
    if F.algebra is not A:
        raise ValidationError("generator and coset point must share an algebra")
    _check_split(A, split)
    lead_tol = cfg.tol if not (f_gen.exact and F.exact) else 0.0
    f_gen = _require_support(f_gen, split.f_indices, lead_tol, "broken generator")
    F = _require_support(F, split.f_indices, lead_tol, "coset point F")
    ell = l_coefficients(cfg.max_order)
    exact = f_gen.exact and F.exact

    def coeff(n: int):
        return ell[n] if exact else float(ell[n])

    i_series = _Series(A.zero(exact), cfg.tol)
    f_even_series = _Series(A.zero(exact), cfg.tol)
    power = f_gen
    depth = 0
    for n in range(1, cfg.max_order + 1):
        if i_series.converged and f_even_series.converged:
            break
        power = _bracket_power_step(power, F)
        depth = n
        if power.is_zero():
            # nilpotent tail: every later term vanishes identically
            for s in (i_series, f_even_series):
                if not s.converged:
                    s.last_term_norm = 0.0
                    s.converged = True
            break
        target = i_series if n % 2 == 1 else f_even_series
        support = split.h_indices if n % 2 == 1 else split.f_indices
        term = _require_support(
            coeff(n) * power, support, cfg.tol, f"series term at depth {n}"
        )
        target.add(term)
    i_prime = i_series.total

    q_series = _Series(A.zero(exact), cfg.tol)
    q_power = F
    for n in range(1, cfg.max_order + 1):
        if q_series.converged:
            break
        q_power = _bracket_power_step(q_power, i_prime)
        depth = max(depth, n)
        if q_power.is_zero():
            q_series.last_term_norm = 0.0
            q_series.converged = True
            break
        term = _require_support(
            coeff(n) * q_power, split.f_indices, cfg.tol, f"feedback term at depth {n}"
        )
        q_series.add(term)

    f_prime = f_gen + f_even_series.total - q_series.total
    series = (i_series, f_even_series, q_series)
    out = RealizationOutput(
        f_prime=f_prime.project(split.f_indices),
        i_prime=i_prime.project(split.h_indices),
        terms_used=depth,
        last_term_norm=max(s.last_term_norm for s in series),
        converged=all(s.converged for s in series),
    )
    if not out.converged:
        raise NonConvergenceError(
            f"realization series did not converge within {cfg.max_order} terms",
            last_term_norm=out.last_term_norm,
            terms_used=out.terms_used,
            result=out.to_report(),
        )
    return out


def realize_unbroken(
    h_gen: AlgebraElement,
    F: AlgebraElement,
    split: ReductiveSplit,
    cfg: RealizationConfig = RealizationConfig(),
) -> RealizationOutput:
    """Series action of an unbroken (𝔥) generator at the coset point F."""
    A = h_gen.algebra
    if F.algebra is not A:
        raise ValidationError("generator and coset point must share an algebra")
    _check_split(A, split)
    lead_tol = cfg.tol if not (h_gen.exact and F.exact) else 0.0
    h_gen = _require_support(h_gen, split.h_indices, lead_tol, "unbroken generator")
    F = _require_support(F, split.f_indices, lead_tol, "coset point F")
    ell = l_coefficients(cfg.max_order)
    exact = h_gen.exact and F.exact

    f_series = _Series(A.zero(exact), cfg.tol)
    power = h_gen
    depth = 0
    two = Fraction(2) if exact else 2.0
    for n in range(1, cfg.max_order + 1):
        if f_series.converged:
            break
        power = _bracket_power_step(power, F)
        depth = n
        if power.is_zero():
            f_series.last_term_norm = 0.0
            f_series.converged = True
            break
        if n % 2 == 0:
            continue
        coeff = ell[n] if exact else float(ell[n])
        term = _require_support(
            two * coeff * power, split.f_indices, cfg.tol, f"series term at depth {n}"
        )
        f_series.add(term)
    out = RealizationOutput(
        f_prime=f_series.total.project(split.f_indices),
        i_prime=h_gen,
        terms_used=depth,
        last_term_norm=f_series.last_term_norm,
        converged=f_series.converged,
    )
    if not out.converged:
        raise NonConvergenceError(
            f"realization series did not converge within {cfg.max_order} terms",
            last_term_norm=out.last_term_norm,
            terms_used=out.terms_used,
            result=out.to_report(),
        )
    return out


def realize(
    gen: AlgebraElement,
    F: AlgebraElement,
    split: ReductiveSplit,
    cfg: RealizationConfig = RealizationConfig(),
) -> RealizationOutput:
    """Dispatch on the split support of the generator; a mixed generator is
    split linearly into its 𝔣 and 𝔥 components and the outputs are summed."""
    f_part = gen.project(split.f_indices)
    h_part = gen.project(split.h_indices)
    if h_part.is_zero():
        return realize_broken(f_part, F, split, cfg)
    if f_part.is_zero():
        return realize_unbroken(h_part, F, split, cfg)
    broken = realize_broken(f_part, F, split, cfg)
    unbroken = realize_unbroken(h_part, F, split, cfg)
    return RealizationOutput(
        f_prime=broken.f_prime + unbroken.f_prime,
        i_prime=broken.i_prime + unbroken.i_prime,
        terms_used=max(broken.terms_used, unbroken.terms_used),
        last_term_norm=max(broken.last_term_norm, unbroken.last_term_norm),
        converged=broken.converged and unbroken.converged,
    )


def realize_on_product(
    gen: AlgebraElement,
    F: AlgebraElement,
    v: np.ndarray,
    rep: HRepresentation,
    split: ReductiveSplit,
    cfg: RealizationConfig = RealizationConfig(),
) -> tuple[RealizationOutput, np.ndarray]:
    """Induced action on the product of the coset chart with the carrier V:
    the generator moves F to F' and acts on v through ρ(I')."""
    v = np.asarray(v, dtype=complex)
    if v.shape != (rep.dim,):
        raise ValidationError(
            f"carrier vector has shape {v.shape}, expected ({rep.dim},)"
        )
    if rep.algebra is not gen.algebra:
        raise ValidationError("representation and generator algebras differ")
    out = realize(gen, F, split, cfg)
    v_prime = rep.act(out.i_prime) @ v
    return out, v_prime


def realize_even_super(
    gen: AlgebraElement,
    F: AlgebraElement,
    split: ReductiveSplit,
    cfg: RealizationConfig = RealizationConfig(),
) -> RealizationOutput:
    """Realization in the even part of a superalgebra.

    ``split`` is given in parent indices and must cover exactly the even
    generators; inputs must be even, and the outputs are embedded back into
    the superalgebra with zero odd coordinates.
    """
    A = gen.algebra
    if not A.is_graded:
        raise ValidationError("realize_even_super requires a graded algebra")
    if F.algebra is not A:
        raise ValidationError("generator and coset point must share an algebra")
    sub, index_map = even_subalgebra(A)
    odd = [i for i in range(A.dim) if A.grading[i] == 1]
    for name, el in (("generator", gen), ("coset point", F)):
        if el.leakage(index_map) > (0.0 if el.exact else cfg.tol):
            raise ValidationError(f"{name} must be even (parity 0)")
    sub_split = map_split_to_subalgebra(split, index_map)

    def down(el: AlgebraElement) -> AlgebraElement:
        return AlgebraElement(sub, [el.coeffs[i] for i in index_map], exact=el.exact)

    def up(el: AlgebraElement) -> AlgebraElement:
        if el.exact:
            coeffs = [Fraction(0)] * A.dim
        else:
            coeffs = [0.0] * A.dim
        for sub_i, orig_i in enumerate(index_map):
            coeffs[orig_i] = el.coeffs[sub_i]
        return AlgebraElement(A, coeffs, exact=el.exact)

    out = realize(down(gen), down(F), sub_split, cfg)
    return RealizationOutput(
        f_prime=up(out.f_prime),
        i_prime=up(out.i_prime),
        terms_used=out.terms_used,
        last_term_norm=out.last_term_norm,
        converged=out.converged,
    )
