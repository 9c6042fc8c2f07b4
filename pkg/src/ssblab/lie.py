"""Lie algebras and superalgebras defined by exact rational structure constants.

Structure constants are stored as `fractions.Fraction` and validated exactly:
(graded) antisymmetry, the (graded) Jacobi identity, and parity compatibility
all hold with zero rational residual or the constructor refuses the algebra.
Elements carry either exact rational or float coefficients, tagged, and every
operation preserves exactness when both operands are exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from numbers import Integral
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import ValidationError

__all__ = [
    "AlgebraElement",
    "LieAlgebra",
    "ReductiveSplit",
    "ValidationIssue",
    "ValidationReport",
    "adjoint_matrix",
    "bracket",
    "even_subalgebra",
    "validate_split",
]


def as_fraction(value) -> Fraction:
    """Coerce ints, Fractions, and 'p/q' strings; floats are rejected."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, Integral):
        return Fraction(int(value))
    if isinstance(value, str):
        return Fraction(value)
    raise ValidationError(
        f"expected an exact rational, got {value!r} of type {type(value).__name__}"
    )


@dataclass(frozen=True)
class ValidationIssue:
    kind: str
    indices: tuple
    message: str


@dataclass(frozen=True)
class ValidationReport:
    issues: tuple[ValidationIssue, ...]

    @property
    def ok(self) -> bool:
        return not self.issues

    def raise_if_failed(self, context: str = "validation"):
        if self.issues:
            summary = "; ".join(i.message for i in self.issues[:5])
            raise ValidationError(
                f"{context} failed with {len(self.issues)} issue(s): {summary}",
                issues=[i.message for i in self.issues],
            )


@dataclass(frozen=True)
class ReductiveSplit:
    """Index partition 𝔤 = 𝔥 ⊕ 𝔣; the three bracket inclusions are checked
    against a concrete algebra by :func:`validate_split`."""

    h_indices: tuple[int, ...]
    f_indices: tuple[int, ...]

    def __init__(self, h_indices: Iterable[int], f_indices: Iterable[int]):
        object.__setattr__(self, "h_indices", tuple(sorted(int(i) for i in h_indices)))
        object.__setattr__(self, "f_indices", tuple(sorted(int(i) for i in f_indices)))
        overlap = set(self.h_indices) & set(self.f_indices)
        if overlap:
            raise ValidationError(f"split index sets overlap: {sorted(overlap)}")


class LieAlgebra:
    """Finite-dimensional (super) Lie algebra over rational structure constants.

    ``c[a][b][d]`` is the coefficient of basis element ``d`` in the bracket of
    basis elements ``a`` and ``b``.  ``grading`` is a parity vector in
    {0, 1}^dim for superalgebras, or None for the ungraded case.
    """

    def __init__(
        self,
        basis_labels: Sequence[str],
        c,
        grading: Sequence[int] | None = None,
        split: ReductiveSplit | None = None,
        validate: bool = True,
    ):
        self.basis_labels = tuple(str(lbl) for lbl in basis_labels)
        self.dim = len(self.basis_labels)
        if len(set(self.basis_labels)) != self.dim:
            raise ValidationError("basis labels must be unique")
        arr = np.empty((self.dim, self.dim, self.dim), dtype=object)
        for a in range(self.dim):
            for b in range(self.dim):
                for d in range(self.dim):
                    arr[a, b, d] = as_fraction(c[a][b][d])
        arr.setflags(write=False)
        self.c = arr
        if grading is None:
            self.grading = None
        else:
            self.grading = tuple(int(p) for p in grading)
            if len(self.grading) != self.dim or any(p not in (0, 1) for p in self.grading):
                raise ValidationError("grading must be a {0,1} vector of length dim")
        self.split = split
        self._c_float = None
        self._nonzero = tuple(
            (a, b, d, arr[a, b, d])
            for a in range(self.dim)
            for b in range(self.dim)
            for d in range(self.dim)
            if arr[a, b, d] != 0
        )
        if validate:
            self.validate().raise_if_failed("Lie algebra axioms")
            if split is not None:
                if self.grading is None:
                    validate_split(self, split).raise_if_failed("reductive split")
                else:
                    # a graded algebra's split lives on its even part
                    sub, index_map = even_subalgebra(self)
                    validate_split(
                        sub, map_split_to_subalgebra(split, index_map)
                    ).raise_if_failed("even-part reductive split")

    # -- construction helpers -------------------------------------------------

    @classmethod
    def from_brackets(
        cls,
        basis_labels: Sequence[str],
        brackets: Mapping[tuple[int, int], Mapping[int, object]],
        grading: Sequence[int] | None = None,
        split: ReductiveSplit | None = None,
    ) -> "LieAlgebra":
        """Build from a sparse table of brackets; the mirror entries are filled
        by (graded) antisymmetry and any redundant entries must agree."""
        dim = len(basis_labels)
        par = [0] * dim if grading is None else [int(p) for p in grading]
        c = [[[Fraction(0) for _ in range(dim)] for _ in range(dim)] for _ in range(dim)]
        seen = set()
        for (a, b), row in brackets.items():
            for d, value in row.items():
                q = as_fraction(value)
                mirror = -q if (par[a] * par[b]) % 2 == 0 else q
                for key, val in (((a, b, d), q), ((b, a, d), mirror)):
                    if key in seen and c[key[0]][key[1]][key[2]] != val:
                        raise ValidationError(
                            f"inconsistent duplicate structure constant at {key}"
                        )
                    seen.add(key)
                    c[key[0]][key[1]][key[2]] = val
        return cls(basis_labels, c, grading=grading, split=split)

    def parity(self, index: int) -> int:
        return 0 if self.grading is None else self.grading[index]

    @property
    def is_graded(self) -> bool:
        return self.grading is not None

    @property
    def c_float(self) -> np.ndarray:
        if self._c_float is None:
            arr = np.zeros((self.dim, self.dim, self.dim))
            for a, b, d, q in self._nonzero:
                arr[a, b, d] = float(q)
            arr.setflags(write=False)
            self._c_float = arr
        return self._c_float

    def index(self, label: str) -> int:
        try:
            return self.basis_labels.index(label)
        except ValueError:
            matches = [
                i for i, lbl in enumerate(self.basis_labels)
                if lbl.lower() == label.lower()
            ]
            if len(matches) == 1:
                return matches[0]
        raise ValidationError(
            f"unknown basis label {label!r}; have {list(self.basis_labels)}"
        )

    # -- element factories ----------------------------------------------------

    def element(self, coeffs, exact: bool | None = None) -> "AlgebraElement":
        return AlgebraElement(self, coeffs, exact=exact)

    def basis_element(self, index: int) -> "AlgebraElement":
        coeffs = [Fraction(0)] * self.dim
        coeffs[index] = Fraction(1)
        return AlgebraElement(self, coeffs, exact=True)

    def zero(self, exact: bool = True) -> "AlgebraElement":
        return AlgebraElement(self, [Fraction(0)] * self.dim, exact=exact)

    def element_from_mapping(self, mapping: Mapping[str, object]) -> "AlgebraElement":
        coeffs: list = [Fraction(0)] * self.dim
        exact = True
        for label, value in mapping.items():
            i = self.index(label)
            if isinstance(value, float) and not float(value).is_integer():
                exact = False
                coeffs[i] = value
            else:
                try:
                    coeffs[i] = as_fraction(value)
                except ValidationError:
                    exact = False
                    coeffs[i] = float(value)
        if not exact:
            coeffs = [float(v) for v in coeffs]
        return AlgebraElement(self, coeffs, exact=exact)

    # -- validation -----------------------------------------------------------

    def validate(self) -> ValidationReport:
        issues: list[ValidationIssue] = []
        n = self.dim
        c = self.c
        par = self.parity
        for a in range(n):
            for b in range(n):
                sign = -1 if (par(a) * par(b)) % 2 == 0 else 1
                for d in range(n):
                    if c[a, b, d] != sign * c[b, a, d]:
                        issues.append(ValidationIssue(
                            "antisymmetry", (a, b, d),
                            f"c[{a}][{b}][{d}] != {'-' if sign < 0 else ''}c[{b}][{a}][{d}]",
                        ))
                    if self.grading is not None and c[a, b, d] != 0:
                        if par(d) != (par(a) + par(b)) % 2:
                            issues.append(ValidationIssue(
                                "grading", (a, b, d),
                                f"c[{a}][{b}][{d}] != 0 violates parity additivity",
                            ))
        for a in range(n):
            for b in range(n):
                for g in range(n):
                    s_ag = -1 if (par(a) * par(g)) % 2 else 1
                    s_ba = -1 if (par(b) * par(a)) % 2 else 1
                    s_gb = -1 if (par(g) * par(b)) % 2 else 1
                    for d in range(n):
                        total = Fraction(0)
                        for e in range(n):
                            total += s_ag * c[b, g, e] * c[a, e, d]
                            total += s_ba * c[g, a, e] * c[b, e, d]
                            total += s_gb * c[a, b, e] * c[g, e, d]
                        if total != 0:
                            issues.append(ValidationIssue(
                                "jacobi", (a, b, g, d),
                                f"Jacobi residual {total} at (a,b,g,d)=({a},{b},{g},{d})",
                            ))
        return ValidationReport(tuple(issues))

    # -- core operations ------------------------------------------------------

    def bracket(self, x: "AlgebraElement", y: "AlgebraElement") -> "AlgebraElement":
        return bracket(x, y)

    def adjoint_matrix(self, x: "AlgebraElement"):
        return adjoint_matrix(x)

    def __repr__(self):
        kind = "LieSuperalgebra" if self.is_graded else "LieAlgebra"
        return f"<{kind} dim={self.dim} basis={list(self.basis_labels)}>"


class AlgebraElement:
    """Vector in a Lie algebra; coefficients are exact rationals or floats."""

    __slots__ = ("algebra", "coeffs", "exact")

    def __init__(self, algebra: LieAlgebra, coeffs, exact: bool | None = None):
        self.algebra = algebra
        if exact is None:
            exact = not any(isinstance(v, (float, np.floating)) for v in coeffs)
        if exact:
            self.coeffs = tuple(as_fraction(v) for v in coeffs)
        else:
            arr = np.asarray([float(v) for v in coeffs], dtype=float)
            arr.setflags(write=False)
            self.coeffs = arr
        self.exact = bool(exact)
        if len(self.coeffs) != algebra.dim:
            raise ValidationError(
                f"coefficient vector has length {len(self.coeffs)}, expected {algebra.dim}"
            )

    # -- conversions ----------------------------------------------------------

    def to_float(self) -> np.ndarray:
        if self.exact:
            return np.array([float(q) for q in self.coeffs])
        return np.array(self.coeffs, dtype=float)

    def as_numeric(self) -> "AlgebraElement":
        return self if not self.exact else AlgebraElement(self.algebra, self.to_float(), exact=False)

    def to_mapping(self, skip_zero: bool = True) -> dict:
        out = {}
        for lbl, v in zip(self.algebra.basis_labels, self.coeffs):
            if skip_zero and (v == 0):
                continue
            out[lbl] = v
        return out

    # -- structure ------------------------------------------------------------

    def norm_max(self) -> float:
        if self.exact:
            return max((abs(float(q)) for q in self.coeffs), default=0.0)
        return float(np.max(np.abs(self.coeffs))) if len(self.coeffs) else 0.0

    def is_zero(self, tol: float = 0.0) -> bool:
        if self.exact:
            return all(q == 0 for q in self.coeffs)
        return self.norm_max() <= tol

    def parity(self) -> int | None:
        """Parity of a homogeneous element of a graded algebra; None if mixed."""
        g = self.algebra.grading
        if g is None:
            return 0
        present = {g[i] for i, v in enumerate(self.coeffs) if v != 0}
        if not present:
            return 0
        if len(present) > 1:
            return None
        return present.pop()

    def project(self, indices: Iterable[int]) -> "AlgebraElement":
        keep = set(indices)
        if self.exact:
            coeffs = [q if i in keep else Fraction(0) for i, q in enumerate(self.coeffs)]
            return AlgebraElement(self.algebra, coeffs, exact=True)
        coeffs = np.where(
            np.isin(np.arange(self.algebra.dim), list(keep)), self.coeffs, 0.0
        )
        return AlgebraElement(self.algebra, coeffs, exact=False)

    def leakage(self, indices: Iterable[int]) -> float:
        """Max-norm of the part of the element outside the given index set."""
        keep = set(indices)
        vals = [v for i, v in enumerate(self.coeffs) if i not in keep]
        if self.exact:
            return max((abs(float(q)) for q in vals), default=0.0)
        return float(max((abs(v) for v in vals), default=0.0))

    def supported_on(self, indices: Iterable[int], tol: float = 0.0) -> bool:
        return self.leakage(indices) <= tol

    # -- arithmetic -----------------------------------------------------------

    def _coerce_pair(self, other: "AlgebraElement"):
        if self.algebra is not other.algebra:
            raise ValidationError("elements belong to different algebras")
        if self.exact and other.exact:
            return self, other, True
        return self.as_numeric(), other.as_numeric(), False

    def __add__(self, other: "AlgebraElement") -> "AlgebraElement":
        a, b, exact = self._coerce_pair(other)
        if exact:
            return AlgebraElement(self.algebra, [p + q for p, q in zip(a.coeffs, b.coeffs)], True)
        return AlgebraElement(self.algebra, a.coeffs + b.coeffs, False)

    def __sub__(self, other: "AlgebraElement") -> "AlgebraElement":
        return self + (-other)

    def __neg__(self) -> "AlgebraElement":
        if self.exact:
            return AlgebraElement(self.algebra, [-q for q in self.coeffs], True)
        return AlgebraElement(self.algebra, -np.asarray(self.coeffs), False)

    def scale(self, scalar) -> "AlgebraElement":
        if self.exact and not isinstance(scalar, (float, np.floating)):
            s = as_fraction(scalar)
            return AlgebraElement(self.algebra, [s * q for q in self.coeffs], True)
        return AlgebraElement(self.algebra, float(scalar) * self.to_float(), False)

    def __rmul__(self, scalar) -> "AlgebraElement":
        return self.scale(scalar)

    def __mul__(self, scalar) -> "AlgebraElement":
        return self.scale(scalar)

    def bracket(self, other: "AlgebraElement") -> "AlgebraElement":
        return bracket(self, other)

    def almost_equal(self, other: "AlgebraElement", tol: float = 0.0) -> bool:
        if self.algebra is not other.algebra:
            return False
        if self.exact and other.exact and tol == 0.0:
            return all(p == q for p, q in zip(self.coeffs, other.coeffs))
        return float(np.max(np.abs(self.to_float() - other.to_float()))) <= tol

    def __repr__(self):
        terms = [f"{v}*{lbl}" for lbl, v in self.to_mapping().items()]
        return " + ".join(terms) if terms else "0"


# -- module-level operations ---------------------------------------------------


def bracket(x: AlgebraElement, y: AlgebraElement) -> AlgebraElement:
    """Bracket [x, y] from the structure constants; exact for exact inputs."""
    if x.algebra is not y.algebra:
        raise ValidationError("bracket requires elements over the same algebra")
    A = x.algebra
    if x.exact and y.exact:
        out = [Fraction(0)] * A.dim
        for a, b, d, q in A._nonzero:
            xa = x.coeffs[a]
            if xa == 0:
                continue
            yb = y.coeffs[b]
            if yb == 0:
                continue
            out[d] += xa * yb * q
        return AlgebraElement(A, out, exact=True)
    xf, yf = x.to_float(), y.to_float()
    return AlgebraElement(A, np.einsum("a,b,abd->d", xf, yf, A.c_float), exact=False)


def adjoint_matrix(x: AlgebraElement):
    """Matrix of ad_x; column d holds the coefficients of [x, basis_d].

    Exact elements give a Fraction-valued object array, float elements a
    float64 array.
    """
    A = x.algebra
    n = A.dim
    if x.exact:
        mat = np.empty((n, n), dtype=object)
        mat[:, :] = Fraction(0)
        for a, b, d, q in A._nonzero:
            if x.coeffs[a] != 0:
                mat[d, b] += x.coeffs[a] * q
        mat.setflags(write=False)
        return mat
    return np.einsum("a,abd->db", x.to_float(), A.c_float)


def validate_split(A: LieAlgebra, split: ReductiveSplit) -> ValidationReport:
    """Check [𝔥,𝔥]⊆𝔥, [𝔣,𝔣]⊆𝔥, [𝔣,𝔥]⊆𝔣; violations are data, not errors."""
    h, f = set(split.h_indices), set(split.f_indices)
    if h | f != set(range(A.dim)) or len(h) + len(f) != A.dim:
        raise ValidationError(
            "split index sets must partition the basis",
            h=sorted(h), f=sorted(f), dim=A.dim,
        )
    issues = []
    for a, b, d, q in A._nonzero:
        if a in h and b in h and d not in h:
            issues.append(ValidationIssue(
                "split:[h,h]", (a, b, d),
                f"[h,h] leaks: c[{a}][{b}][{d}]={q} lands outside h",
            ))
        elif a in f and b in f and d not in h:
            issues.append(ValidationIssue(
                "split:[f,f]", (a, b, d),
                f"[f,f] leaks: c[{a}][{b}][{d}]={q} lands outside h",
            ))
        elif ((a in f and b in h) or (a in h and b in f)) and d not in f:
            issues.append(ValidationIssue(
                "split:[f,h]", (a, b, d),
                f"[f,h] leaks: c[{a}][{b}][{d}]={q} lands outside f",
            ))
    return ValidationReport(tuple(issues))


def even_subalgebra(A: LieAlgebra) -> tuple[LieAlgebra, tuple[int, ...]]:
    """Restriction to parity-0 generators, plus the index map into A."""
    if A.grading is None:
        raise ValidationError("even_subalgebra requires a graded algebra")
    index_map = tuple(i for i in range(A.dim) if A.grading[i] == 0)
    n = len(index_map)
    c = [[[A.c[index_map[a], index_map[b], index_map[d]] for d in range(n)]
          for b in range(n)] for a in range(n)]
    labels = [A.basis_labels[i] for i in index_map]
    sub = LieAlgebra(labels, c, grading=None, split=None)
    return sub, index_map


def map_split_to_subalgebra(split: ReductiveSplit, index_map: Sequence[int]) -> ReductiveSplit:
    """Reindex a split given in parent-algebra indices into subalgebra indices."""
    pos = {orig: i for i, orig in enumerate(index_map)}
    missing = [i for i in (*split.h_indices, *split.f_indices) if i not in pos]
    if missing:
        raise ValidationError(
            f"split indices {missing} are not part of the subalgebra",
        )
    return ReductiveSplit(
        h_indices=[pos[i] for i in split.h_indices],
        f_indices=[pos[i] for i in split.f_indices],
    )
