"""Implementability and breaking diagnostics, plus two-cocycle machinery.

U(1) multiplier values are kept as exact rational angles (multiples of a
full turn) whenever decidability matters: cocycle verification, coboundary
solving, and central extensions all run on the angle lattice.  Float phases
are accepted for verification only.

The intertwiner search solves the full linear system U pi1(a) = pi2(a) U,
then looks for an invertible element of the solution space and unitarizes
it by its polar factor; the first pivoted solution is returned with a
canonical global phase.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import gcd

import numpy as np

from .errors import CapabilityError, ValidationError
from .gns import Automorphism, GNSRep, StarAlgebra, State, gns_construct, stationary_unitary
from .groups import FiniteGroup
from .lie import ValidationIssue, ValidationReport
from .linalg import polar_unitary, solve_mod1

__all__ = [
    "ExtensionGroup",
    "Multiplier",
    "SSBVerdict",
    "Witness",
    "central_extension",
    "coboundary_solve",
    "commutant_basis",
    "detect_ssb",
    "implementing_unitary",
    "verify_cocycle",
]


def _mod1(q: Fraction) -> Fraction:
    return q - (q.numerator // q.denominator)


class Multiplier:
    """U(1)-valued two-cochain on a finite group, exact (rational angles,
    k = exp(2*pi*i*angle)) or numeric (unit-modulus complex values)."""

    def __init__(self, angles=None, values=None, tol: float = 1e-10):
        if (angles is None) == (values is None):
            raise ValidationError("provide exactly one of angles / values")
        if angles is not None:
            n = len(angles)
            arr = np.empty((n, n), dtype=object)
            for i in range(n):
                if len(angles[i]) != n:
                    raise ValidationError("angle table must be square")
                for j in range(n):
                    arr[i, j] = _mod1(Fraction(angles[i][j]))
            arr.setflags(write=False)
            self.angles = arr
            self.values_table = None
            self.order = n
        else:
            vals = np.asarray(values, dtype=complex)
            if vals.ndim != 2 or vals.shape[0] != vals.shape[1]:
                raise ValidationError("value table must be square")
            bad = np.abs(np.abs(vals) - 1.0)
            if float(bad.max(initial=0.0)) > tol:
                raise ValidationError(
                    "multiplier values must have unit modulus",
                    worst=float(bad.max()),
                )
            vals.setflags(write=False)
            self.angles = None
            self.values_table = vals
            self.order = int(vals.shape[0])

    @property
    def is_exact(self) -> bool:
        return self.angles is not None

    def angle(self, i: int, j: int) -> Fraction:
        if not self.is_exact:
            raise CapabilityError("multiplier has no exact angle table")
        return self.angles[i, j]

    def value(self, i: int, j: int) -> complex:
        if self.is_exact:
            a = self.angles[i, j]
            return complex(np.exp(2j * np.pi * float(a)))
        return complex(self.values_table[i, j])

    @classmethod
    def trivial(cls, n: int) -> "Multiplier":
        return cls(angles=[[0] * n for _ in range(n)])

    @classmethod
    def coboundary(cls, G: FiniteGroup, b_angles) -> "Multiplier":
        """k(g,g') = b(g) b(g') b(gg')^{-1} on the angle lattice."""
        b = [Fraction(v) for v in b_angles]
        if len(b) != G.order:
            raise ValidationError("need one angle per group element")
        n = G.order
        table = [[_mod1(b[g] + b[h] - b[G.mul(g, h)]) for h in range(n)]
                 for g in range(n)]
        return cls(angles=table)

    def to_report(self) -> dict:
        if self.is_exact:
            return {"angles": [[str(self.angles[i, j]) for j in range(self.order)]
                               for i in range(self.order)]}
        return {"values": [[[v.real, v.imag] for v in row] for row in self.values_table]}


def verify_cocycle(G: FiniteGroup, k: Multiplier, tol: float = 1e-10) -> ValidationReport:
    """Normalization k(1,g)=k(g,1)=1 and the triple identity
    k(g1,g2g3) k(g2,g3) = k(g1,g2) k(g1g2,g3); violations are listed."""
    if k.order != G.order:
        raise ValidationError(
            f"multiplier order {k.order} does not match group order {G.order}"
        )
    issues = []
    e = G.identity
    for g in G.elements:
        for pair, name in (((e, g), "k(1,g)"), ((g, e), "k(g,1)")):
            if k.is_exact:
                bad = k.angle(*pair) != 0
            else:
                bad = abs(k.value(*pair) - 1.0) > tol
            if bad:
                issues.append(ValidationIssue(
                    "normalization", pair, f"{name} != 1 at g={G.labels[g]}",
                ))
    for g1 in G.elements:
        for g2 in G.elements:
            for g3 in G.elements:
                if k.is_exact:
                    lhs = k.angle(g1, G.mul(g2, g3)) + k.angle(g2, g3)
                    rhs = k.angle(g1, g2) + k.angle(G.mul(g1, g2), g3)
                    bad = _mod1(lhs - rhs) != 0
                else:
                    lhs = k.value(g1, G.mul(g2, g3)) * k.value(g2, g3)
                    rhs = k.value(g1, g2) * k.value(G.mul(g1, g2), g3)
                    bad = abs(lhs - rhs) > tol
                if bad:
                    issues.append(ValidationIssue(
                        "cocycle", (g1, g2, g3),
                        f"two-cocycle identity fails at "
                        f"({G.labels[g1]},{G.labels[g2]},{G.labels[g3]})",
                    ))
    return ValidationReport(tuple(issues))


def _value_group_order(k: Multiplier) -> int:
    """Order of the cyclic subgroup of U(1) generated by the entries."""
    L = 1
    for i in range(k.order):
        for j in range(k.order):
            L = L * k.angle(i, j).denominator // gcd(L, k.angle(i, j).denominator)
    nums = [
        (k.angle(i, j) * L).numerator % L
        for i in range(k.order) for j in range(k.order)
    ]
    g = 0
    for v in nums:
        g = gcd(g, v)
    if g == 0:
        return 1
    step = gcd(g, L)
    return L // step


def coboundary_solve(
    G: FiniteGroup,
    k: Multiplier,
    method: str = "lattice",
    search_limit: int = 1 << 20,
):
    """Find b with k(g,g') = b(g) b(g') b(gg')^{-1}, or None.

    ``lattice`` decides the rational-angle problem exactly over the angle
    lattice through a Smith normal form; ``exhaustive`` brute-forces
    assignments of b over the finite value group generated by k's entries
    (groups of order at most 16).  Float multipliers are never solved.
    """
    if not k.is_exact:
        raise CapabilityError(
            "coboundary solving requires exact rational angles; "
            "float phases are accepted for verification only"
        )
    verify_cocycle(G, k).raise_if_failed("two-cocycle")
    n = G.order
    if method == "lattice":
        rows, rhs = [], []
        for g in range(n):
            for h in range(n):
                row = [0] * n
                row[g] += 1
                row[h] += 1
                row[G.mul(g, h)] -= 1
                rows.append(row)
                rhs.append(k.angle(g, h))
        solution = solve_mod1(rows, rhs)
        if solution is None:
            return None
        b = [_mod1(x) for x in solution]
    elif method == "exhaustive":
        if n > 16:
            raise CapabilityError("exhaustive search is limited to groups of order <= 16")
        M = _value_group_order(k)
        if M ** n > search_limit:
            raise CapabilityError(
                f"exhaustive search over {M}^{n} assignments exceeds the limit"
            )
        step = Fraction(1, M)
        b = None
        for assign in itertools.product(range(M), repeat=n):
            cand = [step * j for j in assign]
            if all(
                _mod1(cand[g] + cand[h] - cand[G.mul(g, h)]) == k.angle(g, h)
                for g in range(n) for h in range(n)
            ):
                b = cand
                break
        if b is None:
            return None
    else:
        raise ValidationError(f"unknown coboundary method {method!r}")
    for g in range(n):
        for h in range(n):
            if _mod1(b[g] + b[h] - b[G.mul(g, h)]) != k.angle(g, h):
                raise ValidationError("internal: coboundary verification failed")
    return tuple(b)


class ExtensionGroup(FiniteGroup):
    """Central extension on pairs (z, g); the fiber is the value group of k."""

    def __init__(self, cayley, labels, fiber_indices, base_order, value_order):
        super().__init__(cayley, labels=labels)
        self.fiber_indices = tuple(fiber_indices)
        self.base_order = int(base_order)
        self.value_order = int(value_order)


def central_extension(G: FiniteGroup, k: Multiplier) -> ExtensionGroup:
    """Group on pairs (z, g) with (z1,g1)(z2,g2) = (z1 z2 k(g1,g2), g1 g2).

    Associativity of the output is equivalent to the two-cocycle identity,
    and the FiniteGroup validator asserts it; a failed multiplier therefore
    raises a validation error.
    """
    if not k.is_exact:
        raise CapabilityError(
            "central extensions need a finite value group; provide rational angles"
        )
    if k.order != G.order:
        raise ValidationError(
            f"multiplier order {k.order} does not match group order {G.order}"
        )
    M = _value_group_order(k)
    step = Fraction(1, M)
    n = G.order

    def pair_index(j: int, g: int) -> int:
        return j * n + g

    table = [[0] * (M * n) for _ in range(M * n)]
    for j1, g1 in itertools.product(range(M), range(n)):
        for j2, g2 in itertools.product(range(M), range(n)):
            ang = k.angle(g1, g2)
            shift = int(ang / step)  # exact: value group generated by entries
            if shift * step != ang:
                raise ValidationError("multiplier entry outside its own value group")
            z = (j1 + j2 + shift) % M
            table[pair_index(j1, g1)][pair_index(j2, g2)] = pair_index(z, G.mul(g1, g2))
    labels = []
    for j in range(M):
        phase = "1" if j == 0 else f"e({_mod1(Fraction(j, M))})"
        labels.extend(f"({phase},{G.labels[g]})" for g in range(n))
    return ExtensionGroup(
        table,
        labels=labels,
        fiber_indices=[pair_index(j, G.identity) for j in range(M)],
        base_order=n,
        value_order=M,
    )


# -- intertwiners and breaking diagnostics --------------------------------------


def _intertwiner_space(ops1, ops2) -> np.ndarray:
    """Orthonormal basis (rows) of {U : U P_i = Q_i U} via one SVD."""
    n = ops1[0].shape[0]
    blocks = [
        np.kron(np.eye(n), P.T) - np.kron(Q, np.eye(n))
        for P, Q in zip(ops1, ops2)
    ]
    K = np.vstack(blocks)
    _, s, Vh = np.linalg.svd(K)
    thr = 1e-8 * max(float(s[0]) if len(s) else 0.0, 1.0)
    null = Vh[np.concatenate([s, np.zeros(Vh.shape[0] - len(s))]) < thr]
    return null.reshape(-1, n, n)


def _canonical_phase(U: np.ndarray) -> np.ndarray:
    flat = np.abs(U).reshape(-1)
    idx = int(np.argmax(flat))
    pivot = U.reshape(-1)[idx]
    if abs(pivot) == 0:
        return U
    return U * np.conj(pivot / abs(pivot))


def implementing_unitary(ops1, ops2, tol: float = 1e-10):
    """Unitary U with U pi1(a) = pi2(a) U for the two operator families,
    or None when no invertible intertwiner exists."""
    ops1 = [np.asarray(m, dtype=complex) for m in ops1]
    ops2 = [np.asarray(m, dtype=complex) for m in ops2]
    if len(ops1) != len(ops2):
        raise ValidationError("operator families must have equal length")
    if ops1 and ops1[0].shape != ops2[0].shape:
        return None
    n = ops1[0].shape[0]
    scale = max(1.0, *(float(np.abs(m).max(initial=0.0)) for m in (*ops1, *ops2)))

    def intertwines(U) -> bool:
        return all(
            float(np.max(np.abs(U @ P - Q @ U))) <= tol * scale
            for P, Q in zip(ops1, ops2)
        )

    if intertwines(np.eye(n)):
        return np.eye(n, dtype=complex)
    basis = _intertwiner_space(ops1, ops2)
    if len(basis) == 0:
        return None
    rng = np.random.default_rng(0)
    candidates = list(basis)
    for _ in range(12):
        w = rng.normal(size=len(basis)) + 1j * rng.normal(size=len(basis))
        candidates.append(np.tensordot(w, basis, axes=1))
    for A in candidates:
        sv = np.linalg.svd(A, compute_uv=False)
        if sv[-1] <= 1e-8 * max(sv[0], 1e-30):
            continue
        U = polar_unitary(A)
        if intertwines(U):
            return _canonical_phase(U)
    return None


def commutant_basis(ops, tol: float = 1e-10) -> list[np.ndarray]:
    """Basis of matrices commuting with every operator in the family."""
    ops = [np.asarray(m, dtype=complex) for m in ops]
    return list(_intertwiner_space(ops, ops))


@dataclass(frozen=True)
class Witness:
    basis_index: int
    basis_label: str
    spectrum: tuple
    spectrum_pulled: tuple
    distance: float

    def to_report(self) -> dict:
        return {
            "basis_label": self.basis_label,
            "spectrum": [[v.real, v.imag] for v in self.spectrum],
            "spectrum_pulled": [[v.real, v.imag] for v in self.spectrum_pulled],
            "distance": self.distance,
        }


@dataclass(frozen=True)
class SSBVerdict:
    broken: bool
    unitary: np.ndarray | None
    witness: Witness | None
    carrier_dim: int

    @property
    def verdict(self) -> str:
        return "broken" if self.broken else "implementable"

    def to_report(self) -> dict:
        out = {"verdict": self.verdict, "carrier_dim": self.carrier_dim}
        out["witness"] = self.witness.to_report() if self.witness else None
        if self.unitary is not None:
            out["unitary"] = [
                [[v.real, v.imag] for v in row] for row in np.asarray(self.unitary)
            ]
        else:
            out["unitary"] = None
        return out


def _sorted_spectrum(M: np.ndarray) -> np.ndarray:
    return np.sort_complex(np.linalg.eigvals(M))


def detect_ssb(
    A: StarAlgebra,
    f: State,
    rho: Automorphism,
    tol: float = 1e-10,
) -> SSBVerdict:
    """Decide whether rho is unitarily implementable in the GNS representation
    of f; a broken verdict carries a spectral witness.

    Stationary states short-circuit to the Theorem-2 unitary (which fixes the
    cyclic vector); otherwise the linear intertwiner system is searched.
    """
    rep = gns_construct(A, f)
    ops1 = list(rep.operators)
    ops2 = [rep.pi(rho.matrix[:, a]) for a in range(A.dim)]
    fvec = f.vector()
    stationary = float(np.max(np.abs(fvec @ rho.matrix - fvec))) <= tol
    if stationary:
        U = stationary_unitary(A, f, rho, tol=max(tol, 1e-10), rep=rep)
        return SSBVerdict(broken=False, unitary=U, witness=None,
                          carrier_dim=rep.carrier_dim)
    U = implementing_unitary(ops1, ops2, tol=tol)
    if U is not None:
        return SSBVerdict(broken=False, unitary=U, witness=None,
                          carrier_dim=rep.carrier_dim)
    best = None
    for a in range(A.dim):
        s1 = _sorted_spectrum(ops1[a])
        s2 = _sorted_spectrum(ops2[a])
        dist = float(np.max(np.abs(s1 - s2)))
        if best is None or dist > best.distance:
            best = Witness(
                basis_index=a,
                basis_label=A.basis_labels[a],
                spectrum=tuple(complex(v) for v in s1),
                spectrum_pulled=tuple(complex(v) for v in s2),
                distance=dist,
            )
    return SSBVerdict(broken=True, unitary=None, witness=best,
                      carrier_dim=rep.carrier_dim)
