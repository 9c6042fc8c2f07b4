"""Built-in catalog: named algebras with canonical splits and matrix models,
*-algebras with reference states and automorphisms, finite groups with
default subgroups, and the Pauli multiplier.

Everything here is addressable by name from the CLI so the worked examples
run without input files.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

import numpy as np

from .errors import InputError, ValidationError
from .gns import Automorphism, Derivation, StarAlgebra, State
from .groups import FiniteGroup
from .lie import LieAlgebra, ReductiveSplit
from .oracle import MatrixRepresentation
from .symmetry import Multiplier

__all__ = [
    "automorphism_from_model_unitary",
    "even_split",
    "group",
    "group_default_subgroup",
    "h_rep",
    "lie_algebra",
    "lie_names",
    "matrix_rep",
    "multiplier",
    "named_automorphism",
    "named_derivation",
    "named_state",
    "pauli_projective_family",
    "star_algebra",
    "star_model",
    "star_names",
    "state_from_density",
]

_F0, _F1 = Fraction(0), Fraction(1)


# -- Lie algebras ----------------------------------------------------------------


@lru_cache(maxsize=None)
def lie_algebra(name: str) -> LieAlgebra:
    builders = {
        "heisenberg3": _heisenberg3,
        "so3": _so3,
        "su2": _su2,
        "sl2r": _sl2r,
        "superheisenberg": _superheisenberg,
    }
    if name not in builders:
        raise InputError(f"unknown catalog algebra {name!r}; have {sorted(builders)}")
    return builders[name]()


def lie_names() -> tuple[str, ...]:
    return ("heisenberg3", "so3", "su2", "sl2r", "superheisenberg")


def _heisenberg3() -> LieAlgebra:
    return LieAlgebra.from_brackets(
        ["X", "Y", "Z"],
        {(0, 1): {2: 1}},
        split=ReductiveSplit(h_indices=[2], f_indices=[0, 1]),
    )


def _so3() -> LieAlgebra:
    return LieAlgebra.from_brackets(
        ["F_1", "F_2", "I_3"],
        {(0, 1): {2: 1}, (1, 2): {0: 1}, (2, 0): {1: 1}},
        split=ReductiveSplit(h_indices=[2], f_indices=[0, 1]),
    )


def _su2() -> LieAlgebra:
    return LieAlgebra.from_brackets(
        ["T_1", "T_2", "T_3"],
        {(0, 1): {2: 1}, (1, 2): {0: 1}, (2, 0): {1: 1}},
        split=ReductiveSplit(h_indices=[2], f_indices=[0, 1]),
    )


def _sl2r() -> LieAlgebra:
    return LieAlgebra.from_brackets(
        ["H", "E", "F"],
        {(0, 1): {1: 2}, (0, 2): {2: -2}, (1, 2): {0: 1}},
        split=ReductiveSplit(h_indices=[0], f_indices=[1, 2]),
    )


def _superheisenberg() -> LieAlgebra:
    # even part is heisenberg3; the odd charges square to the center
    return LieAlgebra.from_brackets(
        ["X", "Y", "Z", "Q1", "Q2"],
        {(0, 1): {2: 1}, (3, 3): {2: 1}, (4, 4): {2: 1}},
        grading=[0, 0, 0, 1, 1],
        split=None,
    )


def even_split(name: str) -> ReductiveSplit:
    """Parent-index split of the even part for graded catalog algebras."""
    if name != "superheisenberg":
        raise InputError(f"{name!r} has no even split in the catalog")
    return ReductiveSplit(h_indices=[2], f_indices=[0, 1])


@lru_cache(maxsize=None)
def matrix_rep(name: str) -> MatrixRepresentation:
    A = lie_algebra(name)
    if name == "heisenberg3":
        mats = [
            [[0, 1, 0], [0, 0, 0], [0, 0, 0]],
            [[0, 0, 0], [0, 0, 1], [0, 0, 0]],
            [[0, 0, 1], [0, 0, 0], [0, 0, 0]],
        ]
    elif name == "so3":
        mats = [
            [[0, 0, 0], [0, 0, -1], [0, 1, 0]],
            [[0, 0, 1], [0, 0, 0], [-1, 0, 0]],
            [[0, -1, 0], [1, 0, 0], [0, 0, 0]],
        ]
    elif name == "su2":
        mats = [
            np.array([[0, 1], [1, 0]], dtype=complex) * (-0.5j),
            np.array([[0, -1j], [1j, 0]], dtype=complex) * (-0.5j),
            np.array([[1, 0], [0, -1]], dtype=complex) * (-0.5j),
        ]
    elif name == "sl2r":
        mats = [
            [[1, 0], [0, -1]],
            [[0, 1], [0, 0]],
            [[0, 0], [1, 0]],
        ]
    else:
        raise InputError(f"no catalog matrix representation for {name!r}")
    return MatrixRepresentation(A, mats)


# -- *-algebras --------------------------------------------------------------------


def _tensor_from_model(labels, model):
    """Multiplication tensor, involution matrix, and unit coefficients of a
    linearly independent family of matrices closed under product and adjoint."""
    n = len(model)
    flat = np.stack([m.reshape(-1) for m in model], axis=1)

    def coords(M):
        sol, res, *_ = np.linalg.lstsq(flat, M.reshape(-1), rcond=None)
        recon = flat @ sol
        if np.max(np.abs(recon - M.reshape(-1))) > 1e-9:
            raise ValidationError("model family is not closed")
        out = []
        for v in sol:
            q = Fraction(float(v.real)).limit_denominator(1_000_000)
            if abs(complex(q) - v) > 1e-9:
                raise ValidationError("model coordinates are not rational")
            out.append(q)
        return out

    m = [[coords(model[a] @ model[b]) for b in range(n)] for a in range(n)]
    star = np.empty((n, n), dtype=object)
    for a in range(n):
        col = coords(model[a].conj().T)
        for p in range(n):
            star[p, a] = col[p]
    unit = coords(np.eye(model[0].shape[0], dtype=complex))
    return m, [[star[i, j] for j in range(n)] for i in range(n)], unit


def _matrix_units(n: int, offset: int, total: int):
    out = []
    for i in range(n):
        for j in range(n):
            M = np.zeros((total, total), dtype=complex)
            M[offset + i, offset + j] = 1.0
            out.append(M)
    return out


@lru_cache(maxsize=None)
def _star_entry(name: str):
    if name == "c2":
        labels = ["p1", "p2"]
        model = [np.diag([1.0, 0.0]).astype(complex), np.diag([0.0, 1.0]).astype(complex)]
    elif name == "m2":
        labels = ["e11", "e12", "e21", "e22"]
        model = _matrix_units(2, 0, 2)
    elif name == "m2m1":
        labels = ["e11", "e12", "e21", "e22", "q"]
        model = _matrix_units(2, 0, 3)
        blk = np.zeros((3, 3), dtype=complex)
        blk[2, 2] = 1.0
        model.append(blk)
    else:
        raise InputError(f"unknown catalog *-algebra {name!r}; have ['c2', 'm2', 'm2m1']")
    m, star, unit = _tensor_from_model(labels, model)
    algebra = StarAlgebra(labels, m, star, unit)
    return algebra, tuple(model)


def star_algebra(name: str) -> StarAlgebra:
    return _star_entry(name)[0]


def star_model(name: str) -> tuple[np.ndarray, ...]:
    return _star_entry(name)[1]


def star_names() -> tuple[str, ...]:
    return ("c2", "m2", "m2m1")


def named_state(algebra_name: str, state_name: str) -> State:
    table = {
        "c2": {
            "ev1": [1, 0],
            "ev2": [0, 1],
            "mean": [0.5, 0.5],
        },
        "m2": {
            "trace": [0.5, 0, 0, 0.5],
            "e11": [1, 0, 0, 0],
        },
        "m2m1": {
            "trace": [Fraction(1, 3), 0, 0, Fraction(1, 3), Fraction(1, 3)],
        },
    }
    try:
        values = table[algebra_name][state_name]
    except KeyError:
        raise InputError(
            f"unknown catalog state {state_name!r} for algebra {algebra_name!r}",
            available={k: sorted(v) for k, v in table.items()},
        )
    return State([complex(float(Fraction(v)) if not isinstance(v, float) else v)
                  for v in values])


def state_from_density(algebra_name: str, density: np.ndarray) -> State:
    """State f(a) = tr(density * model(a)) from a density matrix in the model."""
    model = star_model(algebra_name)
    density = np.asarray(density, dtype=complex)
    return State([complex(np.trace(density @ m)) for m in model])


def automorphism_from_model_unitary(algebra_name: str, u: np.ndarray) -> Automorphism:
    """Inner automorphism a -> u a u* read back into basis coordinates."""
    A = star_algebra(algebra_name)
    model = star_model(algebra_name)
    u = np.asarray(u, dtype=complex)
    flat = np.stack([m.reshape(-1) for m in model], axis=1)
    cols = []
    for m in model:
        img = u @ m @ u.conj().T
        sol, *_ = np.linalg.lstsq(flat, img.reshape(-1), rcond=None)
        if np.max(np.abs(flat @ sol - img.reshape(-1))) > 1e-9:
            raise ValidationError("conjugation left the model span")
        cols.append(sol)
    return Automorphism(A, np.stack(cols, axis=1))


def named_automorphism(algebra_name: str, auto_name: str) -> Automorphism:
    A = star_algebra(algebra_name)
    if auto_name == "identity":
        return Automorphism(A, np.eye(A.dim))
    if algebra_name == "c2" and auto_name == "swap":
        return Automorphism(A, [[0, 1], [1, 0]])
    if algebra_name == "m2" and auto_name == "diag_i":
        return automorphism_from_model_unitary("m2", np.diag([1.0, 1.0j]))
    raise InputError(
        f"unknown catalog automorphism {auto_name!r} for algebra {algebra_name!r}"
    )


def named_derivation(algebra_name: str, der_name: str) -> Derivation:
    A = star_algebra(algebra_name)
    if der_name == "zero":
        return Derivation(A, np.zeros((A.dim, A.dim)))
    if algebra_name == "m2" and der_name == "inner_diag":
        # delta(a) = i [h, a] with h = diag(1, -1)
        return Derivation(A, np.diag([0.0, 2.0j, -2.0j, 0.0]))
    raise InputError(
        f"unknown catalog derivation {der_name!r} for algebra {algebra_name!r}"
    )


# -- finite groups ------------------------------------------------------------------


@lru_cache(maxsize=None)
def group(name: str) -> FiniteGroup:
    if name.startswith("z") and name[1:].isdigit():
        return FiniteGroup.cyclic(int(name[1:]))
    if name == "z2xz2":
        return FiniteGroup.direct_product(FiniteGroup.cyclic(2), FiniteGroup.cyclic(2))
    if name == "s3":
        return FiniteGroup.symmetric(3)
    raise InputError(
        f"unknown catalog group {name!r}; have ['zN', 'z2xz2', 's3']"
    )


def group_default_subgroup(name: str) -> tuple[int, ...]:
    defaults = {
        "s3": (0, 2),        # {e, (12)}
        "z4": (0, 2),        # {e, g^2}
        "z2xz2": (0, 1),     # {e} x Z2
        "z2": (0,),
    }
    if name not in defaults:
        raise InputError(f"no default subgroup for catalog group {name!r}")
    return defaults[name]


def multiplier(group_name: str, mult_name: str) -> Multiplier:
    G = group(group_name)
    if mult_name == "trivial":
        return Multiplier.trivial(G.order)
    if group_name == "z2xz2" and mult_name == "pauli":
        # element (a, b) at index 2a + b carries U = X^a Z^b; the sign is
        # (-1)^(b * a') from commuting Z^b past X^(a')
        angles = []
        for g in range(4):
            a, b = divmod(g, 2)
            row = []
            for h in range(4):
                a2, b2 = divmod(h, 2)
                row.append(Fraction(1, 2) if (b * a2) % 2 else Fraction(0))
            angles.append(row)
        return Multiplier(angles=angles)
    raise InputError(
        f"unknown catalog multiplier {mult_name!r} for group {group_name!r}"
    )


def pauli_projective_family() -> tuple[np.ndarray, ...]:
    """The concrete unitaries U_(a,b) = X^a Z^b behind the Pauli multiplier."""
    X = np.array([[0, 1], [1, 0]], dtype=complex)
    Z = np.array([[1, 0], [0, -1]], dtype=complex)
    out = []
    for g in range(4):
        a, b = divmod(g, 2)
        out.append(np.linalg.matrix_power(X, a) @ np.linalg.matrix_power(Z, b))
    return tuple(out)


def h_rep(group_name: str, subgroup: tuple[int, ...], rep_name: str) -> dict:
    """Named representations of small subgroups for the induction demos."""
    G = group(group_name)
    sub = tuple(sorted(subgroup))
    if rep_name == "trivial":
        return {h: np.eye(1) for h in sub}
    if rep_name == "sign":
        if len(sub) != 2:
            raise InputError("the sign representation needs an order-2 subgroup")
        e = G.identity
        other = next(h for h in sub if h != e)
        return {e: np.eye(1), other: -np.eye(1)}
    raise InputError(f"unknown h-representation {rep_name!r}; have ['trivial', 'sign']")
