"""JSON file formats for algebras, *-algebras, states, groups, multipliers.

Rationals travel as "p/q" strings, complex numbers as [re, im] pairs, reals
as plain numbers.  The algebra loader accepts sparse structure-constant
triples [a, b, d, "p/q"], fills the (graded-)antisymmetric mirrors, and
re-validates everything on load.
"""

from __future__ import annotations

import hashlib
import json
from fractions import Fraction
from pathlib import Path

import numpy as np

from .errors import InputError
from .gns import Automorphism, Derivation, StarAlgebra, State
from .groups import FiniteGroup
from .lie import LieAlgebra, ReductiveSplit
from .oracle import MatrixRepresentation
from .symmetry import Multiplier

__all__ = [
    "canonical_json",
    "file_digest",
    "load_algebra",
    "load_automorphism",
    "load_derivation",
    "load_group",
    "load_multiplier",
    "load_star_algebra",
    "load_state",
    "algebra_to_dict",
    "group_to_dict",
    "star_algebra_to_dict",
]


def canonical_json(payload) -> str:
    """Deterministic serialization: sorted keys, fixed separators, newline."""
    return json.dumps(payload, sort_keys=True, indent=2, allow_nan=False) + "\n"


def file_digest(path: str | Path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def _frac(value, where: str) -> Fraction:
    try:
        if isinstance(value, (int, str)):
            return Fraction(value)
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"bad rational {value!r} in {where}: {exc}")
    raise InputError(f"expected a rational (int or 'p/q' string) in {where}, got {value!r}")


def _complex(value, where: str) -> complex:
    if isinstance(value, (int, float)):
        return complex(value)
    if isinstance(value, (list, tuple)) and len(value) == 2:
        return complex(float(value[0]), float(value[1]))
    if isinstance(value, str):
        return complex(float(Fraction(value)))
    raise InputError(f"expected a number or [re, im] pair in {where}, got {value!r}")


def _read(path: str | Path) -> dict:
    path = Path(path)
    try:
        data = json.loads(path.read_text())
    except FileNotFoundError:
        raise InputError(f"input file not found: {path}")
    except json.JSONDecodeError as exc:
        raise InputError(f"cannot parse {path}: {exc}")
    if not isinstance(data, dict):
        raise InputError(f"{path}: top-level JSON value must be an object")
    return data


def _require(data: dict, field: str, where: str):
    if field not in data:
        raise InputError(f"{where}: missing required field {field!r}")
    return data[field]


# -- Lie algebra files -------------------------------------------------------------


def load_algebra(path: str | Path) -> tuple[LieAlgebra, MatrixRepresentation | None]:
    """Algebra file: {"dim", "basis", "c": [[a,b,d,"p/q"],...], "grading"?,
    "split"? {"h": [...], "f": [...]}, "rep"? {"mats": [...]}}."""
    where = str(path)
    data = _read(path)
    dim = int(_require(data, "dim", where))
    basis = data.get("basis") or [f"x{i}" for i in range(dim)]
    if len(basis) != dim:
        raise InputError(f"{where}: field 'basis' must list {dim} labels")
    grading = data.get("grading")
    par = [0] * dim if grading is None else [int(p) for p in grading]
    brackets: dict[tuple[int, int], dict[int, Fraction]] = {}
    for t, triple in enumerate(_require(data, "c", where)):
        if len(triple) != 4:
            raise InputError(f"{where}: field 'c' entry {t} must be [a, b, d, value]")
        a, b, d = (int(v) for v in triple[:3])
        if not all(0 <= v < dim for v in (a, b, d)):
            raise InputError(f"{where}: field 'c' entry {t} has out-of-range index")
        q = _frac(triple[3], f"{where} field 'c' entry {t}")
        row = brackets.setdefault((a, b), {})
        if d in row and row[d] != q:
            raise InputError(f"{where}: field 'c' repeats ({a},{b},{d}) inconsistently")
        row[d] = q
        mirror = brackets.setdefault((b, a), {})
        mq = q if (par[a] * par[b]) % 2 else -q
        if d in mirror and mirror[d] != mq:
            raise InputError(
                f"{where}: field 'c' entries at ({a},{b},{d}) and ({b},{a},{d}) "
                "violate antisymmetry"
            )
        mirror[d] = mq
    split = None
    if "split" in data and data["split"] is not None:
        split = ReductiveSplit(
            h_indices=_require(data["split"], "h", f"{where} field 'split'"),
            f_indices=_require(data["split"], "f", f"{where} field 'split'"),
        )
    algebra = LieAlgebra.from_brackets(basis, brackets, grading=grading, split=split)
    rep = None
    if "rep" in data and data["rep"] is not None:
        mats = [
            np.array([[_complex(v, f"{where} field 'rep'") for v in row] for row in mat])
            for mat in _require(data["rep"], "mats", f"{where} field 'rep'")
        ]
        rep = MatrixRepresentation(algebra, mats)
    return algebra, rep


def algebra_to_dict(A: LieAlgebra, rep: MatrixRepresentation | None = None) -> dict:
    triples = []
    for a in range(A.dim):
        for b in range(A.dim):
            if a > b:
                continue
            if a == b and (A.grading is None or A.grading[a] == 0):
                continue
            for d in range(A.dim):
                if A.c[a, b, d] != 0:
                    triples.append([a, b, d, str(A.c[a, b, d])])
    out = {"dim": A.dim, "basis": list(A.basis_labels), "c": triples}
    if A.grading is not None:
        out["grading"] = list(A.grading)
    if A.split is not None:
        out["split"] = {"h": list(A.split.h_indices), "f": list(A.split.f_indices)}
    if rep is not None:
        out["rep"] = {
            "mats": [[[[v.real, v.imag] for v in row] for row in m] for m in rep.mats]
        }
    return out


# -- *-algebra and state files -------------------------------------------------------


def load_star_algebra(path: str | Path) -> StarAlgebra:
    """File: {"dim", "basis"?, "m": [[a,b,d,"p/q"],...], "star": [["p/q",..]],
    "unit": ["p/q",...]}."""
    where = str(path)
    data = _read(path)
    dim = int(_require(data, "dim", where))
    basis = data.get("basis") or [f"a{i}" for i in range(dim)]
    m = [[[Fraction(0)] * dim for _ in range(dim)] for _ in range(dim)]
    for t, triple in enumerate(_require(data, "m", where)):
        if len(triple) != 4:
            raise InputError(f"{where}: field 'm' entry {t} must be [a, b, d, value]")
        a, b, d = (int(v) for v in triple[:3])
        if not all(0 <= v < dim for v in (a, b, d)):
            raise InputError(f"{where}: field 'm' entry {t} has out-of-range index")
        m[a][b][d] = _frac(triple[3], f"{where} field 'm' entry {t}")
    star = [[_frac(v, f"{where} field 'star'") for v in row]
            for row in _require(data, "star", where)]
    unit = [_frac(v, f"{where} field 'unit'") for v in _require(data, "unit", where)]
    return StarAlgebra(basis, m, star, unit)


def star_algebra_to_dict(A: StarAlgebra) -> dict:
    triples = []
    for a in range(A.dim):
        for b in range(A.dim):
            for d in range(A.dim):
                if A.m[a, b, d] != 0:
                    triples.append([a, b, d, str(A.m[a, b, d])])
    return {
        "dim": A.dim,
        "basis": list(A.basis_labels),
        "m": triples,
        "star": [[str(A.star[i, j]) for j in range(A.dim)] for i in range(A.dim)],
        "unit": [str(v) for v in A.unit],
    }


def load_state(path: str | Path) -> State:
    """File: {"values": [number | [re, im], ...]}."""
    where = str(path)
    data = _read(path)
    values = [_complex(v, f"{where} field 'values'")
              for v in _require(data, "values", where)]
    return State(values)


def load_automorphism(path: str | Path, algebra: StarAlgebra) -> Automorphism:
    where = str(path)
    data = _read(path)
    matrix = [[_complex(v, f"{where} field 'matrix'") for v in row]
              for row in _require(data, "matrix", where)]
    return Automorphism(algebra, matrix)


def load_derivation(path: str | Path, algebra: StarAlgebra) -> Derivation:
    where = str(path)
    data = _read(path)
    matrix = [[_complex(v, f"{where} field 'matrix'") for v in row]
              for row in _require(data, "matrix", where)]
    return Derivation(algebra, matrix)


# -- group and multiplier files --------------------------------------------------------


def load_group(path: str | Path) -> tuple[FiniteGroup, tuple[int, ...] | None]:
    """File: {"order", "cayley": [[...]], "labels"?, "subgroup"?: [indices]}."""
    where = str(path)
    data = _read(path)
    order = int(_require(data, "order", where))
    cayley = _require(data, "cayley", where)
    if len(cayley) != order:
        raise InputError(f"{where}: field 'cayley' must have {order} rows")
    G = FiniteGroup(cayley, labels=data.get("labels"))
    subgroup = None
    if data.get("subgroup") is not None:
        subgroup = tuple(int(i) for i in data["subgroup"])
        if not G.is_subgroup(subgroup):
            raise InputError(f"{where}: field 'subgroup' is not closed")
    return G, subgroup


def group_to_dict(G: FiniteGroup, subgroup=None) -> dict:
    out = {
        "order": G.order,
        "cayley": [[int(v) for v in row] for row in G.cayley],
        "labels": list(G.labels),
    }
    if subgroup is not None:
        out["subgroup"] = [int(i) for i in subgroup]
    return out


def load_multiplier(path: str | Path) -> Multiplier:
    """File: {"angles": [["p/q",...]]} (exact) or {"values": [[[re,im],...]]}."""
    where = str(path)
    data = _read(path)
    if "angles" in data:
        angles = [[_frac(v, f"{where} field 'angles'") for v in row]
                  for row in data["angles"]]
        return Multiplier(angles=angles)
    if "values" in data:
        values = [[_complex(v, f"{where} field 'values'") for v in row]
                  for row in data["values"]]
        return Multiplier(values=values)
    raise InputError(f"{where}: need field 'angles' or 'values'")
