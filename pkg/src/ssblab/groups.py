"""Finite groups as Cayley tables, coset sections, and induced representations.

Elements are integer indices into the table.  The induced representation of
G from a subgroup H with section s acts on (coset, carrier) pairs through
the H-valued cocycle factor inv(s(g.sigma)) * g * s(sigma); the assembled
block matrices are verified to multiply exactly like the group.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .errors import ValidationError

__all__ = [
    "FiniteGroup",
    "InducedRep",
    "SectionChoice",
    "canonical_section",
    "induced_action",
]


class FiniteGroup:
    """Finite group given by an order x order Cayley table of indices."""

    def __init__(self, cayley, labels: Sequence[str] | None = None, validate: bool = True):
        table = np.asarray(cayley, dtype=int)
        if table.ndim != 2 or table.shape[0] != table.shape[1]:
            raise ValidationError(f"Cayley table must be square, got {table.shape}")
        self.order = int(table.shape[0])
        if table.size and (table.min() < 0 or table.max() >= self.order):
            raise ValidationError("Cayley table entries must index group elements")
        table.setflags(write=False)
        self.cayley = table
        if labels is None:
            labels = [f"g{i}" for i in range(self.order)]
        self.labels = tuple(str(lbl) for lbl in labels)
        if len(self.labels) != self.order:
            raise ValidationError("need one label per element")
        if validate:
            self._validate()
        else:
            self.identity = self._find_identity()
            self.inverses = self._find_inverses()

    def _find_identity(self) -> int:
        rng = np.arange(self.order)
        ids = [e for e in rng if np.array_equal(self.cayley[e], rng)
               and np.array_equal(self.cayley[:, e], rng)]
        if len(ids) != 1:
            raise ValidationError(f"table has {len(ids)} two-sided identities, need exactly 1")
        return int(ids[0])

    def _find_inverses(self) -> np.ndarray:
        e = self.identity
        inv = np.full(self.order, -1, dtype=int)
        for a in range(self.order):
            hits = np.nonzero(self.cayley[a] == e)[0]
            if len(hits) != 1 or self.cayley[hits[0], a] != e:
                raise ValidationError(f"element {a} lacks a two-sided inverse")
            inv[a] = hits[0]
        inv.setflags(write=False)
        return inv

    def _validate(self):
        C = self.cayley
        if not np.array_equal(C[C, :], C[:, C]):
            bad = np.argwhere(C[C, :] != C[:, C])[0]
            raise ValidationError(
                f"associativity fails at triple {tuple(int(v) for v in bad)}"
            )
        self.identity = self._find_identity()
        self.inverses = self._find_inverses()

    # -- basic operations -------------------------------------------------------

    def mul(self, a: int, b: int) -> int:
        return int(self.cayley[a, b])

    def inv(self, a: int) -> int:
        return int(self.inverses[a])

    def conjugate(self, g: int, x: int) -> int:
        return self.mul(self.mul(g, x), self.inv(g))

    @property
    def elements(self) -> range:
        return range(self.order)

    def is_abelian(self) -> bool:
        return bool(np.array_equal(self.cayley, self.cayley.T))

    def element_order(self, a: int) -> int:
        k, x = 1, a
        while x != self.identity:
            x = self.mul(x, a)
            k += 1
        return k

    # -- subgroups and cosets -----------------------------------------------------

    def is_subgroup(self, indices: Sequence[int]) -> bool:
        subset = sorted(set(int(i) for i in indices))
        if self.identity not in subset:
            return False
        sset = set(subset)
        return all(self.mul(a, b) in sset for a in subset for b in subset) and \
            all(self.inv(a) in sset for a in subset)

    def generated_subgroup(self, generators: Sequence[int]) -> tuple[int, ...]:
        closure = {self.identity, *(int(g) for g in generators)}
        frontier = list(closure)
        while frontier:
            a = frontier.pop()
            for b in list(closure):
                for c in (self.mul(a, b), self.mul(b, a), self.inv(a)):
                    if c not in closure:
                        closure.add(c)
                        frontier.append(c)
        return tuple(sorted(closure))

    def left_cosets(self, subgroup: Sequence[int]) -> tuple[tuple[int, ...], ...]:
        """Left cosets gH, identity coset first, then ordered by least element."""
        if not self.is_subgroup(subgroup):
            raise ValidationError(f"{sorted(subgroup)} is not a subgroup")
        sub = sorted(set(int(i) for i in subgroup))
        seen = set()
        cosets = []
        for g in self.elements:
            if g in seen:
                continue
            coset = tuple(sorted(self.mul(g, h) for h in sub))
            seen.update(coset)
            cosets.append(coset)
        identity_first = sorted(
            cosets, key=lambda c: (self.identity not in c, min(c))
        )
        return tuple(identity_first)

    def conjugacy_classes(self) -> tuple[tuple[int, ...], ...]:
        seen = set()
        classes = []
        for g in self.elements:
            if g in seen:
                continue
            cls = tuple(sorted({self.conjugate(x, g) for x in self.elements}))
            seen.update(cls)
            classes.append(cls)
        return tuple(sorted(classes, key=min))

    # -- constructors ---------------------------------------------------------------

    @classmethod
    def cyclic(cls, n: int) -> "FiniteGroup":
        if n < 1:
            raise ValidationError("cyclic group order must be positive")
        table = [[(a + b) % n for b in range(n)] for a in range(n)]
        return cls(table, labels=[f"g^{a}" if a else "e" for a in range(n)])

    @classmethod
    def direct_product(cls, g1: "FiniteGroup", g2: "FiniteGroup") -> "FiniteGroup":
        n1, n2 = g1.order, g2.order
        table = [[0] * (n1 * n2) for _ in range(n1 * n2)]
        for a1, a2 in itertools.product(range(n1), range(n2)):
            for b1, b2 in itertools.product(range(n1), range(n2)):
                table[a1 * n2 + a2][b1 * n2 + b2] = g1.mul(a1, b1) * n2 + g2.mul(a2, b2)
        labels = [f"({g1.labels[a1]},{g2.labels[a2]})"
                  for a1 in range(n1) for a2 in range(n2)]
        return cls(table, labels=labels)

    @classmethod
    def symmetric(cls, n: int) -> "FiniteGroup":
        """S_n on lexicographically ordered permutation tuples; (p*q)(i)=p(q(i))."""
        if n > 6:
            raise ValidationError("symmetric groups are supported up to S_6")
        perms = sorted(itertools.permutations(range(n)))
        index = {p: i for i, p in enumerate(perms)}
        table = [[index[tuple(p[q[i]] for i in range(n))] for q in perms] for p in perms]
        return cls(table, labels=[_cycle_label(p) for p in perms])

    def __repr__(self):
        return f"<FiniteGroup order={self.order}>"


def _cycle_label(perm: tuple[int, ...]) -> str:
    seen = set()
    cycles = []
    for start in range(len(perm)):
        if start in seen or perm[start] == start:
            seen.add(start)
            continue
        cyc = [start]
        seen.add(start)
        nxt = perm[start]
        while nxt != start:
            cyc.append(nxt)
            seen.add(nxt)
            nxt = perm[nxt]
        cycles.append("(" + "".join(str(i + 1) for i in cyc) + ")")
    return "".join(cycles) if cycles else "e"


@dataclass(frozen=True)
class SectionChoice:
    """One representative per left H-coset; the identity coset is always
    represented by the identity."""

    cosets: tuple[tuple[int, ...], ...]
    representatives: tuple[int, ...]

    def __post_init__(self):
        for rep, coset in zip(self.representatives, self.cosets):
            if rep not in coset:
                raise ValidationError(
                    f"representative {rep} does not lie in its coset {coset}"
                )
        if len(set(self.representatives)) != len(self.representatives):
            raise ValidationError("section representatives must be distinct")

    def coset_index(self) -> dict[int, int]:
        out = {}
        for i, coset in enumerate(self.cosets):
            for g in coset:
                out[g] = i
        return out


def canonical_section(G: FiniteGroup, subgroup: Sequence[int]) -> SectionChoice:
    """Smallest-index representative per coset, identity for the identity coset."""
    cosets = G.left_cosets(subgroup)
    reps = []
    for coset in cosets:
        reps.append(G.identity if G.identity in coset else min(coset))
    return SectionChoice(cosets=cosets, representatives=tuple(reps))


def section_from_representatives(
    G: FiniteGroup, subgroup: Sequence[int], representatives: Sequence[int]
) -> SectionChoice:
    """Build a SectionChoice from explicit representatives (identity coset is
    forced to the identity)."""
    cosets = G.left_cosets(subgroup)
    index = {}
    for i, coset in enumerate(cosets):
        for g in coset:
            index[g] = i
    chosen = [None] * len(cosets)
    for r in representatives:
        i = index.get(int(r))
        if i is None:
            raise ValidationError(f"representative {r} is not a group element")
        if chosen[i] is not None:
            raise ValidationError(f"two representatives given for coset {cosets[i]}")
        chosen[i] = int(r)
    for i, coset in enumerate(cosets):
        if G.identity in coset:
            chosen[i] = G.identity
        elif chosen[i] is None:
            chosen[i] = min(coset)
    return SectionChoice(cosets=cosets, representatives=tuple(chosen))


@dataclass(frozen=True)
class InducedRep:
    group: FiniteGroup
    subgroup: tuple[int, ...]
    section: SectionChoice
    matrices: tuple
    dim: int

    def character(self) -> tuple[complex, ...]:
        return tuple(complex(np.trace(M)) for M in self.matrices)

    def character_on_classes(self) -> tuple[complex, ...]:
        return tuple(
            complex(np.trace(self.matrices[cls[0]]))
            for cls in self.group.conjugacy_classes()
        )


def induced_action(
    G: FiniteGroup,
    subgroup: Sequence[int],
    hrep: Mapping[int, np.ndarray],
    section: SectionChoice | None = None,
    tol: float = 1e-10,
) -> InducedRep:
    """Induce a representation of H up to G on cosets x carrier."""
    sub = tuple(sorted(set(int(i) for i in subgroup)))
    if not G.is_subgroup(sub):
        raise ValidationError(f"{list(sub)} is not a subgroup")
    mats = {int(h): np.asarray(m, dtype=complex) for h, m in hrep.items()}
    if set(mats) != set(sub):
        raise ValidationError(
            "h-representation must cover exactly the subgroup",
            have=sorted(mats), expected=list(sub),
        )
    v_dim = mats[G.identity].shape[0]
    for h, m in mats.items():
        if m.shape != (v_dim, v_dim):
            raise ValidationError("h-representation matrices must be square, same size")
    if np.max(np.abs(mats[G.identity] - np.eye(v_dim))) > tol:
        raise ValidationError("h-representation must send the identity to the identity")
    for h1 in sub:
        for h2 in sub:
            dev = np.max(np.abs(mats[h1] @ mats[h2] - mats[G.mul(h1, h2)]))
            if dev > tol:
                raise ValidationError(
                    f"h-representation is not a homomorphism at ({h1},{h2})",
                    deviation=float(dev),
                )
    section = section or canonical_section(G, sub)
    coset_of = section.coset_index()
    reps = section.representatives
    n_cosets = len(section.cosets)
    dim = n_cosets * v_dim
    matrices = []
    sub_set = set(sub)
    for g in G.elements:
        M = np.zeros((dim, dim), dtype=complex)
        for i in range(n_cosets):
            moved = G.mul(g, reps[i])
            j = coset_of[moved]
            factor = G.mul(G.inv(reps[j]), moved)
            if factor not in sub_set:
                raise ValidationError(
                    f"section cocycle fell outside the subgroup at (g={g}, coset={i})"
                )
            M[j * v_dim:(j + 1) * v_dim, i * v_dim:(i + 1) * v_dim] = mats[factor]
        matrices.append(M)
    for a in G.elements:
        for b in G.elements:
            dev = np.max(np.abs(matrices[a] @ matrices[b] - matrices[G.mul(a, b)]))
            if dev > tol:
                raise ValidationError(
                    f"induced matrices fail the homomorphism law at ({a},{b})",
                    deviation=float(dev),
                )
    return InducedRep(
        group=G, subgroup=sub, section=section, matrices=tuple(matrices), dim=dim
    )
