"""Conjugacy classes of superdiagonal elements and super-class labels (D, phi)."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator

from unitri.errors import UsageError, check_budget
from unitri.group import UniTriMatrix, check_dimension, check_modulus, group_order

Position = tuple[int, int]


@dataclass(frozen=True, order=True)
class SuperClassLabel:
    """Non-attacking set of strictly-upper positions ``D`` with nonzero values ``phi``
    (``phi[k]`` belongs to ``D[k]``; ``D`` is kept sorted)."""

    n: int
    D: tuple[Position, ...]
    phi: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.D) != len(self.phi):
            raise UsageError("D and phi must have the same length")
        order = sorted(range(len(self.D)), key=lambda k: self.D[k])
        D = tuple(tuple(self.D[k]) for k in order)
        phi = tuple(int(self.phi[k]) for k in order)
        object.__setattr__(self, "D", D)
        object.__setattr__(self, "phi", phi)
        rows, cols = set(), set()
        for i, j in D:
            if not 1 <= i < j <= self.n:
                raise UsageError(f"position {(i, j)} is not strictly upper for n={self.n}")
            if i in rows or j in cols:
                raise UsageError(f"D={D} is not non-attacking")
            rows.add(i)
            cols.add(j)
        if any(v == 0 for v in phi):
            raise UsageError("phi values must be nonzero residues")

    @classmethod
    def from_map(cls, n: int, phi: dict[Position, int]) -> SuperClassLabel:
        return cls(n, tuple(phi), tuple(phi.values()))

    @property
    def phi_map(self) -> dict[Position, int]:
        return dict(zip(self.D, self.phi))

    def is_empty(self) -> bool:
        return not self.D

    def representative(self, p: int) -> UniTriMatrix:
        """I plus the non-attacking matrix with entries phi on D."""
        return UniTriMatrix.from_entries(self.n, p, self.phi_map)

    def text(self) -> str:
        if not self.D:
            return "{}"
        return ";".join(f"({i},{j})={v}" for (i, j), v in zip(self.D, self.phi))


@dataclass(frozen=True)
class ClassStatistics:
    d: int
    i_stat: int
    size_exponent: int | None = None


def conjugacy_class_elements(i: int, x: int, n: int, p: int) -> list[UniTriMatrix]:
    """All elements of the conjugacy class of I + x E(i, i+1).

    Entries a_j sit above (i, i+1) in column i+1, entries b_k sit right of it in row i,
    and the block they bound holds x^-1 a_j b_k.
    """
    n, p = check_dimension(n), check_modulus(p)
    if not 1 <= i <= n - 1:
        raise UsageError(f"row {i} out of range for n={n}")
    x %= p
    if x == 0:
        raise UsageError("class representative needs x != 0")
    xinv = pow(x, -1, p)
    above = range(1, i)
    right = range(i + 2, n + 1)
    out = []
    for avals in itertools.product(range(p), repeat=len(above)):
        for bvals in itertools.product(range(p), repeat=len(right)):
            ent = {(i, i + 1): x}
            for j, aj in zip(above, avals):
                ent[(j, i + 1)] = aj
            for k, bk in zip(right, bvals):
                ent[(i, k)] = bk
            for j, aj in zip(above, avals):
                for k, bk in zip(right, bvals):
                    ent[(j, k)] = xinv * aj * bk
            out.append(UniTriMatrix.from_entries(n, p, ent))
    return out


@lru_cache(maxsize=None)
def non_attacking_sets(n: int) -> tuple[tuple[Position, ...], ...]:
    """Every rook placement on the strictly-upper cells, in lexicographic order."""
    n = check_dimension(n)
    found: list[tuple[Position, ...]] = []

    def extend(row: int, used: frozenset[int], acc: tuple[Position, ...]) -> None:
        if row == n:
            found.append(acc)
            return
        extend(row + 1, used, acc)
        for col in range(row + 1, n + 1):
            if col not in used:
                extend(row + 1, used | {col}, acc + ((row, col),))

    extend(1, frozenset(), ())
    return tuple(sorted(found))


def label_count(n: int, p: int) -> int:
    return sum((p - 1) ** len(D) for D in non_attacking_sets(n))


def enumerate_labels(n: int, p: int, include_empty: bool = True) -> Iterator[SuperClassLabel]:
    """All labels (D, phi), ordered by D then phi."""
    p = check_modulus(p)
    for D in non_attacking_sets(n):
        if not D and not include_empty:
            continue
        for phi in itertools.product(range(1, p), repeat=len(D)):
            yield SuperClassLabel(n, D, phi)


def d_of(D) -> int:
    return sum(c - r - 1 for r, c in D)


def i_of(D) -> int:
    return sum(
        1
        for (i, j), (k, l) in itertools.permutations(D, 2)
        if i < k < j < l
    )


def d_statistic(label: SuperClassLabel) -> int:
    """Sum of vertical distances from the boxes of D to the superdiagonal."""
    return d_of(label.D)


def i_statistic(label: SuperClassLabel) -> int:
    """Number of ordered pairs of boxes (i,j), (k,l) in D with i < k < j < l."""
    return i_of(label.D)


def class_statistics(label: SuperClassLabel) -> ClassStatistics:
    return ClassStatistics(d=d_of(label.D), i_stat=i_of(label.D))


def degree_identity_sum(n: int, p: int, by_label: bool = False) -> int:
    """sum over all labels of p^(2 d(D) - i(D)); equals |G| exactly.

    ``by_label`` walks every (D, phi) instead of weighting each D by (p-1)^|D|.
    """
    total = 0
    if by_label:
        for lab in enumerate_labels(n, p):
            total += p ** (2 * d_of(lab.D) - i_of(lab.D))
        return total
    for D in non_attacking_sets(n):
        e = 2 * d_of(D) - i_of(D)
        if e < 0:
            raise AssertionError(f"negative degree exponent for D={D}")
        total += (p - 1) ** len(D) * p**e
    return total


def canonical_form(m: UniTriMatrix) -> SuperClassLabel:
    """Label of the two-sided G x G orbit of m - I.

    Columns are scanned left to right. The bottom-most nonzero entry of a column is its
    pivot; row operations (left multiplication) clear the column above the pivot, then
    column operations (right multiplication) clear the pivot row to its right. Pivot values
    never change. The pass is repeated until nothing moves.
    """
    n, p = m.n, m.p
    N = [row[:] for row in m.dense()]
    for r in range(n):
        N[r][r] = 0

    def sweep() -> bool:
        changed = False
        for c in range(n):
            piv = next((r for r in range(c - 1, -1, -1) if N[r][c]), None)
            if piv is None:
                continue
            inv = pow(N[piv][c], -1, p)
            for r in range(piv):
                if N[r][c]:
                    f = N[r][c] * inv % p
                    for k in range(c, n):
                        N[r][k] = (N[r][k] - f * N[piv][k]) % p
                    changed = True
            for k in range(c + 1, n):
                if N[piv][k]:
                    f = N[piv][k] * inv % p
                    for r in range(piv + 1):
                        N[r][k] = (N[r][k] - f * N[r][c]) % p
                    changed = True
        return changed

    while sweep():
        pass
    phi = {(r + 1, c + 1): N[r][c] for r in range(n) for c in range(r + 1, n) if N[r][c]}
    return SuperClassLabel.from_map(n, phi)


def superclass_fibers(n: int, p: int) -> dict[SuperClassLabel, list[int]]:
    """Group element indices by canonical label."""
    from unitri.group import iter_elements, encode_index

    check_budget(group_order(n, p))
    fibers: dict[SuperClassLabel, list[int]] = {}
    for g in iter_elements(n, p):
        fibers.setdefault(canonical_form(g), []).append(encode_index(g))
    return fibers
