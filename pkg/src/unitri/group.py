"""Unipotent upper-triangular matrices over Z/pZ, generator words, and the state index.

Strictly-upper entries are stored in row-major order (1,2),(1,3),...,(1,n),(2,3),...,(n-1,n).
The same order, read as base-p digits least significant first, is the canonical state index
used by every distribution vector in the package.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator, Mapping, NamedTuple, Sequence

import numpy as np

from unitri.errors import UsageError

MAX_MODULUS = 2**15


@lru_cache(maxsize=None)
def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    d = 3
    while d * d <= p:
        if p % d == 0:
            return False
        d += 2
    return True


@dataclass(frozen=True)
class PrimeModulus:
    p: int

    def __post_init__(self) -> None:
        check_modulus(self.p)

    def __int__(self) -> int:
        return self.p


def check_modulus(p: int) -> int:
    p = int(p)
    if p < 3 or p % 2 == 0 or not is_prime(p):
        raise UsageError(f"modulus must be an odd prime, got {p}")
    if p >= MAX_MODULUS:
        raise UsageError(f"modulus {p} too large (must be < {MAX_MODULUS})")
    return p


def check_dimension(n: int) -> int:
    n = int(n)
    if n < 2:
        raise UsageError(f"dimension must be >= 2, got {n}")
    return n


def num_entries(n: int) -> int:
    return n * (n - 1) // 2


def group_order(n: int, p: int) -> int:
    return p ** num_entries(n)


@lru_cache(maxsize=None)
def positions(n: int) -> tuple[tuple[int, int], ...]:
    """Strictly-upper positions (i, j), 1-based, in storage order."""
    return tuple((i, j) for i in range(1, n) for j in range(i + 1, n + 1))


@lru_cache(maxsize=None)
def position_index(n: int) -> dict[tuple[int, int], int]:
    return {pos: k for k, pos in enumerate(positions(n))}


@lru_cache(maxsize=None)
def row_offsets(n: int) -> tuple[int, ...]:
    """Storage offset of the first entry of each row 1..n-1 (index 0 is row 1)."""
    offs = []
    k = 0
    for i in range(1, n):
        offs.append(k)
        k += n - i
    return tuple(offs)


@dataclass(frozen=True)
class UniTriMatrix:
    n: int
    p: int
    entries: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.entries) != num_entries(self.n):
            raise UsageError(
                f"expected {num_entries(self.n)} entries for n={self.n}, got {len(self.entries)}"
            )
        if any(not 0 <= x < self.p for x in self.entries):
            object.__setattr__(self, "entries", tuple(int(x) % self.p for x in self.entries))

    @classmethod
    def identity(cls, n: int, p: int) -> UniTriMatrix:
        return cls(check_dimension(n), check_modulus(p), (0,) * num_entries(n))

    @classmethod
    def from_entries(cls, n: int, p: int, values: Mapping[tuple[int, int], int]) -> UniTriMatrix:
        n, p = check_dimension(n), check_modulus(p)
        idx = position_index(n)
        ent = [0] * num_entries(n)
        for pos, x in values.items():
            if pos not in idx:
                raise UsageError(f"position {pos} is not strictly upper for n={n}")
            ent[idx[pos]] = int(x) % p
        return cls(n, p, tuple(ent))

    @classmethod
    def elementary(cls, n: int, p: int, i: int, j: int, x: int = 1) -> UniTriMatrix:
        """I + x E(i, j)."""
        return cls.from_entries(n, p, {(i, j): x})

    @classmethod
    def from_dense(cls, rows: Sequence[Sequence[int]], p: int) -> UniTriMatrix:
        n = len(rows)
        for r in range(n):
            for c in range(n):
                v = int(rows[r][c]) % p
                if (c == r and v != 1) or (c < r and v != 0):
                    raise UsageError("matrix is not unipotent upper-triangular")
        return cls.from_entries(
            n, p, {(i, j): rows[i - 1][j - 1] for (i, j) in positions(n)}
        )

    def __getitem__(self, pos: tuple[int, int]) -> int:
        i, j = pos
        if i == j:
            return 1
        if j < i:
            return 0
        return self.entries[position_index(self.n)[(i, j)]]

    def items(self) -> Iterator[tuple[tuple[int, int], int]]:
        return zip(positions(self.n), self.entries)

    def support(self) -> dict[tuple[int, int], int]:
        return {pos: x for pos, x in self.items() if x}

    def dense(self) -> list[list[int]]:
        m = [[int(r == c) for c in range(self.n)] for r in range(self.n)]
        for (i, j), x in self.items():
            m[i - 1][j - 1] = x
        return m

    def to_array(self) -> np.ndarray:
        return np.array(self.dense(), dtype=np.int64)

    def is_identity(self) -> bool:
        return not any(self.entries)

    def __matmul__(self, other: UniTriMatrix) -> UniTriMatrix:
        return mat_mul(self, other)

    def inverse(self) -> UniTriMatrix:
        return mat_inv(self)

    def __str__(self) -> str:
        return "\n".join(" ".join(f"{x:>3d}" for x in row) for row in self.dense())


def _check_compatible(a: UniTriMatrix, b: UniTriMatrix) -> None:
    if a.n != b.n:
        raise UsageError(f"dimension mismatch: {a.n} vs {b.n}")
    if a.p != b.p:
        raise UsageError(f"modulus mismatch: {a.p} vs {b.p}")


def mat_mul(a: UniTriMatrix, b: UniTriMatrix) -> UniTriMatrix:
    _check_compatible(a, b)
    n, p = a.n, a.p
    A, B = a.dense(), b.dense()
    out = []
    for i in range(n - 1):
        Ai = A[i]
        for j in range(i + 1, n):
            s = 0
            for k in range(i, j + 1):
                s += Ai[k] * B[k][j]
            out.append(s % p)
    return UniTriMatrix(n, p, tuple(out))


def mat_inv(a: UniTriMatrix) -> UniTriMatrix:
    """Back substitution on the columns of A X = I."""
    n, p = a.n, a.p
    A = a.dense()
    X = [[int(r == c) for c in range(n)] for r in range(n)]
    for j in range(n):
        for i in range(j - 1, -1, -1):
            s = 0
            for k in range(i + 1, j + 1):
                s += A[i][k] * X[k][j]
            X[i][j] = (-s) % p
    return UniTriMatrix(n, p, tuple(X[i - 1][j - 1] for (i, j) in positions(n)))


def commutator(x: UniTriMatrix, y: UniTriMatrix) -> UniTriMatrix:
    """[x, y] = x^-1 y^-1 x y."""
    _check_compatible(x, y)
    return mat_mul(mat_mul(mat_inv(x), mat_inv(y)), mat_mul(x, y))


def conjugate(x: UniTriMatrix, h: UniTriMatrix) -> UniTriMatrix:
    """h^-1 x h."""
    return mat_mul(mat_mul(mat_inv(h), x), h)


class GeneratorStep(NamedTuple):
    """The generator I + sign * E(row, row+1)."""

    row: int
    sign: int

    def inverse(self) -> GeneratorStep:
        return GeneratorStep(self.row, -self.sign)

    def token(self) -> str:
        return f"{'+' if self.sign > 0 else '-'}{self.row}"

    @classmethod
    def parse(cls, token: str) -> GeneratorStep:
        if len(token) < 2 or token[0] not in "+-" or not token[1:].isdigit():
            raise UsageError(f"bad generator token {token!r}")
        return cls(int(token[1:]), 1 if token[0] == "+" else -1)


def generators(n: int) -> list[GeneratorStep]:
    """All 2(n-1) generators, ordered (1,+),(1,-),(2,+),..."""
    return [GeneratorStep(i, s) for i in range(1, n) for s in (1, -1)]


@dataclass(frozen=True)
class GeneratorWord:
    steps: tuple[GeneratorStep, ...] = ()

    def __post_init__(self) -> None:
        steps = tuple(GeneratorStep(int(r), int(s)) for r, s in self.steps)
        for st in steps:
            if st.sign not in (1, -1) or st.row < 1:
                raise UsageError(f"invalid generator step {st}")
        object.__setattr__(self, "steps", steps)

    @classmethod
    def of(cls, steps: Iterable[tuple[int, int]]) -> GeneratorWord:
        return cls(tuple(steps))

    @classmethod
    def power(cls, row: int, sign: int, count: int) -> GeneratorWord:
        return cls(((row, sign),) * count)

    def __len__(self) -> int:
        return len(self.steps)

    def __iter__(self) -> Iterator[GeneratorStep]:
        return iter(self.steps)

    def __add__(self, other: GeneratorWord) -> GeneratorWord:
        return GeneratorWord(self.steps + other.steps)

    @property
    def parity(self) -> int:
        return len(self.steps) % 2

    def inverse(self) -> GeneratorWord:
        return GeneratorWord(tuple(st.inverse() for st in reversed(self.steps)))

    def to_text(self) -> str:
        return " ".join(st.token() for st in self.steps)

    @classmethod
    def from_text(cls, line: str) -> GeneratorWord:
        return cls(tuple(GeneratorStep.parse(tok) for tok in line.split()))


def step_matrix(step: GeneratorStep, n: int, p: int) -> UniTriMatrix:
    if not 1 <= step.row <= n - 1:
        raise UsageError(f"generator row {step.row} out of range for n={n}")
    return UniTriMatrix.elementary(n, p, step.row, step.row + 1, step.sign)


def eval_word(word: GeneratorWord, n: int, p: int) -> UniTriMatrix:
    """Left-to-right product of the word's generators.

    Right multiplication by I + sE(i,i+1) adds s * column i to column i+1, which is
    applied in place instead of forming each step matrix.
    """
    n, p = check_dimension(n), check_modulus(p)
    M = [[int(r == c) for c in range(n)] for r in range(n)]
    for st in word.steps:
        i = st.row
        if not 1 <= i <= n - 1:
            raise UsageError(f"generator row {i} out of range for n={n}")
        for r in range(i):
            M[r][i] = (M[r][i] + st.sign * M[r][i - 1]) % p
    return UniTriMatrix(n, p, tuple(M[i - 1][j - 1] for (i, j) in positions(n)))


def encode_index(a: UniTriMatrix) -> int:
    k = 0
    for x in reversed(a.entries):
        k = k * a.p + x
    return k


def decode_index(k: int, n: int, p: int) -> UniTriMatrix:
    n, p = check_dimension(n), check_modulus(p)
    size = group_order(n, p)
    if not 0 <= k < size:
        raise UsageError(f"index {k} out of range [0, {size})")
    ent = []
    for _ in range(num_entries(n)):
        k, r = divmod(k, p)
        ent.append(r)
    return UniTriMatrix(n, p, tuple(ent))


def iter_elements(n: int, p: int) -> Iterator[UniTriMatrix]:
    for k in range(group_order(n, p)):
        yield decode_index(k, n, p)


def element_table(n: int, p: int) -> np.ndarray:
    """Entries of every group element, row k = decode_index(k); shape (|G|, n(n-1)/2)."""
    m = num_entries(n)
    k = np.arange(p**m, dtype=np.int64)
    return np.stack([(k // p**d) % p for d in range(m)], axis=1)


def encode_table(entries: np.ndarray, p: int) -> np.ndarray:
    """Vectorised encode_index over rows of an entries array."""
    m = entries.shape[-1]
    weights = p ** np.arange(m, dtype=np.int64)
    return (entries.astype(np.int64) % p) @ weights


def dense_stack(entries: np.ndarray, n: int) -> np.ndarray:
    """(N, m) entries -> (N, n, n) dense unipotent matrices."""
    N = entries.shape[0]
    out = np.zeros((N, n, n), dtype=np.int64)
    out[:, np.arange(n), np.arange(n)] = 1
    for k, (i, j) in enumerate(positions(n)):
        out[:, i - 1, j - 1] = entries[:, k]
    return out


def strict_entries(dense: np.ndarray, n: int) -> np.ndarray:
    rows = [i - 1 for i, _ in positions(n)]
    cols = [j - 1 for _, j in positions(n)]
    return dense[..., rows, cols]
