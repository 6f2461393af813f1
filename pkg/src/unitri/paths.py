"""Generator words for second-diagonal elements and for every element of C_i(+-1), C_i(+-a).

An element B of the class of I + x E(i, i+1) is a transvection I + U w^T with U the column
above (i, i+1) (U_i = x) and w = e_{i+1} + sum_k (b_k / x) e_k over the row to its right.
It is split as B = B1 B2, where B1 carries columns i+1, i+3, ... and B2 carries columns
i+2, i+4, .... B1 has odd length and B2 even length, so every class word is odd.

Columns are filled along a chain: conjugating I + U w^T by I + g E(k, k+2) adds g * w_k to
w_{k+2} and leaves U alone, so each column costs one second-diagonal word. A zero entry in
the chain would cut it; such entries are first set to 1 and cleared again afterwards, right
to left.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable

from unitri.errors import UsageError
from unitri.group import (
    GeneratorStep,
    GeneratorWord,
    UniTriMatrix,
    check_dimension,
    check_modulus,
    encode_index,
)
from unitri.walks import closest_odd_sqrt

EMPTY = GeneratorWord()

# class-word lengths are expected to stay below this times n (floor(sqrt p) + 1)
WORD_LENGTH_CONSTANT = 30


@dataclass(frozen=True)
class WordStats:
    length: int
    parity: int
    multiplicity: dict[GeneratorStep, int]

    def count(self, step: tuple[int, int]) -> int:
        return self.multiplicity.get(GeneratorStep(*step), 0)

    @property
    def max_multiplicity(self) -> int:
        return max(self.multiplicity.values(), default=0)


def word_stats(w: GeneratorWord) -> WordStats:
    mult = Counter(w.steps)
    return WordStats(len(w), len(w) % 2, dict(mult))


def conjugate_word(x: GeneratorWord, h: GeneratorWord) -> GeneratorWord:
    """Word for h^-1 x h."""
    return h.inverse() + x + h


def commutator_word(x: GeneratorWord, y: GeneratorWord) -> GeneratorWord:
    """Word for [x, y] = x^-1 y^-1 x y."""
    return x.inverse() + y.inverse() + x + y


def _check_row(i: int, n: int, top: int) -> None:
    if not 1 <= i <= top:
        raise UsageError(f"row {i} out of range 1..{top} for n={n}")


def word_superdiag_power(i: int, c: int, n: int, p: int) -> GeneratorWord:
    """I + c E(i, i+1) using min(c, p - c) copies of one generator."""
    n, p = check_dimension(n), check_modulus(p)
    _check_row(i, n, n - 1)
    c %= p
    if c <= p - c:
        return GeneratorWord.power(i, 1, c)
    return GeneratorWord.power(i, -1, p - c)


def word_second_diag(i: int, b: int, n: int, p: int) -> GeneratorWord:
    """I + b E(i, i+2) as at most two commutators.

    With s = floor(sqrt b): [I + s E(i+1,i+2), I - s E(i,i+1)] gives s^2 in 4s letters and
    [I + E(i+1,i+2), I - r E(i,i+1)] gives the remainder r = b - s^2 in 2 + 2r letters.
    """
    n, p = check_dimension(n), check_modulus(p)
    _check_row(i, n, n - 2)
    b %= p
    if b == 0:
        return EMPTY
    s = math.isqrt(b)
    r = b - s * s
    word = commutator_word(GeneratorWord.power(i + 1, 1, s), GeneratorWord.power(i, -1, s))
    if r:
        word = word + commutator_word(
            GeneratorWord.power(i + 1, 1, 1), GeneratorWord.power(i, -1, r)
        )
    return word


def word_Ai(i: int, n: int, sign: int = 1, coeff: int = 1) -> GeneratorWord:
    """Conjugation ladder: the seed I + sign*coeff*E(i, i+1) conjugated by
    (I - E(i-1, i)) ... (I - E(1, 2)), which copies the seed up column i+1."""
    n = check_dimension(n)
    _check_row(i, n, n - 1)
    if sign not in (1, -1) or coeff < 1:
        raise UsageError("sign must be +-1 and coeff a positive count")
    prefix = GeneratorWord(tuple((j, 1) for j in range(1, i)))
    suffix = GeneratorWord(tuple((i - j, -1) for j in range(1, i)))
    return prefix + GeneratorWord.power(i, sign, coeff) + suffix


def _column_word(r: int, targets: dict[int, int], sign: int, n: int, p: int) -> GeneratorWord:
    """Odd-length word for I + (sum_{j<r} targets[j] e_j + sign e_r) e_{r+1}^T."""
    word = word_Ai(r, n, sign, 1)
    for j in range(1, r - 1):
        # u_j <- u_j + c * u_{j+2}, and u_{j+2} still holds sign
        c = (targets.get(j, 0) - sign) * sign % p
        if c:
            h = word_second_diag(j, c, n, p)
            word = h + word + h.inverse()
    if r >= 2:
        c = (targets.get(r - 1, 0) - sign) % p
        if c:
            word = word_second_diag(r - 1, c, n, p) + word
    return word


def _chain_word(
    word: GeneratorWord, start: int, root: int, targets: list[int], n: int, p: int
) -> GeneratorWord:
    """Extend ``word`` (some I + U w^T with w_start = root != 0) so that
    w_{start + 2l} = targets[l - 1] for l = 1..len(targets)."""
    cur = [root % p] + [0] * len(targets)
    last = max((l for l, v in enumerate(targets, 1) if v % p), default=0)
    temps = []
    ops = []
    for l in range(1, last + 1):
        want = targets[l - 1] % p
        if want == 0:
            want = 1
            temps.append(l)
        ops.append((l, want * pow(cur[l - 1], -1, p) % p))
        cur[l] = want
    for l in reversed(temps):
        ops.append((l, -cur[l] * pow(cur[l - 1], -1, p) % p))
        cur[l] = 0
    for l, g in ops:
        word = conjugate_word(word, word_second_diag(start + 2 * (l - 1), g, n, p))
    return word


def class_parameters(B: UniTriMatrix, i: int, x: int) -> tuple[dict[int, int], dict[int, int]]:
    """(a_j above (i, i+1), b_k right of it) after checking B lies in C_i(x)."""
    n, p = B.n, B.p
    _check_row(i, n, n - 1)
    x %= p
    if x == 0:
        raise UsageError("class coefficient must be nonzero mod p")
    avals = {j: B[j, i + 1] for j in range(1, i)}
    bvals = {k: B[i, k] for k in range(i + 2, n + 1)}
    expected = {(i, i + 1): x}
    xinv = pow(x, -1, p)
    for j, aj in avals.items():
        expected[(j, i + 1)] = aj
    for k, bk in bvals.items():
        expected[(i, k)] = bk
    for j, aj in avals.items():
        for k, bk in bvals.items():
            expected[(j, k)] = aj * bk * xinv % p
    if B != UniTriMatrix.from_entries(n, p, expected):
        raise UsageError(f"matrix is not in the class of I + {x} E({i},{i + 1})")
    return avals, bvals


def word_class_element(B: UniTriMatrix, i: int, coeff: int, a: int | None = None) -> GeneratorWord:
    """Odd-length word for B in the class of I + coeff E(i, i+1), coeff in {+-1, +-a}."""
    n, p = B.n, B.p
    a = closest_odd_sqrt(p) if a is None else a
    if abs(coeff) not in (1, a) or coeff == 0:
        raise UsageError(f"coeff must be one of +-1, +-{a}, got {coeff}")
    sign = 1 if coeff > 0 else -1
    x = coeff % p
    avals, bvals = class_parameters(B, i, x)
    xinv = pow(x, -1, p)

    # B1: column i+1 from the ladder, then the odd columns
    w1 = _column_word(i, avals, sign, n, p)
    if abs(coeff) > 1:
        # (|coeff| - 1) is even, so this keeps the parity
        w1 = GeneratorWord.power(i, sign, abs(coeff) - 1) + w1
    odd = [bvals[k] * xinv % p for k in range(i + 3, n + 1, 2)]
    w1 = _chain_word(w1, i + 1, 1, odd, n, p)

    # B2: the even columns as I + u (sum b_k e_k)^T with u = U / x
    even = [bvals[k] for k in range(i + 2, n + 1, 2)]
    if not any(even):
        return w1
    root = even[0] or 1
    u_targets = {j: root * aj * xinv % p for j, aj in avals.items()}
    u_targets[i] = root
    col = GeneratorWord(((i + 1, -1),)) + _column_word(i + 1, u_targets, 1, n, p)
    rinv = pow(root, -1, p)
    w2 = _chain_word(col, i + 2, 1, [b * rinv % p for b in even[1:]], n, p)
    if even[0] == 0:
        # the column built above was a temporary I + u e_{i+2}^T; divide it back out
        w2 = w2 + col.inverse()
    return w1 + w2


def class_words(n: int, p: int) -> dict[int, tuple[UniTriMatrix, int, int, GeneratorWord]]:
    """One fixed word per element of the support of Q, keyed by state index.

    Values are (element, row i, coeff, word). When classes coincide (a = 1) the first
    construction is kept.
    """
    from unitri.superclass import conjugacy_class_elements

    a = closest_odd_sqrt(p)
    out: dict[int, tuple[UniTriMatrix, int, int, GeneratorWord]] = {}
    for i in range(1, n):
        for coeff in (1, -1, a, -a):
            for B in conjugacy_class_elements(i, coeff % p, n, p):
                k = encode_index(B)
                if k not in out:
                    out[k] = (B, i, coeff, word_class_element(B, i, coeff, a))
    return out


def length_envelope(n: int, p: int, C: int = WORD_LENGTH_CONSTANT) -> int:
    return C * n * (math.isqrt(p) + 1)


def format_words(words: Iterable[GeneratorWord]) -> str:
    return "".join(w.to_text() + "\n" for w in words)


def parse_words(text: str) -> list[GeneratorWord]:
    return [GeneratorWord.from_text(line) for line in text.splitlines()]


def write_words(path: str | Path, words: Iterable[GeneratorWord]) -> None:
    Path(path).write_text(format_words(words))


def read_words(path: str | Path) -> list[GeneratorWord]:
    return parse_words(Path(path).read_text())
