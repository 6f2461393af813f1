"""Normalised super-character values on the support of Q and the Fourier upper bound.

The additive character is theta(x) = exp(2 pi i x / p). Super-character values are divided
by the degree p^d(D); on the class of I + c E(i, i+1) such a value is

    p^-|D_i| * theta(c * phi(i, i+1))    if D avoids row i right of (i, i+1)
                                         and column i+1 above it,
    0                                    otherwise,

where D_i holds the boxes strictly above and to the right of (i, i+1), and phi(i, i+1) is
taken as 0 when (i, i+1) is not in D.
"""

from __future__ import annotations

import cmath
import math

from unitri.errors import CapacityError, UsageError
from unitri.group import check_modulus
from unitri.superclass import (
    SuperClassLabel,
    d_of,
    enumerate_labels,
    i_of,
    label_count,
    non_attacking_sets,
)

LABEL_BUDGET = 2_000_000


def theta(x: int, p: int) -> complex:
    return cmath.exp(2j * math.pi * (x % p) / p)


def restricted_region_ok(D, i: int) -> bool:
    """False iff D has a box (i, s) with s > i+1 or a box (s, i+1) with s < i."""
    for r, c in D:
        if r == i and c > i + 1:
            return False
        if c == i + 1 and r < i:
            return False
    return True


def rectangle_count(D, i: int) -> int:
    """|D_i|: boxes (r, c) of D with r < i and c > i+1."""
    return sum(1 for r, c in D if r < i and c > i + 1)


def _phi_at(label: SuperClassLabel, i: int) -> int:
    return label.phi_map.get((i, i + 1), 0)


def normalized_char_value(label: SuperClassLabel, i: int, coeff: int, p: int) -> complex:
    """chi_{D,phi}(g) / p^d(D) for g in the class of I + coeff E(i, i+1)."""
    p = check_modulus(p)
    if not 1 <= i <= label.n - 1:
        raise UsageError(f"row {i} out of range for n={label.n}")
    if not restricted_region_ok(label.D, i):
        return 0j
    return p ** (-rectangle_count(label.D, i)) * theta(coeff * _phi_at(label, i), p)


def weight(D, i: int, p: int) -> float:
    """w_i(D) = p^-|D_i| when the region condition holds, else 0."""
    return p ** (-rectangle_count(D, i)) if restricted_region_ok(D, i) else 0.0


def q_hat_normalized(label: SuperClassLabel, p: int, a: int) -> float:
    """Fourier transform of Q at chi_{D,phi}, divided by p^d(D)."""
    n = label.n
    total = 0.0
    for i in range(1, n):
        w = weight(label.D, i, p)
        if w:
            h = _phi_at(label, i)
            total += w * (math.cos(2 * math.pi * h / p) + math.cos(2 * math.pi * a * h / p))
    return total / (2 * (n - 1))


def q_hat_from_characters(label: SuperClassLabel, p: int, a: int) -> complex:
    """Same quantity assembled term by term: the mean of the normalised value over the 4(n-1)
    classes C_i(+-1), C_i(+-a), all of equal size (merged classes at a = 1 count twice)."""
    n = label.n
    acc = 0j
    for i in range(1, n):
        for c in (1, -1, a, -a):
            acc += normalized_char_value(label, i, c, p)
    return acc / (4 * (n - 1))


def upper_bound_terms(n: int, p: int, a: int) -> list[tuple[SuperClassLabel, int, int, float]]:
    """(label, d, i, normalised Q-hat) for every label with D nonempty."""
    count = label_count(n, p) - 1
    if count > LABEL_BUDGET:
        raise CapacityError(f"{count} labels exceed the label budget {LABEL_BUDGET}")
    return [
        (lab, d_of(lab.D), i_of(lab.D), q_hat_normalized(lab, p, a))
        for lab in enumerate_labels(n, p, include_empty=False)
    ]


def upper_bound_rhs(n: int, p: int, a: int, t: int, terms=None) -> float:
    """sum over D != {} and phi of p^-i(D) (Q-hat(D,phi) / p^d(D))^(2t)."""
    if t < 0:
        raise UsageError("t must be >= 0")
    terms = upper_bound_terms(n, p, a) if terms is None else terms
    return math.fsum(p ** (-i) * v ** (2 * t) for _, _, i, v in terms)


def plancherel_rhs(n: int, p: int, a: int, t: int, terms=None) -> float:
    """sum over D != {} and phi of p^(2d(D) - i(D)) (Q-hat / p^d)^(2t).

    Each super-character block carries total squared degree p^(2d - i), so this sum equals
    |G| * ||Q^t - mu||_2^2 exactly.
    """
    if t < 0:
        raise UsageError("t must be >= 0")
    terms = upper_bound_terms(n, p, a) if terms is None else terms
    return math.fsum(p ** (2 * d - i) * v ** (2 * t) for _, d, i, v in terms)

