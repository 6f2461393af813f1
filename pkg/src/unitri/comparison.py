"""Comparison of Q against P through the fixed class-element words.

A = max_z (1 / P(z)) * sum_g |g| N(g, z) Q(g), where the sum runs over the support of Q, |g| is
the length of the word chosen for g and N(g, z) counts the generator z in it. Loads are kept
as Fractions so A is exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from unitri.errors import CapacityError, UsageError
from unitri.group import GeneratorStep, check_dimension, check_modulus, generators, group_order
from unitri.paths import class_words, word_stats
from unitri.spectral import DENSE_BUDGET, transition_spectrum
from unitri.walks import (
    WalkSpec,
    build_kernel,
    exact_distribution,
    iter_distributions,
    l2_distance_sq,
)

WORD_BUDGET = 200_000


@dataclass(frozen=True)
class LoadRow:
    generator: GeneratorStep
    load: Fraction
    inv_p: Fraction

    @property
    def product(self) -> Fraction:
        return self.load * self.inv_p


@dataclass(frozen=True)
class ComparisonReport:
    n: int
    p: int
    A: Fraction
    argmax: GeneratorStep
    rows: tuple[LoadRow, ...]
    max_word_length: int

    def table(self) -> list[dict]:
        return [
            {
                "generator": r.generator.token(),
                "load": str(r.load),
                "inv_p": str(r.inv_p),
                "product": str(r.product),
                "product_float": float(r.product),
            }
            for r in self.rows
        ]


def comparison_constant(n: int, p: int) -> ComparisonReport:
    n, p = check_dimension(n), check_modulus(p)
    count = 4 * (n - 1) * p ** (n - 2)
    if count > WORD_BUDGET:
        raise CapacityError(f"{count} class words exceed the word budget {WORD_BUDGET}")
    kernel = build_kernel(WalkSpec("Q", p, n=n))
    words = class_words(n, p)
    if set(words) != set(kernel.indices):
        raise AssertionError("class words do not cover the support of Q")
    loads = {z: Fraction(0) for z in generators(n)}
    longest = 0
    for k, w in zip(kernel.indices, kernel.weights):
        q = Fraction(w, kernel.denominator)
        st = word_stats(words[k][3])
        longest = max(longest, st.length)
        for z, c in st.multiplicity.items():
            loads[z] += st.length * c * q
    inv_p = Fraction(2 * (n - 1))
    rows = tuple(LoadRow(z, loads[z], inv_p) for z in generators(n))
    best = max(rows, key=lambda r: r.product)
    return ComparisonReport(n, p, best.product, best.generator, rows, longest)


@dataclass(frozen=True)
class SpectralComparison:
    ok: bool
    min_slack: float
    A: Fraction
    lhs: np.ndarray
    rhs: np.ndarray


def spectral_comparison_check(
    n: int, p: int, A: Fraction | float | None = None, tol: float = 1e-9
) -> SpectralComparison:
    """1 - beta_i(Q) <= A (1 - beta_i(P)) for every index of the descending spectra."""
    if group_order(n, p) > DENSE_BUDGET:
        raise CapacityError(f"|G| = {group_order(n, p)} exceeds the dense spectrum budget")
    A = comparison_constant(n, p).A if A is None else A
    bq = transition_spectrum(WalkSpec("Q", p, n=n)).eigenvalues
    bp = transition_spectrum(WalkSpec("P", p, n=n)).eigenvalues
    lhs = 1.0 - bq
    rhs = float(A) * (1.0 - bp)
    slack = rhs - lhs
    # rounding in the top eigenvalue is amplified by A
    ok = bool(slack.min() >= -tol * max(1.0, float(A)))
    return SpectralComparison(ok, float(slack.min()), A, lhs, rhs)


def main_bound_rhs(
    n: int, p: int, t: int, A: Fraction | float | None = None, jobs: int = 1
) -> float:
    """|G| (exp(-t / A) + ||Q^{floor(t / 2A)} - mu||_2^2)."""
    if t < 0:
        raise UsageError("t must be >= 0")
    A = comparison_constant(n, p).A if A is None else A
    steps = math.floor(Fraction(t) / (2 * Fraction(A)))
    d = exact_distribution(WalkSpec("Q", p, n=n), steps, jobs=jobs)
    G = group_order(n, p)
    return G * (math.exp(-t / float(A)) + float(l2_distance_sq(d)))


def main_bound_curve(
    n: int, p: int, times: list[int], A: Fraction | float | None = None
) -> list[tuple[int, float]]:
    """main_bound_rhs at several times, sharing one Q evolution."""
    A = Fraction(comparison_constant(n, p).A if A is None else A)
    if any(t < 0 for t in times):
        raise UsageError("t must be >= 0")
    steps = {t: math.floor(Fraction(t) / (2 * A)) for t in times}
    need = max(steps.values(), default=0)
    l2 = {s: float(l2_distance_sq(d)) for s, d in iter_distributions(WalkSpec("Q", p, n=n), need)}
    G = group_order(n, p)
    return [(t, G * (math.exp(-t / float(A)) + l2[steps[t]])) for t in times]
