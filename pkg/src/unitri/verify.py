"""The invariant suite behind ``unitri verify``: quick exact checks plus byte-level
reproducibility of a fixed set of exact-mode fixtures."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from unitri.config import RunConfig
from unitri.group import UniTriMatrix, eval_word, group_order
from unitri.walks import WalkSpec, exact_distribution, iter_distributions, tv_distance

FIXTURES: tuple[RunConfig, ...] = (
    RunConfig("tv-curve", n=2, p=5, walk="P", t_max=20, exact=True),
    RunConfig("tv-curve", p=5, walk="K", t_max=20, exact=True),
    RunConfig("tv-curve", n=3, p=3, walk="Q", t_max=12, exact=True),
    RunConfig("tv-curve", n=3, p=3, walk="P", t_max=12, exact=True, jobs=2),
    RunConfig("bound-curve", n=2, p=5, walk="Q", t=1, t_max=20, exact=True),
    RunConfig("superclasses", n=4, p=3, exact=True),
    RunConfig("words", n=3, p=5, exact=True),
    RunConfig("compare", n=2, p=5, exact=True),
    RunConfig("tv-curve", n=2, p=5, walk="K", t_max=10, exact=True, format="json"),
)


@dataclass(frozen=True)
class CheckResult:
    name: str
    ok: bool
    detail: str


def check_second_diag() -> CheckResult:
    from unitri.paths import word_second_diag

    bad = 0
    for n in (3, 4):
        for p in (3, 5, 7):
            for i in range(1, n - 1):
                for b in range(p):
                    w = word_second_diag(i, b, n, p)
                    good = eval_word(w, n, p) == UniTriMatrix.from_entries(n, p, {(i, i + 2): b})
                    if not good or len(w) % 2 or len(w) > 12 * math.isqrt(b) + 10:
                        bad += 1
    return CheckResult("second_diag_words", bad == 0, f"{bad} bad")


def check_class_words() -> CheckResult:
    from unitri.paths import class_words

    bad = total = 0
    for p in (3, 5, 7):
        for k, (B, _, _, w) in class_words(3, p).items():
            total += 1
            if eval_word(w, 3, p) != B or len(w) % 2 != 1:
                bad += 1
    return CheckResult("class_words_n3", bad == 0, f"{bad} of {total} bad")


def check_degree_identity() -> CheckResult:
    from unitri.superclass import degree_identity_sum

    bad = [(n, p) for n in range(2, 6) for p in (3, 5, 7) if degree_identity_sum(n, p) != group_order(n, p)]
    return CheckResult("degree_identity", not bad, f"n=2..5, p in {{3,5,7}}; failing {bad}")


def check_superclass_partition() -> CheckResult:
    from unitri.oracles import two_sided_orbits
    from unitri.superclass import superclass_fibers

    ok = True
    for n, p in ((3, 3), (3, 5)):
        orbits = sorted(sorted(o) for o in two_sided_orbits(n, p))
        fibers = sorted(sorted(f) for f in superclass_fibers(n, p).values())
        ok &= orbits == fibers
    return CheckResult("superclass_partition", ok, "n=3, p in {3,5}")


def check_k_spectrum() -> CheckResult:
    from unitri.spectral import k_spectrum, transition_spectrum

    err = max(
        float(abs(transition_spectrum(WalkSpec("K", p)).eigenvalues - k_spectrum(p)).max())
        for p in (5, 7, 11)
    )
    return CheckResult("k_spectrum", err < 1e-9, f"max error {err:.3e}")


def check_bound_dominance() -> CheckResult:
    from unitri.supercharacter import upper_bound_rhs, upper_bound_terms

    worst = math.inf
    for n, p in ((2, 5), (3, 3)):
        spec = WalkSpec("Q", p, n=n)
        terms = upper_bound_terms(n, p, spec.a)
        for t, d in iter_distributions(spec, 60):
            if t == 0:
                continue
            lhs = 4 * tv_distance(d) ** 2
            rhs = upper_bound_rhs(n, p, spec.a, t, terms)
            if lhs > 0:
                worst = min(worst, rhs / lhs)
    return CheckResult("bound_dominance", worst >= 1 - 1e-12, f"min ratio {worst:.6g}")


def check_comparison() -> CheckResult:
    from unitri.comparison import comparison_constant, spectral_comparison_check

    A = comparison_constant(2, 5).A
    chk = spectral_comparison_check(3, 3)
    ok = A == 5 and chk.ok
    return CheckResult("comparison", ok, f"A(2,5)={A}, n=3 p=3 slack {chk.min_slack:.3e}")


def check_exact_vs_float() -> CheckResult:
    worst = 0.0
    for spec in (WalkSpec("P", 3, n=3), WalkSpec("Q", 5, n=2)):
        ex = exact_distribution(spec, 12, exact=True)
        fl = exact_distribution(spec, 12)
        worst = max(worst, float(abs(ex.values - fl.values).max()))
        if ex.total() != Fraction(1):
            worst = math.inf
    return CheckResult("exact_vs_float", worst < 1e-12, f"max deviation {worst:.3e}")


CHECKS: tuple[Callable[[], CheckResult], ...] = (
    check_second_diag,
    check_class_words,
    check_degree_identity,
    check_superclass_partition,
    check_k_spectrum,
    check_bound_dominance,
    check_comparison,
    check_exact_vs_float,
)


def fixture_name(cfg: RunConfig) -> str:
    parts = [cfg.command] + [f"{k}={getattr(cfg, k)}" for k in ("walk", "n", "p", "t_max", "jobs", "format") if getattr(cfg, k) not in (None, 1, "csv")]
    return "fixture:" + ",".join(parts)


def check_fixture(cfg: RunConfig, run: Callable[[RunConfig], str]) -> CheckResult:
    first, second = run(cfg), run(cfg)
    return CheckResult(fixture_name(cfg), first == second, f"{len(first)} bytes")


def run_all(run_fixture: Callable[[RunConfig], str]) -> list[CheckResult]:
    results = []
    for check in CHECKS:
        try:
            results.append(check())
        except Exception as exc:  # a crashing check is a failing check
            results.append(CheckResult(check.__name__, False, f"{type(exc).__name__}: {exc}"))
    for cfg in FIXTURES:
        try:
            results.append(check_fixture(cfg, run_fixture))
        except Exception as exc:
            results.append(CheckResult(fixture_name(cfg), False, f"{type(exc).__name__}: {exc}"))
    return results
