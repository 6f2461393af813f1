"""Brute-force ground truth used by the tests and the verify command.

Each oracle takes a route that shares no code with the routine it checks: orbits come from
breadth-first search over group multiplication, distributions from sampling, and Fourier
coefficients from the character table of Z/p.
"""

from __future__ import annotations

import cmath
import math
from collections import deque

import numpy as np

from unitri.errors import check_budget
from unitri.group import (
    UniTriMatrix,
    decode_index,
    encode_index,
    generators,
    group_order,
    iter_elements,
    mat_inv,
    mat_mul,
    step_matrix,
)
from unitri.walks import WalkSpec, build_kernel

ORBIT_BUDGET = 20_000


def conjugation_orbit(g: UniTriMatrix) -> set[UniTriMatrix]:
    """{h^-1 g h : h in G}, grown by conjugating with generators until closed."""
    n, p = g.n, g.p
    check_budget(group_order(n, p), "conjugation orbit", ORBIT_BUDGET)
    gens = [step_matrix(s, n, p) for s in generators(n)]
    seen = {g}
    queue = deque([g])
    while queue:
        x = queue.popleft()
        for h in gens:
            y = mat_mul(mat_mul(mat_inv(h), x), h)
            if y not in seen:
                seen.add(y)
                queue.append(y)
    return seen


def two_sided_orbits(n: int, p: int) -> list[set[int]]:
    """Orbits of {g - I} under X -> a X b (a, b in G), as sets of state indices.

    The additive part N = g - I maps to a N b, so the orbit member is I + a (g - I) b.
    """
    check_budget(group_order(n, p), "two-sided orbits", ORBIT_BUDGET)
    gens = [step_matrix(s, n, p).to_array() for s in generators(n)]
    eye = np.eye(n, dtype=np.int64)
    unseen = set(range(group_order(n, p)))
    orbits = []
    while unseen:
        start = min(unseen)
        orbit = {start}
        queue = deque([start])
        while queue:
            N = decode_index(queue.popleft(), n, p).to_array() - eye
            for h in gens:
                for M in (h @ N, N @ h):
                    k = encode_index(UniTriMatrix.from_dense((M % p + eye).tolist(), p))
                    if k not in orbit:
                        orbit.add(k)
                        queue.append(k)
        unseen -= orbit
        orbits.append(orbit)
    return orbits


def sample_distribution(spec: WalkSpec, t: int, samples: int, seed: int = 0) -> np.ndarray:
    """Empirical distribution of the walk after t steps from the identity."""
    rng = np.random.default_rng(seed)
    kernel = build_kernel(spec)
    probs = kernel.float_weights
    n, p = int(spec.n), spec.p
    steps = [decode_index(k, n, p).to_array() for k in kernel.indices]
    counts = np.zeros(spec.size)
    draws = rng.choice(len(steps), size=(samples, t), p=probs)
    state = np.broadcast_to(np.eye(n, dtype=np.int64), (samples, n, n)).copy()
    stack = np.stack(steps)
    for s in range(t):
        state = np.einsum("sij,sjk->sik", state, stack[draws[:, s]]) % p
    iu = [(i, j) for i in range(n) for j in range(i + 1, n)]
    weights = np.array([p**k for k in range(len(iu))], dtype=np.int64)
    ent = np.stack([state[:, i, j] for i, j in iu], axis=1)
    np.add.at(counts, ent @ weights, 1)
    return counts / samples


def abelian_fourier(p: int, h: int) -> complex:
    """sum_g chi_h(g) Q(g) for the walk on Z/p, from the character table of Z/p."""
    kernel = build_kernel(WalkSpec("K", p))
    return sum(
        complex(float(q)) * cmath.exp(2j * math.pi * h * g / p) for g, q in kernel.support
    )


def group_elements(n: int, p: int) -> list[UniTriMatrix]:
    check_budget(group_order(n, p), "element list", ORBIT_BUDGET)
    return list(iter_elements(n, p))
