"""Walk kernels P, Q, K and the product walk, with exact convolution of distributions.

Distributions are dense vectors indexed by the canonical state index. Convolution uses the
fact that right multiplication y -> y*h acts on each row of y independently: reshaping a
distribution into one tensor axis per matrix row (row 1 is the last, least significant
axis) turns y -> y*h into an independent permutation of every axis, so each kernel element
costs one open-mesh gather instead of a |G|-long index table.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterator, Literal

import numpy as np
from scipy import sparse

from unitri.errors import CapacityError, UsageError, check_budget
from unitri.group import (
    UniTriMatrix,
    check_dimension,
    check_modulus,
    decode_index,
    encode_index,
    group_order,
    mat_inv,
    num_entries,
)

WalkKind = Literal["P", "Q", "K", "ProductQ"]
WALK_KINDS: tuple[str, ...] = ("P", "Q", "K", "ProductQ")

EXACT_MAX_STEPS = 20


def closest_odd_sqrt(p: int) -> int:
    """floor(sqrt p) if odd, otherwise floor(sqrt p) + 1."""
    r = math.isqrt(check_modulus(p))
    return r if r % 2 else r + 1


@dataclass(frozen=True)
class WalkSpec:
    kind: str
    p: int
    n: int | None = None
    N: int | None = None

    def __post_init__(self) -> None:
        kind = {"productq": "ProductQ", "p": "P", "q": "Q", "k": "K"}.get(
            self.kind.lower(), self.kind
        )
        if kind not in WALK_KINDS:
            raise UsageError(f"unknown walk kind {self.kind!r}; expected one of {WALK_KINDS}")
        object.__setattr__(self, "kind", kind)
        check_modulus(self.p)
        if kind in ("P", "Q"):
            if self.n is None:
                raise UsageError(f"walk {kind} needs n")
            check_dimension(self.n)
        elif kind == "ProductQ":
            if self.N is None or self.N < 1:
                raise UsageError("walk ProductQ needs N >= 1")

    @property
    def a(self) -> int:
        return closest_odd_sqrt(self.p)

    @property
    def is_abelian(self) -> bool:
        return self.kind in ("K", "ProductQ")

    @property
    def coords(self) -> int:
        """Number of Z/pZ coordinates of a state."""
        if self.kind == "K":
            return 1
        if self.kind == "ProductQ":
            return int(self.N)
        return num_entries(int(self.n))

    @property
    def size(self) -> int:
        return self.p**self.coords

    @property
    def shape(self) -> tuple[int, ...]:
        """Tensor shape of a distribution; axis 0 is the most significant digit group."""
        if self.is_abelian:
            return (self.p,) * self.coords
        n = int(self.n)
        return tuple(self.p ** (n - r) for r in range(n - 1, 0, -1))

    def label(self) -> str:
        if self.kind in ("P", "Q"):
            return f"{self.kind}(n={self.n}, p={self.p})"
        if self.kind == "K":
            return f"K(p={self.p})"
        return f"ProductQ(N={self.N}, p={self.p})"


def _vector_index(x: tuple[int, ...], p: int) -> int:
    k = 0
    for v in reversed(x):
        k = k * p + v
    return k


def _vector_decode(k: int, N: int, p: int) -> tuple[int, ...]:
    out = []
    for _ in range(N):
        k, r = divmod(k, p)
        out.append(r)
    return tuple(out)


@dataclass(frozen=True)
class WalkKernel:
    """Symmetric probability measure on the state space, kept as integer weights over a
    common denominator so that exact and floating evolutions share one description."""

    spec: WalkSpec
    indices: tuple[int, ...]
    weights: tuple[int, ...]
    denominator: int
    _gathers: dict = field(default_factory=dict, compare=False, repr=False)
    _plan: list | None = field(default=None, compare=False, repr=False)

    @property
    def size(self) -> int:
        return self.spec.size

    @property
    def support(self) -> list[tuple[int, Fraction]]:
        return [(k, Fraction(w, self.denominator)) for k, w in zip(self.indices, self.weights)]

    def probability(self, index: int) -> Fraction:
        try:
            pos = self.indices.index(index)
        except ValueError:
            return Fraction(0)
        return Fraction(self.weights[pos], self.denominator)

    @cached_property
    def float_weights(self) -> np.ndarray:
        return np.array(self.weights, dtype=np.float64) / self.denominator

    def inverse_index(self, index: int) -> int:
        spec = self.spec
        if spec.is_abelian:
            x = _vector_decode(index, spec.coords, spec.p)
            return _vector_index(tuple((-v) % spec.p for v in x), spec.p)
        return encode_index(mat_inv(decode_index(index, int(spec.n), spec.p)))

    def gather(self, pos: int) -> tuple[np.ndarray, ...]:
        """Per-axis maps sending y to y * g^-1 for the pos-th support element g (None marks
        an axis the element does not move)."""
        if pos not in self._gathers:
            self._gathers[pos] = _axis_maps(self.spec, self.inverse_index(self.indices[pos]))
        return self._gathers[pos]

    def to_dense(self) -> np.ndarray:
        v = np.zeros(self.size)
        v[list(self.indices)] = self.float_weights
        return v


def _axis_maps(spec: WalkSpec, h_index: int) -> tuple[np.ndarray, ...]:
    """Open-mesh index arrays realising y -> y * h on the tensor layout."""
    p = spec.p
    if spec.is_abelian:
        h = _vector_decode(h_index, spec.coords, p)
        base = np.arange(p)
        # axis 0 holds the last coordinate
        return tuple(
            (base + h[c]) % p if h[c] else None for c in reversed(range(spec.coords))
        )
    n = int(spec.n)
    H = decode_index(h_index, n, p).to_array()
    maps = []
    for r in range(n - 1, 0, -1):
        width = n - r
        k = np.arange(p**width, dtype=np.int64)
        digits = np.stack([(k // p**d) % p for d in range(width)], axis=1)
        row = np.concatenate([np.ones((k.size, 1), dtype=np.int64), digits], axis=1)
        new = (row @ H[r - 1 :, r:]) % p
        idx = new @ (p ** np.arange(width, dtype=np.int64))
        maps.append(None if np.array_equal(idx, k) else idx)
    return tuple(maps)


def _class_elements_for_q(n: int, p: int, a: int) -> dict[int, int]:
    from unitri.superclass import conjugacy_class_elements

    counts: dict[int, int] = {}
    for i in range(1, n):
        for x in (1, -1, a, -a):
            for g in conjugacy_class_elements(i, x % p, n, p):
                k = encode_index(g)
                counts[k] = counts.get(k, 0) + 1
    return counts


def build_kernel(spec: WalkSpec) -> WalkKernel:
    p = spec.p
    counts: dict[int, int] = {}
    if spec.kind == "P":
        n = int(spec.n)
        for i in range(1, n):
            for s in (1, -1):
                k = encode_index(UniTriMatrix.elementary(n, p, i, i + 1, s))
                counts[k] = counts.get(k, 0) + 1
        denom = 2 * (n - 1)
    elif spec.kind == "Q":
        n = int(spec.n)
        counts = _class_elements_for_q(n, p, spec.a)
        denom = 4 * (n - 1) * p ** (n - 2)
    else:
        N = spec.coords
        for c in range(N):
            for s in (1, -1, spec.a, -spec.a):
                x = [0] * N
                x[c] = s % p
                k = _vector_index(tuple(x), p)
                counts[k] = counts.get(k, 0) + 1
        denom = 4 * N
    if sum(counts.values()) != denom:
        raise AssertionError(f"kernel weights for {spec.label()} do not sum to 1")
    keys = sorted(counts)
    return WalkKernel(spec, tuple(keys), tuple(counts[k] for k in keys), denom)


@dataclass(frozen=True)
class GroupDistribution:
    """Probability vector over the state space.

    Float mode stores the deviation from the uniform measure rather than the probabilities
    themselves: distances to uniform are then computed without cancelling against 1/|G|, and
    stay accurate long after the distance drops below machine epsilon. Exact mode stores
    integer ``counts`` over a common ``denominator``.
    """

    spec: WalkSpec
    deviation: np.ndarray | None = None
    counts: np.ndarray | None = None
    denominator: int = 1

    @classmethod
    def from_values(cls, spec: WalkSpec, values) -> GroupDistribution:
        v = np.asarray(values, dtype=np.float64)
        if v.shape != (spec.size,):
            raise UsageError(f"expected a vector of length {spec.size}, got shape {v.shape}")
        return cls(spec, deviation=v - 1.0 / spec.size)

    @property
    def exact(self) -> bool:
        return self.counts is not None

    @property
    def size(self) -> int:
        return self.spec.size

    @property
    def values(self) -> np.ndarray:
        if self.exact:
            return np.array([int(c) / self.denominator for c in self.counts], dtype=np.float64)
        return self.deviation + 1.0 / self.size

    def as_fractions(self) -> list[Fraction]:
        if not self.exact:
            raise UsageError("distribution is not in exact mode")
        return [Fraction(int(c), self.denominator) for c in self.counts]

    def to_float(self) -> GroupDistribution:
        if not self.exact:
            return self
        G = self.size
        dev = [float(Fraction(int(c) * G - self.denominator, G * self.denominator)) for c in self.counts]
        return GroupDistribution(self.spec, deviation=np.array(dev))

    def total(self) -> float | Fraction:
        if self.exact:
            return Fraction(sum(int(c) for c in self.counts), self.denominator)
        return 1.0 + math.fsum(self.deviation)

    def __getitem__(self, index: int) -> float | Fraction:
        if self.exact:
            return Fraction(int(self.counts[index]), self.denominator)
        return float(self.deviation[index] + 1.0 / self.size)


def delta_identity(spec: WalkSpec, exact: bool = False) -> GroupDistribution:
    check_budget(spec.size)
    if exact:
        c = np.zeros(spec.size, dtype=object)
        c[0] = 1
        return GroupDistribution(spec, counts=c, denominator=1)
    v = np.full(spec.size, -1.0 / spec.size)
    v[0] += 1.0
    return GroupDistribution(spec, deviation=v)


def uniform(spec: WalkSpec) -> GroupDistribution:
    check_budget(spec.size)
    return GroupDistribution(spec, deviation=np.zeros(spec.size))


def gather_index(maps: tuple, shape: tuple[int, ...], lo: int, hi: int) -> tuple:
    """Index tuple selecting src[y * h] for output rows lo:hi of axis 0.

    Runs of identity axes (None) at either end become plain slices, which keeps copies
    contiguous; the axes in between form one open mesh.
    """
    first = 0
    while first < len(maps) and maps[first] is None:
        first += 1
    if first == len(maps):
        return (slice(lo, hi),) + (slice(None),) * (len(maps) - 1)
    last = len(maps)
    while maps[last - 1] is None:
        last -= 1
    arrays = [np.arange(shape[ax]) if m is None else m for ax, m in enumerate(maps)]
    arrays[0] = arrays[0][lo:hi]
    if first == 0:
        head: tuple = ()
    else:
        head = (slice(lo, hi),) + (slice(None),) * (first - 1)
    tail = (slice(None),) * (len(maps) - last)
    return head + np.ix_(*arrays[first:last]) + tail


def _float_plan(kernel: WalkKernel) -> list[tuple[tuple, sparse.csr_matrix]]:
    """Group support elements by their action on every axis but the last.

    Within a group the last-axis permutations are summed into one sparse matrix, so a group
    costs a single gather plus a sparse product instead of one gather per element.
    """
    if kernel._plan is not None:
        return kernel._plan
    L = kernel.spec.shape[-1]
    cols = np.arange(L)
    groups: dict[tuple, tuple[tuple, list]] = {}
    for pos, w in enumerate(kernel.weights):
        maps = kernel.gather(pos)
        key = tuple(None if m is None else m.tobytes() for m in maps[:-1])
        groups.setdefault(key, (maps[:-1], []))[1].append((maps[-1], w))
    plan = []
    for lead, items in groups.values():
        rows = np.concatenate([cols if m is None else m for m, _ in items])
        vals = np.concatenate([np.full(L, w / kernel.denominator) for _, w in items])
        M = sparse.csr_matrix((vals, (rows, np.tile(cols, len(items)))), shape=(L, L))
        plan.append((lead, M))
    object.__setattr__(kernel, "_plan", plan)
    return plan


def _convolve_float_block(src: np.ndarray, kernel: WalkKernel, lo: int, hi: int) -> np.ndarray:
    L = src.shape[-1]
    out = None
    for lead, M in _float_plan(kernel):
        if src.ndim == 1:
            X = src.reshape(1, L)
        else:
            X = src[gather_index(lead + (None,), src.shape, lo, hi)]
        block_shape = X.shape
        term = np.asarray(X.reshape(-1, L) @ M).reshape(block_shape)
        if out is None:
            out = term
        else:
            out += term
    return out.reshape(-1) if src.ndim == 1 else out


def _convolve_block(src: np.ndarray, kernel: WalkKernel, weights, lo: int, hi: int) -> np.ndarray:
    out = None
    for pos, w in enumerate(weights):
        term = src[gather_index(kernel.gather(pos), src.shape, lo, hi)]
        if out is None:
            out = term * w
        else:
            out += term * w
    return out


def convolve_step(d: GroupDistribution, k: WalkKernel, jobs: int = 1) -> GroupDistribution:
    """result(y) = sum_g d(y g^-1) k(g).

    Support elements are accumulated in a fixed order inside every output cell, and jobs
    only split the output along the first tensor axis, so the result does not depend on
    ``jobs``.
    """
    if d.spec.size != k.size or d.spec.shape != k.spec.shape:
        raise UsageError(f"size mismatch: distribution {d.size} vs kernel {k.size}")
    shape = k.spec.shape
    if d.exact:
        src = d.counts.reshape(shape)
        weights = [int(w) for w in k.weights]
    else:
        src = d.deviation.reshape(shape)
        weights = None
    if d.exact:
        block = lambda lo, hi: _convolve_block(src, k, weights, lo, hi)  # noqa: E731
    else:
        block = lambda lo, hi: _convolve_float_block(src, k, lo, hi)  # noqa: E731
    rows = shape[0]
    jobs = max(1, min(int(jobs), rows)) if len(shape) > 1 else 1
    if jobs == 1:
        out = block(0, rows)
    else:
        bounds = np.linspace(0, rows, jobs + 1).astype(int)
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            parts = list(pool.map(lambda lh: block(*lh), zip(bounds[:-1], bounds[1:])))
        out = np.concatenate(parts, axis=0)
    if d.exact:
        return GroupDistribution(
            d.spec, counts=out.reshape(-1), denominator=d.denominator * k.denominator
        )
    dev = out.reshape(-1)
    # the kernel fixes the uniform measure; drop the rounding drift along it
    dev -= dev.mean()
    return GroupDistribution(d.spec, deviation=dev)


def iter_distributions(
    spec: WalkSpec,
    t_max: int,
    exact: bool = False,
    jobs: int = 1,
    kernel: WalkKernel | None = None,
) -> Iterator[tuple[int, GroupDistribution]]:
    """Yield (t, distribution at time t) for t = 0..t_max, starting from the identity."""
    if t_max < 0:
        raise UsageError("t must be >= 0")
    if exact and t_max > EXACT_MAX_STEPS:
        raise CapacityError(f"exact mode is limited to t <= {EXACT_MAX_STEPS}, got {t_max}")
    kernel = kernel or build_kernel(spec)
    d = delta_identity(spec, exact=exact)
    yield 0, d
    for t in range(1, t_max + 1):
        d = convolve_step(d, kernel, jobs=jobs)
        yield t, d


def exact_distribution(
    spec: WalkSpec, t: int, exact: bool = False, jobs: int = 1
) -> GroupDistribution:
    d = None
    for _, d in iter_distributions(spec, t, exact=exact, jobs=jobs):
        pass
    return d


def tv_distance(d: GroupDistribution) -> float | Fraction:
    """Total variation distance to the uniform measure."""
    if d.exact:
        G = d.size
        den = d.denominator * G
        return Fraction(sum(abs(int(c) * G - d.denominator) for c in d.counts), 2 * den)
    return 0.5 * math.fsum(np.abs(d.deviation))


def l2_distance_sq(d: GroupDistribution) -> float | Fraction:
    """Squared L2 distance to the uniform measure, sum_g (d(g) - 1/|G|)^2."""
    if d.exact:
        G = d.size
        den = d.denominator * G
        return Fraction(sum((int(c) * G - d.denominator) ** 2 for c in d.counts), den * den)
    return math.fsum(d.deviation * d.deviation)


def mixing_time(
    spec: WalkSpec, eps: float, jobs: int = 1, max_steps: int = 10**6
) -> int:
    """Smallest t with TV(t) < eps from the identity (translation invariance makes the
    identity start the worst case)."""
    if not 0 < eps < 1:
        raise UsageError(f"eps must lie in (0, 1), got {eps}")
    kernel = build_kernel(spec)
    d = delta_identity(spec)
    for t in range(max_steps + 1):
        if tv_distance(d) < eps:
            return t
        d = convolve_step(d, kernel, jobs=jobs)
    raise CapacityError(f"no mixing within {max_steps} steps for {spec.label()}")


def tv_curve(
    spec: WalkSpec, t_max: int, t_min: int = 0, exact: bool = False, jobs: int = 1
) -> list[tuple[int, float | Fraction, float | Fraction]]:
    rows = []
    for t, d in iter_distributions(spec, t_max, exact=exact, jobs=jobs):
        if t >= t_min:
            rows.append((t, tv_distance(d), l2_distance_sq(d)))
    return rows
