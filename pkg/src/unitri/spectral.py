"""Closed-form spectra of the cycle and product walks, numeric spectra of small kernels,
and the eigenvalue bound on total variation."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from unitri.errors import CapacityError, UsageError
from unitri.walks import WalkKernel, WalkSpec, gather_index, build_kernel, closest_odd_sqrt

DENSE_BUDGET = 2000
JACOBI_MAX = 256


def k_eigenvalue(x: int, p: int, a: int) -> float:
    """(1/2) cos(2 pi x a / p) + (1/2) cos(2 pi x / p)."""
    return 0.5 * math.cos(2 * math.pi * x * a / p) + 0.5 * math.cos(2 * math.pi * x / p)


def product_eigenvalue(x_vec, p: int, a: int) -> float:
    N = len(x_vec)
    if N == 0:
        raise UsageError("empty coordinate vector")
    s = sum(
        math.cos(2 * math.pi * x * a / p) + math.cos(2 * math.pi * x / p) for x in x_vec
    )
    return s / (2 * N)


def k_spectrum(p: int, a: int | None = None) -> np.ndarray:
    a = closest_odd_sqrt(p) if a is None else a
    return np.sort([k_eigenvalue(x, p, a) for x in range(p)])[::-1]


def product_spectrum(N: int, p: int, a: int | None = None) -> np.ndarray:
    a = closest_odd_sqrt(p) if a is None else a
    vals = [product_eigenvalue(x, p, a) for x in itertools.product(range(p), repeat=N)]
    return np.sort(vals)[::-1]


def cycle_l2_sum(p: int, a: int, t: int) -> float:
    """sum_{x=1}^{p-1} lambda_x^(2t), the squared L2 distance of the cycle walk at time t."""
    return math.fsum(k_eigenvalue(x, p, a) ** (2 * t) for x in range(1, p))


@dataclass(frozen=True)
class Spectrum:
    eigenvalues: np.ndarray
    method: str = "closed-form"
    max_residual: float = 0.0

    def __post_init__(self) -> None:
        vals = np.sort(np.asarray(self.eigenvalues, dtype=np.float64))[::-1]
        object.__setattr__(self, "eigenvalues", vals)

    def __len__(self) -> int:
        return len(self.eigenvalues)

    @property
    def top(self) -> float:
        return float(self.eigenvalues[0])


def transition_matrix(spec: WalkSpec, kernel: WalkKernel | None = None) -> np.ndarray:
    """Dense matrix M[x, y] = probability of moving from x to y."""
    kernel = kernel or build_kernel(spec)
    size = spec.size
    if size > DENSE_BUDGET:
        raise CapacityError(f"dense transition matrix of size {size} exceeds {DENSE_BUDGET}")
    ids = np.arange(size).reshape(spec.shape)
    M = np.zeros((size, size))
    rows = np.arange(size)
    for pos, w in enumerate(kernel.float_weights):
        # ids[x g^-1] enumerated over x; the kernel is symmetric so g^-1 ranges over the support
        target = ids[gather_index(kernel.gather(pos), spec.shape, 0, spec.shape[0])].reshape(-1)
        M[rows, target] += w
    return M


def jacobi_eigh(A: np.ndarray, tol: float = 1e-12, max_sweeps: int = 100):
    """Cyclic Jacobi rotations for a real symmetric matrix.

    Sweeps every (p, q) pair in row order until the off-diagonal Frobenius norm drops below
    ``tol``. Returns (eigenvalues, eigenvectors as columns), unsorted.
    """
    A = np.array(A, dtype=np.float64)
    n = A.shape[0]
    if A.shape != (n, n) or not np.allclose(A, A.T, atol=1e-14):
        raise UsageError("jacobi_eigh needs a square symmetric matrix")
    V = np.eye(n)

    off = ~np.eye(n, dtype=bool)

    def off_norm() -> float:
        return float(np.linalg.norm(A[off]))

    for _ in range(max_sweeps):
        if off_norm() < tol:
            return np.diag(A).copy(), V
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = A[p, q]
                if abs(apq) < 1e-300:
                    continue
                tau = (A[q, q] - A[p, p]) / (2.0 * apq)
                t = math.copysign(1.0, tau) / (abs(tau) + math.sqrt(1.0 + tau * tau))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = t * c
                colp, colq = A[:, p].copy(), A[:, q].copy()
                A[:, p] = c * colp - s * colq
                A[:, q] = s * colp + c * colq
                rowp, rowq = A[p, :].copy(), A[q, :].copy()
                A[p, :] = c * rowp - s * rowq
                A[q, :] = s * rowp + c * rowq
                A[p, q] = A[q, p] = 0.0
                vp, vq = V[:, p].copy(), V[:, q].copy()
                V[:, p] = c * vp - s * vq
                V[:, q] = s * vp + c * vq
    raise RuntimeError(f"Jacobi iteration did not converge in {max_sweeps} sweeps")


def symmetric_spectrum(M: np.ndarray, method: str = "auto", residual_tol: float = 1e-8) -> Spectrum:
    size = M.shape[0]
    if method == "auto":
        method = "jacobi" if size <= JACOBI_MAX else "lapack"
    if method == "jacobi":
        vals, vecs = jacobi_eigh(M)
    elif method == "lapack":
        vals, vecs = np.linalg.eigh(M)
    else:
        raise UsageError(f"unknown eigensolver {method!r}")
    res = np.linalg.norm(M @ vecs - vecs * vals, axis=0)
    worst = float(res.max()) if res.size else 0.0
    if worst >= residual_tol:
        raise RuntimeError(f"eigen-pair residual {worst:.3e} exceeds {residual_tol}")
    return Spectrum(vals, method=method, max_residual=worst)


def transition_spectrum(spec: WalkSpec, method: str = "auto") -> Spectrum:
    """All eigenvalues of the symmetric transition matrix, descending."""
    if spec.size > DENSE_BUDGET:
        raise CapacityError(f"|G| = {spec.size} exceeds the dense spectrum budget {DENSE_BUDGET}")
    return symmetric_spectrum(transition_matrix(spec), method=method)


def closed_form_spectrum(spec: WalkSpec) -> Spectrum:
    if spec.kind == "K":
        return Spectrum(k_spectrum(spec.p, spec.a))
    if spec.kind == "ProductQ":
        return Spectrum(product_spectrum(int(spec.N), spec.p, spec.a))
    if spec.kind == "Q" and spec.n == 2:
        return Spectrum(k_spectrum(spec.p, spec.a))
    if spec.kind == "P" and spec.n == 2:
        return Spectrum([math.cos(2 * math.pi * x / spec.p) for x in range(spec.p)])
    raise UsageError(f"no closed form for {spec.label()}")


def eigen_tv_bound(spectrum: Spectrum, t: int) -> float:
    """sum over non-top eigenvalues of lambda^(2t), an upper bound on 4 TV^2."""
    if t < 0:
        raise UsageError("t must be >= 0")
    return math.fsum(float(v) ** (2 * t) for v in spectrum.eigenvalues[1:])
