"""Overflow-safe scalar functions, small dense linear algebra, and a
deterministic PRNG.

Everything here is dependency-light on purpose: the eigensolver and the
Cholesky factorization are written out for small dense symmetric matrices
(the experiments live in d = 2), and the random stream is a xoshiro256++
generator seeded through splitmix64 so that a seed reproduces the exact
byte sequence of draws on every platform. Tolerances are module constants
and appear verbatim in error messages.

All functions except RngState advancement are pure. An RngState is
single-owner; concurrent work should derive independent child streams via
``RngState.spawn``.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import DomainError, NumericError, UsageError

SYM_TOL = 1e-12
JACOBI_TOL = 1e-12
JACOBI_MAX_SWEEPS = 100
CHOLESKY_RESIDUAL_TOL = 1e-10

__all__ = [
    "SYM_TOL",
    "JACOBI_TOL",
    "JACOBI_MAX_SWEEPS",
    "CHOLESKY_RESIDUAL_TOL",
    "as_vector",
    "as_sym_matrix",
    "sigmoid",
    "log_sigmoid",
    "project_ball",
    "min_eigen_sym",
    "cholesky",
    "RngState",
    "sample_ball",
]


def as_vector(v, name: str = "vector") -> np.ndarray:
    """Validate and return ``v`` as a finite 1-D float64 array (dim >= 1)."""
    arr = np.asarray(v, dtype=float)
    if arr.ndim != 1 or arr.size < 1:
        raise UsageError(f"{name} must be a 1-D array with at least one entry, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise DomainError(f"{name} has non-finite entries")
    return arr


def as_sym_matrix(a, name: str = "matrix") -> np.ndarray:
    """Validate ``a`` as a finite square matrix, symmetric within SYM_TOL.

    The returned matrix is exactly symmetrized ((A + A^T)/2) so downstream
    factorizations never see the residual asymmetry.
    """
    arr = np.asarray(a, dtype=float)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] < 1:
        raise UsageError(f"{name} must be square, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise DomainError(f"{name} has non-finite entries")
    skew = float(np.max(np.abs(arr - arr.T)))
    if skew > SYM_TOL:
        raise DomainError(
            f"{name} is not symmetric: max |A - A^T| = {skew:.3e} exceeds tolerance {SYM_TOL:.0e}"
        )
    return 0.5 * (arr + arr.T)


def _check_finite_scalar(z: float, name: str) -> float:
    z = float(z)
    if not math.isfinite(z):
        raise DomainError(f"{name} must be finite, got {z!r}")
    return z


def sigmoid(z: float) -> float:
    """Logistic function 1/(1+e^-z), computed branch-wise so neither branch
    ever exponentiates a positive argument."""
    z = _check_finite_scalar(z, "z")
    if z >= 0.0:
        return 1.0 / (1.0 + math.exp(-z))
    ez = math.exp(z)
    return ez / (1.0 + ez)


def log_sigmoid(z: float) -> float:
    """log(sigmoid(z)) = -softplus(-z), accurate for |z| up to ~700.

    Never underflows to -inf for finite input: for large positive z the
    result is the tiny negative -e^-z computed through log1p.
    """
    z = _check_finite_scalar(z, "z")
    if z >= 0.0:
        return -math.log1p(math.exp(-z))
    return z - math.log1p(math.exp(z))


def log_sigmoid_vec(z: np.ndarray) -> np.ndarray:
    """Vectorized log_sigmoid using the same two branches element-wise."""
    z = np.asarray(z, dtype=float)
    return np.minimum(z, 0.0) - np.log1p(np.exp(-np.abs(z)))


def project_ball(v, r: float) -> np.ndarray:
    """Euclidean projection of ``v`` onto the origin-centered ball of radius r.

    Identity inside the ball; radial rescale v * (r/||v||) outside. The
    membership test carries a 4e-15 relative slack so that a just-projected
    vector (whose recomputed norm may round a few ulp past r) is returned
    unchanged, making the projection exactly idempotent.
    """
    arr = as_vector(v)
    r = float(r)
    if not (r > 0.0) or not math.isfinite(r):
        raise DomainError(f"radius must be positive and finite, got {r!r}")
    norm = float(np.linalg.norm(arr))
    if norm <= r * (1.0 + 4e-15):
        return arr
    return arr * (r / norm)


def min_eigen_sym(a) -> float:
    """Smallest eigenvalue of a symmetric matrix via cyclic Jacobi rotations.

    Sweeps the strict upper triangle in a fixed row-major order, rotating
    each off-diagonal entry to zero, until the off-diagonal Frobenius norm
    drops below JACOBI_TOL. Deterministic; at most JACOBI_MAX_SWEEPS sweeps.
    """
    mat = as_sym_matrix(a).copy()
    d = mat.shape[0]
    if d == 1:
        return float(mat[0, 0])

    def off_norm(m):
        return math.sqrt(float(np.sum(np.tril(m, -1) ** 2) * 2.0))

    for _ in range(JACOBI_MAX_SWEEPS):
        if off_norm(mat) < JACOBI_TOL:
            return float(np.min(np.diag(mat)))
        for p in range(d - 1):
            for q in range(p + 1, d):
                apq = mat[p, q]
                if apq == 0.0:
                    continue
                tau = (mat[q, q] - mat[p, p]) / (2.0 * apq)
                if tau >= 0.0:
                    t = 1.0 / (tau + math.sqrt(1.0 + tau * tau))
                else:
                    t = -1.0 / (-tau + math.sqrt(1.0 + tau * tau))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = t * c
                rot = np.eye(d)
                rot[p, p] = c
                rot[q, q] = c
                rot[p, q] = s
                rot[q, p] = -s
                mat = rot.T @ mat @ rot
                mat = 0.5 * (mat + mat.T)
    residual = off_norm(mat)
    if residual < JACOBI_TOL:
        return float(np.min(np.diag(mat)))
    raise NumericError(
        f"Jacobi eigensolver did not converge in {JACOBI_MAX_SWEEPS} sweeps; "
        f"off-diagonal norm {residual:.3e} still exceeds {JACOBI_TOL:.0e}"
    )


def cholesky(a) -> np.ndarray:
    """Lower-triangular L with L L^T = A for symmetric positive definite A.

    Raises DomainError naming the order of the failing leading minor when a
    pivot is not strictly positive.
    """
    mat = as_sym_matrix(a)
    d = mat.shape[0]
    low = np.zeros_like(mat)
    for i in range(d):
        for j in range(i + 1):
            acc = mat[i, j] - float(np.dot(low[i, :j], low[j, :j]))
            if i == j:
                if acc <= 0.0:
                    raise DomainError(
                        f"matrix is not positive definite: leading minor of order {i + 1} "
                        f"has non-positive pivot {acc:.6e}"
                    )
                low[i, i] = math.sqrt(acc)
            else:
                low[i, j] = acc / low[j, j]
    return low


# ---------------------------------------------------------------------------
# Deterministic randomness: splitmix64-seeded xoshiro256++.
# ---------------------------------------------------------------------------

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


def _mix64(z: int) -> int:
    """splitmix64 output function; a strong 64-bit finalizer."""
    z = (z + _GOLDEN) & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


def _rotl(x: int, k: int) -> int:
    return ((x << k) | (x >> (64 - k))) & _MASK64


class RngState:
    """xoshiro256++ stream seeded by splitmix64; fully deterministic.

    The raw 64-bit and uniform streams are identical byte-for-byte across
    platforms (pure integer arithmetic). Gaussian deviates are produced by
    Box-Muller from the uniform stream and inherit the platform's libm
    rounding in cos/sin/log, which is identical in practice on IEEE-754
    doubles.

    Splitting: ``spawn(i)`` derives a child whose seed is
    ``mix64(seed + (i + 1) * GOLDEN)``, so sharded work is reproducible
    independent of worker count.
    """

    __slots__ = ("seed", "_s")

    def __init__(self, seed: int):
        seed = int(seed) & _MASK64
        self.seed = seed
        state = seed
        s = []
        for _ in range(4):
            state = (state + _GOLDEN) & _MASK64
            s.append(_mix64(state))
        if not any(s):
            s[0] = 1
        self._s = s

    def spawn(self, index: int) -> "RngState":
        """Child stream for shard ``index``; documented hash of (seed, index)."""
        if index < 0:
            raise UsageError(f"stream index must be non-negative, got {index}")
        return RngState(_mix64((self.seed + (index + 1) * _GOLDEN) & _MASK64))

    def next_u64(self) -> int:
        s = self._s
        result = (_rotl((s[0] + s[3]) & _MASK64, 23) + s[0]) & _MASK64
        t = (s[1] << 17) & _MASK64
        s[2] ^= s[0]
        s[3] ^= s[1]
        s[1] ^= s[2]
        s[0] ^= s[3]
        s[2] ^= t
        s[3] = _rotl(s[3], 45)
        return result

    def uniform(self) -> float:
        """Uniform double in [0, 1) with 53 random bits."""
        return (self.next_u64() >> 11) * 2.0**-53

    def gaussian_pair(self) -> tuple[float, float]:
        """Two independent standard normal deviates via Box-Muller.

        Consumes exactly two uniforms: u1 in (0, 1] for the radius (so the
        log never sees zero) and u2 in [0, 1) for the angle.
        """
        u1 = ((self.next_u64() >> 11) + 1) * 2.0**-53
        u2 = self.uniform()
        radius = math.sqrt(-2.0 * math.log(u1))
        angle = 2.0 * math.pi * u2
        return radius * math.cos(angle), radius * math.sin(angle)


def sample_ball(rng: RngState, dim: int, radius: float) -> np.ndarray:
    """One point uniform on the ball of given radius, by rejection from the
    bounding cube. Advances ``rng`` a data-dependent number of steps."""
    if dim < 1:
        raise UsageError(f"dim must be >= 1, got {dim}")
    radius = float(radius)
    if not (radius > 0.0) or not math.isfinite(radius):
        raise DomainError(f"radius must be positive and finite, got {radius!r}")
    while True:
        point = np.array([(2.0 * rng.uniform() - 1.0) * radius for _ in range(dim)])
        if float(np.dot(point, point)) <= radius * radius:
            return point
