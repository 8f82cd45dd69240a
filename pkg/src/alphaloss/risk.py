"""Empirical risk of the alpha-loss over a dataset, with gradient and
Hessian, landscape grid scans, and the saturation-distance scan.

The population risk is an expectation; this artifact works with its
empirical counterpart over seeded finite samples and says so in every
output's metadata. Sample sums use exactly-rounded compensated summation
(math.fsum), which makes every risk value independent of summation order
and therefore identical across platforms and worker counts. Heavy paths
(grid scans, point sweeps) evaluate margins for blocks of parameter
points at once but feed the same per-sample quantities to the same
summation, so batched and one-at-a-time calls agree bit for bit.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass, field
from typing import Iterator

import numpy as np

from .errors import DomainError, UsageError
from .loss import (
    Sample,
    UNIT_BALL_TOL,
    check_alpha,
    format_alpha,
    grad_weight_from_logp,
    hess_factor_from_margins,
    loss_from_logp,
)
from .numerics import log_sigmoid_vec

MAX_GRID_NODES = 10_000_000

# Cap on elements per evaluation block; keeps intermediates ~tens of MB.
_BLOCK_ELEMENTS = 4_000_000

__all__ = [
    "Dataset",
    "GridSpec",
    "LandscapeTable",
    "empirical_risk",
    "empirical_risk_grad",
    "empirical_risk_hess",
    "risk_value_grad",
    "value_and_grad",
    "risk_values",
    "risk_values_multi",
    "risk_grads",
    "landscape_scan",
    "saturation_sup",
]


@dataclass(frozen=True)
class Dataset:
    """Labeled feature vectors in the unit ball; immutable once built."""

    xs: np.ndarray
    ys: np.ndarray

    def __post_init__(self):
        xs = np.ascontiguousarray(np.asarray(self.xs, dtype=float))
        ys = np.asarray(self.ys)
        if xs.ndim != 2 or xs.shape[0] < 1 or xs.shape[1] < 1:
            raise UsageError(f"features must be a nonempty 2-D array, got shape {xs.shape}")
        if ys.shape != (xs.shape[0],):
            raise UsageError(f"labels shape {ys.shape} does not match {xs.shape[0]} samples")
        if not np.all(np.isfinite(xs)):
            raise DomainError("features contain non-finite entries")
        if not np.all(np.isin(ys, (-1, 1))):
            raise DomainError("labels must be -1 or +1")
        norms = np.linalg.norm(xs, axis=1)
        worst = float(np.max(norms))
        if worst > 1.0 + UNIT_BALL_TOL:
            raise DomainError(
                f"feature norm {worst!r} exceeds the unit ball (tolerance {UNIT_BALL_TOL:.0e})"
            )
        object.__setattr__(self, "xs", xs)
        object.__setattr__(self, "ys", np.ascontiguousarray(ys.astype(np.int64)))

    @classmethod
    def from_samples(cls, samples) -> "Dataset":
        samples = list(samples)
        if not samples:
            raise UsageError("dataset must contain at least one sample")
        dims = {s.dim for s in samples}
        if len(dims) != 1:
            raise UsageError(f"samples disagree on dimension: {sorted(dims)}")
        return cls(np.stack([s.x for s in samples]), np.array([s.y for s in samples]))

    @property
    def n(self) -> int:
        return self.xs.shape[0]

    @property
    def dim(self) -> int:
        return self.xs.shape[1]

    def samples(self) -> Iterator[Sample]:
        for i in range(self.n):
            yield Sample(self.xs[i], int(self.ys[i]))

    def second_moment(self) -> np.ndarray:
        """Sample mean of x x^T (exactly-rounded entry sums)."""
        d = self.dim
        out = np.empty((d, d))
        for j in range(d):
            for k in range(j, d):
                v = math.fsum((self.xs[:, j] * self.xs[:, k]).tolist()) / self.n
                out[j, k] = v
                out[k, j] = v
        return out

    def content_digest(self) -> str:
        """Short stable identifier of the dataset contents."""
        h = hashlib.sha256()
        h.update(np.ascontiguousarray(self.xs).tobytes())
        h.update(np.ascontiguousarray(self.ys).tobytes())
        return h.hexdigest()[:16]


def _check_dims(theta: np.ndarray, data: Dataset):
    if theta.shape[-1] != data.dim:
        raise UsageError(f"theta dim {theta.shape[-1]} does not match dataset dim {data.dim}")


def _as_points(thetas) -> np.ndarray:
    pts = np.asarray(thetas, dtype=float)
    if pts.ndim == 1:
        pts = pts[None, :]
    if pts.ndim != 2:
        raise UsageError(f"expected an (m, d) array of points, got shape {pts.shape}")
    if not np.all(np.isfinite(pts)):
        raise DomainError("parameter points contain non-finite entries")
    return pts


def _blocks(m: int, n: int) -> Iterator[slice]:
    rows = max(1, _BLOCK_ELEMENTS // max(1, n))
    for start in range(0, m, rows):
        yield slice(start, min(start + rows, m))


def _fsum_rows(block: np.ndarray) -> list[float]:
    return [math.fsum(block[i].tolist()) for i in range(block.shape[0])]


def risk_values_multi(alphas, thetas, data: Dataset) -> np.ndarray:
    """Empirical risks at each row of ``thetas`` for several orders at once,
    sharing one margin and log-probability pass; returns (points, orders)."""
    alphas = [check_alpha(a) for a in alphas]
    pts = _as_points(thetas)
    _check_dims(pts, data)
    n = data.n
    signed = data.xs * data.ys[:, None]  # margins are theta . (y x)
    out = np.empty((pts.shape[0], len(alphas)))
    for sl in _blocks(pts.shape[0], n):
        logp = log_sigmoid_vec(pts[sl] @ signed.T)
        for k, alpha in enumerate(alphas):
            out[sl, k] = [s / n for s in _fsum_rows(loss_from_logp(alpha, logp))]
    return out


def risk_values(alpha: float, thetas, data: Dataset) -> np.ndarray:
    """Empirical risks at each row of ``thetas``; blocked but order-exact."""
    return risk_values_multi([alpha], thetas, data)[:, 0]


def risk_grads(alpha: float, thetas, data: Dataset) -> np.ndarray:
    """Empirical risk gradients at each row of ``thetas``."""
    alpha = check_alpha(alpha)
    pts = _as_points(thetas)
    _check_dims(pts, data)
    n, d = data.n, data.dim
    signed = data.xs * data.ys[:, None]
    out = np.empty((pts.shape[0], d))
    for sl in _blocks(pts.shape[0], n):
        logp = log_sigmoid_vec(pts[sl] @ signed.T)
        factors = -grad_weight_from_logp(alpha, logp) * data.ys[None, :]
        for j in range(d):
            out[sl, j] = [s / n for s in _fsum_rows(factors * data.xs[None, :, j])]
    return out


def empirical_risk(alpha: float, theta, data: Dataset) -> float:
    """Mean pointwise loss over the dataset at parameter ``theta``."""
    return float(risk_values(alpha, theta, data)[0])


def empirical_risk_grad(alpha: float, theta, data: Dataset) -> np.ndarray:
    """Gradient of the empirical risk at ``theta``."""
    return risk_grads(alpha, theta, data)[0]


def empirical_risk_hess(alpha: float, theta, data: Dataset) -> np.ndarray:
    """Hessian of the empirical risk at ``theta``: mean of factor * x x^T."""
    alpha = check_alpha(alpha)
    pts = _as_points(theta)
    _check_dims(pts, data)
    n, d = data.n, data.dim
    margins = (pts @ (data.xs * data.ys[:, None]).T)[0]
    factors = hess_factor_from_margins(alpha, margins)
    out = np.empty((d, d))
    for j in range(d):
        for k in range(j, d):
            v = math.fsum((factors * data.xs[:, j] * data.xs[:, k]).tolist()) / n
            out[j, k] = v
            out[k, j] = v
    return out


def risk_value_grad(alpha: float, theta, data: Dataset) -> tuple[float, np.ndarray]:
    """Risk and its gradient in one margin pass (for optimizer loops)."""
    alpha = check_alpha(alpha)
    pts = _as_points(theta)
    _check_dims(pts, data)
    n, d = data.n, data.dim
    logp = log_sigmoid_vec((pts @ (data.xs * data.ys[:, None]).T)[0])
    value = math.fsum(loss_from_logp(alpha, logp).tolist()) / n
    factors = -grad_weight_from_logp(alpha, logp) * data.ys
    grad = np.array([math.fsum((factors * data.xs[:, j]).tolist()) / n for j in range(d)])
    return value, grad


def value_and_grad(alpha: float, data: Dataset):
    """Objective oracle theta -> (risk, gradient) bound to a dataset."""
    alpha = check_alpha(alpha)

    def oracle(theta):
        return risk_value_grad(alpha, theta, data)

    return oracle


# ---------------------------------------------------------------------------
# Grid scans.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GridSpec:
    """Rectangular evaluation grid with an optional ball mask.

    ``axes`` is one (min, max, count) triple per dimension; nodes enumerate
    in row-major order (last axis fastest). With ``mask_radius`` set, nodes
    with norm beyond the radius (1e-12 slack) are omitted.
    """

    axes: tuple[tuple[float, float, int], ...]
    mask_radius: float | None = None

    def __post_init__(self):
        axes = tuple((float(lo), float(hi), int(count)) for lo, hi, count in self.axes)
        if not axes:
            raise UsageError("grid needs at least one axis")
        for lo, hi, count in axes:
            if count < 2:
                raise UsageError(f"grid axis needs count >= 2, got {count}")
            if not (lo < hi):
                raise UsageError(f"grid axis needs min < max, got [{lo}, {hi}]")
        object.__setattr__(self, "axes", axes)
        if self.mask_radius is not None:
            r = float(self.mask_radius)
            if not (r > 0.0) or not math.isfinite(r):
                raise DomainError(f"mask radius must be positive and finite, got {self.mask_radius!r}")
            object.__setattr__(self, "mask_radius", r)
        total = 1
        for _, _, count in axes:
            total *= count
        if total > MAX_GRID_NODES:
            raise UsageError(f"grid has {total} nodes, more than the {MAX_GRID_NODES} allowed")

    @property
    def dim(self) -> int:
        return len(self.axes)

    def nodes(self) -> np.ndarray:
        """All (masked) grid nodes as an (m, d) array in row-major order."""
        lines = [np.linspace(lo, hi, count) for lo, hi, count in self.axes]
        mesh = np.meshgrid(*lines, indexing="ij")
        pts = np.stack([m.ravel() for m in mesh], axis=1)
        if self.mask_radius is not None:
            keep = np.linalg.norm(pts, axis=1) <= self.mask_radius + 1e-12
            pts = pts[keep]
        return pts


@dataclass(frozen=True)
class LandscapeTable:
    """Risk values over grid nodes plus the metadata to regenerate them."""

    thetas: np.ndarray
    risks: np.ndarray
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.thetas.shape[0] != self.risks.shape[0]:
            raise UsageError("row count mismatch between nodes and risks")
        if np.any(self.risks < 0):
            raise DomainError("risk values must be nonnegative")

    def to_csv(self) -> str:
        d = self.thetas.shape[1]
        lines = [f"# {key} = {value}" for key, value in self.metadata.items()]
        lines.append(",".join([f"theta_{j + 1}" for j in range(d)] + ["risk"]))
        for row, risk in zip(self.thetas, self.risks):
            lines.append(",".join(f"{v:.17g}" for v in list(row) + [risk]))
        return "\n".join(lines) + "\n"


def landscape_scan(alpha: float, grid: GridSpec, data: Dataset, metadata: dict | None = None) -> LandscapeTable:
    """Empirical risk at every grid node, row-major, masked nodes omitted."""
    alpha = check_alpha(alpha)
    if grid.dim != data.dim:
        raise UsageError(f"grid dim {grid.dim} does not match dataset dim {data.dim}")
    nodes = grid.nodes()
    risks = risk_values(alpha, nodes, data)
    meta = {
        "alpha": format_alpha(alpha),
        "r": "none" if grid.mask_radius is None else repr(grid.mask_radius),
        "dataset": data.content_digest(),
    }
    if metadata:
        meta.update(metadata)
    return LandscapeTable(nodes, risks, meta)


def saturation_sup(alpha: float, alpha2: float, grid: GridSpec, data: Dataset) -> float:
    """Largest grid-node gap |risk(alpha) - risk(alpha2)| between two orders.

    Both orders must lie in [1, inf]; the gap obeys the Lipschitz-in-1/alpha
    bound L_r * |1/alpha - 1/alpha2| when the grid sits inside the radius-r
    ball.
    """
    alpha = check_alpha(alpha)
    alpha2 = check_alpha(alpha2)
    if alpha < 1.0 or alpha2 < 1.0:
        raise DomainError(f"saturation scan requires both orders >= 1, got {alpha!r}, {alpha2!r}")
    if grid.dim != data.dim:
        raise UsageError(f"grid dim {grid.dim} does not match dataset dim {data.dim}")
    values = risk_values_multi([alpha, alpha2], grid.nodes(), data)
    return float(np.max(np.abs(values[:, 0] - values[:, 1])))
