"""Strict-local-quasi-convexity (SLQC) verification and evolution bounds.

A function f is (epsilon, kappa, theta0)-SLQC at a point theta when at
least one of two conditions holds: the value gap f(theta) - f(theta0) is
at most epsilon, or the gradient is nonzero and -grad f(theta) makes a
nonnegative inner product with every direction from theta into the ball
of radius rho = epsilon/kappa around theta0. For points outside that ball
the second condition is equivalent to the closed form

    <-grad f(theta), theta0 - theta> >= rho * ||grad f(theta)||,

which ``ball_min_inner`` evaluates exactly (it is the minimum of the
inner product over the ball). Points inside the ball that fail the value
gap are classified Neither: the cone condition cannot hold there with a
nonzero gradient.

This module certifies the empirical alpha-risk: strong-convexity moduli
for alpha <= 1, sampled SLQC sweeps, a sampled upper estimate of the
gradient-norm infimum over the high-risk region, and the closed-form
evolution of (epsilon, epsilon/kappa) as alpha grows from a base order.
A sampled sweep is necessarily one-sided evidence; the reports say so.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, UsageError
from .loss import (
    ModelPoint,
    check_alpha,
    curvature_floor,
    grad_lipschitz_in_inv_alpha,
    lipschitz_in_inv_alpha,
    lipschitz_in_theta,
)
from .numerics import RngState, as_vector, min_eigen_sym, sample_ball
from .risk import Dataset, empirical_risk, empirical_risk_grad, risk_grads, risk_values

# Absolute slack applied to both SLQC inequalities; empirical risks are
# finite sums with bounded rounding.
SLQC_TOL = 1e-9

__all__ = [
    "SLQC_TOL",
    "Verdict",
    "SlqcParams",
    "SlqcVerdict",
    "EvolutionRow",
    "ball_min_inner",
    "check_slqc_point",
    "slqc_sweep",
    "strong_convexity_modulus",
    "estimate_grad_infimum",
    "evolution_window",
    "evolve_bounds",
    "evolve_from_log_loss",
    "evolution_to_csv",
]


class Verdict(enum.Enum):
    VALUE_GAP = "value_gap"
    GRADIENT_CONE = "gradient_cone"
    NEITHER = "neither"


@dataclass(frozen=True)
class SlqcParams:
    """The (epsilon, kappa, theta0) triple; rho = epsilon/kappa."""

    epsilon: float
    kappa: float
    theta0: np.ndarray

    def __post_init__(self):
        eps = float(self.epsilon)
        kap = float(self.kappa)
        if not (eps > 0.0) or math.isnan(eps):
            raise DomainError(f"epsilon must be positive, got {self.epsilon!r}")
        if not (kap > 0.0) or not math.isfinite(kap):
            raise DomainError(f"kappa must be positive and finite, got {self.kappa!r}")
        object.__setattr__(self, "epsilon", eps)
        object.__setattr__(self, "kappa", kap)
        object.__setattr__(self, "theta0", as_vector(self.theta0, "theta0"))

    @property
    def rho(self) -> float:
        return self.epsilon / self.kappa


@dataclass(frozen=True)
class SlqcVerdict:
    """Per-point outcome with the three numbers that decided it."""

    point: np.ndarray
    satisfied_by: Verdict
    value_gap: float
    inner: float
    rho_grad_norm: float
    note: str = ""


def ball_min_inner(g, theta, theta0, rho: float) -> float:
    """Exact minimum over theta' in the ball B(theta0, rho) of
    <-g, theta' - theta>, namely <-g, theta0 - theta> - rho * ||g||."""
    g = as_vector(g, "g")
    theta = as_vector(theta, "theta")
    theta0 = as_vector(theta0, "theta0")
    rho = float(rho)
    if not (rho > 0.0) or not math.isfinite(rho):
        raise DomainError(f"rho must be positive and finite, got {rho!r}")
    return float(np.dot(-g, theta0 - theta)) - rho * float(np.linalg.norm(g))


def _classify(theta: np.ndarray, params: SlqcParams, gap: float, grad: np.ndarray) -> SlqcVerdict:
    rho = params.rho
    grad_norm = float(np.linalg.norm(grad))
    inner = float(np.dot(-grad, params.theta0 - theta))
    rho_grad = rho * grad_norm if grad_norm > 0.0 else 0.0
    note = ""
    if gap <= params.epsilon + SLQC_TOL:
        verdict = Verdict.VALUE_GAP
    elif float(np.linalg.norm(theta - params.theta0)) <= rho:
        # inside the rho ball the cone condition needs a zero gradient,
        # which contradicts its own premise; only the value gap can hold
        verdict = Verdict.NEITHER
        note = "inside the epsilon/kappa ball with a failed value gap"
    elif grad_norm > 0.0 and inner - rho_grad >= -SLQC_TOL:
        verdict = Verdict.GRADIENT_CONE
    else:
        verdict = Verdict.NEITHER
    return SlqcVerdict(theta, verdict, gap, inner, rho_grad, note)


def check_slqc_point(alpha: float, theta, params: SlqcParams, data: Dataset, r: float) -> SlqcVerdict:
    """Classify one point of the empirical alpha-risk against (eps, kappa,
    theta0). Both theta and theta0 must lie in the radius-r ball."""
    alpha = check_alpha(alpha)
    point = ModelPoint(theta, r)  # validates the radius constraint
    ModelPoint(params.theta0, r)
    gap = empirical_risk(alpha, point.theta, data) - empirical_risk(alpha, params.theta0, data)
    grad = empirical_risk_grad(alpha, point.theta, data)
    return _classify(point.theta, params, gap, grad)


def slqc_sweep(
    alpha: float,
    params: SlqcParams,
    data: Dataset,
    r: float,
    n_points: int,
    rng: RngState,
    keep_verdicts: bool = False,
) -> dict:
    """Sampled SLQC certificate: classify ``n_points`` uniform points of the
    radius-r ball and tally verdicts.

    Returns a report dict with verdict counts, the worst observed
    diagnostics (largest value gap; smallest cone margin among points past
    the gap), and up to ten Neither diagnostics. Zero Neither verdicts is
    sampled evidence for SLQC, not a proof; the report labels itself
    accordingly.
    """
    alpha = check_alpha(alpha)
    if n_points < 1:
        raise UsageError(f"n_points must be >= 1, got {n_points}")
    ModelPoint(params.theta0, r)
    points = np.stack([sample_ball(rng, data.dim, r) for _ in range(n_points)])
    base = risk_values(alpha, params.theta0, data)[0]
    gaps = risk_values(alpha, points, data) - base
    grads = risk_grads(alpha, points, data)

    def verdict_dict(v: SlqcVerdict) -> dict:
        d = {
            "point": [float(c) for c in v.point],
            "verdict": v.satisfied_by.value,
            "value_gap": v.value_gap,
            "inner": v.inner,
            "rho_grad_norm": v.rho_grad_norm,
        }
        if v.note:
            d["note"] = v.note
        return d

    counts = {v: 0 for v in Verdict}
    worst_gap = -math.inf
    worst_cone = math.inf
    neither = []
    verdicts = []
    for i in range(n_points):
        verdict = _classify(points[i], params, float(gaps[i]), grads[i])
        counts[verdict.satisfied_by] += 1
        worst_gap = max(worst_gap, verdict.value_gap)
        if verdict.satisfied_by is not Verdict.VALUE_GAP:
            worst_cone = min(worst_cone, verdict.inner - verdict.rho_grad_norm)
        if verdict.satisfied_by is Verdict.NEITHER and len(neither) < 10:
            neither.append(verdict_dict(verdict))
        if keep_verdicts:
            verdicts.append(verdict_dict(verdict))

    report = {
        "kind": "sampled SLQC sweep (necessary evidence, not a proof)",
        "params": {
            "epsilon": params.epsilon,
            "kappa": params.kappa,
            "theta0": [float(c) for c in params.theta0],
        },
        "n_points": n_points,
        "counts": {v.value: counts[v] for v in Verdict},
        "worst_value_gap": worst_gap,
        "worst_cone_margin": None if math.isinf(worst_cone) else worst_cone,
        "neither_diagnostics": neither,
    }
    if keep_verdicts:
        report["verdicts"] = verdicts
    return report


def strong_convexity_modulus(alpha: float, r: float, sigma_hat) -> float:
    """Strong-convexity modulus of the risk for alpha <= 1: the curvature
    floor times the smallest eigenvalue of the feature second moment."""
    return curvature_floor(alpha, r) * min_eigen_sym(sigma_hat)


def estimate_grad_infimum(
    alpha0: float,
    epsilon0: float,
    r: float,
    theta0,
    data: Dataset,
    budget: int,
    rng: RngState,
) -> float:
    """Sampled UPPER estimate of the infimum gradient norm over points of
    the radius-r ball whose risk exceeds the theta0 risk by more than
    epsilon0.

    Draws ``budget`` points uniformly from the ball and returns the
    smallest gradient norm among qualifying points; returns inf when no
    sampled point qualifies. Sampling can only over-estimate an infimum,
    so downstream windows computed from this value are optimistic;
    consumers should shrink it by a safety factor when that matters.
    """
    alpha0 = check_alpha(alpha0)
    epsilon0 = float(epsilon0)
    if not (epsilon0 > 0.0) or math.isnan(epsilon0):
        raise DomainError(f"epsilon0 must be positive, got {epsilon0!r}")
    if budget < 1:
        raise UsageError(f"budget must be >= 1, got {budget}")
    theta0 = as_vector(theta0, "theta0")
    points = np.stack([sample_ball(rng, data.dim, r) for _ in range(budget)])
    base = risk_values(alpha0, theta0, data)[0]
    qualifying = risk_values(alpha0, points, data) - base > epsilon0
    if not np.any(qualifying):
        return math.inf
    norms = np.linalg.norm(risk_grads(alpha0, points[qualifying], data), axis=1)
    return float(np.min(norms))


# ---------------------------------------------------------------------------
# Evolution of (epsilon, epsilon/kappa) in alpha.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class EvolutionRow:
    """SLQC parameters claimed at one alpha; no claim outside the window."""

    alpha: float
    epsilon: float | None
    rho: float | None
    in_window: bool


def _check_evolution_inputs(alpha0, epsilon0, kappa0, r, grad_inf, allow_infinite_grad_inf):
    alpha0 = check_alpha(alpha0)
    if math.isinf(alpha0) or alpha0 < 1.0:
        raise DomainError(f"base order must be finite and >= 1, got {alpha0!r}")
    epsilon0 = float(epsilon0)
    kappa0 = float(kappa0)
    r = float(r)
    if not (epsilon0 > 0.0) or not math.isfinite(epsilon0):
        raise DomainError(f"epsilon0 must be positive and finite, got {epsilon0!r}")
    if not (kappa0 > 0.0) or not math.isfinite(kappa0):
        raise DomainError(f"kappa0 must be positive and finite, got {kappa0!r}")
    if not (r > 0.0) or not math.isfinite(r):
        raise DomainError(f"radius must be positive and finite, got {r!r}")
    grad_inf = float(grad_inf)
    if math.isnan(grad_inf) or grad_inf <= 0.0:
        raise DomainError(f"gradient infimum must be positive, got {grad_inf!r}")
    if math.isinf(grad_inf) and not allow_infinite_grad_inf:
        raise DomainError(
            "gradient infimum is the empty-set sentinel inf; pass "
            "allow_infinite_grad_inf=True to treat the window as unbounded"
        )
    return alpha0, epsilon0, kappa0, r, grad_inf


def evolution_window(alpha0: float, epsilon0: float, kappa0: float, r: float, grad_inf: float,
                     allow_infinite_grad_inf: bool = False) -> float:
    """Width of the admissible increase alpha - alpha0: the evolution
    formulas hold strictly below this value."""
    alpha0, epsilon0, kappa0, r, grad_inf = _check_evolution_inputs(
        alpha0, epsilon0, kappa0, r, grad_inf, allow_infinite_grad_inf
    )
    j = grad_lipschitz_in_inv_alpha(r)
    return alpha0 * alpha0 * grad_inf / (2.0 * j * (1.0 + r * kappa0 / epsilon0))


def evolve_bounds(
    alpha0: float,
    epsilon0: float,
    kappa0: float,
    r: float,
    grad_inf: float,
    alphas,
    allow_infinite_grad_inf: bool = False,
) -> list[EvolutionRow]:
    """SLQC parameters (epsilon, rho = epsilon/kappa) at each requested
    alpha >= alpha0, given that the base risk is (epsilon0, kappa0,
    theta0)-SLQC and the gradient infimum over the high-risk region is
    ``grad_inf``.

    Within the window, epsilon grows linearly with slope twice the
    risk's Lipschitz constant in 1/alpha, and rho contracts by the
    closed-form factor; rows outside the window carry no claim. At
    alpha = alpha0 the outputs equal the inputs exactly.
    """
    alpha0, epsilon0, kappa0, r, grad_inf = _check_evolution_inputs(
        alpha0, epsilon0, kappa0, r, grad_inf, allow_infinite_grad_inf
    )
    window = evolution_window(alpha0, epsilon0, kappa0, r, grad_inf, allow_infinite_grad_inf)
    big_l = lipschitz_in_inv_alpha(r)
    j = grad_lipschitz_in_inv_alpha(r)
    rho0 = epsilon0 / kappa0
    rows = []
    for alpha in alphas:
        alpha = check_alpha(alpha)
        if alpha < alpha0:
            raise UsageError(f"evolution targets must satisfy alpha >= alpha0, got {alpha!r} < {alpha0!r}")
        delta = alpha - alpha0
        if not (delta < window):
            rows.append(EvolutionRow(alpha, None, None, False))
            continue
        eps = epsilon0 + 2.0 * big_l * delta
        denom = alpha * alpha0 * grad_inf - j * delta
        frac = (1.0 + 2.0 * r * kappa0 / epsilon0) * j * delta / denom
        rows.append(EvolutionRow(alpha, eps, rho0 * (1.0 - frac), True))
    return rows


def evolve_from_log_loss(
    epsilon0: float,
    r: float,
    grad_inf: float,
    alphas,
    allow_infinite_grad_inf: bool = False,
) -> list[EvolutionRow]:
    """Evolution from the log-loss base order alpha0 = 1, whose kappa0 is
    the risk's Lipschitz constant in theta, sigmoid(r)."""
    return evolve_bounds(
        1.0,
        epsilon0,
        lipschitz_in_theta(1.0, r),
        r,
        grad_inf,
        alphas,
        allow_infinite_grad_inf,
    )


def evolution_to_csv(rows) -> str:
    """Serialize evolution rows: header alpha,epsilon,rho,in_window; rows
    outside the window leave epsilon and rho empty."""
    lines = ["alpha,epsilon,rho,in_window"]
    for row in rows:
        eps = "" if row.epsilon is None else f"{row.epsilon:.17g}"
        rho = "" if row.rho is None else f"{row.rho:.17g}"
        alpha = "inf" if math.isinf(row.alpha) else f"{row.alpha:.17g}"
        lines.append(f"{alpha},{eps},{rho},{'true' if row.in_window else 'false'}")
    return "\n".join(lines) + "\n"
