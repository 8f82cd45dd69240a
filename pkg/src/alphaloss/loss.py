"""The alpha-loss family in the logistic model.

A single order parameter ``alpha`` in (0, inf] interpolates between the
exponential loss (alpha = 1/2), the log-loss (alpha = 1), and a soft 0-1
loss (alpha = inf). On a soft classifier probability p in (0, 1]:

    loss(alpha, p) = alpha/(alpha-1) * (1 - p^(1-1/alpha))

with the continuous extensions -log(p) at alpha = 1 and 1 - p at
alpha = inf. In the logistic model the probability assigned to the true
label is sigmoid(margin) with margin = y * <theta, x>, which gives the
pointwise loss closed-form gradient and Hessian factors implemented here,
along with the landscape constants used by the certificate modules: the
curvature floor of the Hessian factor over a parameter ball, the loss's
Lipschitz constant in theta, and the Lipschitz constants of the risk and
its gradient with respect to 1/alpha.

Numerical policy: every power p^(1-1/alpha) is evaluated as
exp((1-1/alpha) * log p) with log p obtained from log_sigmoid, so large
negative margins neither underflow nor lose precision; the generic-alpha
branch uses expm1 so it stays accurate arbitrarily close to alpha = 1.
Infinity is the exact float inf (exponent exactly 1), never a large
stand-in value.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, UsageError
from .numerics import as_vector, log_sigmoid, log_sigmoid_vec, sigmoid

INFINITY = math.inf

# |1 - 1/alpha| below this switches to the exact log-loss limit branch.
LOG_BRANCH_TOL = 1e-6

# Feature vectors and model points may exceed their balls by this slack.
UNIT_BALL_TOL = 1e-9

__all__ = [
    "INFINITY",
    "LOG_BRANCH_TOL",
    "UNIT_BALL_TOL",
    "Sample",
    "ModelPoint",
    "check_alpha",
    "parse_alpha",
    "format_alpha",
    "alpha_loss",
    "loss_margin",
    "grad_factor",
    "loss_grad",
    "hess_factor",
    "loss_hess",
    "curvature_floor",
    "lipschitz_in_theta",
    "lipschitz_in_inv_alpha",
    "grad_lipschitz_in_inv_alpha",
]


def check_alpha(alpha: float) -> float:
    """Validate the order parameter: a real in (0, inf) or exactly inf."""
    alpha = float(alpha)
    if math.isnan(alpha) or alpha <= 0.0:
        raise DomainError(f"alpha must be positive (or inf), got {alpha!r}")
    return alpha


def parse_alpha(token: str) -> float:
    """Parse an alpha from CLI text: a decimal or the literal ``inf``."""
    text = token.strip().lower()
    if text == "inf":
        return INFINITY
    try:
        value = float(text)
    except ValueError:
        raise DomainError(f"cannot parse alpha from {token!r}") from None
    return check_alpha(value)


def format_alpha(alpha: float) -> str:
    """Shortest round-trip text for an alpha (``inf`` for the infinite one)."""
    return "inf" if math.isinf(alpha) else repr(float(alpha))


def _exponent(alpha: float) -> float:
    """The power 1 - 1/alpha; exactly 1.0 at alpha = inf."""
    return 1.0 - 1.0 / alpha  # 1/inf == 0.0 exactly


@dataclass(frozen=True)
class Sample:
    """A labeled feature vector constrained to the unit ball."""

    x: np.ndarray
    y: int

    def __post_init__(self):
        object.__setattr__(self, "x", as_vector(self.x, "x"))
        if self.y not in (-1, 1):
            raise DomainError(f"label must be -1 or +1, got {self.y!r}")
        norm = float(np.linalg.norm(self.x))
        if norm > 1.0 + UNIT_BALL_TOL:
            raise DomainError(f"feature norm {norm!r} exceeds the unit ball (tolerance {UNIT_BALL_TOL:.0e})")

    @property
    def dim(self) -> int:
        return self.x.shape[0]


@dataclass(frozen=True)
class ModelPoint:
    """A parameter vector together with its hypothesis-ball radius."""

    theta: np.ndarray
    radius: float = field(default=1.0)

    def __post_init__(self):
        object.__setattr__(self, "theta", as_vector(self.theta, "theta"))
        r = float(self.radius)
        if not (r > 0.0) or not math.isfinite(r):
            raise DomainError(f"radius must be positive and finite, got {self.radius!r}")
        object.__setattr__(self, "radius", r)
        norm = float(np.linalg.norm(self.theta))
        if norm > r + UNIT_BALL_TOL:
            raise UsageError(f"theta norm {norm!r} exceeds the radius-{r} ball (tolerance {UNIT_BALL_TOL:.0e})")


# ---------------------------------------------------------------------------
# Pointwise loss and its derivative factors.
# ---------------------------------------------------------------------------


def _loss_from_logp(alpha: float, logp) -> np.ndarray | float:
    """Loss from log-probability; shared by the scalar and array paths."""
    if math.isinf(alpha):
        return -np.expm1(logp)  # 1 - p, stable for p near 1
    u = _exponent(alpha)
    if abs(u) < LOG_BRANCH_TOL:
        return -logp
    return -np.expm1(u * np.asarray(logp)) / u


def alpha_loss(alpha: float, p: float) -> float:
    """Pointwise loss of assigning probability p in (0, 1] to the true label."""
    alpha = check_alpha(alpha)
    p = float(p)
    if not (0.0 < p <= 1.0):
        raise DomainError(f"p must lie in (0, 1], got {p!r}")
    if math.isinf(alpha):
        return 1.0 - p
    u = _exponent(alpha)
    if abs(u) < LOG_BRANCH_TOL:
        return -math.log(p)
    return -math.expm1(u * math.log(p)) / u


def _margin(theta: np.ndarray, s: Sample) -> float:
    if theta.shape[0] != s.dim:
        raise UsageError(f"theta has dim {theta.shape[0]} but sample has dim {s.dim}")
    return s.y * float(np.dot(theta, s.x))


def loss_margin(alpha: float, theta, s: Sample) -> float:
    """Loss of the logistic classifier at a sample: alpha_loss at
    sigmoid(y * <theta, x>), evaluated in the log domain."""
    alpha = check_alpha(alpha)
    theta = as_vector(theta, "theta")
    z = _margin(theta, s)
    return float(_loss_from_logp(alpha, log_sigmoid(z)))


def grad_factor(alpha: float, theta, s: Sample) -> float:
    """Scalar factor of the loss gradient: -y * p^(1-1/alpha) * (1-p)
    with p = sigmoid(y * <theta, x>). The gradient is this times x."""
    alpha = check_alpha(alpha)
    theta = as_vector(theta, "theta")
    z = _margin(theta, s)
    u = _exponent(alpha)
    return -s.y * math.exp(u * log_sigmoid(z)) * sigmoid(-z)


def loss_grad(alpha: float, theta, s: Sample) -> np.ndarray:
    """Gradient of loss_margin with respect to theta: grad_factor * x."""
    return grad_factor(alpha, theta, s) * s.x


def hess_factor(alpha: float, theta, s: Sample) -> float:
    """Scalar factor of the loss Hessian:
    p^(1-1/alpha) * (p(1-p) - (1-1/alpha)(1-p)^2), p = sigmoid(margin).
    The Hessian is this times x x^T."""
    alpha = check_alpha(alpha)
    theta = as_vector(theta, "theta")
    z = _margin(theta, s)
    u = _exponent(alpha)
    p = sigmoid(z)
    q = sigmoid(-z)
    return math.exp(u * log_sigmoid(z)) * (p * q - u * q * q)


def loss_hess(alpha: float, theta, s: Sample) -> np.ndarray:
    """Hessian of loss_margin with respect to theta: hess_factor * x x^T."""
    return hess_factor(alpha, theta, s) * np.outer(s.x, s.x)


# ---------------------------------------------------------------------------
# Vectorized kernels over margin arrays (used by the risk module).
# ---------------------------------------------------------------------------


def sigmoid_vec(z: np.ndarray) -> np.ndarray:
    """Element-wise sigmoid with the same two branches as the scalar one."""
    z = np.asarray(z, dtype=float)
    ez = np.exp(-np.abs(z))
    return np.where(z >= 0.0, 1.0 / (1.0 + ez), ez / (1.0 + ez))


def loss_from_margins(alpha: float, z: np.ndarray) -> np.ndarray:
    """Pointwise losses for an array of margins y * <theta, x>."""
    alpha = check_alpha(alpha)
    return np.asarray(_loss_from_logp(alpha, log_sigmoid_vec(z)), dtype=float)


def loss_from_logp(alpha: float, logp: np.ndarray) -> np.ndarray:
    """Pointwise losses from precomputed log-probabilities (so several
    orders can share one log_sigmoid pass over the same margins)."""
    alpha = check_alpha(alpha)
    return np.asarray(_loss_from_logp(alpha, logp), dtype=float)


def grad_weight_from_logp(alpha: float, logp: np.ndarray) -> np.ndarray:
    """Nonnegative weights w with gradient factor -y * w, from log p:
    w = p^(1-1/alpha) * (1-p), with 1-p evaluated as -expm1(log p)."""
    alpha = check_alpha(alpha)
    u = _exponent(alpha)
    logp = np.asarray(logp, dtype=float)
    return np.exp(u * logp) * (-np.expm1(logp))


def grad_weight_from_margins(alpha: float, z: np.ndarray) -> np.ndarray:
    """Gradient weights for an array of margins."""
    return grad_weight_from_logp(alpha, log_sigmoid_vec(z))


def hess_factor_from_margins(alpha: float, z: np.ndarray) -> np.ndarray:
    """Hessian factors per margin (same formula as hess_factor)."""
    alpha = check_alpha(alpha)
    u = _exponent(alpha)
    logp = log_sigmoid_vec(z)
    p = np.exp(logp)
    q = -np.expm1(logp)
    return np.exp(u * logp) * (p * q - u * q * q)


# ---------------------------------------------------------------------------
# Closed-form landscape constants.
# ---------------------------------------------------------------------------


def _check_radius(r: float) -> float:
    r = float(r)
    if not (r > 0.0) or not math.isfinite(r):
        raise DomainError(f"radius must be positive and finite, got {r!r}")
    return r


def curvature_floor(alpha: float, r: float) -> float:
    """Lower bound of the Hessian factor over margins in [-r, r], valid for
    alpha in (0, 1]; equals the factor evaluated at margin r.

    Strictly positive, and monotonically decreasing in alpha at fixed r, so
    the risk's strong-convexity modulus grows as alpha shrinks.
    """
    alpha = check_alpha(alpha)
    r = _check_radius(r)
    if alpha > 1.0:
        raise DomainError(f"curvature floor requires alpha <= 1, got {alpha!r}")
    u = _exponent(alpha)
    p = sigmoid(r)
    q = sigmoid(-r)
    return math.exp(u * log_sigmoid(r)) * (p * q - u * q * q)


def lipschitz_in_theta(alpha: float, r: float) -> float:
    """Lipschitz constant of the risk in theta over the radius-r ball:
    sigmoid(r) * (1 - sigmoid(r))^(1-1/alpha), for alpha in (0, 1].

    Grows without bound as alpha decreases to 0 at fixed r.
    """
    alpha = check_alpha(alpha)
    r = _check_radius(r)
    if alpha > 1.0:
        raise DomainError(f"lipschitz_in_theta requires alpha <= 1, got {alpha!r}")
    u = _exponent(alpha)
    return sigmoid(r) * math.exp(u * log_sigmoid(-r))


def lipschitz_in_inv_alpha(r: float) -> float:
    """Lipschitz constant of the risk with respect to 1/alpha on alpha in
    [1, inf]: (r + log 2)^2 / 2."""
    r = _check_radius(r)
    return (r + math.log(2.0)) ** 2 / 2.0


def grad_lipschitz_in_inv_alpha(r: float) -> float:
    """Lipschitz constant of the risk gradient with respect to 1/alpha on
    alpha in [1, inf]: (r + log 2) * sigmoid(r)."""
    r = _check_radius(r)
    return (r + math.log(2.0)) * sigmoid(r)
