import numpy as np
import pytest

from alphaloss.data import normalize_features, preset, sample_gmm
from alphaloss.numerics import RngState


@pytest.fixture(scope="session")
def fig2_small():
    """Balanced shared-covariance mixture, small for unit tests."""
    raw = sample_gmm(preset("fig2"), 400, RngState(42))
    data, _ = normalize_features(raw)
    return data


@pytest.fixture(scope="session")
def fig2_n5000():
    """The certificate-scale dataset: fig2 preset, n=5000, seed 42."""
    raw = sample_gmm(preset("fig2"), 5000, RngState(42))
    data, _ = normalize_features(raw)
    return data


def fd_grad(f, x, h=1e-5):
    """Central-difference gradient of a scalar function."""
    x = np.asarray(x, dtype=float)
    out = np.empty_like(x)
    for j in range(x.size):
        step = np.zeros_like(x)
        step[j] = h
        out[j] = (f(x + step) - f(x - step)) / (2.0 * h)
    return out


def fd_jacobian(g, x, h=1e-5):
    """Central-difference Jacobian of a vector function (used on gradients)."""
    x = np.asarray(x, dtype=float)
    cols = []
    for j in range(x.size):
        step = np.zeros_like(x)
        step[j] = h
        cols.append((g(x + step) - g(x - step)) / (2.0 * h))
    return np.stack(cols, axis=1)


def rel_err(approx, exact, floor=1e-12):
    """Norm-relative error with an absolute floor for near-zero targets."""
    approx = np.asarray(approx, dtype=float)
    exact = np.asarray(exact, dtype=float)
    denom = max(float(np.linalg.norm(exact)), floor)
    return float(np.linalg.norm(approx - exact)) / denom
