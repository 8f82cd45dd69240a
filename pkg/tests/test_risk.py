import math

import numpy as np
import pytest

from alphaloss.errors import DomainError, UsageError
from alphaloss.loss import INFINITY, Sample, curvature_floor, grad_lipschitz_in_inv_alpha, lipschitz_in_inv_alpha, loss_margin
from alphaloss.numerics import min_eigen_sym, sigmoid
from alphaloss.risk import (
    Dataset,
    GridSpec,
    empirical_risk,
    empirical_risk_grad,
    empirical_risk_hess,
    landscape_scan,
    risk_value_grad,
    risk_values,
    saturation_sup,
    value_and_grad,
)

from conftest import fd_grad, fd_jacobian, rel_err


def risk_at_origin(alpha: float) -> float:
    """Closed form: the classifier at theta = 0 assigns 1/2 everywhere."""
    if math.isinf(alpha):
        return 0.5
    if alpha == 1.0:
        return math.log(2.0)
    return alpha / (alpha - 1.0) * (1.0 - 2.0 ** (1.0 / alpha - 1.0))


def tiny_dataset():
    xs = np.array([[0.7, 0.1], [-0.3, 0.5], [0.2, -0.9], [0.1, 0.1], [-0.6, -0.6]])
    ys = np.array([1, -1, 1, -1, 1])
    return Dataset(xs, ys)


class TestDataset:
    def test_rejects_empty(self):
        with pytest.raises(UsageError):
            Dataset(np.empty((0, 2)), np.empty(0))

    def test_rejects_bad_labels(self):
        with pytest.raises(DomainError):
            Dataset(np.array([[0.1, 0.1]]), np.array([2]))

    def test_rejects_norm_violations(self):
        with pytest.raises(DomainError):
            Dataset(np.array([[1.0, 1.0]]), np.array([1]))

    def test_from_samples_and_iteration(self):
        data = Dataset.from_samples([Sample([0.1, 0.2], 1), Sample([0.3, 0.0], -1)])
        assert data.n == 2 and data.dim == 2
        assert [s.y for s in data.samples()] == [1, -1]

    def test_from_samples_dim_mismatch(self):
        with pytest.raises(UsageError):
            Dataset.from_samples([Sample([0.1], 1), Sample([0.1, 0.2], 1)])

    def test_second_moment_matches_direct_mean(self, fig2_small):
        direct = fig2_small.xs.T @ fig2_small.xs / fig2_small.n
        assert np.allclose(fig2_small.second_moment(), direct, atol=1e-12)

    def test_content_digest_stable(self, fig2_small):
        assert fig2_small.content_digest() == fig2_small.content_digest()


class TestEmpiricalRisk:
    def test_closed_form_at_origin(self, fig2_small):
        for alpha in (0.5, 1.0, 2.0, 4.0, INFINITY):
            assert empirical_risk(alpha, np.zeros(2), fig2_small) == pytest.approx(
                risk_at_origin(alpha), abs=1e-12
            )

    def test_single_sample_value(self):
        data = Dataset(np.array([[1.0, 0.0]]), np.array([1]))
        assert empirical_risk(1.0, [5.0, 0.0], data) == pytest.approx(
            0.006715348489118069, rel=1e-12
        )

    def test_matches_mean_of_pointwise_losses(self, fig2_small):
        rng = np.random.default_rng(15)
        for alpha in (0.5, 1.0, 2.0, INFINITY):
            theta = rng.normal(size=2)
            independent = math.fsum(
                loss_margin(alpha, theta, s) for s in fig2_small.samples()
            ) / fig2_small.n
            assert empirical_risk(alpha, theta, fig2_small) == pytest.approx(independent, rel=1e-13)

    def test_nonincreasing_in_alpha(self, fig2_small):
        rng = np.random.default_rng(31)
        grid = (0.5, 1.0, 2.0, 4.0, 10.0, INFINITY)
        for _ in range(5):
            theta = rng.normal(size=2) * 2
            vals = [empirical_risk(a, theta, fig2_small) for a in grid]
            assert all(x >= y - 1e-12 for x, y in zip(vals, vals[1:]))

    def test_infinite_order_is_mean_misclassification_mass(self, fig2_small):
        rng = np.random.default_rng(8)
        for _ in range(5):
            theta = rng.normal(size=2) * 3
            margins = fig2_small.ys * (fig2_small.xs @ theta)
            independent = math.fsum(sigmoid(-z) for z in margins) / fig2_small.n
            assert empirical_risk(INFINITY, theta, fig2_small) == pytest.approx(independent, rel=1e-13)

    def test_dimension_mismatch(self, fig2_small):
        with pytest.raises(UsageError):
            empirical_risk(1.0, np.zeros(3), fig2_small)

    def test_batch_matches_single(self, fig2_small):
        rng = np.random.default_rng(77)
        pts = rng.normal(size=(7, 2))
        batch = risk_values(2.0, pts, fig2_small)
        singles = [empirical_risk(2.0, p, fig2_small) for p in pts]
        assert np.array_equal(batch, np.array(singles))


class TestRiskDerivatives:
    def test_gradient_mirrored_cancellation(self):
        xs = np.array([[0.4, 0.3], [0.4, 0.3], [-0.2, 0.8], [-0.2, 0.8]])
        ys = np.array([1, -1, 1, -1])
        data = Dataset(xs, ys)
        for alpha in (0.5, 1.0, 2.0, INFINITY):
            assert np.array_equal(empirical_risk_grad(alpha, np.zeros(2), data), np.zeros(2))

    def test_single_sample_gradient(self):
        data = Dataset(np.array([[1.0, 0.0]]), np.array([1]))
        assert empirical_risk_grad(1.0, np.zeros(2), data) == pytest.approx([-0.5, 0.0])

    def test_gradient_matches_finite_differences(self, fig2_small):
        rng = np.random.default_rng(5)
        for alpha in (0.5, 1.0, 2.0, 10.0, INFINITY):
            theta = rng.normal(size=2) * 2
            exact = empirical_risk_grad(alpha, theta, fig2_small)
            approx = fd_grad(lambda t: empirical_risk(alpha, t, fig2_small), theta)
            assert rel_err(exact, approx) < 1e-6

    def test_hessian_matches_finite_differences(self, fig2_small):
        rng = np.random.default_rng(6)
        for alpha in (0.5, 1.0, 2.0, 10.0, INFINITY):
            theta = rng.normal(size=2)
            exact = empirical_risk_hess(alpha, theta, fig2_small)
            approx = fd_jacobian(lambda t: empirical_risk_grad(alpha, t, fig2_small), theta)
            assert rel_err(exact, 0.5 * (approx + approx.T)) < 1e-5

    def test_single_sample_hessian(self):
        data = Dataset(np.array([[1.0, 0.0]]), np.array([1]))
        h = empirical_risk_hess(1.0, np.zeros(2), data)
        assert h == pytest.approx(np.array([[0.25, 0.0], [0.0, 0.0]]))

    def test_hessian_floor_certificate_small(self, fig2_small):
        r = 5.0
        moment_floor = min_eigen_sym(fig2_small.second_moment())
        rng = np.random.default_rng(99)
        for alpha in (0.5, 1.0):
            bound = curvature_floor(alpha, r) * moment_floor
            for _ in range(20):
                theta = rng.normal(size=2)
                theta = theta / np.linalg.norm(theta) * rng.uniform(0, r)
                lam = min_eigen_sym(empirical_risk_hess(alpha, theta, fig2_small))
                assert lam >= bound - 1e-8

    def test_value_and_grad_oracle_consistent(self, fig2_small):
        oracle = value_and_grad(2.0, fig2_small)
        theta = np.array([0.5, -1.0])
        value, grad = oracle(theta)
        assert value == empirical_risk(2.0, theta, fig2_small)
        assert np.array_equal(grad, empirical_risk_grad(2.0, theta, fig2_small))
        v2, g2 = risk_value_grad(2.0, theta, fig2_small)
        assert v2 == value and np.array_equal(g2, grad)


class TestLipschitzCertificates:
    PAIRS = ((1.0, 2.0), (2.0, 4.0), (4.0, INFINITY))

    def test_risk_lipschitz_in_inv_alpha(self, fig2_small):
        r = 5.0
        big_l = lipschitz_in_inv_alpha(r)
        rng = np.random.default_rng(12)
        for _ in range(50):
            theta = rng.normal(size=2)
            theta = theta / np.linalg.norm(theta) * rng.uniform(0, r)
            for a, b in self.PAIRS:
                gap = abs(empirical_risk(a, theta, fig2_small) - empirical_risk(b, theta, fig2_small))
                inv_gap = abs(1.0 / a - (0.0 if math.isinf(b) else 1.0 / b))
                assert gap <= big_l * inv_gap + 1e-9

    def test_gradient_lipschitz_in_inv_alpha(self, fig2_small):
        r = 5.0
        big_j = grad_lipschitz_in_inv_alpha(r)
        rng = np.random.default_rng(13)
        for _ in range(50):
            theta = rng.normal(size=2)
            theta = theta / np.linalg.norm(theta) * rng.uniform(0, r)
            for a, b in self.PAIRS:
                diff = np.linalg.norm(
                    empirical_risk_grad(a, theta, fig2_small) - empirical_risk_grad(b, theta, fig2_small)
                )
                inv_gap = abs(1.0 / a - (0.0 if math.isinf(b) else 1.0 / b))
                assert diff <= big_j * inv_gap + 1e-9


class TestGridSpec:
    def test_validation(self):
        with pytest.raises(UsageError):
            GridSpec(((0.0, 1.0, 1),))
        with pytest.raises(UsageError):
            GridSpec(((1.0, 1.0, 3),))
        with pytest.raises(UsageError):
            GridSpec(((0.0, 1.0, 4000), (0.0, 1.0, 4000)))  # 1.6e7 nodes
        with pytest.raises(DomainError):
            GridSpec(((0.0, 1.0, 3),), mask_radius=-1.0)

    def test_row_major_order(self):
        grid = GridSpec(((-1.0, 1.0, 3), (-1.0, 1.0, 2)))
        nodes = grid.nodes()
        expected = np.array(
            [[-1, -1], [-1, 1], [0, -1], [0, 1], [1, -1], [1, 1]], dtype=float
        )
        assert np.array_equal(nodes, expected)

    def test_mask_keeps_ball_only(self):
        grid = GridSpec(((-1.0, 1.0, 5), (-1.0, 1.0, 5)), mask_radius=1.0)
        nodes = grid.nodes()
        assert np.all(np.linalg.norm(nodes, axis=1) <= 1.0 + 1e-12)
        assert nodes.shape[0] == 13  # 25 minus the 12 outside the unit disc


class TestLandscape:
    def test_center_row_is_log2(self, fig2_small):
        grid = GridSpec(((-1.0, 1.0, 3), (-1.0, 1.0, 3)))
        table = landscape_scan(1.0, grid, fig2_small)
        center = np.where((table.thetas == 0).all(axis=1))[0]
        assert center.size == 1
        assert table.risks[center[0]] == pytest.approx(math.log(2.0), abs=1e-12)

    def test_deterministic_bytes(self, fig2_small):
        grid = GridSpec(((-2.0, 2.0, 7), (-2.0, 2.0, 7)), mask_radius=2.0)
        a = landscape_scan(1.5, grid, fig2_small).to_csv()
        b = landscape_scan(1.5, grid, fig2_small).to_csv()
        assert a == b

    def test_larger_alpha_flattens_the_surface(self, fig2_small):
        grid = GridSpec(((-5.0, 5.0, 11), (-5.0, 5.0, 11)), mask_radius=5.0)
        high = landscape_scan(10.0, grid, fig2_small)
        low = landscape_scan(1.0, grid, fig2_small)
        assert high.risks.max() < low.risks.max()

    def test_csv_shape_and_metadata(self, fig2_small):
        grid = GridSpec(((-1.0, 1.0, 3), (-1.0, 1.0, 3)))
        table = landscape_scan(INFINITY, grid, fig2_small, metadata={"seed": 42})
        text = table.to_csv()
        lines = text.strip().split("\n")
        comments = [l for l in lines if l.startswith("#")]
        assert any("alpha = inf" in c for c in comments)
        assert any("seed = 42" in c for c in comments)
        header = [l for l in lines if l.startswith("theta_1")][0]
        assert header == "theta_1,theta_2,risk"
        assert len([l for l in lines if not l.startswith("#")]) == 1 + 9

    def test_grid_dim_mismatch(self, fig2_small):
        with pytest.raises(UsageError):
            landscape_scan(1.0, GridSpec(((-1.0, 1.0, 3),)), fig2_small)


class TestSaturation:
    def test_same_order_gives_zero(self, fig2_small):
        grid = GridSpec(((-1.0, 1.0, 3), (-1.0, 1.0, 3)))
        assert saturation_sup(2.0, 2.0, grid, fig2_small) == 0.0

    def test_spot_value_at_origin(self, fig2_small):
        # theta = 0: |risk(4) - risk(inf)| has a dataset-free closed form
        gap = abs(empirical_risk(4.0, np.zeros(2), fig2_small) - empirical_risk(INFINITY, np.zeros(2), fig2_small))
        assert gap == pytest.approx(0.04052858999818596, abs=1e-9)

    def test_bounded_by_lipschitz_constant(self):
        data = tiny_dataset()
        grid = GridSpec(((-5.0, 5.0, 9), (-5.0, 5.0, 9)), mask_radius=5.0)
        big_l = lipschitz_in_inv_alpha(5.0)
        assert saturation_sup(1.0, 2.0, grid, data) <= big_l * 0.5 + 1e-9
        assert saturation_sup(4.0, INFINITY, grid, data) <= big_l * 0.25 + 1e-9

    def test_rejects_orders_below_one(self, fig2_small):
        grid = GridSpec(((-1.0, 1.0, 3), (-1.0, 1.0, 3)))
        with pytest.raises(DomainError):
            saturation_sup(0.5, 2.0, grid, fig2_small)
