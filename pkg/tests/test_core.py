import math

import numpy as np
import pytest

from asrcsim import (
    ConfigurationError,
    ConstantTrajectory,
    ControllerConfig,
    RampTrajectory,
    SinusoidTrajectory,
    filtered_error,
    gamma_matrix,
    gamma_norm,
    trajectory_sups,
    xi_norm_bounds_check,
)


def default_cfg(**overrides):
    base = dict(omega=np.eye(2), g=np.eye(2), varpi=0.5)
    base.update(overrides)
    return ControllerConfig(**base)


class TestFilteredError:
    def test_hand_values(self):
        ts = filtered_error([1.0, -1.0], [0.5, 0.5], 2.0 * np.eye(2))
        assert np.allclose(ts.e_f, [2.5, -1.5])
        assert np.allclose(ts.xi, [1.0, -1.0, 0.5, 0.5])
        assert ts.xi_norm == pytest.approx(math.sqrt(2.5), rel=1e-15)
        assert ts.e_f_norm == pytest.approx(math.sqrt(8.5), rel=1e-15)

    def test_zero_errors(self):
        ts = filtered_error([0.0, 0.0], [0.0, 0.0], np.eye(2))
        assert ts.xi_norm == 0.0
        assert ts.e_f_norm == 0.0
        assert np.all(ts.e_f == 0.0)

    def test_nonidentity_omega_mixes_components(self):
        omega = np.array([[1.0, 0.5], [0.0, 2.0]])
        ts = filtered_error([1.0, 2.0], [0.0, 0.0], omega)
        assert np.allclose(ts.e_f, omega @ [1.0, 2.0])

    def test_dimension_mismatch_rejected(self):
        with pytest.raises(ConfigurationError):
            filtered_error([1.0, 2.0], [1.0, 2.0, 3.0], np.eye(2))
        with pytest.raises(ConfigurationError):
            filtered_error([1.0, 2.0], [1.0, 2.0], np.eye(3))

    def test_xi_norm_dominates_component_norms(self):
        rng = np.random.default_rng(3)
        for _ in range(100):
            e = rng.normal(size=2)
            ed = rng.normal(size=2)
            ts = filtered_error(e, ed, np.eye(2))
            assert xi_norm_bounds_check(ts)
            assert ts.xi_norm >= np.linalg.norm(e) - 1e-12
            assert ts.xi_norm >= np.linalg.norm(ed) - 1e-12


class TestGammaBlock:
    def test_gamma_matrix_layout(self):
        omega = 2.0 * np.eye(2)
        gm = gamma_matrix(omega)
        assert gm.shape == (2, 4)
        assert np.allclose(gm, [[2, 0, 1, 0], [0, 2, 0, 1]])

    def test_gamma_norm_values(self):
        assert gamma_norm(np.eye(2)) == pytest.approx(math.sqrt(2.0), rel=1e-12)
        assert gamma_norm(2.0 * np.eye(2)) == pytest.approx(math.sqrt(5.0), rel=1e-12)

    def test_gamma_norm_bounds_ef(self):
        rng = np.random.default_rng(5)
        omega = np.array([[1.5, 0.3], [0.3, 2.0]])
        gn = gamma_norm(omega)
        for _ in range(100):
            ts = filtered_error(rng.normal(size=2), rng.normal(size=2), omega)
            assert ts.e_f_norm <= gn * ts.xi_norm + 1e-12


class TestControllerConfigValidate:
    def test_defaults_pass(self):
        assert default_cfg().validate() == []

    @pytest.mark.parametrize(
        "overrides, needle",
        [
            (dict(omega=np.array([[1.0, 0.0], [0.0, -1.0]])), "omega"),
            (dict(omega=np.ones((2, 3))), "omega"),
            (dict(g=np.zeros((2, 2))), "g:"),
            (dict(varpi=0.0), "varpi"),
            (dict(varpi=-0.5), "varpi"),
            (dict(alpha=(10.0, 10.0, 10.0)), "alpha"),
            (dict(alpha=(10.0, 0.0, 10.0, 10.0)), "alpha"),
            (dict(beta=0.0), "beta"),
            (dict(varsigma=-1.0), "varsigma"),
            (dict(theta_init=(20.0, 0.0, 20.0)), "theta_init"),
            (dict(gamma_init=0.1), "gamma_init"),
            (dict(regressor_order="four_term"), "regressor_order"),
        ],
    )
    def test_each_violation_reported(self, overrides, needle):
        messages = default_cfg(**overrides).validate()
        assert any(needle in m for m in messages), messages

    def test_gamma_init_equal_beta_rejected(self):
        # the floor inequality is strict
        messages = default_cfg(beta=0.1, gamma_init=0.1).validate()
        assert any("gamma_init" in m for m in messages)


class TestTrajectories:
    def test_ramp_values(self):
        traj = RampTrajectory(rate=(4.0, 3.0), offset=(0.1, -0.2))
        assert np.allclose(traj.position(2.0), [8.1, 5.8])
        assert np.allclose(traj.velocity(17.0), [4.0, 3.0])
        assert np.all(traj.acceleration(1.0) == 0.0)

    def test_constant_values(self):
        traj = ConstantTrajectory(position_value=(0.3, -0.2))
        assert np.allclose(traj.position(5.0), [0.3, -0.2])
        assert np.all(traj.velocity(5.0) == 0.0)
        assert np.all(traj.acceleration(5.0) == 0.0)

    def test_sinusoid_values(self):
        traj = SinusoidTrajectory(amplitude=(0.8, 1.2), omega=(1.5, 1.0))
        t = 0.7
        assert np.allclose(
            traj.position(t), [0.8 * math.sin(1.05), 1.2 * math.sin(0.7)]
        )
        assert np.allclose(
            traj.velocity(t), [1.2 * math.cos(1.05), 1.2 * math.cos(0.7)]
        )
        assert np.allclose(
            traj.acceleration(t),
            [-0.8 * 2.25 * math.sin(1.05), -1.2 * math.sin(0.7)],
        )

    def test_sinusoid_phase_shift(self):
        traj = SinusoidTrajectory(
            amplitude=(1.0,), omega=(2.0,), phase=(math.pi / 2.0,)
        )
        assert traj.position(0.0)[0] == pytest.approx(1.0, rel=1e-15)
        assert traj.velocity(0.0)[0] == pytest.approx(0.0, abs=1e-15)

    @pytest.mark.parametrize(
        "traj",
        [
            RampTrajectory(rate=(4.0, 3.0), offset=(0.0, 0.0)),
            SinusoidTrajectory(amplitude=(0.8, 1.2), omega=(1.5, 1.0)),
        ],
    )
    def test_velocity_consistent_with_position(self, traj):
        eps = 1e-6
        for t in (0.0, 0.37, 1.9):
            fd = (traj.position(t + eps) - traj.position(t - eps)) / (2.0 * eps)
            assert np.allclose(fd, traj.velocity(t), atol=1e-6)
            fd2 = (traj.velocity(t + eps) - traj.velocity(t - eps)) / (2.0 * eps)
            assert np.allclose(fd2, traj.acceleration(t), atol=1e-6)


class TestTrajectorySups:
    def test_ramp_sups_exact(self):
        traj = RampTrajectory(rate=(4.0, 3.0), offset=(0.0, 0.0))
        sup_v, sup_a = trajectory_sups(traj, 40.0, 0.02)
        assert sup_v == 5.0
        assert sup_a == 0.0

    def test_sinusoid_sups_near_analytic(self):
        # ||v||^2 = 4 cos^2 2t + 4 cos^2 t peaks at t=0 with value 8;
        # ||a||^2 = 16 sin^2 2t + 4 sin^2 t peaks at sin^2 t = 17/32
        # with value (17/4)^2
        traj = SinusoidTrajectory(amplitude=(1.0, 2.0), omega=(2.0, 1.0))
        sup_v, sup_a = trajectory_sups(traj, 10.0, 0.001)
        assert sup_v == pytest.approx(2.0 * math.sqrt(2.0), rel=1e-6)
        assert sup_a == pytest.approx(4.25, rel=1e-6)
        assert sup_v <= 2.0 * math.sqrt(2.0) + 1e-12
        assert sup_a <= 4.25 + 1e-12

    def test_nonpositive_horizon_rejected(self):
        traj = ConstantTrajectory(position_value=(0.0, 0.0))
        with pytest.raises(ConfigurationError):
            trajectory_sups(traj, 0.0, 0.02)
        with pytest.raises(ConfigurationError):
            trajectory_sups(traj, 10.0, 0.0)
