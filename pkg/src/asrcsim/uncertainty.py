"""Lumped-uncertainty machinery: the regressor, the true lumped term, and a
conservative linear-in-parameters bound synthesized from plant constants.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import Array, ConfigurationError
from .linalg import spectral_norm

SUP_SAFETY_FACTOR = 1.05


def regressor(xi_norm: float, order: str = "three_term") -> Array:
    """[1, ||xi||] or [1, ||xi||, ||xi||^2]."""
    if xi_norm < 0:
        raise ConfigurationError("xi_norm must be nonnegative")
    if order == "two_term":
        return np.array([1.0, xi_norm])
    if order == "three_term":
        return np.array([1.0, xi_norm, xi_norm * xi_norm])
    raise ConfigurationError(f"unknown regressor order: {order}")


@dataclass(frozen=True)
class ThetaStar:
    """Coefficients bounding the lumped uncertainty: ||sigma|| <= Y(xi)^T Theta*."""

    theta0: float
    theta1: float
    theta2: float

    def as_array(self, order: str = "three_term") -> Array:
        if order == "three_term":
            return np.array([self.theta0, self.theta1, self.theta2])
        if order == "two_term":
            if self.theta2 != 0.0:
                raise ConfigurationError(
                    "two_term bound invalid: quadratic coefficient is nonzero"
                )
            return np.array([self.theta0, self.theta1])
        raise ConfigurationError(f"unknown regressor order: {order}")

    def scaled(self, factor: float) -> "ThetaStar":
        return ThetaStar(self.theta0 * factor, self.theta1 * factor, self.theta2 * factor)


def rho_bound(theta: ThetaStar, xi_norm: float, order: str = "three_term") -> float:
    """Y(xi)^T Theta for a given bound vector."""
    return float(regressor(xi_norm, order) @ theta.as_array(order))


def sigma_true(plant, q: Array, qdot: Array, traj, omega: Array, t: float) -> Array:
    """The exact lumped uncertainty at (q, qdot, t) for a known plant.

    sigma = -(C qd + g + f + d_s + M qdd_ref - M Omega ed - C e_f).
    Analysis/test use only; controllers never see it.
    """
    q = np.asarray(q, dtype=float)
    qdot = np.asarray(qdot, dtype=float)
    omega = np.asarray(omega, dtype=float)
    e = q - traj.position(t)
    edot = qdot - traj.velocity(t)
    e_f = edot + omega @ e
    m = plant.eval_M(q, t)
    c = plant.eval_C(q, qdot)
    val = (
        c @ qdot
        + plant.eval_g(q)
        + plant.eval_f(qdot)
        + plant.eval_ds(t)
        + m @ traj.acceleration(t)
        - m @ (omega @ edot)
        - c @ e_f
    )
    return -val


def theta_star_synthesize(
    constants, omega: Array, sup_speed: float, sup_accel: float
) -> ThetaStar:
    """Conservative bound coefficients from plant constants and reference sups.

    Terms are grouped by powers of ||xi||; valid because ||qd|| <= ||xi|| +
    sup||qd_ref|| and the C-terms of sigma collapse to C (Omega e - qd_ref).
    """
    if sup_speed < 0 or sup_accel < 0:
        raise ConfigurationError("trajectory sup norms must be nonnegative")
    w = spectral_norm(np.asarray(omega, dtype=float))
    theta0 = (
        constants.g_b
        + constants.f_b * sup_speed
        + constants.d_bar
        + constants.mu2 * sup_accel
        + constants.c_b * sup_speed * sup_speed
    )
    theta1 = constants.f_b + constants.mu2 * w + constants.c_b * sup_speed * (1.0 + w)
    theta2 = constants.c_b * w
    return ThetaStar(theta0, theta1, theta2)
