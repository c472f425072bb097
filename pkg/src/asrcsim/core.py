"""Core value types: tracking errors, controller configuration, trajectories.

Everything here is an immutable value; operations are pure.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .linalg import is_positive_definite, spectral_norm

Array = np.ndarray

REGRESSOR_ORDERS = ("two_term", "three_term")


class ConfigurationError(ValueError):
    """Raised when inputs violate a documented precondition."""


class InvariantError(RuntimeError):
    """Raised when an internal invariant (e.g. a gain floor) is broken."""


@dataclass(frozen=True)
class TrackingState:
    """Tracking errors at one control tick.

    e_f = e_dot + Omega e is the filtered error; xi stacks [e, e_dot].
    """

    e: Array
    e_dot: Array
    xi: Array
    e_f: Array
    xi_norm: float
    e_f_norm: float


def filtered_error(e: Array, e_dot: Array, omega: Array) -> TrackingState:
    """Build a TrackingState from raw errors and the filter matrix Omega."""
    e = np.asarray(e, dtype=float)
    e_dot = np.asarray(e_dot, dtype=float)
    omega = np.asarray(omega, dtype=float)
    if e.shape != e_dot.shape or e.ndim != 1:
        raise ConfigurationError("e and e_dot must be 1-d arrays of equal length")
    if omega.shape != (e.size, e.size):
        raise ConfigurationError("Omega must be n x n for n = len(e)")
    e_f = e_dot + omega @ e
    xi = np.concatenate([e, e_dot])
    return TrackingState(
        e=e,
        e_dot=e_dot,
        xi=xi,
        e_f=e_f,
        xi_norm=float(np.linalg.norm(xi)),
        e_f_norm=float(np.linalg.norm(e_f)),
    )


def xi_norm_bounds_check(ts: TrackingState, tol: float = 1e-12) -> bool:
    """True iff the stored xi norm dominates both error norms (up to tol)."""
    ne = float(np.linalg.norm(ts.e))
    nd = float(np.linalg.norm(ts.e_dot))
    return ts.xi_norm >= ne - tol and ts.xi_norm >= nd - tol


def gamma_matrix(omega: Array) -> Array:
    """The n x 2n block [Omega  I] mapping xi to e_f."""
    omega = np.asarray(omega, dtype=float)
    return np.hstack([omega, np.eye(omega.shape[0])])


def gamma_norm(omega: Array) -> float:
    """Spectral norm of [Omega I]; bounds ||e_f|| <= ||Gamma|| ||xi||."""
    return spectral_norm(gamma_matrix(omega))


@dataclass(frozen=True)
class ControllerConfig:
    """Gains and shaping parameters shared by all three control laws.

    alpha holds (alpha0, alpha1, alpha2, alpha3); beta is the floor kept
    under gamma; varsigma scales the gamma decrease rate; varpi is the
    boundary-layer width.
    """

    omega: Array
    g: Array
    varpi: float
    alpha: tuple[float, float, float, float] = (10.0, 10.0, 10.0, 10.0)
    beta: float = 0.1
    varsigma: float = 10.0
    theta_init: tuple[float, float, float] = (20.0, 20.0, 20.0)
    gamma_init: float = 20.0
    regressor_order: str = "three_term"

    def __post_init__(self) -> None:
        object.__setattr__(self, "omega", np.asarray(self.omega, dtype=float))
        object.__setattr__(self, "g", np.asarray(self.g, dtype=float))
        object.__setattr__(self, "alpha", tuple(float(a) for a in self.alpha))
        object.__setattr__(self, "theta_init", tuple(float(v) for v in self.theta_init))

    def validate(self) -> list[str]:
        """Return human-readable violations; empty means valid."""
        out: list[str] = []
        if self.omega.ndim != 2 or self.omega.shape[0] != self.omega.shape[1]:
            out.append("omega: must be a square matrix")
        elif not is_positive_definite(self.omega):
            out.append("omega: must be positive definite")
        if self.g.ndim != 2 or self.g.shape[0] != self.g.shape[1]:
            out.append("g: must be a square matrix")
        elif not is_positive_definite(self.g):
            out.append("g: must be positive definite")
        if not self.varpi > 0:
            out.append("varpi: boundary layer must be > 0")
        if len(self.alpha) != 4:
            out.append("alpha: exactly four rates required")
        elif any(a <= 0 for a in self.alpha):
            out.append("alpha: all rates must be > 0")
        if not self.beta > 0:
            out.append("beta: gamma floor must be > 0")
        if not self.varsigma > 0:
            out.append("varsigma: must be > 0")
        if any(v <= 0 for v in self.theta_init):
            out.append("theta_init: initial gains must be > 0")
        if not self.gamma_init > self.beta:
            out.append("gamma_init: must exceed beta")
        if self.regressor_order not in REGRESSOR_ORDERS:
            out.append("regressor_order: must be one of %s" % (REGRESSOR_ORDERS,))
        return out


@dataclass(frozen=True)
class SinusoidTrajectory:
    """q_d(t) = amplitude * sin(omega t + phase), per joint."""

    amplitude: tuple[float, ...]
    omega: tuple[float, ...]
    phase: tuple[float, ...] = ()

    def __post_init__(self) -> None:
        phase = self.phase if self.phase else (0.0,) * len(self.amplitude)
        object.__setattr__(self, "amplitude", tuple(float(v) for v in self.amplitude))
        object.__setattr__(self, "omega", tuple(float(v) for v in self.omega))
        object.__setattr__(self, "phase", tuple(float(v) for v in phase))

    def position(self, t: float) -> Array:
        a = np.asarray(self.amplitude)
        w = np.asarray(self.omega)
        p = np.asarray(self.phase)
        return a * np.sin(w * t + p)

    def velocity(self, t: float) -> Array:
        a = np.asarray(self.amplitude)
        w = np.asarray(self.omega)
        p = np.asarray(self.phase)
        return a * w * np.cos(w * t + p)

    def acceleration(self, t: float) -> Array:
        a = np.asarray(self.amplitude)
        w = np.asarray(self.omega)
        p = np.asarray(self.phase)
        return -a * w * w * np.sin(w * t + p)


@dataclass(frozen=True)
class RampTrajectory:
    """q_d(t) = offset + rate * t (constant-speed reference)."""

    rate: tuple[float, ...]
    offset: tuple[float, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "rate", tuple(float(v) for v in self.rate))
        object.__setattr__(self, "offset", tuple(float(v) for v in self.offset))

    def position(self, t: float) -> Array:
        return np.asarray(self.offset) + np.asarray(self.rate) * t

    def velocity(self, t: float) -> Array:
        return np.asarray(self.rate, dtype=float).copy()

    def acceleration(self, t: float) -> Array:
        return np.zeros(len(self.rate))


@dataclass(frozen=True)
class ConstantTrajectory:
    """A fixed set-point."""

    position_value: tuple[float, ...]

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "position_value", tuple(float(v) for v in self.position_value)
        )

    def position(self, t: float) -> Array:
        return np.asarray(self.position_value, dtype=float).copy()

    def velocity(self, t: float) -> Array:
        return np.zeros(len(self.position_value))

    def acceleration(self, t: float) -> Array:
        return np.zeros(len(self.position_value))


def trajectory_sups(traj, horizon_s: float, sample_dt: float) -> tuple[float, float]:
    """Sampled sup norms of the reference velocity and acceleration.

    Sampled at sample_dt over [0, horizon]; raises if any sample is
    non-finite (the reference must be bounded).
    """
    if horizon_s <= 0 or sample_dt <= 0:
        raise ConfigurationError("horizon and sample step must be positive")
    ts = np.arange(0.0, horizon_s + 0.5 * sample_dt, sample_dt)
    sup_v = 0.0
    sup_a = 0.0
    for t in ts:
        v = float(np.linalg.norm(traj.velocity(float(t))))
        a = float(np.linalg.norm(traj.acceleration(float(t))))
        if not (np.isfinite(v) and np.isfinite(a)):
            raise ConfigurationError("reference trajectory is unbounded on the horizon")
        sup_v = max(sup_v, v)
        sup_a = max(sup_a, a)
    return sup_v, sup_a
