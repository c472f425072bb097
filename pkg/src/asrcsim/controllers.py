"""The three control laws as pure tick functions.

All three share the structure tau = -e - G e_f - dtau, where dtau is the
switching term rho * e_f / ||e_f|| smoothed inside the boundary layer
(||e_f|| < varpi). They differ in where rho comes from:

- robust_control: rho = Y(xi)^T Theta with a fixed, known bound vector;
- asrc_control:   rho = Y(xi)^T theta_hat + gamma with gains adapted online;
- asmc:           rho = K with the scalar-gain adaptation law.

Adaptive states advance once per control tick by forward Euler followed by a
hard clamp onto the floors (0 for theta_hat, beta for gamma and K).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import Array, ControllerConfig, InvariantError, TrackingState
from .uncertainty import ThetaStar, regressor

BRANCH_SWITCHING = "switching"
BRANCH_BOUNDARY = "boundary_layer"


@dataclass(frozen=True)
class GainState:
    """Adaptive gains (theta_hat, gamma); theta_hat[2] is idle in two_term mode."""

    theta_hat: Array
    gamma: float

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "theta_hat", np.asarray(self.theta_hat, dtype=float).reshape(3)
        )


@dataclass(frozen=True)
class AsmcParams:
    """Scalar-gain adaptation parameters: rate k_bar, deadband epsilon."""

    k_bar: float = 10.0
    epsilon: float = 0.5
    k_init: float = 35.0


@dataclass(frozen=True)
class AsmcState:
    k: float


@dataclass(frozen=True)
class ControlOutput:
    tau: Array
    delta_tau: Array
    rho_hat: float
    branch: str


@dataclass(frozen=True)
class RateFlags:
    """Per-tick adaptation bookkeeping.

    frozen: inside the boundary layer, all rates zero.
    e_growing / theta_floor / gamma_floor: the three increase triggers, each
    recorded with its actual truth value.
    increase: the branch actually taken (their left-to-right disjunction).
    """

    frozen: bool
    e_growing: bool
    theta_floor: bool
    gamma_floor: bool
    increase: bool


def _switching_term(rho: float, ts: TrackingState, varpi: float) -> tuple[Array, str]:
    # the boundary tie ||e_f|| == varpi belongs to the switching branch
    if ts.e_f_norm >= varpi:
        return rho * ts.e_f / ts.e_f_norm, BRANCH_SWITCHING
    return rho * ts.e_f / varpi, BRANCH_BOUNDARY


def _input_law(rho: float, ts: TrackingState, cfg: ControllerConfig) -> ControlOutput:
    delta_tau, branch = _switching_term(rho, ts, cfg.varpi)
    tau = -ts.e - cfg.g @ ts.e_f - delta_tau
    return ControlOutput(tau=tau, delta_tau=delta_tau, rho_hat=rho, branch=branch)


def robust_control(ts: TrackingState, theta: ThetaStar, cfg: ControllerConfig) -> ControlOutput:
    """Fixed-gain law; caller guarantees theta dominates the true uncertainty."""
    rho = float(regressor(ts.xi_norm, cfg.regressor_order) @ theta.as_array(cfg.regressor_order))
    return _input_law(rho, ts, cfg)


def asrc_rho(gains: GainState, xi_norm: float, order: str) -> float:
    """rho_hat = Y(xi)^T theta_hat + gamma."""
    y = regressor(xi_norm, order)
    return float(y @ gains.theta_hat[: y.size] + gains.gamma)


def asrc_control(ts: TrackingState, gains: GainState, cfg: ControllerConfig) -> ControlOutput:
    if np.any(gains.theta_hat < 0.0) or gains.gamma < cfg.beta:
        raise InvariantError("gain floors violated on controller input")
    rho = asrc_rho(gains, ts.xi_norm, cfg.regressor_order)
    return _input_law(rho, ts, cfg)


def asrc_gain_rates(
    ts: TrackingState, gains: GainState, cfg: ControllerConfig
) -> tuple[Array, RateFlags]:
    """Adaptation rates (theta0_dot, theta1_dot, theta2_dot, gamma_dot).

    Inside the boundary layer all rates are zero. Outside, the gains increase
    while the error grows (e^T ed > 0) or any gain sits on its floor;
    otherwise they decrease, gamma with the stronger ||xi||-power pull.
    """
    a0, a1, a2, a3 = cfg.alpha
    three = cfg.regressor_order == "three_term"
    if ts.e_f_norm < cfg.varpi:
        return np.zeros(4), RateFlags(True, False, False, False, False)
    used = gains.theta_hat[:3] if three else gains.theta_hat[:2]
    e_growing = bool(ts.e @ ts.e_dot > 0.0)
    theta_floor = bool(np.any(used <= 0.0))
    gamma_floor = bool(gains.gamma <= cfg.beta)
    increase = e_growing or theta_floor or gamma_floor
    xn = ts.xi_norm
    efn = ts.e_f_norm
    if increase:
        rates = np.array([a0 * efn, a1 * xn * efn, a2 * xn * xn * efn, a3 * efn])
    else:
        gamma_pull = cfg.varsigma * a3 * xn ** (4 if three else 3)
        rates = -np.array([a0 * efn, a1 * xn * efn, a2 * xn * xn * efn, gamma_pull])
    if not three:
        rates[2] = 0.0
    return rates, RateFlags(False, e_growing, theta_floor, gamma_floor, increase)


def asrc_gain_step(
    gains: GainState, rates: Array, dt: float, beta: float
) -> tuple[GainState, int]:
    """Forward Euler then clamp onto the floors; returns the clamp count."""
    if dt <= 0:
        raise InvariantError("dt must be positive")
    raw_theta = gains.theta_hat + dt * rates[:3]
    raw_gamma = gains.gamma + dt * rates[3]
    clamps = int(np.count_nonzero(raw_theta < 0.0)) + int(raw_gamma < beta)
    return GainState(np.maximum(raw_theta, 0.0), max(raw_gamma, beta)), clamps


def asmc_control_and_rate(
    ts: TrackingState, st: AsmcState, cfg: ControllerConfig, params: AsmcParams
) -> tuple[ControlOutput, float]:
    """Scalar-gain law with s = e_f and the same smoothed switching term.

    K_dot = k_bar ||s|| sgn(||s|| - epsilon) while K > beta, else beta
    (sgn(0) = 0).
    """
    out = _input_law(st.k, ts, cfg)
    if st.k > cfg.beta:
        gap = ts.e_f_norm - params.epsilon
        sgn = 0.0 if gap == 0.0 else (1.0 if gap > 0.0 else -1.0)
        kdot = params.k_bar * ts.e_f_norm * sgn
    else:
        kdot = cfg.beta
    return out, kdot


def asmc_step(st: AsmcState, kdot: float, dt: float, beta: float) -> AsmcState:
    return AsmcState(max(st.k + dt * kdot, beta))
