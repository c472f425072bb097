"""Closed-loop simulation: zero-order-hold control with RK4 integration.

The control law runs at a fixed period; between ticks the plant integrates
with the held torque. Traces record the state and the controller's view at
each tick, with adaptive gains stored pre-update so that row k shows exactly
what produced tau[k].
"""

from __future__ import annotations

import io
import os
from dataclasses import dataclass, field

import numpy as np

from .analysis import lyapunov_V, lyapunov_V1
from .controllers import (
    BRANCH_SWITCHING,
    AsmcParams,
    AsmcState,
    GainState,
    asmc_control_and_rate,
    asmc_step,
    asrc_control,
    asrc_gain_rates,
    asrc_gain_step,
    robust_control,
)
from .core import Array, ConfigurationError, ControllerConfig, filtered_error
from .plants import WmrParams, wmr_kinematics_S
from .uncertainty import ThetaStar

DIVERGENCE_LIMIT = 1e6

CONTROLLER_KINDS = ("asrc", "asmc", "robust")


@dataclass(frozen=True)
class Scenario:
    """Everything needed to reproduce one closed-loop run."""

    name: str
    plant: object
    controller_kind: str
    cfg: ControllerConfig
    trajectory: object
    horizon_s: float
    control_period_s: float = 0.02
    substeps: int = 20
    q0: tuple = (0.0, 0.0)
    qdot0: tuple = (0.0, 0.0)
    seed: int = 0
    noise_std: float | None = None
    asmc: AsmcParams | None = None
    robust_theta: ThetaStar | None = None
    robust_margin: float = 1.0
    theta_star: ThetaStar | None = None

    def __post_init__(self) -> None:
        if self.controller_kind not in CONTROLLER_KINDS:
            raise ConfigurationError(f"unknown controller kind {self.controller_kind!r}")
        if self.controller_kind == "asmc" and self.asmc is None:
            raise ConfigurationError("asmc scenario needs AsmcParams")
        if self.controller_kind == "robust" and self.robust_theta is None:
            raise ConfigurationError("robust scenario needs a fixed gain vector")
        if self.horizon_s <= 0 or self.control_period_s <= 0:
            raise ConfigurationError("horizon and control period must be positive")
        if self.substeps < 1:
            raise ConfigurationError("substeps must be at least 1")
        if len(self.q0) != self.plant.n or len(self.qdot0) != self.plant.n:
            raise ConfigurationError("initial state dimension mismatch")


@dataclass
class SimTrace:
    """Tick-indexed closed-loop record.

    Adaptive columns (theta_hat, gamma, condition flags, clamp_events, V1) are
    None except for asrc runs; k/kdot are None except for asmc runs. branch is
    1 on the switching branch and 0 inside the boundary layer.
    """

    controller_kind: str
    n: int
    t: Array
    q: Array
    qdot: Array
    e: Array
    edot: Array
    ef_norm: Array
    xi_norm: Array
    rho_hat: Array
    tau: Array
    delta_tau: Array
    branch: Array
    V: Array
    theta_hat: Array | None = None
    gamma: Array | None = None
    cond_e_growing: Array | None = None
    cond_theta_floor: Array | None = None
    cond_gamma_floor: Array | None = None
    gains_increasing: Array | None = None
    gains_frozen: Array | None = None
    clamp_events: Array | None = None
    V1: Array | None = None
    k: Array | None = None
    kdot: Array | None = None
    diverged: bool = False
    divergence_tick: int = -1

    def to_csv(self, path: str) -> None:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(self.to_csv_text())

    def to_csv_text(self) -> str:
        cols: list[tuple[str, Array, str]] = [("tick", np.arange(self.t.size), "d")]
        cols.append(("t_s", self.t, "g"))
        for name, arr in (
            ("q", self.q),
            ("qdot", self.qdot),
            ("e", self.e),
            ("edot", self.edot),
        ):
            for j in range(self.n):
                cols.append((f"{name}{j}", arr[:, j], "g"))
        cols.append(("ef_norm", self.ef_norm, "g"))
        cols.append(("xi_norm", self.xi_norm, "g"))
        cols.append(("rho_hat", self.rho_hat, "g"))
        for name, arr in (("tau", self.tau), ("dtau", self.delta_tau)):
            for j in range(self.n):
                cols.append((f"{name}{j}", arr[:, j], "g"))
        cols.append(("branch", self.branch, "d"))
        cols.append(("V", self.V, "g"))
        if self.theta_hat is not None:
            for j in range(3):
                cols.append((f"theta{j}_hat", self.theta_hat[:, j], "g"))
            cols.append(("gamma", self.gamma, "g"))
            cols.append(("cond_e_growing", self.cond_e_growing, "d"))
            cols.append(("cond_theta_floor", self.cond_theta_floor, "d"))
            cols.append(("cond_gamma_floor", self.cond_gamma_floor, "d"))
            cols.append(("gains_increasing", self.gains_increasing, "d"))
            cols.append(("gains_frozen", self.gains_frozen, "d"))
            cols.append(("clamp_events", self.clamp_events, "d"))
            cols.append(("V1", self.V1, "g"))
        if self.k is not None:
            cols.append(("k", self.k, "g"))
            cols.append(("kdot", self.kdot, "g"))

        buf = io.StringIO()
        buf.write(
            f"# asrcsim-trace controller={self.controller_kind} n={self.n}"
            f" diverged={int(self.diverged)} divergence_tick={self.divergence_tick}\n"
        )
        buf.write(",".join(name for name, _, _ in cols) + "\n")
        rows = self.t.size
        for i in range(rows):
            parts = []
            for _, arr, kind in cols:
                parts.append(str(int(arr[i])) if kind == "d" else f"{arr[i]:.9g}")
            buf.write(",".join(parts) + "\n")
        return buf.getvalue()

    @staticmethod
    def from_csv(path: str) -> "SimTrace":
        with open(path, "r", encoding="utf-8") as fh:
            meta_line = fh.readline()
            if not meta_line.startswith("# asrcsim-trace "):
                raise ConfigurationError(f"not a trace file: {path}")
            meta = dict(kv.split("=", 1) for kv in meta_line.split()[2:])
            header = fh.readline().strip().split(",")
            raw = np.loadtxt(fh, delimiter=",", ndmin=2)
        if raw.size == 0:
            raise ConfigurationError(f"empty trace file: {path}")
        col = {name: raw[:, i] for i, name in enumerate(header)}
        n = int(meta["n"])

        def mat(prefix: str) -> Array:
            return np.column_stack([col[f"{prefix}{j}"] for j in range(n)])

        kind = meta["controller"]
        tr = SimTrace(
            controller_kind=kind,
            n=n,
            t=col["t_s"],
            q=mat("q"),
            qdot=mat("qdot"),
            e=mat("e"),
            edot=mat("edot"),
            ef_norm=col["ef_norm"],
            xi_norm=col["xi_norm"],
            rho_hat=col["rho_hat"],
            tau=mat("tau"),
            delta_tau=mat("dtau"),
            branch=col["branch"].astype(np.int8),
            V=col["V"],
            diverged=bool(int(meta["diverged"])),
            divergence_tick=int(meta["divergence_tick"]),
        )
        if kind == "asrc":
            tr.theta_hat = np.column_stack([col[f"theta{j}_hat"] for j in range(3)])
            tr.gamma = col["gamma"]
            tr.cond_e_growing = col["cond_e_growing"].astype(np.int8)
            tr.cond_theta_floor = col["cond_theta_floor"].astype(np.int8)
            tr.cond_gamma_floor = col["cond_gamma_floor"].astype(np.int8)
            tr.gains_increasing = col["gains_increasing"].astype(np.int8)
            tr.gains_frozen = col["gains_frozen"].astype(np.int8)
            tr.clamp_events = col["clamp_events"].astype(int)
            tr.V1 = col["V1"]
        if kind == "asmc":
            tr.k = col["k"]
            tr.kdot = col["kdot"]
        return tr


def rk4_step(dynamics, state: Array, tau: Array, t: float, h: float) -> Array:
    """One classical Runge-Kutta step of state' = dynamics(t, state, tau)."""
    k1 = dynamics(t, state, tau)
    k2 = dynamics(t + 0.5 * h, state + 0.5 * h * k1, tau)
    k3 = dynamics(t + 0.5 * h, state + 0.5 * h * k2, tau)
    k4 = dynamics(t + h, state + h * k3, tau)
    return state + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def run_scenario(sc: Scenario) -> SimTrace:
    """Simulate one scenario tick by tick and return the full trace.

    Measured errors feed the controller (optionally with additive Gaussian
    noise); the plant itself integrates noise-free. A state magnitude above
    DIVERGENCE_LIMIT (or any non-finite entry) truncates the trace at the last
    healthy tick and flags divergence.
    """
    plant = sc.plant
    n = plant.n
    dt = sc.control_period_s
    ticks = int(round(sc.horizon_s / dt))
    if ticks < 1:
        raise ConfigurationError("horizon shorter than one control period")
    h = dt / sc.substeps
    rng = np.random.default_rng(sc.seed)
    traj = sc.trajectory
    cfg = sc.cfg
    is_asrc = sc.controller_kind == "asrc"
    is_asmc = sc.controller_kind == "asmc"

    t_arr = np.zeros(ticks)
    q_arr = np.zeros((ticks, n))
    qd_arr = np.zeros((ticks, n))
    e_arr = np.zeros((ticks, n))
    ed_arr = np.zeros((ticks, n))
    efn_arr = np.zeros(ticks)
    xin_arr = np.zeros(ticks)
    rho_arr = np.zeros(ticks)
    tau_arr = np.zeros((ticks, n))
    dtau_arr = np.zeros((ticks, n))
    br_arr = np.zeros(ticks, dtype=np.int8)
    v_arr = np.zeros(ticks)
    if is_asrc:
        th_arr = np.zeros((ticks, 3))
        ga_arr = np.zeros(ticks)
        ceg = np.zeros(ticks, dtype=np.int8)
        ctf = np.zeros(ticks, dtype=np.int8)
        cgf = np.zeros(ticks, dtype=np.int8)
        ginc = np.zeros(ticks, dtype=np.int8)
        gfro = np.zeros(ticks, dtype=np.int8)
        clamps = np.zeros(ticks, dtype=int)
        v1_arr = np.zeros(ticks)
        gains = GainState(theta_hat=np.array(cfg.theta_init), gamma=cfg.gamma_init)
    if is_asmc:
        k_arr = np.zeros(ticks)
        kd_arr = np.zeros(ticks)
        asmc_state = AsmcState(k=sc.asmc.k_init)

    def dynamics(t: float, state: Array, tau: Array) -> Array:
        q, qdot = state[:n], state[n:]
        return np.concatenate([qdot, plant.accel(q, qdot, tau, t)])

    state = np.concatenate([np.asarray(sc.q0, float), np.asarray(sc.qdot0, float)])
    diverged = False
    divergence_tick = -1
    recorded = ticks

    for k in range(ticks):
        t = k * dt
        q, qdot = state[:n], state[n:]
        e = q - traj.position(t)
        edot = qdot - traj.velocity(t)
        if sc.noise_std is not None:
            e = e + rng.normal(0.0, sc.noise_std, size=n)
            edot = edot + rng.normal(0.0, sc.noise_std, size=n)
        ts = filtered_error(e, edot, cfg.omega)

        if is_asrc:
            out = asrc_control(ts, gains, cfg)
            rates, flags = asrc_gain_rates(ts, gains, cfg)
            th_arr[k] = gains.theta_hat
            ga_arr[k] = gains.gamma
            ceg[k] = flags.e_growing
            ctf[k] = flags.theta_floor
            cgf[k] = flags.gamma_floor
            ginc[k] = flags.increase
            gfro[k] = flags.frozen
            v1_arr[k] = lyapunov_V1(
                ts, gains.theta_hat, gains.gamma, sc.theta_star, cfg, plant.eval_M(q, t)
            ) if sc.theta_star is not None else np.nan
            gains, n_clamp = asrc_gain_step(gains, rates, dt, cfg.beta)
            clamps[k] = n_clamp
        elif is_asmc:
            out, kdot = asmc_control_and_rate(ts, asmc_state, cfg, sc.asmc)
            k_arr[k] = asmc_state.k
            kd_arr[k] = kdot
            asmc_state = asmc_step(asmc_state, kdot, dt, cfg.beta)
        else:
            out = robust_control(ts, sc.robust_theta, cfg)

        t_arr[k] = t
        q_arr[k] = q
        qd_arr[k] = qdot
        e_arr[k] = e
        ed_arr[k] = edot
        efn_arr[k] = ts.e_f_norm
        xin_arr[k] = ts.xi_norm
        rho_arr[k] = out.rho_hat
        tau_arr[k] = out.tau
        dtau_arr[k] = out.delta_tau
        br_arr[k] = 1 if out.branch == BRANCH_SWITCHING else 0
        v_arr[k] = lyapunov_V(ts, plant.eval_M(q, t))

        for i in range(sc.substeps):
            state = rk4_step(dynamics, state, out.tau, t + i * h, h)
        if not np.all(np.isfinite(state)) or np.max(np.abs(state)) > DIVERGENCE_LIMIT:
            diverged = True
            divergence_tick = k
            recorded = k + 1
            break

    sl = slice(0, recorded)
    trace = SimTrace(
        controller_kind=sc.controller_kind,
        n=n,
        t=t_arr[sl],
        q=q_arr[sl],
        qdot=qd_arr[sl],
        e=e_arr[sl],
        edot=ed_arr[sl],
        ef_norm=efn_arr[sl],
        xi_norm=xin_arr[sl],
        rho_hat=rho_arr[sl],
        tau=tau_arr[sl],
        delta_tau=dtau_arr[sl],
        branch=br_arr[sl],
        V=v_arr[sl],
        diverged=diverged,
        divergence_tick=divergence_tick,
    )
    if is_asrc:
        trace.theta_hat = th_arr[sl]
        trace.gamma = ga_arr[sl]
        trace.cond_e_growing = ceg[sl]
        trace.cond_theta_floor = ctf[sl]
        trace.cond_gamma_floor = cgf[sl]
        trace.gains_increasing = ginc[sl]
        trace.gains_frozen = gfro[sl]
        trace.clamp_events = clamps[sl]
        trace.V1 = v1_arr[sl]
    if is_asmc:
        trace.k = k_arr[sl]
        trace.kdot = kd_arr[sl]
    return trace


def reconstruct_pose(
    wheel_rates: Array, dt: float, params: WmrParams, pose0=(0.0, 0.0, 0.0)
) -> Array:
    """Integrate planar pose (x, y, heading) from held wheel-rate samples.

    One RK4 step per sample interval; row k is the pose at tick k, so the
    output matches the input length and the final rate sample is unused.
    """
    rates = np.asarray(wheel_rates, dtype=float)
    if rates.ndim != 2 or rates.shape[1] != 2:
        raise ConfigurationError("wheel rates must be (ticks, 2)")
    poses = np.zeros((rates.shape[0], 3))
    poses[0] = np.asarray(pose0, dtype=float)

    def pose_dot(_t: float, pose: Array, rate: Array) -> Array:
        q5 = np.array([pose[0], pose[1], pose[2], 0.0, 0.0])
        return wmr_kinematics_S(q5, params)[:3] @ rate

    for k in range(rates.shape[0] - 1):
        poses[k + 1] = rk4_step(pose_dot, poses[k], rates[k], k * dt, dt)
    return poses
