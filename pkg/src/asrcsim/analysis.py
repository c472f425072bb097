"""Numerical checks of the stability story plus trace metrics and reports.

Everything here post-processes immutable traces or evaluates closed-form
bounds; nothing feeds back into control.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import Array, ConfigurationError, ControllerConfig, TrackingState, gamma_norm
from .linalg import min_eig_sym
from .uncertainty import ThetaStar

FP_SCAN_LIMIT = 1e9


def lyapunov_V(ts: TrackingState, m: Array) -> float:
    """V = 1/2 e_f^T M e_f + 1/2 e^T e."""
    m = np.asarray(m, dtype=float)
    return 0.5 * float(ts.e_f @ m @ ts.e_f) + 0.5 * float(ts.e @ ts.e)


def lyapunov_V1(
    ts: TrackingState,
    theta_hat: Array,
    gamma: float,
    theta_star: ThetaStar,
    cfg: ControllerConfig,
    m: Array,
) -> float:
    """V1 = V + sum_i theta_err_i^2 / (2 alpha_i) + gamma^2 / (2 alpha_3).

    Only the regressor order's active gains enter the sum. Note the gamma
    term is gamma squared itself, not an offset from a target.
    """
    v = lyapunov_V(ts, m)
    order = cfg.regressor_order
    star = theta_star.as_array(order)
    hat = np.asarray(theta_hat, dtype=float)[: star.size]
    diff = hat - star
    total = v
    for i in range(star.size):
        total += diff[i] * diff[i] / (2.0 * cfg.alpha[i])
    total += gamma * gamma / (2.0 * cfg.alpha[3])
    return float(total)


@dataclass(frozen=True)
class FiniteTimeBounds:
    """Deadline pieces for the gain-increase phase.

    t_bar = max(t1, t2, t3) caps how long the gains can keep increasing;
    delta_t bounds the extra time until they all decrease; rho_rate is the
    exponential contraction rate used for delta_t.
    """

    t1: float
    t2: float
    t3: float
    t_bar: float
    delta_t: float
    t_bound: float
    rho_rate: float


def finite_time_bounds(
    theta_star: ThetaStar,
    cfg: ControllerConfig,
    v_at_tbar: float,
    psi: float,
    mu2: float,
) -> FiniteTimeBounds:
    """Per-episode deadline from the bound coefficients and trace readings.

    psi is the position-error norm at t_in + t_bar; v_at_tbar the Lyapunov
    value there. 2 V >= psi^2 holds whenever both come from the same tick.
    """
    if psi <= 0.0:
        raise ConfigurationError("psi must be positive (zero error gives no deadline)")
    a0, a1, a2, a3 = cfg.alpha
    gn = gamma_norm(cfg.omega)
    t1 = theta_star.theta0 / ((a0 + a3) * cfg.varpi)
    t2 = theta_star.theta1 * gn / (a1 * cfg.varpi**2)
    t3 = theta_star.theta2 * gn * gn / (a2 * cfg.varpi**3)
    t_bar = max(t1, t2, t3)
    rho_rate = min(min_eig_sym(cfg.g), min_eig_sym(cfg.omega)) / max(mu2, 1.0)
    ratio = 2.0 * v_at_tbar / (psi * psi)
    if ratio < 1.0:
        raise ConfigurationError("inconsistent inputs: 2 V(t_bar) < psi^2")
    delta_t = math.log(ratio) / rho_rate
    return FiniteTimeBounds(
        t1=t1,
        t2=t2,
        t3=t3,
        t_bar=t_bar,
        delta_t=delta_t,
        t_bound=t_bar + delta_t,
        rho_rate=rho_rate,
    )


@dataclass(frozen=True)
class FpPolynomial:
    """Sign-determining polynomial of the ultimate-bound argument.

    three_term: f(x) = -varsigma beta x^4 + 2||Gamma||(t0 x + t1 x^2 + t2 x^3)
                       + rho_rate * zeta
    two_term drops one degree: -varsigma beta x^3 + 2||Gamma||(t0 x + t1 x^2)
                       + rho_rate * zeta.
    Coefficients stored ascending (c[0] constant).
    """

    coeffs: tuple[float, ...]

    def __post_init__(self) -> None:
        c = tuple(float(v) for v in self.coeffs)
        object.__setattr__(self, "coeffs", c)
        if len(c) < 2 or c[-1] >= 0.0:
            raise ConfigurationError("leading coefficient must be negative")
        if c[0] <= 0.0:
            raise ConfigurationError("constant term must be positive")

    def value(self, x):
        acc = np.zeros_like(np.asarray(x, dtype=float))
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc


def fp_polynomial(
    theta_star: ThetaStar,
    cfg: ControllerConfig,
    zeta: float,
    rho_rate: float,
) -> FpPolynomial:
    gn = gamma_norm(cfg.omega)
    lead = -cfg.varsigma * cfg.beta
    if cfg.regressor_order == "three_term":
        coeffs = (
            rho_rate * zeta,
            2.0 * gn * theta_star.theta0,
            2.0 * gn * theta_star.theta1,
            2.0 * gn * theta_star.theta2,
            lead,
        )
    else:
        coeffs = (
            rho_rate * zeta,
            2.0 * gn * theta_star.theta0,
            2.0 * gn * theta_star.theta1,
            lead,
        )
    return FpPolynomial(coeffs)


def zeta_bound(
    theta_star: ThetaStar,
    cfg: ControllerConfig,
    theta_bar: Array,
    gamma_bar: float,
) -> float:
    """zeta = sum_i (theta_i*^2 + theta_bar_i^2)/alpha_i + gamma_bar^2/alpha_3.

    theta_bar/gamma_bar are upper bounds on each adapted gain; here they are
    taken as maxima over the realized trace.
    """
    star = theta_star.as_array(cfg.regressor_order)
    bar = np.asarray(theta_bar, dtype=float)[: star.size]
    total = 0.0
    for i in range(star.size):
        total += (star[i] ** 2 + bar[i] ** 2) / cfg.alpha[i]
    total += gamma_bar**2 / cfg.alpha[3]
    return float(total)


def fp_positive_root(poly: FpPolynomial, tol: float = 1e-10) -> float:
    """The unique positive root, by geometric bracketing then bisection.

    The polynomial is positive at 0 and negative for large x; the bracket is
    grown geometrically until the sign flips (structural error past the scan
    limit), then bisected to tol.
    """
    lo = 0.0
    hi = 1.0
    while float(poly.value(hi)) > 0.0:
        lo = hi
        hi *= 2.0
        if hi > FP_SCAN_LIMIT:
            raise ConfigurationError("no sign change below the scan limit")
    if float(poly.value(hi)) == 0.0:
        return hi
    # Bolzano: f(lo) > 0 >= f(hi)
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if float(poly.value(mid)) > 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


CASE_INCREASE = 1
CASE_DECREASE = 2
CASE_FROZEN = 3


def case_classifier(trace) -> Array:
    """Per-tick case labels: 1 gains rising, 2 gains falling, 3 in-layer."""
    if trace.gains_frozen is None:
        raise ConfigurationError("case labels need an adaptive-gain trace")
    out = np.full(trace.t.size, CASE_FROZEN, dtype=np.int8)
    switching = trace.branch.astype(bool)
    inc = trace.gains_increasing.astype(bool)
    out[switching & inc] = CASE_INCREASE
    out[switching & ~inc] = CASE_DECREASE
    return out


@dataclass(frozen=True)
class EpisodeRecord:
    """One gain-increase episode and its deadline audit."""

    t_in: float
    t_bar: float
    deadline: float
    t_first_decrease: float | None
    status: str  # satisfied | vacuous | violated


def finite_time_episode_audit(
    trace, theta_star: ThetaStar, cfg: ControllerConfig, mu2: float
) -> list[EpisodeRecord]:
    """Check every gain-increase episode against its computed deadline.

    An episode is a maximal run of case-1 ticks starting at t_in. The deadline
    is t_in + t_bar + delta_t with V(t_bar) and psi read off the trace. An
    episode is vacuous when the deadline (or t_in + t_bar itself) falls past
    the end of the trace or psi is zero, satisfied when some later tick has
    all gains decreasing by the deadline, violated otherwise.
    """
    cases = case_classifier(trace)
    dt = float(trace.t[1] - trace.t[0]) if trace.t.size > 1 else 0.0
    n = trace.t.size
    dec_idx = np.flatnonzero(cases == CASE_DECREASE)
    inc_idx = np.flatnonzero(cases == CASE_INCREASE)
    records: list[EpisodeRecord] = []
    if not inc_idx.size or dt <= 0.0:
        return records
    starts = [int(inc_idx[0])] + [
        int(b) for a, b in zip(inc_idx[:-1], inc_idx[1:]) if b != a + 1
    ]
    for s in starts:
        t_in = float(trace.t[s])
        a0, a1, a2, a3 = cfg.alpha
        gn = gamma_norm(cfg.omega)
        t_bar = max(
            theta_star.theta0 / ((a0 + a3) * cfg.varpi),
            theta_star.theta1 * gn / (a1 * cfg.varpi**2),
            theta_star.theta2 * gn * gn / (a2 * cfg.varpi**3),
        )
        k_tbar = s + int(round(t_bar / dt))
        if k_tbar >= n:
            records.append(EpisodeRecord(t_in, t_bar, math.inf, None, "vacuous"))
            continue
        psi = float(np.linalg.norm(trace.e[k_tbar]))
        if psi <= 0.0:
            records.append(EpisodeRecord(t_in, t_bar, math.inf, None, "vacuous"))
            continue
        bounds = finite_time_bounds(theta_star, cfg, float(trace.V[k_tbar]), psi, mu2)
        deadline = t_in + bounds.t_bound
        k_end = s + int(math.ceil(bounds.t_bound / dt))
        later = dec_idx[(dec_idx >= s) & (dec_idx <= min(k_end, n - 1))]
        if later.size:
            records.append(
                EpisodeRecord(
                    t_in, t_bar, deadline, float(trace.t[int(later[0])]), "satisfied"
                )
            )
        elif k_end >= n:
            records.append(EpisodeRecord(t_in, t_bar, deadline, None, "vacuous"))
        else:
            records.append(EpisodeRecord(t_in, t_bar, deadline, None, "violated"))
    return records


def case3_persistence_check(trace, cfg: ControllerConfig, min_duration_s: float = 1.0) -> bool:
    """Every case-3 stretch at least min_duration long keeps ||Gamma xi|| < varpi.

    ||Gamma xi|| is recomputed from the stored errors rather than read from
    ef_norm, so this doubles as a bookkeeping consistency check.
    """
    cases = case_classifier(trace)
    dt = float(trace.t[1] - trace.t[0]) if trace.t.size > 1 else 0.0
    min_len = max(1, int(round(min_duration_s / dt))) if dt > 0 else 1
    in3 = cases == CASE_FROZEN
    n = in3.size
    k = 0
    omega = cfg.omega
    while k < n:
        if not in3[k]:
            k += 1
            continue
        j = k
        while j < n and in3[j]:
            j += 1
        if j - k >= min_len:
            for i in range(k, j):
                gx = trace.edot[i] + omega @ trace.e[i]
                if float(np.linalg.norm(gx)) >= cfg.varpi:
                    return False
        k = j
    return True


def v1_case1_max_increase(trace) -> float:
    """Largest per-tick V1 increase across consecutive case-1 tick pairs."""
    if trace.V1 is None:
        raise ConfigurationError("trace has no V1 column")
    cases = case_classifier(trace)
    pair = (cases[:-1] == CASE_INCREASE) & (cases[1:] == CASE_INCREASE)
    if not pair.any():
        return -math.inf
    return float(np.max(np.diff(trace.V1)[pair]))


def rms(values: Array) -> float:
    values = np.asarray(values, dtype=float)
    if values.size == 0:
        raise ConfigurationError("empty series")
    return float(np.sqrt(np.mean(values * values)))


@dataclass(frozen=True)
class TraceMetrics:
    rms_ep: float | None
    rms_tau: float
    rms_e: float


def metrics(trace, wmr_params=None, pose0=(0.0, 0.0, 0.0)) -> TraceMetrics:
    """RMS path error (wheel plants only), torque norm, and error norm."""
    if trace.t.size == 0:
        raise ConfigurationError("empty trace")
    rms_tau = rms(np.linalg.norm(trace.tau, axis=1))
    rms_e = rms(np.linalg.norm(trace.e, axis=1))
    rms_ep = None
    if wmr_params is not None:
        ep = pose_error_series(trace, wmr_params, pose0)
        rms_ep = rms(ep)
    return TraceMetrics(rms_ep=rms_ep, rms_tau=rms_tau, rms_e=rms_e)


def pose_error_series(trace, wmr_params, pose0=(0.0, 0.0, 0.0)) -> Array:
    """Planar distance between poses reconstructed from actual and reference
    wheel rates."""
    from .sim import reconstruct_pose  # local import to keep module layering

    dt = float(trace.t[1] - trace.t[0]) if trace.t.size > 1 else 0.0
    if dt <= 0:
        raise ConfigurationError("trace too short for pose reconstruction")
    actual = reconstruct_pose(trace.qdot, dt, wmr_params, pose0)
    desired = reconstruct_pose(trace.qdot - trace.edot, dt, wmr_params, pose0)
    return np.hypot(actual[:, 0] - desired[:, 0], actual[:, 1] - desired[:, 1])


def max_dtau_jump(trace) -> float:
    """Largest per-tick change of the switching-term magnitude."""
    mags = np.linalg.norm(trace.delta_tau, axis=1)
    if mags.size < 2:
        return 0.0
    return float(np.max(np.abs(np.diff(mags))))


def sweep_chatter_flag(traces, factor: float = 5.0) -> bool:
    """True when one sweep leg's max switching jump dwarfs the others.

    Compares each leg's max per-tick ||dtau|| jump against the median of the
    legs' maxima; a lone chattering leg trips the flag while a shared
    transient does not.
    """
    maxima = np.array([max_dtau_jump(tr) for tr in traces])
    med = float(np.median(maxima))
    if med == 0.0:
        return bool(np.any(maxima > 0.0))
    return bool(np.any(maxima >= factor * med))


def write_report(out_dir, label: str, trace, metr: TraceMetrics, wmr_params=None) -> None:
    """summary.txt, gains.csv (adaptive runs only), and plottable series CSVs."""
    import os

    os.makedirs(out_dir, exist_ok=True)

    def series(name: str, header: list[str], columns: list[Array]) -> None:
        path = os.path.join(out_dir, name)
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(",".join(header) + "\n")
            for row in zip(*columns):
                fh.write(",".join(f"{v:.9g}" for v in row) + "\n")

    series("ef_norm.csv", ["t_s", "ef_norm"], [trace.t, trace.ef_norm])
    series("e_norm.csv", ["t_s", "e_norm"], [trace.t, np.linalg.norm(trace.e, axis=1)])
    if trace.theta_hat is not None:
        series(
            "gains.csv",
            ["t_s", "theta0_hat", "theta1_hat", "theta2_hat", "gamma"],
            [trace.t, *(trace.theta_hat[:, i] for i in range(3)), trace.gamma],
        )
        for i in range(3):
            series(
                f"theta{i}_hat.csv",
                ["t_s", f"theta{i}_hat"],
                [trace.t, trace.theta_hat[:, i]],
            )
        series("gamma.csv", ["t_s", "gamma"], [trace.t, trace.gamma])
    elif trace.k is not None:
        series("gains.csv", ["t_s", "k"], [trace.t, trace.k])
    if wmr_params is not None:
        series("ep.csv", ["t_s", "ep_m"], [trace.t, pose_error_series(trace, wmr_params)])

    lines = [
        f"run: {label}",
        f"controller: {trace.controller_kind}",
        f"ticks: {trace.t.size}",
        f"diverged: {trace.diverged}",
        f"rms_tau_nm: {metr.rms_tau:.9g}",
        f"rms_e_rad: {metr.rms_e:.9g}",
    ]
    if metr.rms_ep is not None:
        lines.append(f"rms_ep_m: {metr.rms_ep:.9g}")
    if trace.gains_frozen is not None:
        cases = case_classifier(trace)
        for label_i, case in (("increase", 1), ("decrease", 2), ("frozen", 3)):
            frac = float(np.mean(cases == case))
            lines.append(f"case_{label_i}_fraction: {frac:.4f}")
        lines.append(f"clamp_events_total: {int(trace.clamp_events.sum())}")
    with open(os.path.join(out_dir, "summary.txt"), "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")
