"""Scenario configs: JSON schema, validation, and the builtin catalog.

A scenario is one JSON object with unit-suffixed field names
(control_period_s, wheel_radius_m, amplitude_nm, ...). `builtin_config`
returns a fully explicit dict for each named builtin; `scenario_from_config`
turns any valid config into a runnable Scenario, synthesizing the uncertainty
bound from the plant constants and reference-trajectory sups along the way.
"""

from __future__ import annotations

import math

import numpy as np

from .controllers import AsmcParams
from .core import (
    REGRESSOR_ORDERS,
    ConfigurationError,
    ConstantTrajectory,
    ControllerConfig,
    RampTrajectory,
    SinusoidTrajectory,
    trajectory_sups,
)
from .linalg import is_positive_definite
from .plants import (
    ArmParams,
    ConstantDisturbance,
    CoriolisPlant,
    FrictionParams,
    PayloadWindow,
    SinusoidDisturbance,
    WmrParams,
    WmrPlant,
)
from .sim import CONTROLLER_KINDS, Scenario
from .uncertainty import SUP_SAFETY_FACTOR, theta_star_synthesize

PLANT_KINDS = ("wmr", "two_link_arm")
DISTURBANCE_KINDS = ("sinusoid", "constant")
TRAJECTORY_KINDS = ("ramp", "sinusoid", "constant")
TOP_LEVEL_KEYS = (
    "name",
    "plant",
    "disturbance",
    "trajectory",
    "controller",
    "asrc",
    "asmc",
    "robust",
    "sim",
)

N_JOINTS = 2


def _get(config: dict, path: str):
    node = config
    for part in path.split("."):
        if not isinstance(node, dict) or part not in node:
            return None
        node = node[part]
    return node


def _is_num(v) -> bool:
    return isinstance(v, (int, float)) and not isinstance(v, bool)


def validate_config(config) -> list[str]:
    """All schema violations as 'dotted.path: message' strings (empty = valid)."""
    if not isinstance(config, dict):
        return ["config: must be a JSON object"]
    errors: list[str] = []

    def err(path: str, msg: str) -> None:
        errors.append(f"{path}: {msg}")

    def number(path, *, positive=False, nonneg=False, required=True):
        v = _get(config, path)
        if v is None:
            if required:
                err(path, "missing")
            return None
        if not _is_num(v):
            err(path, "must be a number")
            return None
        if positive and not v > 0:
            err(path, "must be positive")
            return None
        if nonneg and v < 0:
            err(path, "must be nonnegative")
            return None
        return float(v)

    def integer(path, *, minimum=None, required=True):
        v = _get(config, path)
        if v is None:
            if required:
                err(path, "missing")
            return None
        if isinstance(v, bool) or not isinstance(v, int):
            err(path, "must be an integer")
            return None
        if minimum is not None and v < minimum:
            err(path, f"must be at least {minimum}")
            return None
        return v

    def vector(path, n=N_JOINTS, *, positive=False, nonneg=False, required=True):
        v = _get(config, path)
        if v is None:
            if required:
                err(path, "missing")
            return None
        if not isinstance(v, list) or len(v) != n or not all(_is_num(x) for x in v):
            err(path, f"must be a list of {n} numbers")
            return None
        if positive and not all(x > 0 for x in v):
            err(path, "entries must be positive")
            return None
        if nonneg and any(x < 0 for x in v):
            err(path, "entries must be nonnegative")
            return None
        return [float(x) for x in v]

    def matrix_pd(path):
        v = _get(config, path)
        if v is None:
            err(path, "missing")
            return
        ok = (
            isinstance(v, list)
            and len(v) == N_JOINTS
            and all(
                isinstance(r, list) and len(r) == N_JOINTS and all(_is_num(x) for x in r)
                for r in v
            )
        )
        if not ok:
            err(path, f"must be a {N_JOINTS}x{N_JOINTS} matrix")
            return
        if not is_positive_definite(np.array(v, dtype=float)):
            err(path, "must be symmetric positive definite")

    def section(path, required=True):
        v = _get(config, path)
        if v is None:
            if required:
                err(path, "missing")
            return None
        if not isinstance(v, dict):
            err(path, "must be an object")
            return None
        return v

    for key in config:
        if key not in TOP_LEVEL_KEYS:
            err(key, "unknown section")

    name = _get(config, "name")
    if not isinstance(name, str) or not name:
        err("name", "must be a nonempty string")

    plant = section("plant")
    if plant is not None:
        kind = plant.get("kind")
        if kind not in PLANT_KINDS:
            err("plant.kind", f"must be one of {PLANT_KINDS}")
        elif kind == "wmr":
            number("plant.body_mass_kg", positive=True)
            number("plant.body_inertia_kgm2", positive=True)
            number("plant.wheel_inertia_kgm2", positive=True)
            number("plant.wheel_radius_m", positive=True)
            number("plant.axle_length_m", positive=True)
            number("plant.com_offset_m", nonneg=True)
            windows = _get(config, "plant.payload_windows")
            if windows is not None:
                if not isinstance(windows, list):
                    err("plant.payload_windows", "must be a list")
                else:
                    for i, w in enumerate(windows):
                        p = f"plant.payload_windows[{i}]"
                        if not isinstance(w, dict):
                            err(p, "must be an object")
                            continue
                        t_on = w.get("t_on_s")
                        t_off = w.get("t_off_s")
                        if not (_is_num(t_on) and _is_num(t_off) and t_on < t_off):
                            err(p, "needs numeric t_on_s < t_off_s")
                        if not (_is_num(w.get("mass_kg")) and w.get("mass_kg") >= 0):
                            err(f"{p}.mass_kg", "must be nonnegative")
                        if not (
                            _is_num(w.get("inertia_kgm2")) and w.get("inertia_kgm2") >= 0
                        ):
                            err(f"{p}.inertia_kgm2", "must be nonnegative")
        else:
            vector("plant.link_masses_kg", positive=True)
            vector("plant.link_lengths_m", positive=True)
            vector("plant.com_offsets_m", positive=True)
            vector("plant.link_inertias_kgm2", positive=True)
            number("plant.gravity_mps2", nonneg=True)
        if section("plant.friction") is not None:
            number("plant.friction.viscous_nms", nonneg=True)
            number("plant.friction.coulomb_nm", nonneg=True)
            number("plant.friction.coulomb_slope_rad_s", positive=True)

    dist = section("disturbance")
    if dist is not None:
        kind = dist.get("kind")
        if kind not in DISTURBANCE_KINDS:
            err("disturbance.kind", f"must be one of {DISTURBANCE_KINDS}")
        elif kind == "sinusoid":
            vector("disturbance.amplitude_nm", nonneg=True)
            number("disturbance.period_s", positive=True)
        else:
            vector("disturbance.value_nm")

    traj = section("trajectory")
    if traj is not None:
        kind = traj.get("kind")
        if kind not in TRAJECTORY_KINDS:
            err("trajectory.kind", f"must be one of {TRAJECTORY_KINDS}")
        elif kind == "ramp":
            vector("trajectory.rate_rad_s")
            vector("trajectory.offset_rad")
        elif kind == "sinusoid":
            vector("trajectory.amplitude_rad")
            vector("trajectory.omega_rad_s")
            vector("trajectory.phase_rad")
        else:
            vector("trajectory.position_rad")

    ctrl = section("controller")
    if ctrl is not None:
        if ctrl.get("kind") not in CONTROLLER_KINDS:
            err("controller.kind", f"must be one of {CONTROLLER_KINDS}")
        matrix_pd("controller.omega")
        matrix_pd("controller.g_matrix")
        number("controller.boundary_layer", positive=True)

    asrc = section("asrc", required=False)
    beta = 0.1
    if asrc is not None:
        order = asrc.get("regressor_order", "three_term")
        if order not in REGRESSOR_ORDERS:
            err("asrc.regressor_order", f"must be one of {REGRESSOR_ORDERS}")
        vector("asrc.alpha", 4, positive=True, required=False)
        b = number("asrc.beta", positive=True, required=False)
        beta = b if b is not None else beta
        number("asrc.varsigma", positive=True, required=False)
        vector("asrc.theta_init", 3, positive=True, required=False)
        g0 = number("asrc.gamma_init", required=False)
        if g0 is not None and not g0 > beta:
            err("asrc.gamma_init", "must exceed asrc.beta")

    if section("asmc", required=False) is not None:
        number("asmc.k_bar", positive=True, required=False)
        number("asmc.epsilon", positive=True, required=False)
        number("asmc.k_init", positive=True, required=False)

    if section("robust", required=False) is not None:
        m = number("robust.theta_margin", required=False)
        if m is not None and m < 1.0:
            err("robust.theta_margin", "must be at least 1 (gains must dominate)")

    sim = section("sim")
    if sim is not None:
        number("sim.horizon_s", positive=True)
        number("sim.control_period_s", positive=True)
        integer("sim.substeps", minimum=1)
        vector("sim.initial_q_rad")
        vector("sim.initial_qdot_rad_s")
        integer("sim.seed", minimum=0)
        noise = _get(config, "sim.noise_std")
        if noise is not None and (not _is_num(noise) or noise < 0):
            err("sim.noise_std", "must be null or a nonnegative number")

    return errors


def _build_friction(section: dict | None) -> FrictionParams:
    if section is None:
        return FrictionParams(viscous=0.0, coulomb=0.0)
    return FrictionParams(
        viscous=section["viscous_nms"],
        coulomb=section["coulomb_nm"],
        slope_width=section["coulomb_slope_rad_s"],
    )


def _build_disturbance(section: dict):
    if section["kind"] == "sinusoid":
        return SinusoidDisturbance(
            amplitude=tuple(section["amplitude_nm"]), period_s=section["period_s"]
        )
    return ConstantDisturbance(value_vec=tuple(section["value_nm"]))


def _build_plant(plant: dict, disturbance: dict):
    friction = _build_friction(plant.get("friction"))
    dist = _build_disturbance(disturbance)
    if plant["kind"] == "wmr":
        params = WmrParams(
            m=plant["body_mass_kg"],
            i_bar=plant["body_inertia_kgm2"],
            i_w=plant["wheel_inertia_kgm2"],
            r_w=plant["wheel_radius_m"],
            b=plant["axle_length_m"],
            d=plant["com_offset_m"],
        )
        windows = tuple(
            PayloadWindow(
                t_on_s=w["t_on_s"],
                t_off_s=w["t_off_s"],
                mass_kg=w["mass_kg"],
                inertia_kgm2=w["inertia_kgm2"],
            )
            for w in plant.get("payload_windows", [])
        )
        return WmrPlant(params=params, friction=friction, disturbance=dist, payload=windows)
    masses = plant["link_masses_kg"]
    lengths = plant["link_lengths_m"]
    coms = plant["com_offsets_m"]
    inertias = plant["link_inertias_kgm2"]
    params = ArmParams(
        m1=masses[0],
        m2=masses[1],
        l1=lengths[0],
        l2=lengths[1],
        lc1=coms[0],
        lc2=coms[1],
        i1=inertias[0],
        i2=inertias[1],
        gravity=plant["gravity_mps2"],
    )
    return CoriolisPlant(params=params, friction=friction, disturbance=dist)


def _build_trajectory(traj: dict):
    if traj["kind"] == "ramp":
        return RampTrajectory(rate=tuple(traj["rate_rad_s"]), offset=tuple(traj["offset_rad"]))
    if traj["kind"] == "sinusoid":
        return SinusoidTrajectory(
            amplitude=tuple(traj["amplitude_rad"]),
            omega=tuple(traj["omega_rad_s"]),
            phase=tuple(traj["phase_rad"]),
        )
    return ConstantTrajectory(position_value=tuple(traj["position_rad"]))


def scenario_from_config(config: dict, controller_kind: str | None = None) -> Scenario:
    """Build a runnable Scenario; controller_kind overrides the config's kind.

    The uncertainty bound is synthesized here (plant constants + reference
    sups scaled by the safety factor) so both the robust law and the trace's
    Lyapunov bookkeeping see the same coefficients.
    """
    problems = validate_config(config)
    if problems:
        raise ConfigurationError("; ".join(problems))
    kind = controller_kind if controller_kind is not None else config["controller"]["kind"]
    if kind not in CONTROLLER_KINDS:
        raise ConfigurationError(f"controller.kind: must be one of {CONTROLLER_KINDS}")
    plant = _build_plant(config["plant"], config["disturbance"])
    traj = _build_trajectory(config["trajectory"])
    ctrl = config["controller"]
    asrc = config.get("asrc", {})
    cfg = ControllerConfig(
        omega=np.array(ctrl["omega"], dtype=float),
        g=np.array(ctrl["g_matrix"], dtype=float),
        varpi=ctrl["boundary_layer"],
        alpha=tuple(asrc.get("alpha", (10.0, 10.0, 10.0, 10.0))),
        beta=asrc.get("beta", 0.1),
        varsigma=asrc.get("varsigma", 10.0),
        theta_init=tuple(asrc.get("theta_init", (20.0, 20.0, 20.0))),
        gamma_init=asrc.get("gamma_init", 20.0),
        regressor_order=asrc.get("regressor_order", "three_term"),
    )
    bad = cfg.validate()
    if bad:
        raise ConfigurationError("; ".join(bad))
    sim = config["sim"]
    sup_v, sup_a = trajectory_sups(traj, sim["horizon_s"], sim["control_period_s"])
    theta_star = theta_star_synthesize(
        plant.constants(),
        cfg.omega,
        SUP_SAFETY_FACTOR * sup_v,
        SUP_SAFETY_FACTOR * sup_a,
    )
    asmc_sec = config.get("asmc", {})
    margin = config.get("robust", {}).get("theta_margin", 1.0)
    return Scenario(
        name=config["name"],
        plant=plant,
        controller_kind=kind,
        cfg=cfg,
        trajectory=traj,
        horizon_s=sim["horizon_s"],
        control_period_s=sim["control_period_s"],
        substeps=sim["substeps"],
        q0=tuple(sim["initial_q_rad"]),
        qdot0=tuple(sim["initial_qdot_rad_s"]),
        seed=sim["seed"],
        noise_std=sim.get("noise_std"),
        asmc=AsmcParams(
            k_bar=asmc_sec.get("k_bar", 10.0),
            epsilon=asmc_sec.get("epsilon", 0.5),
            k_init=asmc_sec.get("k_init", 35.0),
        ),
        robust_theta=theta_star.scaled(margin),
        robust_margin=margin,
        theta_star=theta_star,
    )


def scenario_to_config(sc: Scenario) -> dict:
    """Serialize a Scenario back to the JSON schema (inverse of from_config)."""
    plant = sc.plant
    fric = plant.friction
    friction = {
        "viscous_nms": fric.viscous,
        "coulomb_nm": fric.coulomb,
        "coulomb_slope_rad_s": fric.slope_width,
    }
    if isinstance(plant, WmrPlant):
        p = plant.params
        plant_sec = {
            "kind": "wmr",
            "body_mass_kg": p.m,
            "body_inertia_kgm2": p.i_bar,
            "wheel_inertia_kgm2": p.i_w,
            "wheel_radius_m": p.r_w,
            "axle_length_m": p.b,
            "com_offset_m": p.d,
            "friction": friction,
            "payload_windows": [
                {
                    "t_on_s": w.t_on_s,
                    "t_off_s": w.t_off_s,
                    "mass_kg": w.mass_kg,
                    "inertia_kgm2": w.inertia_kgm2,
                }
                for w in plant.payload
            ],
        }
    else:
        p = plant.params
        plant_sec = {
            "kind": "two_link_arm",
            "link_masses_kg": [p.m1, p.m2],
            "link_lengths_m": [p.l1, p.l2],
            "com_offsets_m": [p.lc1, p.lc2],
            "link_inertias_kgm2": [p.i1, p.i2],
            "gravity_mps2": p.gravity,
            "friction": friction,
        }
    dist = plant.disturbance
    if isinstance(dist, SinusoidDisturbance):
        dist_sec = {
            "kind": "sinusoid",
            "amplitude_nm": list(dist.amplitude),
            "period_s": dist.period_s,
        }
    else:
        dist_sec = {"kind": "constant", "value_nm": list(dist.value_vec)}
    traj = sc.trajectory
    if isinstance(traj, RampTrajectory):
        traj_sec = {
            "kind": "ramp",
            "rate_rad_s": list(traj.rate),
            "offset_rad": list(traj.offset),
        }
    elif isinstance(traj, SinusoidTrajectory):
        traj_sec = {
            "kind": "sinusoid",
            "amplitude_rad": list(traj.amplitude),
            "omega_rad_s": list(traj.omega),
            "phase_rad": list(traj.phase),
        }
    else:
        traj_sec = {"kind": "constant", "position_rad": list(traj.position_value)}
    cfg = sc.cfg
    return {
        "name": sc.name,
        "plant": plant_sec,
        "disturbance": dist_sec,
        "trajectory": traj_sec,
        "controller": {
            "kind": sc.controller_kind,
            "omega": cfg.omega.tolist(),
            "g_matrix": cfg.g.tolist(),
            "boundary_layer": cfg.varpi,
        },
        "asrc": {
            "regressor_order": cfg.regressor_order,
            "alpha": list(cfg.alpha),
            "beta": cfg.beta,
            "varsigma": cfg.varsigma,
            "theta_init": list(cfg.theta_init),
            "gamma_init": cfg.gamma_init,
        },
        "asmc": {
            "k_bar": sc.asmc.k_bar,
            "epsilon": sc.asmc.epsilon,
            "k_init": sc.asmc.k_init,
        },
        "robust": {"theta_margin": sc.robust_margin},
        "sim": {
            "horizon_s": sc.horizon_s,
            "control_period_s": sc.control_period_s,
            "substeps": sc.substeps,
            "initial_q_rad": list(sc.q0),
            "initial_qdot_rad_s": list(sc.qdot0),
            "seed": sc.seed,
            "noise_std": sc.noise_std,
        },
    }


def _wmr_base(name: str, theta_init: float) -> dict:
    eye = [[1.0, 0.0], [0.0, 1.0]]
    return {
        "name": name,
        "plant": {
            "kind": "wmr",
            "body_mass_kg": 9.0,
            "body_inertia_kgm2": 0.3,
            "wheel_inertia_kgm2": 8.0,
            "wheel_radius_m": 0.097,
            "axle_length_m": 0.381,
            "com_offset_m": 0.02,
            "friction": {
                "viscous_nms": 0.5,
                "coulomb_nm": 1.0,
                "coulomb_slope_rad_s": 0.01,
            },
            "payload_windows": [
                {"t_on_s": 5.0, "t_off_s": 10.0, "mass_kg": 3.5, "inertia_kgm2": 0.12},
                {"t_on_s": 15.0, "t_off_s": 20.0, "mass_kg": 3.5, "inertia_kgm2": 0.12},
                {"t_on_s": 25.0, "t_off_s": 30.0, "mass_kg": 3.5, "inertia_kgm2": 0.12},
                {"t_on_s": 35.0, "t_off_s": 40.0, "mass_kg": 3.5, "inertia_kgm2": 0.12},
            ],
        },
        "disturbance": {
            "kind": "sinusoid",
            "amplitude_nm": [55.0, 55.0],
            "period_s": 3.0,
        },
        "trajectory": {
            "kind": "ramp",
            "rate_rad_s": [4.0, 3.0],
            "offset_rad": [math.pi / 10.0, math.pi / 10.0],
        },
        "controller": {
            "kind": "asrc",
            "omega": eye,
            "g_matrix": eye,
            "boundary_layer": 0.5,
        },
        "asrc": {
            "regressor_order": "three_term",
            "alpha": [10.0, 10.0, 10.0, 10.0],
            "beta": 0.1,
            "varsigma": 10.0,
            "theta_init": [theta_init, theta_init, theta_init],
            "gamma_init": theta_init,
        },
        "asmc": {"k_bar": 10.0, "epsilon": 0.5, "k_init": 35.0},
        "robust": {"theta_margin": 1.0},
        "sim": {
            "horizon_s": 40.0,
            "control_period_s": 0.02,
            "substeps": 20,
            "initial_q_rad": [0.0, 0.0],
            "initial_qdot_rad_s": [0.0, 0.0],
            "seed": 0,
            "noise_std": None,
        },
    }


def _arm_base(name: str) -> dict:
    eye = [[1.0, 0.0], [0.0, 1.0]]
    return {
        "name": name,
        "plant": {
            "kind": "two_link_arm",
            "link_masses_kg": [1.0, 1.0],
            "link_lengths_m": [0.5, 0.5],
            "com_offsets_m": [0.25, 0.25],
            "link_inertias_kgm2": [1.0 * 0.5**2 / 12.0, 1.0 * 0.5**2 / 12.0],
            "gravity_mps2": 9.81,
            "friction": {
                "viscous_nms": 0.5,
                "coulomb_nm": 0.0,
                "coulomb_slope_rad_s": 0.01,
            },
        },
        "disturbance": {
            "kind": "sinusoid",
            "amplitude_nm": [10.0, 10.0],
            "period_s": 5.0,
        },
        "trajectory": {
            "kind": "sinusoid",
            "amplitude_rad": [0.8, 1.2],
            "omega_rad_s": [1.5, 1.0],
            "phase_rad": [0.0, 0.0],
        },
        "controller": {
            "kind": "asrc",
            "omega": eye,
            "g_matrix": eye,
            "boundary_layer": 0.3,
        },
        "asrc": {
            "regressor_order": "three_term",
            "alpha": [10.0, 10.0, 10.0, 10.0],
            "beta": 0.1,
            "varsigma": 10.0,
            "theta_init": [1.0, 1.0, 1.0],
            "gamma_init": 1.0,
        },
        "asmc": {"k_bar": 10.0, "epsilon": 0.5, "k_init": 35.0},
        "robust": {"theta_margin": 1.0},
        "sim": {
            "horizon_s": 12.0,
            "control_period_s": 0.0005,
            "substeps": 1,
            "initial_q_rad": [0.3, -0.2],
            "initial_qdot_rad_s": [1.2, 1.2],
            "seed": 0,
            "noise_std": None,
        },
    }


def _oracle_robust() -> dict:
    config = _arm_base("oracle-robust")
    config["disturbance"] = {
        "kind": "sinusoid",
        "amplitude_nm": [2.0, 2.0],
        "period_s": 2.1,
    }
    config["controller"]["kind"] = "robust"
    config["sim"]["horizon_s"] = 8.0
    config["sim"]["initial_q_rad"] = [0.15, -0.1]
    return config


BUILTINS: dict[str, str] = {
    "wmr-circle": "differential-drive robot, constant wheel-rate reference, "
    "payload drops and strong periodic disturbance",
    "wmr-lowgain": "wmr-circle with deliberately low initial gains "
    "(adaptation recovers tracking)",
    "coriolis-track": "two-link arm, sinusoid joint references; exercises the "
    "full mass/Coriolis/gravity structure and the gain deadline audit",
    "oracle-robust": "two-link arm under the fixed-gain law with synthesized "
    "dominating gains",
}


def builtin_config(name: str) -> dict:
    if name == "wmr-circle":
        return _wmr_base("wmr-circle", 20.0)
    if name == "wmr-lowgain":
        return _wmr_base("wmr-lowgain", 10.0)
    if name == "coriolis-track":
        return _arm_base("coriolis-track")
    if name == "oracle-robust":
        return _oracle_robust()
    raise ConfigurationError(
        f"unknown builtin scenario {name!r}; available: {', '.join(sorted(BUILTINS))}"
    )
