"""Compute the ultimate-bound radius for a scenario's uncertainty budget.

Runs the scenario once to observe the gain ceilings, turns those into the
gain-error budget zeta, then finds the residual-set radius as the unique
positive root of the steady-state polynomial. Sweeping the decrease-rate
knob varsigma shows how a faster gain decay shrinks the residual set.

Usage: python demos/ultimate_bound_root.py [--scenario coriolis-track]
"""

import argparse
import dataclasses

import numpy as np

from asrcsim import (
    builtin_config,
    fp_polynomial,
    fp_positive_root,
    gamma_norm,
    min_eig_sym,
    run_scenario,
    scenario_from_config,
    zeta_bound,
)


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--scenario", default="coriolis-track")
    args = parser.parse_args()

    scenario = scenario_from_config(builtin_config(args.scenario))
    cfg = scenario.cfg
    theta = scenario.theta_star
    mu2 = scenario.plant.constants().mu2

    trace = run_scenario(scenario)
    theta_bar = trace.theta_hat.max(axis=0)
    gamma_bar = float(trace.gamma.max())
    zeta = zeta_bound(theta, cfg, theta_bar, gamma_bar)
    rho_rate = min(min_eig_sym(cfg.g), min_eig_sym(cfg.omega)) / max(mu2, 1.0)

    print(f"true gain bounds: theta* = ({theta.theta0:.2f}, {theta.theta1:.2f}, {theta.theta2:.2f})")
    print(f"observed gain ceilings: theta_bar = {np.round(theta_bar, 2)}, gamma_bar = {gamma_bar:.2f}")
    print(f"gain-error budget zeta = {zeta:.3f}")
    print(f"Gamma norm = {gamma_norm(cfg.omega):.4f}, decrease rate rho = {rho_rate:.4f}")

    print(f"{'varsigma':>10} {'residual radius':>16}")
    for scale in (0.5, 1.0, 2.0, 4.0):
        swept = dataclasses.replace(cfg, varsigma=cfg.varsigma * scale)
        root = fp_positive_root(fp_polynomial(theta, swept, zeta, rho_rate))
        print(f"{swept.varsigma:10.3g} {root:16.6f}")


if __name__ == "__main__":
    main()
