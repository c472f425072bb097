"""Walk through the adaptive-gain life cycle on the WMR circle scenario.

Prints how often the gains were increasing, decreasing, or frozen, the
largest per-tick gain changes, and the first few transitions between
adaptation cases.
"""

import numpy as np

from asrcsim import (
    CASE_DECREASE,
    CASE_FROZEN,
    CASE_INCREASE,
    builtin_config,
    case_classifier,
    run_scenario,
    scenario_from_config,
)

CASE_NAMES = {CASE_INCREASE: "increase", CASE_DECREASE: "decrease", CASE_FROZEN: "frozen"}


def main() -> None:
    scenario = scenario_from_config(builtin_config("wmr-circle"))
    trace = run_scenario(scenario)
    cases = case_classifier(trace)

    print(
        f"{trace.t.size} ticks; initial gains theta={trace.theta_hat[0]},"
        f" gamma={trace.gamma[0]:.1f}"
    )
    for code, name in CASE_NAMES.items():
        share = np.count_nonzero(cases == code) / cases.size
        print(f"  case {code} ({name}): {share:.1%} of ticks")

    dtheta = np.diff(trace.theta_hat, axis=0)
    print(f"largest single-tick theta increase: {dtheta.max():.4f}")
    print(f"largest single-tick theta decrease: {dtheta.min():.4f}")
    print(f"gain floor clamps: {int(trace.clamp_events.sum())}")

    changes = np.flatnonzero(np.diff(cases)) + 1
    print("first transitions (t_s: case -> case):")
    for k in changes[:8]:
        print(f"  {trace.t[k]:7.2f}: {CASE_NAMES[cases[k - 1]]} -> {CASE_NAMES[cases[k]]}")


if __name__ == "__main__":
    main()
