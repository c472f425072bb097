"""Run the builtin WMR circle scenario and print tracking metrics.

Usage: python demos/quickstart_tracking.py [--scenario NAME] [--controller KIND]
"""

import argparse

from asrcsim import builtin_config, metrics, run_scenario, scenario_from_config


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--scenario", default="wmr-circle")
    parser.add_argument("--controller", default=None, choices=(None, "asrc", "asmc", "robust"))
    args = parser.parse_args()

    config = builtin_config(args.scenario)
    scenario = scenario_from_config(config, controller_kind=args.controller)
    trace = run_scenario(scenario)

    wmr_params = scenario.plant.params if config["plant"]["kind"] == "wmr" else None
    m = metrics(trace, wmr_params)
    print(f"scenario:     {scenario.name} ({scenario.controller_kind})")
    print(f"ticks:        {trace.t.size} over {trace.t[-1]:.1f} s")
    if wmr_params is not None:
        print(f"rms Ep:       {m.rms_ep:.6f} m")
    print(f"rms torque:   {m.rms_tau:.4f} N·m")
    print(f"rms error:    {m.rms_e:.6f} rad")
    print(f"diverged:     {trace.diverged}")


if __name__ == "__main__":
    main()
