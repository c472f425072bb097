"""Session-cached runs of the builtin scenarios shared across test modules."""

import time

import pytest

from asrcsim import builtin_config, run_scenario, scenario_from_config

# filled by test_acceptance, printed after the short test summary
criterion_lines: list[str] = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if criterion_lines:
        terminalreporter.section("acceptance criteria")
        for line in criterion_lines:
            terminalreporter.write_line(line)


def timed_run(config, controller_kind=None):
    scenario = scenario_from_config(config, controller_kind=controller_kind)
    start = time.perf_counter()
    trace = run_scenario(scenario)
    return scenario, trace, time.perf_counter() - start


@pytest.fixture(scope="session")
def wmr_circle_run():
    return timed_run(builtin_config("wmr-circle"))


@pytest.fixture(scope="session")
def wmr_lowgain_run():
    return timed_run(builtin_config("wmr-lowgain"))


@pytest.fixture(scope="session")
def wmr_circle_asmc():
    return timed_run(builtin_config("wmr-circle"), controller_kind="asmc")


@pytest.fixture(scope="session")
def wmr_sweep(wmr_circle_run):
    """Boundary-layer sweep traces keyed by varpi; 0.5 reuses the circle run."""
    traces = {0.5: wmr_circle_run[1]}
    for varpi in (0.3, 0.1):
        config = builtin_config("wmr-circle")
        config["controller"]["boundary_layer"] = varpi
        traces[varpi] = timed_run(config)[1]
    return traces


@pytest.fixture(scope="session")
def coriolis_run():
    return timed_run(builtin_config("coriolis-track"))


@pytest.fixture(scope="session")
def oracle_robust_run():
    return timed_run(builtin_config("oracle-robust"))
