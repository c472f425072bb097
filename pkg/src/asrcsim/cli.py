"""Command-line front end: run manifests, validate configs, list builtins.

Exit codes
  run:       0 all combinations completed; 2 malformed manifest/config
             (diagnostics name the file line or field); 3 at least one run
             diverged (outputs for every combination are still written).
  validate:  0 valid; 1 violations (printed one per line); 2 unreadable/
             malformed JSON.

The output root is resolved in order: --output-dir flag, ASRCSIM_OUTPUT_ROOT
environment variable, the manifest's output_dir, then ./runs.
"""

from __future__ import annotations

import argparse
import copy
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor

from .analysis import metrics, write_report
from .plants import WmrPlant
from .scenarios import BUILTINS, builtin_config, scenario_from_config, validate_config
from .sim import CONTROLLER_KINDS, run_scenario

ENV_OUTPUT_ROOT = "ASRCSIM_OUTPUT_ROOT"
MANIFEST_KEYS = ("scenario", "output_dir", "controllers", "sweep", "workers")


def _load_json(path: str):
    """(parsed object, None) or (None, diagnostic string)."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh), None
    except OSError as exc:
        return None, f"{path}: {exc.strerror or exc}"
    except json.JSONDecodeError as exc:
        return None, f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}"


def _get_by_path(config: dict, dotted: str):
    node = config
    for part in dotted.split("."):
        if not isinstance(node, dict) or part not in node:
            return None
        node = node[part]
    return node


def _set_by_path(config: dict, dotted: str, value) -> str | None:
    parts = dotted.split(".")
    node = config
    for part in parts[:-1]:
        if not isinstance(node, dict) or part not in node:
            return f"sweep.parameter: no such field {dotted!r}"
        node = node[part]
    if not isinstance(node, dict) or parts[-1] not in node:
        return f"sweep.parameter: no such field {dotted!r}"
    node[parts[-1]] = value
    return None


def _check_manifest(manifest) -> list[str]:
    if not isinstance(manifest, dict):
        return ["manifest: must be a JSON object"]
    problems = []
    for key in manifest:
        if key not in MANIFEST_KEYS:
            problems.append(f"manifest.{key}: unknown field")
    if not isinstance(manifest.get("scenario"), str) or not manifest.get("scenario"):
        problems.append("manifest.scenario: must be a builtin name or a config path")
    out = manifest.get("output_dir")
    if out is not None and not isinstance(out, str):
        problems.append("manifest.output_dir: must be a string")
    ctrls = manifest.get("controllers")
    if ctrls is not None:
        if not isinstance(ctrls, list) or not ctrls:
            problems.append("manifest.controllers: must be a nonempty list")
        else:
            for c in ctrls:
                if c not in CONTROLLER_KINDS:
                    problems.append(
                        f"manifest.controllers: {c!r} is not one of {CONTROLLER_KINDS}"
                    )
    sweep = manifest.get("sweep")
    if sweep is not None:
        if not isinstance(sweep, dict):
            problems.append("manifest.sweep: must be an object")
        else:
            if not isinstance(sweep.get("parameter"), str) or not sweep.get("parameter"):
                problems.append("manifest.sweep.parameter: must be a dotted field path")
            values = sweep.get("values")
            if not isinstance(values, list) or not values:
                problems.append("manifest.sweep.values: must be a nonempty list")
    workers = manifest.get("workers", 1)
    if isinstance(workers, bool) or not isinstance(workers, int) or workers < 1:
        problems.append("manifest.workers: must be a positive integer")
    return problems


def _resolve_scenario_config(ref: str):
    """(config dict, None) or (None, diagnostic) for a builtin name or path."""
    if ref in BUILTINS:
        return builtin_config(ref), None
    if os.path.exists(ref):
        return _load_json(ref)
    return None, (
        f"manifest.scenario: {ref!r} is neither a builtin "
        f"({', '.join(sorted(BUILTINS))}) nor an existing file"
    )


def _fmt_value(value) -> str:
    if isinstance(value, float):
        return f"{value:.9g}"
    return str(value)


def _combo_label(kind: str, sweep_param: str | None, value) -> str:
    if sweep_param is None:
        return kind
    leaf = sweep_param.rsplit(".", 1)[-1]
    return f"{kind}_{leaf}_{_fmt_value(value)}"


def _run_combo(spec: tuple) -> dict:
    """Worker body: build, run, and report one (controller, sweep) combination."""
    config, kind, label, out_dir = spec
    sc = scenario_from_config(config, kind)
    trace = run_scenario(sc)
    wmr_params = sc.plant.params if isinstance(sc.plant, WmrPlant) else None
    metr = metrics(trace, wmr_params)
    os.makedirs(out_dir, exist_ok=True)
    trace.to_csv(os.path.join(out_dir, "trace.csv"))
    write_report(out_dir, label, trace, metr, wmr_params)
    return {
        "label": label,
        "controller": kind,
        "ticks": int(trace.t.size),
        "diverged": trace.diverged,
        "rms_ep": metr.rms_ep,
        "rms_tau": metr.rms_tau,
        "rms_e": metr.rms_e,
    }


def cmd_run(args: argparse.Namespace) -> int:
    manifest, diag = _load_json(args.manifest)
    if diag:
        print(diag, file=sys.stderr)
        return 2
    problems = _check_manifest(manifest)
    if problems:
        for p in problems:
            print(p, file=sys.stderr)
        return 2
    config, diag = _resolve_scenario_config(manifest["scenario"])
    if diag:
        print(diag, file=sys.stderr)
        return 2
    problems = validate_config(config)
    if problems:
        for p in problems:
            print(p, file=sys.stderr)
        return 2

    controllers = manifest.get("controllers") or [config["controller"]["kind"]]
    sweep = manifest.get("sweep")
    sweep_param = sweep["parameter"] if sweep else None
    sweep_values = sweep["values"] if sweep else [None]
    if sweep_param is not None and _get_by_path(config, sweep_param) is None:
        print(f"manifest.sweep.parameter: no such field {sweep_param!r}", file=sys.stderr)
        return 2

    root = (
        args.output_dir
        or os.environ.get(ENV_OUTPUT_ROOT)
        or manifest.get("output_dir")
        or "runs"
    )
    scenario_dir = os.path.join(root, config["name"])

    specs = []
    combo_values = []
    for kind in controllers:
        for value in sweep_values:
            combo = copy.deepcopy(config)
            if sweep_param is not None:
                diag = _set_by_path(combo, sweep_param, value)
                if diag:
                    print(diag, file=sys.stderr)
                    return 2
                bad = validate_config(combo)
                if bad:
                    for p in bad:
                        print(f"sweep value {_fmt_value(value)}: {p}", file=sys.stderr)
                    return 2
            label = _combo_label(kind, sweep_param, value)
            specs.append((combo, kind, label, os.path.join(scenario_dir, label)))
            combo_values.append(value)

    workers = manifest.get("workers", 1)
    if workers > 1 and len(specs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_run_combo, specs))
    else:
        results = [_run_combo(spec) for spec in specs]

    os.makedirs(scenario_dir, exist_ok=True)
    metrics_path = os.path.join(scenario_dir, "metrics.csv")
    with open(metrics_path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("label,controller,parameter,value,rms_ep_m,rms_tau_nm,rms_e_rad,diverged\n")
        for res, value in zip(results, combo_values):
            ep = "" if res["rms_ep"] is None else f"{res['rms_ep']:.9g}"
            fh.write(
                f"{res['label']},{res['controller']},"
                f"{sweep_param or ''},{'' if value is None else _fmt_value(value)},"
                f"{ep},{res['rms_tau']:.9g},{res['rms_e']:.9g},{int(res['diverged'])}\n"
            )

    diverged = [res["label"] for res in results if res["diverged"]]
    for res in results:
        print(
            f"{res['label']}: ticks={res['ticks']} diverged={res['diverged']}"
            f" -> {os.path.join(scenario_dir, res['label'])}"
        )
    print(f"metrics: {metrics_path}")
    if diverged:
        print(f"diverged runs: {', '.join(diverged)}", file=sys.stderr)
        return 3
    return 0


def cmd_validate(args: argparse.Namespace) -> int:
    config, diag = _load_json(args.config)
    if diag:
        print(diag, file=sys.stderr)
        return 2
    problems = validate_config(config)
    if problems:
        for p in problems:
            print(p)
        return 1
    print("ok")
    return 0


def cmd_list_scenarios(_args: argparse.Namespace) -> int:
    for name in sorted(BUILTINS):
        print(f"{name}: {BUILTINS[name]}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="asrcsim",
        description="Adaptive switching-gain robust control simulator",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="execute a run manifest")
    p_run.add_argument("manifest", help="path to a JSON run manifest")
    p_run.add_argument(
        "--output-dir",
        default=None,
        help=f"output root (overrides {ENV_OUTPUT_ROOT} and the manifest)",
    )
    p_run.set_defaults(func=cmd_run)

    p_val = sub.add_parser("validate", help="check a scenario config without running")
    p_val.add_argument("config", help="path to a JSON scenario config")
    p_val.set_defaults(func=cmd_validate)

    p_list = sub.add_parser("list-scenarios", help="list builtin scenarios")
    p_list.set_defaults(func=cmd_list_scenarios)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    raise SystemExit(main())
