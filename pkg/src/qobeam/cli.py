"""Command-line front end.

Angles cross this boundary in degrees and are radians everywhere inside;
durations are printed in microseconds. Every command is deterministic given
its config file (seeds included) and writes CSV/JSON to stdout or --out.

Exit codes: 0 success, 1 validation failure, 2 bad input.
"""
from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from dataclasses import replace

from .cbap import min_cbap_duration
from .contention import METHODS
from .errors import InvalidParameterError, ScenarioFormatError, SolverFailure
from .experiments import (
    DEFAULT_N_SWEEP,
    ExperimentConfig,
    run_comparison,
    run_linkbudget_curves,
    run_utilization_sweep,
    run_validation,
)
from .linkbudget import PhyEnv
from .params import MacParams, TimingParams
from .scenario import GeometryConfig, generate_scenario, load_scenario, save_scenario, scenario_to_dict
from .sectors import AllocatorConfig, allocate_adaptive, allocate_fixed, plan_from_dict, plan_to_dict
from .simulator import simulate_plan, simulate_sector

DEG = math.pi / 180.0


def _fmt(value) -> str:
    """CSV cell: floats at 9 significant digits, everything else as str."""
    if isinstance(value, bool):
        return "1" if value else "0"
    if isinstance(value, float):
        return f"{value:.9g}"
    return str(value)


def _write_csv(path, header, rows):
    fh = open(path, "w", newline="", encoding="utf-8") if path else sys.stdout
    try:
        writer = csv.writer(fh)
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt(v) for v in row])
    finally:
        if path:
            fh.close()


def _write_text(path, text):
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# -- config ingestion ---------------------------------------------------------

def _seeds_from(value) -> tuple[int, ...]:
    if isinstance(value, int):
        return tuple(range(value))
    return tuple(int(s) for s in value)


def config_from_dict(data: dict) -> ExperimentConfig:
    """Build an ExperimentConfig from the JSON config schema.

    ``{"defaults": "table1"}`` starts from the built-in 802.11ad CBAP
    reference parameter set; explicit sections override field by field.
    Angle keys carry a ``_deg`` suffix and are converted to radians.
    """
    if not isinstance(data, dict):
        raise ScenarioFormatError("config must be a JSON object")
    known = {"defaults", "mac", "timing", "env", "geometry", "allocator",
             "fixed_width_deg", "seeds", "method", "n_sweep"}
    unknown = set(data) - known
    if unknown:
        raise ScenarioFormatError(f"unknown config keys: {sorted(unknown)}")
    defaults = data.get("defaults", "table1")
    if defaults != "table1":
        raise ScenarioFormatError(f"unknown defaults preset {defaults!r}")
    cfg = ExperimentConfig()
    try:
        if "mac" in data:
            cfg = replace(cfg, mac=MacParams(**data["mac"]))
        if "timing" in data:
            t = dict(data["timing"])
            for key in ("sifs", "difs", "cca_detect", "rifs", "timeout"):
                if f"{key}_us" in t:
                    value = t.pop(f"{key}_us")
                    t[key] = None if value is None else value * 1e-6
            for key in ("control_rate", "data_rate"):
                if f"{key}_bps" in t:
                    t[key] = t.pop(f"{key}_bps")
            cfg = replace(cfg, timing=TimingParams(**t))
        if "env" in data:
            e = dict(data["env"])
            mapping = {"tx_power_dbm": "tx_power", "frequency_hz": "frequency",
                       "fading_db": "fading", "link_margin_db": "link_margin",
                       "sensitivities_dbm": "sensitivities"}
            e = {mapping.get(k, k): v for k, v in e.items()}
            cfg = replace(cfg, env=PhyEnv(**e))
        if "geometry" in data:
            g = dict(data["geometry"])
            for key in ("angle_mean", "angle_std"):
                if f"{key}_deg" in g:
                    g[key] = g.pop(f"{key}_deg") * DEG
            for key in ("radius_m", "dist_min_m"):
                if key in g:
                    g[key.removesuffix("_m")] = g.pop(key)
            cfg = replace(cfg, geometry=GeometryConfig(**g))
        if "allocator" in data:
            a = dict(data["allocator"])
            for key in ("omega_min", "delta_omega", "omega_max"):
                if f"{key}_deg" in a:
                    a[key] = a.pop(f"{key}_deg") * DEG
            cfg = replace(cfg, allocator=AllocatorConfig(**a))
        if "fixed_width_deg" in data:
            cfg = replace(cfg, fixed_width=data["fixed_width_deg"] * DEG)
        if "seeds" in data:
            cfg = replace(cfg, seeds=_seeds_from(data["seeds"]))
        if "method" in data:
            if data["method"] not in METHODS:
                raise ScenarioFormatError(
                    f"unknown method {data['method']!r}, expected one of {METHODS}")
            cfg = replace(cfg, method=data["method"])
        if "n_sweep" in data:
            cfg = replace(cfg, n_sweep=tuple(int(n) for n in data["n_sweep"]))
    except TypeError as exc:
        raise ScenarioFormatError(f"bad config field: {exc}") from exc
    return cfg


def load_config(path: str | None) -> ExperimentConfig:
    if path is None:
        return ExperimentConfig()
    with open(path, encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ScenarioFormatError(f"{path}: invalid JSON at line {exc.lineno}: {exc.msg}") from exc
    return config_from_dict(data)


def _apply_overrides(cfg: ExperimentConfig, args) -> ExperimentConfig:
    """Command-line flags override config-file values."""
    if getattr(args, "method", None):
        cfg = replace(cfg, method=args.method)
    if getattr(args, "seeds", None) is not None:
        cfg = replace(cfg, seeds=tuple(range(args.seeds)))
    if getattr(args, "n_sweep", None):
        cfg = replace(cfg, n_sweep=tuple(args.n_sweep))
    if getattr(args, "seed", None) is not None:
        cfg = replace(cfg, geometry=replace(cfg.geometry, seed=args.seed))
    n = getattr(args, "n", None)
    if isinstance(n, int):
        cfg = replace(cfg, geometry=replace(cfg.geometry, n=n))
    return cfg


# -- subcommands --------------------------------------------------------------

def _cmd_sweep_utilization(args) -> int:
    cfg = _apply_overrides(load_config(args.config), args)
    n_values = args.n_sweep or range(1, 51)
    rows, errors = run_utilization_sweep(n_values, cfg)
    _write_csv(args.out, ["n", "utilization"], rows)
    for n, msg in errors:
        print(f"n={n}: {msg}", file=sys.stderr)
    return 0


def _cmd_compare(args) -> int:
    cfg = _apply_overrides(load_config(args.config), args)
    result = run_comparison(cfg)
    rows = [
        (r.n, r.seed, r.u_adaptive, r.u_fixed, r.t_adaptive * 1e6, r.t_fixed * 1e6)
        for r in result.rows
    ]
    _write_csv(args.out, ["n", "seed", "u_adaptive", "u_fixed",
                          "t_adaptive_us", "t_fixed_us"], rows)
    agg_header = ["n", "seeds_used", "u_adaptive_mean", "u_adaptive_std",
                  "u_fixed_mean", "u_fixed_std", "t_adaptive_us_mean",
                  "t_adaptive_us_std", "t_fixed_us_mean", "t_fixed_us_std",
                  "uplift_mean", "reduction_mean"]
    agg_rows = [
        (a.n, a.seeds_used, a.u_adaptive_mean, a.u_adaptive_std,
         a.u_fixed_mean, a.u_fixed_std, a.t_adaptive_mean * 1e6,
         a.t_adaptive_std * 1e6, a.t_fixed_mean * 1e6, a.t_fixed_std * 1e6,
         a.uplift_mean, a.reduction_mean)
        for a in result.aggregates
    ]
    if args.summary_out:
        _write_csv(args.summary_out, agg_header, agg_rows)
    else:
        for a in result.aggregates:
            print(
                f"n={a.n}: utilization {a.u_adaptive_mean:.4f} vs {a.u_fixed_mean:.4f} "
                f"(uplift {a.uplift_mean * 100:+.1f}%), duration "
                f"{a.t_adaptive_mean * 1e6:.0f} vs {a.t_fixed_mean * 1e6:.0f} us "
                f"(reduction {a.reduction_mean * 100:+.1f}%)",
                file=sys.stderr,
            )
    if result.failures:
        print(f"{len(result.failures)} (n, seed) draws failed and were excluded",
              file=sys.stderr)
        for n, seed, msg in result.failures:
            print(f"  n={n} seed={seed}: {msg}", file=sys.stderr)
    return 0


def _cmd_link_budget(args) -> int:
    cfg = _apply_overrides(load_config(args.config), args)
    rows, skipped = run_linkbudget_curves(
        cfg, args.mcs, args.distance, [rx * DEG for rx in args.rx_bw_deg])
    out_rows = [
        (mcs, d, rx / DEG, "" if tx is None else tx / DEG, clamped)
        for (mcs, d, rx, tx, clamped) in rows
    ]
    _write_csv(args.out, ["mcs", "d_m", "rx_bw_deg", "tx_bw_deg", "clamped"], out_rows)
    for mcs in skipped:
        print(f"unknown MCS {mcs!r}: no sensitivity configured, skipped", file=sys.stderr)
    return 0


def _cmd_cbap_time(args) -> int:
    cfg = _apply_overrides(load_config(args.config), args)
    rows = []
    for n in args.n:
        requests = args.requests if args.requests is not None else n
        est = min_cbap_duration(requests, n, cfg.mac, cfg.slots, cfg.method)
        rows.append((n, requests, est.n_id, est.n_b_min, est.t_b * 1e6, est.t_cbap * 1e6))
    _write_csv(args.out, ["n", "requests", "n_idle", "n_busy_min", "t_busy_us",
                          "t_cbap_us"], rows)
    return 0


def _cmd_allocate(args) -> int:
    cfg = _apply_overrides(load_config(args.config), args)
    scenario = load_scenario(args.scenario) if args.scenario \
        else generate_scenario(cfg.geometry)
    if args.kind == "adaptive":
        plan = allocate_adaptive(scenario, cfg.allocator, cfg.mac, cfg.slots, cfg.method)
    else:
        plan = allocate_fixed(scenario, cfg.fixed_width)
    _write_text(args.out, json.dumps(plan_to_dict(plan), indent=2) + "\n")
    return 0


def _cmd_simulate(args) -> int:
    cfg = _apply_overrides(load_config(args.config), args)
    header = ["sector", "n", "idle_slots", "success_slots", "collision_slots",
              "elapsed_us", "empirical_tau", "empirical_p", "utilization"]
    stop = {}
    if args.slots is not None:
        stop["max_slots"] = args.slots
    if args.target_successes is not None:
        stop["target_successes"] = args.target_successes
    if not stop:
        stop["max_slots"] = 200_000
    sim_seed = args.seed if args.seed is not None else cfg.geometry.seed
    if args.plan:
        with open(args.plan, encoding="utf-8") as fh:
            plan = plan_from_dict(json.load(fh))
        stats = simulate_plan(plan, cfg.mac, cfg.slots, seed=sim_seed, **stop)
        rows = [
            (k, len(plan.sectors[k].members), st.idle_slots, st.success_slots,
             st.collision_slots, st.elapsed * 1e6, st.empirical_tau,
             st.empirical_p, st.utilization)
            for k, st in enumerate(stats)
        ]
    else:
        n = args.n if args.n is not None else cfg.geometry.n
        st = simulate_sector(n, cfg.mac, cfg.slots, seed=sim_seed, **stop)
        rows = [(0, n, st.idle_slots, st.success_slots, st.collision_slots,
                 st.elapsed * 1e6, st.empirical_tau, st.empirical_p, st.utilization)]
    _write_csv(args.out, header, rows)
    return 0


def _cmd_gen_scenario(args) -> int:
    cfg = _apply_overrides(load_config(args.config), args)
    scenario = generate_scenario(cfg.geometry)
    if args.out:
        save_scenario(scenario, args.out)
    else:
        json.dump(scenario_to_dict(scenario), sys.stdout, indent=2)
        sys.stdout.write("\n")
    return 0


def _cmd_validate(args) -> int:
    cfg = _apply_overrides(load_config(args.config), args)
    report = run_validation(cfg, n_values=tuple(args.n),
                            sim_slots=args.slots, sim_seeds=args.sim_seeds)
    lines = ["model cross-validation (closed-form | numeric-chain | simulator)", ""]
    for r in report.rows:
        lines.append(
            f"n={r.n:3d}  p: {r.p_closed:.6f} | {r.p_chain:.6f} | "
            f"{r.p_sim_mean:.6f} (se {r.p_sim_se:.2e})\n"
            f"       tau: {r.tau_closed:.6f} | {r.tau_chain:.6f} | "
            f"{r.tau_sim_mean:.6f} (se {r.tau_sim_se:.2e})\n"
            f"       U: {r.u_closed:.6f} | {r.u_chain:.6f} | {r.u_sim_mean:.6f}"
            f"   chain-vs-sim {'OK' if r.chain_ok else 'MISMATCH'}"
        )
    lines.append("")
    for note in report.notes:
        lines.append(f"note: {note}")
    lines.append("")
    lines.append("RESULT: " + ("PASS" if report.passed else "FAIL"))
    _write_text(args.out, "\n".join(lines) + "\n")
    return 0 if report.passed else 1


# -- parser -------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qobeam",
        description="Contention analysis, adaptive sector allocation and CBAP "
                    "budgeting for 60 GHz WLANs.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", help="JSON experiment config file")
        p.add_argument("--out", help="output path (default: stdout)")
        p.add_argument("--method", choices=METHODS, help="contention solver")

    p = sub.add_parser("sweep-utilization", help="analytic utilization vs station count")
    common(p)
    p.add_argument("--n-sweep", type=int, nargs="+", help="station counts (default 1..50)")
    p.set_defaults(func=_cmd_sweep_utilization)

    p = sub.add_parser("compare", help="adaptive vs fixed sector plans over seeds")
    common(p)
    p.add_argument("--n-sweep", type=int, nargs="+", help=f"default {list(DEFAULT_N_SWEEP)}")
    p.add_argument("--seeds", type=int, help="use seeds 0..k-1")
    p.add_argument("--summary-out", help="write per-n aggregates as CSV")
    p.set_defaults(func=_cmd_compare)

    p = sub.add_parser("link-budget", help="max transmit beamwidth per MCS/distance")
    common(p)
    p.add_argument("--mcs", nargs="+", default=["MCS0", "MCS4"])
    p.add_argument("--distance", type=float, nargs="+", default=[5.0, 10.0, 15.0])
    p.add_argument("--rx-bw-deg", type=float, nargs="+", default=[60.0])
    p.set_defaults(func=_cmd_link_budget)

    p = sub.add_parser("cbap-time", help="minimum contention-period duration")
    common(p)
    p.add_argument("--n", type=int, nargs="+", required=True, help="station counts")
    p.add_argument("--requests", type=int, help="requests per sector (default: n)")
    p.set_defaults(func=_cmd_cbap_time)

    p = sub.add_parser("allocate", help="build a sector plan for a scenario")
    common(p)
    p.add_argument("--scenario", help="scenario JSON (default: generate from config)")
    p.add_argument("--kind", choices=["adaptive", "fixed"], default="adaptive")
    p.add_argument("--seed", type=int, help="override the generation seed")
    p.add_argument("--n", type=int, help="override the generated station count")
    p.set_defaults(func=_cmd_allocate)

    p = sub.add_parser("simulate", help="slot-level Monte Carlo run")
    common(p)
    p.add_argument("--plan", help="sector plan JSON (default: one sector of --n stations)")
    p.add_argument("--n", type=int, help="station count for a single-sector run")
    p.add_argument("--slots", type=int, help="slot budget")
    p.add_argument("--target-successes", type=int, help="stop after this many successes")
    p.add_argument("--seed", type=int, help="simulation seed")
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("gen-scenario", help="draw and save a station layout")
    common(p)
    p.add_argument("--seed", type=int, help="override the generation seed")
    p.add_argument("--n", type=int, help="override the station count")
    p.set_defaults(func=_cmd_gen_scenario)

    p = sub.add_parser("validate", help="cross-check solvers against the simulator")
    common(p)
    p.add_argument("--n", type=int, nargs="+", default=[1, 2, 5, 10, 20, 50])
    p.add_argument("--slots", type=int, default=200_000, help="slots per simulation run")
    p.add_argument("--sim-seeds", type=int, default=10, help="simulation runs per n")
    p.set_defaults(func=_cmd_validate)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (InvalidParameterError, ScenarioFormatError, SolverFailure,
            FileNotFoundError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
