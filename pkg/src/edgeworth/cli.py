"""Command line entry point: ``edgeworth <subcommand>``.

Exit codes: 0 success, 2 validation, 3 integration failure, 4 partial sweep.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import logging
import sys
from pathlib import Path

import numpy as np

from .compare import walras_compare
from .dynamics import multilateral_fair_solver
from .errors import EdgeworthError, IntegrationError, ParseError, ValidationError
from .integrate import integrate_to_equilibrium, trajectory_report
from .io import fmt, record_payload, write_csv, write_json, write_manifold, write_trajectory
from .scenario import build_config, bundled_scenarios, coerce_config_value, load_scenario
from .sweep import run_sweep

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_INTEGRATION = 3
EXIT_PARTIAL = 4

log = logging.getLogger("edgeworth")


def parse_overrides(text):
    """``key=val,key=val`` into a dict of integrator settings."""
    out = {}
    if not text:
        return out
    for item in text.split(","):
        item = item.strip()
        if not item:
            continue
        key, sep, value = item.partition("=")
        if not sep:
            raise ValidationError("--tolerance-overrides", f"expected key=value, got {item!r}")
        key = key.strip()
        out[key] = coerce_config_value(key, value.strip(), f"--tolerance-overrides.{key}")
    return out


def _scenario(args):
    scenario = load_scenario(args.scenario)
    changes = parse_overrides(getattr(args, "tolerance_overrides", None))
    if getattr(args, "stride", None) is not None:
        changes["stride"] = args.stride
    if changes:
        scenario = dataclasses.replace(scenario, config=build_config(changes, scenario.config))
    return scenario


def _outdir(path):
    out = Path(path)
    out.mkdir(parents=True, exist_ok=True)
    return out


def cmd_simulate(args):
    scenario = _scenario(args)
    out = _outdir(args.out)
    try:
        trajectory, record = integrate_to_equilibrium(scenario)
    except IntegrationError as exc:
        write_json(out / "equilibrium.json", {"status": "IntegrationError", "error": str(exc)})
        log.error("integration failed: %s", exc)
        return EXIT_INTEGRATION
    write_trajectory(out / "trajectory.csv", trajectory)
    write_json(out / "equilibrium.json", {"scenario": scenario.name, **record_payload(record)})
    invariants = trajectory_report(trajectory)
    invariants["samples"] = [
        {
            "t": t,
            "zero_sum_residual": d.zero_sum_residual,
            "utility_rates": d.utility_rates,
            "trade_required": d.trade_required,
            "trade_ok": d.trade_ok,
        }
        for t, d in zip(trajectory.times, trajectory.diagnostics)
    ]
    write_json(out / "invariants.json", invariants)
    print(f"{scenario.name}: {record.status} after {record.steps} steps, t={fmt(record.elapsed_time)}")
    print("final utilities: " + ", ".join(fmt(u) for u in record.final_utilities))
    return EXIT_OK if record.status.success else EXIT_INTEGRATION


def cmd_sweep(args):
    scenario = _scenario(args)
    out = _outdir(args.out)
    data = run_sweep(scenario, args.resolution, args.workers)
    write_manifold(out / "manifold.csv", data)
    write_json(out / "summary.json", {"scenario": scenario.name, "resolution": args.resolution, **data.summary})
    s = data.summary
    print(f"{scenario.name}: {s['points']} grid points, status {s['status_counts']}")
    for i in range(scenario.n):
        print(
            f"  agent {i + 1}: utility in [{fmt(s['utility_min'][i])}, {fmt(s['utility_max'][i])}], "
            f"best at p={s['argmax_point'][i]}, vertex dominance {'PASS' if s['vertex_dominance'][i] else 'FAIL'}"
        )
    return EXIT_OK if data.publishable else EXIT_PARTIAL


def read_gradients(path):
    """One agent per line, goods separated by commas or whitespace; returns ``(m, n)``."""
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ParseError(f"{path}: {exc}") from None
    rows = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            rows.append([float(v) for v in line.replace(",", " ").split()])
        except ValueError:
            raise ParseError(f"{path}:{lineno}: not a list of numbers: {line!r}") from None
    if len(rows) < 2 or len({len(r) for r in rows}) != 1:
        raise ParseError(f"{path}: need at least 2 rows of equal length")
    return np.array(rows).T


def cmd_existence(args):
    M = read_gradients(args.gradients)
    sol = multilateral_fair_solver(M)
    m, n = M.shape
    payload = {
        "agents": n,
        "goods": m,
        "nullspace_dimension": sol.nullspace_dimension,
        "trade_exists": sol.trade_exists,
        "agent_space_dimensions": [s.shape[1] for s in sol.agent_spaces],
    }
    print(json.dumps(payload, indent=2))
    return EXIT_OK


def cmd_walras(args):
    scenario = _scenario(args)
    cmp = walras_compare(scenario)
    m, n = 2, 2
    if args.out:
        out = _outdir(args.out)
        write_json(out / "walras_compare.json", {"scenario": scenario.name, **cmp.report})
        tr = cmp.trajectory
        header = ["path", "s", *[f"x_{i + 1}_{k + 1}" for i in range(n) for k in range(m)], "U_1", "U_2"]
        rows = [["fair", t, *tr.states[j].T.ravel(), *tr.utilities[j]] for j, t in enumerate(tr.times)]
        s = np.linspace(0.0, 1.0, len(cmp.walras_path))
        rows += [
            ["walras", s[j], *cmp.walras_path[j].T.ravel(), *cmp.walras_path_utilities[j]]
            for j in range(len(s))
        ]
        write_csv(out / "paths.csv", header, rows)
    r = cmp.report
    print(f"fair:   {r['fair_status']}, utilities {[fmt(u) for u in r['fair_utilities']]}")
    print(f"walras: price ratio {fmt(r['walras_price_ratio'])}, utilities {[fmt(u) for u in r['walras_utilities']]}")
    print(f"fair-path slope in utility space: {r['fair_utility_slope']}")
    print(f"distance between equilibria (goods space): {fmt(r['goods_distance'])}")
    return EXIT_OK if cmp.record.status.success else EXIT_INTEGRATION


def cmd_scenarios(args):
    for name in bundled_scenarios():
        sc = load_scenario(name)
        print(f"{name:<24} n={sc.n} m={sc.m}  {sc.description}")
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(prog="edgeworth", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def scenario_args(p, stride=True):
        p.add_argument("--scenario", required=True, help="scenario TOML path or bundled name")
        p.add_argument("--tolerance-overrides", metavar="KEY=VAL,...", help="integrator settings to override")
        if stride:
            p.add_argument("--stride", type=int, help="store every s-th accepted step")

    p = sub.add_parser("simulate", help="integrate one scenario to equilibrium")
    scenario_args(p)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("sweep", help="solve every network of a simplex grid")
    scenario_args(p)
    p.add_argument("--resolution", type=int, required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--workers", type=int, default=None, help="default: available CPUs")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("existence", help="check for multilateral fair trades without a network")
    p.add_argument("--gradients", required=True, help="text file, one agent's gradient per line")
    p.set_defaults(func=cmd_existence)

    p = sub.add_parser("walras-compare", help="fair vs Walrasian equilibrium for 2 agents, 2 goods")
    scenario_args(p)
    p.add_argument("--out")
    p.set_defaults(func=cmd_walras)

    p = sub.add_parser("scenarios", help="bundled scenarios")
    p.add_argument("action", choices=["list"])
    p.set_defaults(func=cmd_scenarios)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except IntegrationError as exc:
        print(f"integration error: {exc}", file=sys.stderr)
        return EXIT_INTEGRATION
    except (EdgeworthError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
