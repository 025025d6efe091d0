"""Acceptance criteria, one test each; every test prints a single PASS/FAIL line."""

import itertools
import time

import numpy as np
import pytest

from edgeworth.dynamics import (
    gradient_angle,
    multilateral_fair_solver,
    network_trade_field,
    pairwise_fair_direction,
)
from edgeworth.economy import gradient_matrix, utilities
from edgeworth.integrate import Status, equal_gains_check, integrate, integrate_to_equilibrium, trajectory_report
from edgeworth.networks import star, weights_from_probabilities
from edgeworth.oracles import brute_force_pareto_check, walras_two_agent_cd
from edgeworth.scenario import bundled_scenarios, load_scenario
from edgeworth.sweep import refinement_table, run_sweep

ROW1 = "three_agent_mixed"
EQUAL_GAIN_SCENARIOS = ("tilted_pair_a", "tilted_pair_b", "tilted_pair_c")


@pytest.fixture
def report(capsys):
    def emit(number, ok, detail, seconds):
        with capsys.disabled():
            print(f"\n[{'PASS' if ok else 'FAIL'}] criterion {number:>2}: {detail} ({seconds:.2f} s)")
        return ok

    return emit


@pytest.fixture(scope="module")
def scenario_runs():
    runs = {}
    for name in bundled_scenarios():
        t0 = time.perf_counter()
        sc = load_scenario(name)
        traj, rec = integrate_to_equilibrium(sc)
        runs[name] = (sc, traj, rec, time.perf_counter() - t0)
    return runs


@pytest.fixture(scope="module")
def row1_refinement():
    t0 = time.perf_counter()
    rows = refinement_table(load_scenario(ROW1), [12, 24, 48])
    return rows, time.perf_counter() - t0


def test_criterion_01_axiom_suite(report):
    rng = np.random.default_rng(20240101)
    t0 = time.perf_counter()
    worst = {"zero_sum": 0.0, "rate": 0.0, "orth": 0.0}
    silent = 0
    for _ in range(1000):
        n = int(rng.integers(2, 5))
        m = int(rng.integers(2, 4))
        M = rng.uniform(0.05, 10.0, size=(m, n))
        p = rng.dirichlet(np.ones(n))
        W = weights_from_probabilities(p).weights
        F = network_trade_field(M, W).directions
        scale = max(1.0, float(np.abs(F).max()))
        worst["zero_sum"] = max(worst["zero_sum"], float(np.abs(F.sum(axis=1)).max()) / scale)
        worst["rate"] = min(worst["rate"], float((M * F).sum(axis=0).min()))
        needs_trade = False
        for i, j in itertools.combinations(range(n), 2):
            s = M[:, i] + M[:, j]
            g = pairwise_fair_direction(M[:, i], M[:, j])
            rel = abs(float(s @ g)) / (np.linalg.norm(s) * max(1.0, np.linalg.norm(g)))
            worst["orth"] = max(worst["orth"], rel)
            needs_trade |= gradient_angle(M[:, i], M[:, j]) > 1e-6
        if needs_trade and not np.any(F != 0):
            silent += 1
    dt = time.perf_counter() - t0
    ok = (
        worst["zero_sum"] <= 1e-12
        and worst["rate"] >= -1e-12
        and worst["orth"] <= 1e-12
        and silent == 0
        and dt <= 5.0
    )
    report(1, ok, f"axioms over 1000 states: zero-sum {worst['zero_sum']:.1e}, min rate {worst['rate']:.1e}, "
                  f"orthogonality {worst['orth']:.1e}, silent fields {silent}", dt)
    assert ok


def test_criterion_02_fixture(report):
    t0 = time.perf_counter()
    M = np.array([[2.0, 1.0, 1.0], [1.0, 2.0, 1.0], [1.0, 1.0, 2.0]]).T
    sol = multilateral_fair_solver(M)
    expected = np.array([[5.0, -3.0, -3.0], [-3.0, 5.0, -3.0], [-3.0, -3.0, 5.0]])
    cosines = []
    for space, e in zip(sol.agent_spaces, expected):
        if space.shape[1] != 1:
            cosines.append(0.0)
            continue
        v = space[:, 0]
        cosines.append(abs(v @ e) / (np.linalg.norm(v) * np.linalg.norm(e)))
    dt = time.perf_counter() - t0
    ok = not sol.trade_exists and min(cosines) >= 1 - 1e-10 and dt <= 1.0
    report(2, ok, f"three-agent fixture: trade_exists={sol.trade_exists}, min cosine {min(cosines):.15f}", dt)
    assert ok


def test_criterion_03_existence_law(report):
    rng = np.random.default_rng(7)
    t0 = time.perf_counter()
    expect = {(3, 2): False, (3, 3): False, (4, 3): False, (4, 4): False,
              (3, 4): True, (4, 5): True, (2, 2): True, (2, 3): True}
    wrong = {}
    for (n, m), want in expect.items():
        bad = sum(
            multilateral_fair_solver(rng.uniform(0.05, 10.0, size=(m, n))).trade_exists != want
            for _ in range(200)
        )
        if bad:
            wrong[(n, m)] = bad
    dt = time.perf_counter() - t0
    ok = not wrong and dt <= 10.0
    report(3, ok, f"existence law over 8 configurations x 200 sets, mismatches {wrong or 'none'}", dt)
    assert ok


def test_criterion_04_conservation_monotonicity(report, scenario_runs):
    failures = []
    slowest = 0.0
    for name, (_, traj, rec, dt) in scenario_runs.items():
        rep = trajectory_report(traj, atol_pot=1e-10, atol_u=1e-8, rtol_total=1e-9)
        slowest = max(slowest, dt)
        if not (rec.status.success and rep["conservation_ok"] and rep["potential_monotone"]
                and rep["utilities_monotone"] and dt <= 30.0):
            failures.append(name)
    ok = not failures
    worst_drift = max(r[1].max_total_drift for r in scenario_runs.values())
    report(4, ok, f"{len(scenario_runs)} bundled scenarios, worst total drift {worst_drift:.1e}, "
                  f"failures {failures or 'none'}", slowest)
    assert ok


def test_criterion_05_equilibrium_validity(report, scenario_runs):
    failures = []
    slowest = 0.0
    checked = 0
    for name, (sc, _, rec, _) in scenario_runs.items():
        if rec.status is not Status.CONVERGED:
            continue
        checked += 1
        t0 = time.perf_counter()
        pareto = brute_force_pareto_check(rec.final, sc.params, radius=0.02, samples=20_000, seed=12345)
        dt = time.perf_counter() - t0
        slowest = max(slowest, dt)
        if rec.mrs_residual > 1e-6 or pareto.improvement_found or dt > 10.0:
            failures.append(name)
    ok = checked > 0 and not failures
    report(5, ok, f"{checked} converged records: mrs <= 1e-6 and no Pareto improvement, "
                  f"failures {failures or 'none'}", slowest)
    assert ok


def test_criterion_06_symmetric_oracle(report):
    t0 = time.perf_counter()
    sc = load_scenario("symmetric_pair")
    _, rec = integrate(sc.initial, sc.params, weights_from_probabilities([0.5, 0.5]), sc.config)
    walras = walras_two_agent_cd(sc.initial, sc.params)
    dt = time.perf_counter() - t0
    err_x = float(np.abs(rec.final.entries - 2.0).max())
    err_g = float(np.abs(rec.utility_gains - (2.0 - np.sqrt(3.0))).max())
    err_w = float(np.abs(walras.allocation.entries - 2.0).max())
    ok = err_x <= 1e-5 and err_g <= 1e-5 and err_w <= 1e-12 and dt <= 5.0
    report(6, ok, f"symmetric pair: allocation error {err_x:.1e}, gain error {err_g:.1e}, "
                  f"Walras error {err_w:.1e}", dt)
    assert ok


def test_criterion_07_equal_gains(report):
    t0 = time.perf_counter()
    worst = 0.0
    passed = True
    for name in EQUAL_GAIN_SCENARIOS:
        sc = load_scenario(name)
        traj, rec = integrate_to_equilibrium(sc)
        rep = equal_gains_check(traj, rtol=1e-6)
        worst = max(worst, rep.relative_deviation)
        passed &= rec.status.success and rep.passed
    dt = time.perf_counter() - t0
    ok = passed and dt <= 10.0
    report(7, ok, f"equal gains on {len(EQUAL_GAIN_SCENARIOS)} asymmetric pairs, "
                  f"worst relative deviation {worst:.1e}", dt)
    assert ok


def test_criterion_08_star_split(report):
    t0 = time.perf_counter()
    sc = load_scenario(ROW1)
    worst = 0.0
    for center in range(3):
        _, rec = integrate(sc.initial, sc.params, weights_from_probabilities(star(center, 3)), sc.config)
        g = rec.utility_gains
        worst = max(worst, abs(g[center] - (g.sum() - g[center])) / g.sum())
    dt = time.perf_counter() - t0
    ok = worst <= 1e-3 and dt <= 15.0
    report(8, ok, f"star centre gets half the total gain, worst relative gap {worst:.1e}", dt)
    assert ok


def test_criterion_09_welfare_sampling(report, row1_refinement):
    rows, dt = row1_refinement
    data = rows[0][2]
    s = data.summary
    vertices = [int(np.flatnonzero(data.compositions[:, i] == 12)[0]) for i in range(3)]
    U = data.utilities[vertices]
    star_gap = min(np.linalg.norm(U[a] - U[b]) for a, b in itertools.combinations(range(3), 2))
    jumps = [r[1] for r in rows]
    ok = (
        s["points"] == 91
        and s["status_counts"] == {"Converged": 91}
        and star_gap >= 1e-3
        and jumps[0] > jumps[1] > jumps[2]
        and dt <= 300.0
    )
    report(9, ok, f"resolution-12 sweep {s['status_counts']}, star separation {star_gap:.2e}, "
                  f"refinement {', '.join(f'{j:.2e}' for j in jumps)}", dt)
    assert ok


def test_criterion_10_vertex_dominance(report, row1_refinement):
    t0 = time.perf_counter()
    outcome = {}
    for name in bundled_scenarios():
        if name == ROW1:
            data = row1_refinement[0][0][2]
        else:
            data = run_sweep(load_scenario(name), 12)
        outcome[name] = all(data.summary["vertex_dominance"]) and data.publishable
    dt = time.perf_counter() - t0
    failures = [k for k, v in outcome.items() if not v]
    ok = not failures
    report(10, ok, f"vertex dominance in {len(outcome)} bundled sweeps, failures {failures or 'none'}", dt)
    assert ok


def test_criterion_11_row1_ordering(report, row1_refinement):
    t0 = time.perf_counter()
    U = row1_refinement[0][0][2].utilities
    margin = float(np.min(U[:, 2] - U[:, :2].max(axis=1)))
    dt = time.perf_counter() - t0
    ok = margin > 0
    report(11, ok, f"agent 3 on top at all {len(U)} grid points, smallest margin {margin:.3f}", dt)
    assert ok
