"""Acceptance gate: every criterion runs at its stated scale and tolerance.

Run alone with ``pytest tests/test_acceptance.py -v``; a PASS/FAIL line per
criterion is printed in the terminal summary.
"""
import csv
import statistics
import time

import numpy as np
import pytest
from scipy.stats import binomtest

from helpers import report
from oracles import grid_fit, powerlaw_sample
from sfattack.attacks import STRATEGIES, apply_step, dalr_step, make_step
from sfattack.cli import main
from sfattack.generators import BaConfig, generate_ba
from sfattack.harness import ExperimentConfig, cmd_attack, cmd_generate
from sfattack.powerlaw import fit_tail

pytestmark = pytest.mark.acceptance

SIZE = 500
DATASET = dict(sizes=[SIZE], count=40, bootstrap=100, seed=2024)
CAMPAIGN = dict(reps=20, attack_networks=20)


def read_rows(path):
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


@pytest.fixture(scope="module")
def dataset(tmp_path_factory):
    out = tmp_path_factory.mktemp("dataset")
    t0 = time.perf_counter()
    manifest = cmd_generate(ExperimentConfig(out=str(out), **DATASET))
    return out, manifest, time.perf_counter() - t0


@pytest.fixture(scope="module")
def campaign(dataset):
    root, manifest, _ = dataset
    out = root.parent / (root.name + "-results")
    t0 = time.perf_counter()
    rows, summary = cmd_attack(ExperimentConfig(out=str(out), **DATASET, **CAMPAIGN), root)
    overall = {r["strategy"]: r for r in summary.rows if r["target"] == "overall" and r["size"] == SIZE}
    return {"rows": rows, "summary": summary, "overall": overall, "out": out,
            "seconds": time.perf_counter() - t0, "networks": len({r["network_id"] for r in rows})}


def test_criterion_1_ba_strong_prevalence(dataset):
    _, manifest, seconds = dataset
    cats = [n["classification"]["category"] for n in manifest["networks"]]
    frac = cats.count("strong") / len(cats)
    ok = len(cats) >= 30 and frac >= 0.70 and seconds < 600
    detail = f"{cats.count('strong')}/{len(cats)} strong = {frac:.1%} (need >= 70%), generation {seconds:.0f}s (< 600s)"
    assert report(1, "BA prevalence", ok, detail), detail


def test_criterion_2_strategy_ordering(campaign):
    o = campaign["overall"]
    dm = {s: o[s]["mean_delta_m"] for s in STRATEGIES}
    counts = {s: o[s]["count"] for s in STRATEGIES}
    ok = (campaign["networks"] >= 20 and all(c >= 20 * 20 * 0.95 for c in counts.values())
          and dm["DILR"] < dm["DALR"] < dm["RLR"] and dm["DILR"] < 0.08 and dm["RLR"] > 0.12)
    detail = (f"mean dM RLR {dm['RLR']:.2%}, DALR {dm['DALR']:.2%}, DILR {dm['DILR']:.2%} "
              f"(need DILR < DALR < RLR, DILR < 8%, RLR > 12%); {campaign['networks']} networks, "
              f"runs {counts}, campaign {campaign['seconds']:.0f}s")
    assert report(2, "strategy ordering", ok, detail), detail


def test_criterion_3_concealment_magnitudes(campaign):
    o = campaign["overall"]
    dl = {s: o[s]["mean_delta_l"] for s in STRATEGIES}
    dd = {s: o[s]["mean_delta_d"] for s in STRATEGIES}
    checks = {
        "dD < 1% for all": all(v < 0.01 for v in dd.values()),
        "dL(RLR) < 5%": dl["RLR"] < 0.05,
        "dL(DALR) > dL(DILR) > dL(RLR)": dl["DALR"] > dl["DILR"] > dl["RLR"],
    }
    failed = [k for k, v in checks.items() if not v]
    detail = ("mean dL " + ", ".join(f"{s} {dl[s]:.2%}" for s in STRATEGIES)
              + "; mean dD " + ", ".join(f"{s} {dd[s]:.3%}" for s in STRATEGIES)
              + (f"; failed: {'; '.join(failed)}" if failed else ""))
    assert report(3, "concealment magnitudes", not failed, detail), detail


def test_criterion_4_directional_shifts(campaign):
    parts, ok = [], True
    for s in STRATEGIES:
        done = [r for r in campaign["rows"] if r["strategy"] == s and not r["aborted"]]
        L0 = [r["L_before"] for r in done]
        L1 = [r["L_after"] for r in done]
        C0 = [r["C_before"] for r in done]
        C1 = [r["C_after"] for r in done]
        up = sum(b > a for a, b in zip(L0, L1))
        down = sum(b < a for a, b in zip(C0, C1))
        p_up = binomtest(up, sum(b != a for a, b in zip(L0, L1)), alternative="greater").pvalue
        p_down = binomtest(down, sum(b != a for a, b in zip(C0, C1)), alternative="greater").pvalue
        good = (len(done) >= 20 and statistics.median(L1) > statistics.median(L0)
                and statistics.median(C1) < statistics.median(C0) and p_up < 0.05 and p_down < 0.05)
        ok &= good
        parts.append(f"{s}: L up {up}/{len(done)} (sign p={p_up:.1e}), C down {down}/{len(done)} (p={p_down:.1e})")
    detail = "; ".join(parts)
    assert report(4, "directional shifts", ok, detail), detail


def test_criterion_5_category_shape(campaign):
    freq = campaign["summary"].frequencies["pooled"]
    weak_modal = all(freq["weak"] > v for k, v in freq.items() if k != "weak")
    weakest_rarest = all(freq["weakest"] < v for k, v in freq.items() if k != "weakest")
    detail = ", ".join(f"{k} {v:.2%}" for k, v in freq.items())
    detail += f" (weak modal: {weak_modal}; weakest rarest: {weakest_rarest})"
    assert report(5, "category shape", weak_modal and weakest_rarest, detail), detail


def synthetic_sequences():
    """Fifty sequences with n <= 500: pure power laws, power-law tails over a
    uniform body, and BA degree sequences."""
    seqs = []
    for i in range(50):
        rng = np.random.default_rng(1000 + i)
        n = int(rng.integers(100, 501))
        kind = i % 3
        if kind == 0:
            x = powerlaw_sample(rng.uniform(2.0, 3.5), int(rng.integers(1, 6)), n, rng)
        elif kind == 1:
            x_min = int(rng.integers(3, 10))
            x = np.concatenate((powerlaw_sample(rng.uniform(2.0, 3.5), x_min, n // 2, rng),
                                rng.integers(1, x_min, size=n - n // 2)))
        else:
            x = generate_ba(BaConfig(n, 2, int(rng.integers(2 ** 30)))).degrees.copy()
        seqs.append(x)
    return seqs


def test_criterion_6_fitter_oracle():
    mismatches = []
    worst = 0.0
    seqs = synthetic_sequences()
    for i, x in enumerate(seqs):
        fit = fit_tail(x)
        alpha, x_min, _, _ = grid_fit(x)
        worst = max(worst, abs(fit.alpha - alpha))
        if abs(fit.alpha - alpha) > 0.02 or fit.x_min != x_min:
            mismatches.append((i, fit.alpha, fit.x_min, alpha, x_min))
    detail = (f"{len(seqs) - len(mismatches)}/{len(seqs)} sequences match the 0.01-grid MLE "
              f"(worst |d alpha| {worst:.4f}, x_min exact)" + (f"; mismatches {mismatches[:3]}" if mismatches else ""))
    assert report(6, "fitter oracle", not mismatches and len(seqs) == 50, detail), detail


def dalr_oracle(g):
    deg = g.degrees
    best_del = best_add = None
    for u in range(g.n):
        for v in range(u + 1, g.n):
            s = int(deg[u] + deg[v])
            if g.has_edge(u, v):
                if best_del is None or s > best_del[0]:
                    best_del = (s, (u, v))
            elif best_add is None or s < best_add[0]:
                best_add = (s, (u, v))
    return best_del[1], best_add[1]


def tree_bytes(root):
    return {p.relative_to(root).as_posix(): p.read_bytes()
            for p in sorted(root.rglob("*")) if p.is_file() and p.name != "run_info.json"}


def test_criterion_7_property_suite(tmp_path):
    problems = []

    # (a) 10,000 randomized steps across strategies
    rng = np.random.default_rng(77)
    steps = 0
    while steps < 10_000:
        n = int(rng.integers(30, 201))
        g = generate_ba(BaConfig(n, int(rng.integers(1, 4)), int(rng.integers(2 ** 30))))
        m = g.num_edges
        for _ in range(200):
            strategy = STRATEGIES[int(rng.integers(3))]
            step = make_step(strategy, g, rng)
            if not g.has_edge(*step.deleted) or g.has_edge(*step.added):
                problems.append(f"bad step {step}")
            apply_step(g, step)
            steps += 1
            if g.n != n or g.num_edges != m or int(g.degrees.sum()) != 2 * m:
                problems.append(f"counts drifted after {strategy}")
        try:
            g.check_invariants()
        except AssertionError as exc:
            problems.append(f"invariants: {exc}")

    # (b) DALR against the full-scan oracle, n <= 200
    checked = 0
    for seed in range(8):
        g = generate_ba(BaConfig(int(rng.integers(20, 201)), 2, seed))
        for _ in range(15):
            step = dalr_step(g)
            if (step.deleted, step.added) != dalr_oracle(g):
                problems.append(f"DALR mismatch on seed {seed}")
            apply_step(g, step)
            checked += 1

    # (c) fixed-seed end-to-end reruns through the command line
    trees = []
    for run in ("a", "b"):
        data, res = tmp_path / run / "data", tmp_path / run / "res"
        assert main(["generate", "--sizes", "200", "--count", "4", "--bootstrap", "30", "--seed", "11",
                     "--out", str(data)]) == 0
        assert main(["attack", str(data), "--sizes", "200", "--reps", "2", "--bootstrap", "30", "--seed", "11",
                     "--out", str(res)]) == 0
        trees.append({**tree_bytes(data), **{"res/" + k: v for k, v in tree_bytes(res).items()}})
    if trees[0] != trees[1]:
        problems.append("reruns differ: " + ", ".join(k for k in trees[0] if trees[0].get(k) != trees[1].get(k)))

    detail = (f"{steps} random steps, {checked} DALR oracle checks, {len(trees[0])} output files byte-identical"
              if not problems else "; ".join(problems[:5]))
    assert report(7, "property suite", not problems, detail), detail
