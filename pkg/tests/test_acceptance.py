"""Exit criteria, one test per criterion, each at its pinned tolerance.

Run with ``pytest tests/test_acceptance.py`` for the pass/fail summary.
"""

import dataclasses
import itertools
import math
import time

import numpy as np

from conftest import random_monotone_bank
from oracles import block_partition_lsq
from nfseer.cli import run_command
from nfseer.dataset import SeerProject, make_case_split
from nfseer.metrics import mmre, outcomes, pred, project_estimate_pm, run_case
from nfseer.nfbank import NFBank, evaluate_bank, evaluate_submodel, membership_grades, normalized_strengths, project_monotone
from nfseer.rating_scale import LABELS, parse_rating
from nfseer.registry import Direction, default_value
from nfseer.report import CSV_HEADER, parse_report_csv, render_report
from nfseer.seer import SeerInput, compute_ctb, estimate_effort
from nfseer.synthetic import synthetic_projects, target_bank
from nfseer.training import GradientMode, TrainingConfig, gradient

ULP_0_393469 = math.ulp(0.393469)


def nominal_ratings(reg):
    return {pid: parse_rating("Nom") for pid in reg.ids}


def test_identity_calibration(reg, criterion):
    t0 = time.perf_counter()
    bank = NFBank.from_registry(reg)
    worst = 0.0
    for pid in reg.ids:
        for r, label in enumerate(LABELS, start=1):
            ratings = {**nominal_ratings(reg), pid: parse_rating(label)}
            via_bank = evaluate_bank(bank, ratings, reg)
            via_table = {q: default_value(reg, q, rp.x) for q, rp in ratings.items()}
            a = estimate_effort(SeerInput(50_000.0, 12.0, via_bank), reg)
            b = estimate_effort(SeerInput(50_000.0, 12.0, via_table), reg)
            worst = max(worst, abs(a.E - b.E) / b.E)
    elapsed = time.perf_counter() - t0
    criterion["detail"] = f"max rel err {worst:.1e} over 34x18 centres"
    assert worst < 1e-12
    assert elapsed < 1.0


def test_ctb_fixed_point(criterion):
    values = {t: compute_ctb(4.11, t) for t in (0.5, 1.0, 3.0, 10.0)}
    criterion["detail"] = f"{values}"
    for v in values.values():
        assert abs(v - 2000.0) / 2000.0 <= 1e-12


def test_development_fraction(reg, criterion):
    rng = np.random.default_rng(20090101)
    worst_ulps = 0.0
    for _ in range(1000):
        values = dict(zip(reg.ids, rng.uniform(0.3, 3.0, 34)))
        inp = SeerInput(float(rng.uniform(1e3, 1e6)), float(rng.uniform(1, 30)), values,
                        float(rng.uniform(0.8, 1.5)))
        est = estimate_effort(inp, reg)
        # E is exactly the rounded product; the quotient E/K can differ from the factor by one ulp
        assert est.E == 0.393469 * est.K
        worst_ulps = max(worst_ulps, abs(est.E / est.K - 0.393469) / ULP_0_393469)
    criterion["detail"] = f"E == 0.393469*K bit-exact on 1000 inputs; E/K within {worst_ulps:.0f} ulp"
    assert worst_ulps <= 1


def test_fuzzy_layer_invariants(criterion):
    t0 = time.perf_counter()
    xs = np.linspace(0.0, 19.0, 10_000)
    P = np.sort(np.random.default_rng(7).uniform(0.4, 2.5, 18))
    from nfseer.nfbank import NFSubModel
    m = NFSubModel("X", tuple(P), Direction.MONOTONE_INCREASING)
    worst_pu = worst_norm = 0.0
    for x in xs:
        w = membership_grades(x)
        worst_pu = max(worst_pu, abs(w.sum() - 1.0))
        worst_norm = max(worst_norm, abs(normalized_strengths(x).sum() - 1.0))
        v = evaluate_submodel(m, x)
        assert P.min() <= v <= P.max()
    for r in range(1, 19):
        assert evaluate_submodel(m, float(r)) == P[r - 1]
    elapsed = time.perf_counter() - t0
    criterion["detail"] = f"partition err {worst_pu:.1e}, normalisation err {worst_norm:.1e}"
    assert worst_pu <= 1e-12 and worst_norm <= 1e-12
    assert elapsed < 5.0


def test_gradient_check(reg, criterion):
    t0 = time.perf_counter()
    cfg = TrainingConfig()
    fd = dataclasses.replace(cfg, gradient_mode=GradientMode.CENTRAL_FINITE_DIFFERENCE)
    worst = 0.0
    for trial in range(20):
        rng = np.random.default_rng(1000 + trial)
        bank = random_monotone_bank(reg, rng)
        projects = [
            SeerProject(f"G{k}", {pid: float(rng.uniform(0, 19)) for pid in reg.ids},
                        float(rng.uniform(2e3, 3e5)), float(rng.uniform(4, 20)), float(rng.uniform(10, 2000)))
            for k in range(5)
        ]
        ga = gradient(bank, reg, projects, cfg)
        gf = gradient(bank, reg, projects, fd)
        assert np.array_equal(ga == 0, gf == 0)
        nz = ga != 0
        rel = np.abs(ga[nz] - gf[nz]) / np.maximum(np.abs(ga[nz]), np.abs(gf[nz]))
        worst = max(worst, float(rel.max()))
    elapsed = time.perf_counter() - t0
    criterion["detail"] = f"max componentwise rel err {worst:.1e} over 20 instances"
    assert worst < 1e-4
    assert elapsed < 30.0


def test_monotone_projection_oracle(criterion):
    t0 = time.perf_counter()
    grid = np.round(np.arange(0.5, 2.0 + 1e-9, 0.1), 1)
    worst, count = 0.0, 0
    for n in range(1, 6):
        Y = np.array(list(itertools.product(grid, repeat=n)))
        for direction in Direction:
            expected, _ = block_partition_lsq(Y, direction.value)
            got = np.array([project_monotone(y, direction) for y in Y])
            worst = max(worst, float(np.abs(got - expected).max()))
            count += len(Y)
    elapsed = time.perf_counter() - t0
    criterion["detail"] = f"{count} instances, max abs diff {worst:.1e}"
    assert worst <= 1e-9
    assert elapsed < 60.0


def test_synthetic_recovery(reg, criterion):
    t0 = time.perf_counter()
    target = target_bank(reg, seed=1)
    projects = synthetic_projects(reg, target, n=93, noise=0.05, seed=7)
    report = run_case("C2", projects, reg, training_cfg=TrainingConfig(), seed=0)
    elapsed = time.perf_counter() - t0
    base, cal = report.baseline_mmre, report.calibrated_mmre
    criterion["detail"] = f"MMRE {base:.4f} -> {cal:.4f} ({(base - cal) / base:.0%} relative)"
    assert report.n_test == 93
    assert cal <= 0.85 * base
    assert base - cal >= 0.15
    assert report.bank.monotone_violations() == []
    assert report.bank.consequents_matrix(reg).min() > 0
    assert elapsed < 120.0


def test_case_protocol_semantics(reg, criterion):
    t0 = time.perf_counter()
    bank = NFBank.from_registry(reg)
    wanted = [0.0, 0.25, 0.5, 0.75, 1.0, 1.5, 2.0, 3.0]
    projects = []
    for k, m in enumerate(wanted):
        ratings = {pid: parse_rating(LABELS[(k + j) % 18]) for j, pid in enumerate(reg.ids)}
        draft = SeerProject(f"F{k}", ratings, 10_000.0 * (k + 1), 12.0, 1.0)
        est = project_estimate_pm(draft, bank, reg, 1.2, 12.0)
        # over-estimate by m: actual = est / (1 + m); MREs are then rounded back onto the grid
        projects.append(dataclasses.replace(draft, actual_effort_pm=est / (1.0 + m)))
    mres = [o.mre for o in outcomes(projects, bank, reg, 1.2, 12.0)]
    np.testing.assert_allclose(mres, wanted, atol=1e-12)
    crafted = [round(m, 9) for m in mres]
    train, test = make_case_split("C1", projects, crafted)
    assert [p.id for p in train] == ["F0", "F1", "F2"] and len(test) == 8
    train, test = make_case_split("C3", projects, crafted)
    assert [p.id for p in train] == ["F0", "F1", "F2", "F3", "F4", "F5"] and len(test) == 8
    for case, frac in (("C4-1", 0.75), ("C4-2", 0.5)):
        train, test = make_case_split(case, projects, seed=11)
        a, b = {p.id for p in train}, {p.id for p in test}
        assert len(train) == math.ceil(frac * 8) and not (a & b) and (a | b) == {p.id for p in projects}
    elapsed = time.perf_counter() - t0
    criterion["detail"] = "C1/C3 membership exact; C4 splits disjoint and covering"
    assert elapsed < 1.0


def test_metric_units(criterion):
    t0 = time.perf_counter()
    assert abs(mmre([0.1, 0.3, 0.5]) - 0.3) < 1e-15
    assert pred([0.3], 0.3) == 1.0
    assert pred([0.1, 0.2, 0.4, 1.5], 0.3) == 0.5
    rng = np.random.default_rng(5)
    for _ in range(100):
        v = rng.exponential(0.6, size=int(rng.integers(1, 60))).tolist()
        levels = np.sort(rng.uniform(0, 3, 12))
        preds = [pred(v, L) for L in levels]
        assert all(a <= b for a, b in zip(preds, preds[1:]))
        assert pred(v, max(v)) == 1.0
    elapsed = time.perf_counter() - t0
    criterion["detail"] = "mmre, inclusive pred boundary, pred monotone on 100 vectors"
    assert elapsed < 1.0


def test_report_fidelity(reg, tmp_path, criterion):
    projects = synthetic_projects(reg, target_bank(reg, seed=3), n=24, noise=0.2, seed=9)
    report = run_case("C4-1", projects, reg, training_cfg=TrainingConfig(epochs=40), seed=2)
    assert report.baseline_mmre == mmre([o.mre for o in report.baseline])
    assert report.calibrated_mmre == mmre([o.mre for o in report.calibrated])
    for L in (0.2, 0.3, 0.5, 1.0):
        assert report.baseline_pred[L] == pred([o.mre for o in report.baseline], L)
        assert report.calibrated_pred[L] == pred([o.mre for o in report.calibrated], L)
    rows = parse_report_csv(render_report(report, "csv"))
    summaries = [
        (report.baseline_mmre, report.baseline_pred),
        (report.calibrated_mmre, report.calibrated_pred),
        (report.mmre_change, report.pred_change),
    ]
    for row, (m, p) in zip(rows, summaries):
        assert row["MMRE"] == round(m * 100, 2)
        for L, col in zip((0.2, 0.3, 0.5, 1.0), CSV_HEADER[3:7]):
            assert row[col] == round(p[L] * 100, 2)

    argv = ["evaluate", "--case", "all", "--epochs", "25", "--seed", "4"]
    assert run_command(argv + ["--out", str(tmp_path / "a")]) == 0
    assert run_command(argv + ["--out", str(tmp_path / "b")]) == 0
    files_a = sorted(p.relative_to(tmp_path / "a") for p in (tmp_path / "a").rglob("*") if p.is_file())
    files_b = sorted(p.relative_to(tmp_path / "b") for p in (tmp_path / "b").rglob("*") if p.is_file())
    assert files_a == files_b and len(files_a) == 5 * 5 + 2
    for rel in files_a:
        assert (tmp_path / "a" / rel).read_bytes() == (tmp_path / "b" / rel).read_bytes()
    criterion["detail"] = f"summaries recomputed, CSV round-trip, {len(files_a)} files byte-identical"
