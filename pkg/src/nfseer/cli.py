"""Command-line entry point: estimate, train, evaluate, validate."""

from __future__ import annotations

import argparse
import csv
import io
import logging
import os
import sys
import tempfile
from importlib import resources
from pathlib import Path

from nfseer.dataset import CASES, check_case, load_mapping, load_projects, map_all
from nfseer.errors import InputError, NFSeerError
from nfseer.metrics import PRED_LEVELS, CaseReport, mmre, run_case
from nfseer.nfbank import NFBank, evaluate_bank, load_bank
from nfseer.registry import load_registry
from nfseer.report import FORMATS, pct, render_outcomes, render_report
from nfseer.seer import DEFAULT_BETA, SeerInput, estimate_effort
from nfseer.training import GradientMode, TrainingConfig, train

log = logging.getLogger("nfseer")

ESTIMATE_HEADER = ["id", "Se", "D", "ctbx", "Ctb", "parm_adjustment", "Cte", "K", "E_py", "E_pm", "actual_pm"]


def write_atomic(path, text: str) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _dataset_path(arg):
    if arg is None:
        return resources.files("nfseer.data").joinpath("demo_cocomo93.csv")
    return arg


def _load_inputs(args):
    reg = load_registry(args.registry)
    mapping = load_mapping(args.mapping)
    mapping.check_against(reg)
    return reg, mapping


def _load_bank(args, reg):
    if getattr(args, "bank_in", None):
        bank = load_bank(args.bank_in)
        bank.check_against(reg)
        return bank
    return NFBank.from_registry(reg)


def _training_config(args, unit: float) -> TrainingConfig:
    return TrainingConfig(
        learning_rate=args.learning_rate,
        epochs=args.epochs,
        gradient_mode=GradientMode(args.gradient_mode),
        fd_step=args.fd_step,
        seed=args.seed,
        step_halving=not args.no_step_halving,
        beta=args.beta,
        effort_unit_factor=unit,
    )


def cmd_estimate(args) -> None:
    reg, mapping = _load_inputs(args)
    bank = _load_bank(args, reg)
    projects = map_all(load_projects(_dataset_path(args.dataset)), mapping, reg)
    if args.id is not None:
        projects = [p for p in projects if p.id == args.id]
        if not projects:
            raise InputError(f"project {args.id!r} not found in dataset")
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(ESTIMATE_HEADER)
    for p in projects:
        values = evaluate_bank(bank, p.ratings, reg)
        est = estimate_effort(SeerInput(p.Se, p.D, values, args.beta), reg)
        pm = est.E * mapping.effort_unit_factor
        w.writerow([p.id, repr(p.Se), repr(p.D), repr(est.ctbx), repr(est.Ctb), repr(est.parm_adjustment),
                    repr(est.Cte), repr(est.K), repr(est.E), repr(pm), repr(p.actual_effort_pm)])
    if args.out:
        write_atomic(args.out, buf.getvalue())
    else:
        sys.stdout.write(buf.getvalue())


def cmd_train(args) -> None:
    reg, mapping = _load_inputs(args)
    bank = _load_bank(args, reg)
    projects = map_all(load_projects(_dataset_path(args.dataset)), mapping, reg)
    cfg = _training_config(args, mapping.effort_unit_factor)
    calibrated, history = train(bank, reg, projects, cfg)
    write_atomic(args.bank_out, calibrated.dumps(reg))
    if args.history_out:
        write_atomic(args.history_out, history.to_csv())
    final = history.records[-1].mmre if history.records else history.initial_mmre
    print(f"trained {len(history.records)} epochs on {len(projects)} projects; "
          f"training MMRE {pct(history.initial_mmre)}% -> {pct(final)}%")
    if history.diverged:
        raise InputError("training diverged; the last finite bank was written")


def _summary(reports: list[CaseReport], fmt: str) -> str:
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["case_id", "SEER-SEM", "Validation", "Change"])
        for r in reports:
            w.writerow([r.case_id, pct(r.baseline_mmre), pct(r.calibrated_mmre), pct(r.mmre_change)])
        return buf.getvalue()
    lines = ["## MMRE of all cases", "", "| Case ID | SEER-SEM | Validation | Change |", "|---|---:|---:|---:|"]
    for r in reports:
        lines.append(f"| {r.case_id} | {pct(r.baseline_mmre)} | {pct(r.calibrated_mmre)} | {pct(r.mmre_change)} |")
    lines += ["", "## PRED averages over cases", "", "| | SEER-SEM | Average of Validation | Change |",
              "|---|---:|---:|---:|"]
    for L in PRED_LEVELS:
        b = mmre([r.baseline_pred[L] for r in reports])
        c = mmre([r.calibrated_pred[L] for r in reports])
        lines.append(f"| PRED({round(L * 100)}%) | {pct(b)}% | {pct(c)}% | {pct(c - b)}% |")
    return "\n".join(lines) + "\n"


def cmd_evaluate(args) -> None:
    cases = list(CASES) if args.case == "all" else [check_case(args.case)]
    reg, mapping = _load_inputs(args)
    bank = _load_bank(args, reg)
    records = load_projects(_dataset_path(args.dataset))
    cfg = _training_config(args, mapping.effort_unit_factor)
    formats = FORMATS if args.format == "both" else (args.format,)
    out = Path(args.out)
    reports = []
    for case in cases:
        report = run_case(case, records, reg, bank, cfg, mapping, args.seed)
        reports.append(report)
        stem = out / case
        for fmt in formats:
            ext = "csv" if fmt == "csv" else "md"
            write_atomic(stem / f"report.{ext}", render_report(report, fmt))
        write_atomic(stem / "outcomes.csv", render_outcomes(report))
        write_atomic(stem / "history.csv", report.history.to_csv())
        write_atomic(stem / "bank.json", report.bank.dumps(reg))
        print(f"{case}: MMRE {pct(report.baseline_mmre)}% -> {pct(report.calibrated_mmre)}% "
              f"(change {pct(report.mmre_change)}%), train {report.n_train}, test {report.n_test}")
    if len(reports) > 1:
        for fmt in formats:
            ext = "csv" if fmt == "csv" else "md"
            write_atomic(out / f"summary.{ext}", _summary(reports, fmt))


def cmd_validate(args) -> None:
    reg = load_registry(args.registry)
    print(f"registry ok: {len(reg)} parameters")
    mapping = load_mapping(args.mapping)
    mapping.check_against(reg)
    print(f"mapping ok: {len(mapping.entries)} entries, {len({e.parameter for e in mapping.entries})} SEER parameters mapped")
    if args.bank:
        bank = load_bank(args.bank)
        bank.check_against(reg)
        print(f"bank ok: {len(bank)} sub-models")
    if args.dataset:
        projects = map_all(load_projects(args.dataset), mapping, reg)
        print(f"dataset ok: {len(projects)} projects")


def _positive_float(text):
    v = float(text)
    if not v > 0:
        raise argparse.ArgumentTypeError(f"must be positive: {text}")
    return v


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="nfseer", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def files(p, dataset=True):
        p.add_argument("--registry", help="registry JSON (default: bundled placeholder tables)")
        p.add_argument("--mapping", help="mapping JSON (default: bundled COCOMO 81 mapping)")
        if dataset:
            p.add_argument("--dataset", help="project CSV (default: bundled synthetic demo data)")
        p.add_argument("--beta", type=_positive_float, default=DEFAULT_BETA, help="size exponent")

    def training(p):
        p.add_argument("--bank-in", help="starting bank JSON (default: registry tables)")
        p.add_argument("--epochs", type=int, default=TrainingConfig.epochs)
        p.add_argument("--learning-rate", type=_positive_float, default=TrainingConfig.learning_rate)
        p.add_argument("--gradient-mode", choices=[m.value for m in GradientMode], default="ANALYTIC")
        p.add_argument("--fd-step", type=_positive_float, default=TrainingConfig.fd_step)
        p.add_argument("--no-step-halving", action="store_true")
        p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("estimate", help="estimate effort for dataset projects")
    files(p)
    p.add_argument("--bank-in", help="bank JSON (default: registry tables)")
    p.add_argument("--id", help="only this project")
    p.add_argument("--out", help="output CSV (default: stdout)")
    p.set_defaults(func=cmd_estimate)

    p = sub.add_parser("train", help="calibrate a bank on a dataset")
    files(p)
    training(p)
    p.add_argument("--bank-out", required=True)
    p.add_argument("--history-out")
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("evaluate", help="run an evaluation case and write reports")
    files(p)
    training(p)
    p.add_argument("--case", required=True, help=f"one of {', '.join(CASES)} or 'all'")
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--format", choices=[*FORMATS, "both"], default="both")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("validate", help="check registry, mapping, bank and dataset files")
    files(p, dataset=False)
    p.add_argument("--bank")
    p.add_argument("--dataset")
    p.set_defaults(func=cmd_validate)
    return parser


def run_command(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        args.func(args)
    except (NFSeerError, OSError) as exc:
        msg = str(exc).splitlines()[0] if str(exc) else exc.__class__.__name__
        print(f"nfseer {args.command}: error: {msg}", file=sys.stderr)
        return 1
    return 0


def main():
    sys.exit(run_command())


if __name__ == "__main__":
    main()
