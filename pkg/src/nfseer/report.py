"""CSV and markdown rendering of case reports."""

from __future__ import annotations

import csv
import io

from nfseer.errors import RenderError
from nfseer.metrics import PRED_LEVELS, CaseReport

FORMATS = ("csv", "markdown")
BASELINE_ROW = "SEER-SEM"
CHANGE_ROW = "Change"
PRED_HEADERS = [f"PRED({round(L * 100)}%)" for L in PRED_LEVELS]
CSV_HEADER = ["case_id", "row", "MMRE"] + PRED_HEADERS + ["n_train", "n_test"]
OUTCOME_HEADER = ["id", "actual_pm", "baseline_pm", "baseline_re", "baseline_mre",
                  "calibrated_pm", "calibrated_re", "calibrated_mre"]


def pct(value: float) -> str:
    text = f"{value * 100:.2f}"
    return "0.00" if text == "-0.00" else text


def _rows(report: CaseReport):
    yield BASELINE_ROW, report.baseline_mmre, report.baseline_pred
    yield report.case_id, report.calibrated_mmre, report.calibrated_pred
    yield CHANGE_ROW, report.mmre_change, report.pred_change


def _check(report: CaseReport):
    if not report.baseline or not report.calibrated:
        raise RenderError(f"report for {report.case_id} has no per-project outcomes")


def render_csv(report: CaseReport) -> str:
    _check(report)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for name, m, p in _rows(report):
        w.writerow([report.case_id, name, pct(m)] + [pct(p[L]) for L in PRED_LEVELS]
                   + [report.n_train, report.n_test])
    return buf.getvalue()


def render_markdown(report: CaseReport) -> str:
    _check(report)
    lines = [
        f"## Case {report.case_id}",
        "",
        f"Training projects: {report.n_train}; test projects: {report.n_test}.",
        "",
        "| Case ID | SEER-SEM | Validation | Change |",
        "|---|---:|---:|---:|",
        f"| {report.case_id} | {pct(report.baseline_mmre)}% | {pct(report.calibrated_mmre)}% "
        f"| {pct(report.mmre_change)}% |",
        "",
        "| PRED(L) | " + " | ".join(f"{round(L * 100)}%" for L in PRED_LEVELS) + " |",
        "|---|" + "---:|" * len(PRED_LEVELS),
    ]
    for name, _, p in _rows(report):
        lines.append(f"| {name} | " + " | ".join(f"{pct(p[L])}%" for L in PRED_LEVELS) + " |")
    return "\n".join(lines) + "\n"


def render_report(report: CaseReport, fmt: str) -> str:
    if fmt == "csv":
        return render_csv(report)
    if fmt == "markdown":
        return render_markdown(report)
    raise RenderError(f"unknown report format {fmt!r}; expected one of {', '.join(FORMATS)}")


def render_outcomes(report: CaseReport) -> str:
    """Per-project outcomes at full precision, baseline and calibrated side by side."""
    _check(report)
    calibrated = {o.id: o for o in report.calibrated}
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(OUTCOME_HEADER)
    for b in report.baseline:
        c = calibrated[b.id]
        w.writerow([b.id, repr(b.actual), repr(b.estimate), repr(b.re), repr(b.mre),
                    repr(c.estimate), repr(c.re), repr(c.mre)])
    return buf.getvalue()


def parse_report_csv(text: str) -> list[dict]:
    """Read a rendered CSV report back; percentage cells become floats (in percent)."""
    reader = csv.DictReader(io.StringIO(text))
    if reader.fieldnames != CSV_HEADER:
        raise RenderError(f"unexpected report header {reader.fieldnames}")
    rows = []
    for row in reader:
        parsed = {"case_id": row["case_id"], "row": row["row"]}
        for col in ["MMRE"] + PRED_HEADERS:
            parsed[col] = float(row[col])
        parsed["n_train"] = int(row["n_train"])
        parsed["n_test"] = int(row["n_test"])
        rows.append(parsed)
    return rows
