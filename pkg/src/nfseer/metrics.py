"""Estimation-accuracy metrics and the case runner."""

from __future__ import annotations

import dataclasses
import logging
import math
from dataclasses import dataclass, field
from typing import Sequence

from nfseer.dataset import MappingConfig, ProjectRecord, check_case, make_case_split, map_all
from nfseer.errors import InputError
from nfseer.nfbank import NFBank, evaluate_bank
from nfseer.registry import Registry
from nfseer.seer import SeerInput, estimate_effort
from nfseer.training import TrainingConfig, TrainingHistory, train

log = logging.getLogger(__name__)

PRED_LEVELS = (0.20, 0.30, 0.50, 1.00)


def relative_error(estimate: float, actual: float) -> tuple[float, float]:
    if not actual > 0:
        raise InputError(f"actual effort must be positive, got {actual!r}")
    re = (estimate - actual) / actual
    return re, abs(re)


def mmre(mres: Sequence[float]) -> float:
    mres = list(mres)
    if not mres:
        raise InputError("mmre of an empty list")
    if any(m < 0 for m in mres):
        raise InputError("MRE values must be non-negative")
    return math.fsum(mres) / len(mres)


def pred(mres: Sequence[float], level: float) -> float:
    """Fraction of projects whose MRE is at most ``level``."""
    mres = list(mres)
    if not mres:
        raise InputError("pred of an empty list")
    if level < 0:
        raise InputError(f"PRED level must be non-negative, got {level!r}")
    return sum(1 for m in mres if m <= level) / len(mres)


@dataclass(frozen=True)
class ProjectOutcome:
    id: str
    estimate: float
    actual: float
    re: float
    mre: float

    @classmethod
    def of(cls, pid: str, estimate: float, actual: float) -> ProjectOutcome:
        re, mre = relative_error(estimate, actual)
        return cls(pid, estimate, actual, re, mre)


@dataclass
class CaseReport:
    case_id: str
    baseline: list[ProjectOutcome]
    calibrated: list[ProjectOutcome]
    n_train: int
    n_test: int
    history: TrainingHistory | None = None
    bank: NFBank | None = field(default=None, repr=False)
    baseline_mmre: float = field(init=False)
    calibrated_mmre: float = field(init=False)
    mmre_change: float = field(init=False)
    baseline_pred: dict = field(init=False)
    calibrated_pred: dict = field(init=False)
    pred_change: dict = field(init=False)

    def __post_init__(self):
        check_case(self.case_id)
        if not self.baseline or not self.calibrated:
            # summaries stay undefined; rendering refuses such reports
            self.baseline_mmre = self.calibrated_mmre = self.mmre_change = math.nan
            self.baseline_pred = self.calibrated_pred = self.pred_change = {}
            return
        b = [o.mre for o in self.baseline]
        c = [o.mre for o in self.calibrated]
        self.baseline_mmre = mmre(b)
        self.calibrated_mmre = mmre(c)
        self.mmre_change = self.calibrated_mmre - self.baseline_mmre
        self.baseline_pred = {L: pred(b, L) for L in PRED_LEVELS}
        self.calibrated_pred = {L: pred(c, L) for L in PRED_LEVELS}
        self.pred_change = {L: self.calibrated_pred[L] - self.baseline_pred[L] for L in PRED_LEVELS}


def project_estimate_pm(project, bank: NFBank, reg: Registry, beta: float, unit: float) -> float:
    values = evaluate_bank(bank, project.ratings, reg)
    est = estimate_effort(SeerInput(project.Se, project.D, values, beta), reg)
    return est.E * unit


def outcomes(projects, bank: NFBank, reg: Registry, beta: float, unit: float) -> list[ProjectOutcome]:
    return [
        ProjectOutcome.of(p.id, project_estimate_pm(p, bank, reg, beta, unit), p.actual_effort_pm)
        for p in projects
    ]


def run_case(
    case_id: str,
    projects: Sequence,
    reg: Registry,
    bank_init: NFBank | None = None,
    training_cfg: TrainingConfig | None = None,
    mapping_cfg: MappingConfig | None = None,
    seed: int = 0,
) -> CaseReport:
    """Baseline vs. calibrated accuracy for one evaluation case.

    ``projects`` may be raw records (mapped with ``mapping_cfg``) or already
    mapped SEER projects. The baseline uses ``bank_init`` untrained, which
    defaults to the registry tables.
    """
    check_case(case_id)
    cfg = training_cfg or TrainingConfig()
    if mapping_cfg is not None:
        cfg = dataclasses.replace(cfg, effort_unit_factor=mapping_cfg.effort_unit_factor)
    projects = list(projects)
    if projects and isinstance(projects[0], ProjectRecord):
        if mapping_cfg is None:
            raise InputError("raw project records need a mapping config")
        projects = map_all(projects, mapping_cfg, reg)
    bank0 = bank_init or NFBank.from_registry(reg)
    bank0.check_against(reg)

    beta, unit = cfg.beta, cfg.effort_unit_factor
    all_baseline = outcomes(projects, bank0, reg, beta, unit)
    mre_by_id = {o.id: o.mre for o in all_baseline}
    train_set, test_set = make_case_split(case_id, projects, mre_by_id, seed)

    bank, history = train(bank0, reg, train_set, cfg)
    if history.records and history.records[-1].mmre > history.initial_mmre:
        log.warning("%s: training MMRE rose from %.4f to %.4f although the loss fell",
                    case_id, history.initial_mmre, history.records[-1].mmre)

    test_ids = {p.id for p in test_set}
    baseline = [o for o in all_baseline if o.id in test_ids]
    calibrated = outcomes(test_set, bank, reg, beta, unit)
    return CaseReport(case_id, baseline, calibrated, len(train_set), len(test_set), history, bank)
