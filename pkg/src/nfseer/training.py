"""Calibration of bank consequents by projected gradient descent.

The loss is the mean squared relative error of the composed model (bank
followed by the effort kernel) against actual effort. After every update each
sub-model's consequents are projected back onto its monotone cone and floored
at a small positive value.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Sequence

import numpy as np

from nfseer.errors import ConfigError, DataError, InputError, NumericError
from nfseer.nfbank import NFBank, normalized_strengths, project_monotone
from nfseer.registry import Registry, Site
from nfseer.seer import (
    CTB_SCALE,
    CTB_SLOPE,
    CTBX_REFERENCE,
    DEFAULT_BETA,
    DEVELOPMENT_FRACTION,
    STAFFING_EXPONENT,
)

CONSEQUENT_FLOOR = 1e-3
MAX_HALVINGS = 40


class Loss(str, Enum):
    MEAN_SQUARED_RELATIVE_ERROR = "MEAN_SQUARED_RELATIVE_ERROR"


class GradientMode(str, Enum):
    ANALYTIC = "ANALYTIC"
    CENTRAL_FINITE_DIFFERENCE = "CENTRAL_FINITE_DIFFERENCE"


@dataclass(frozen=True)
class TrainingConfig:
    learning_rate: float = 0.05
    epochs: int = 200
    loss: Loss = Loss.MEAN_SQUARED_RELATIVE_ERROR
    gradient_mode: GradientMode = GradientMode.ANALYTIC
    fd_step: float = 1e-6
    seed: int = 0
    step_halving: bool = True
    # model settings shared with estimation
    beta: float = DEFAULT_BETA
    effort_unit_factor: float = 12.0

    def __post_init__(self):
        if not (self.learning_rate > 0 and math.isfinite(self.learning_rate)):
            raise ConfigError(f"learning_rate must be positive, got {self.learning_rate!r}")
        if not (self.fd_step > 0 and math.isfinite(self.fd_step)):
            raise ConfigError(f"fd_step must be positive, got {self.fd_step!r}")
        if int(self.epochs) != self.epochs or self.epochs < 0:
            raise ConfigError(f"epochs must be a non-negative integer, got {self.epochs!r}")
        if not self.beta > 0:
            raise ConfigError(f"beta must be positive, got {self.beta!r}")
        if not self.effort_unit_factor > 0:
            raise ConfigError(f"effort_unit_factor must be positive, got {self.effort_unit_factor!r}")
        object.__setattr__(self, "loss", Loss(self.loss))
        object.__setattr__(self, "gradient_mode", GradientMode(self.gradient_mode))


@dataclass(frozen=True)
class EpochRecord:
    epoch: int
    loss: float
    mmre: float


@dataclass
class TrainingHistory:
    records: list[EpochRecord] = field(default_factory=list)
    initial_loss: float = math.nan
    initial_mmre: float = math.nan
    converged: bool = False
    diverged: bool = False

    @property
    def losses(self) -> list[float]:
        return [r.loss for r in self.records]

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["epoch", "loss"])
        for r in self.records:
            w.writerow([r.epoch, repr(r.loss)])
        return buf.getvalue()


class ProjectBatch:
    """Projects pre-digested into arrays: strengths (n, P, 18), Se, D, actual effort."""

    def __init__(self, reg: Registry, projects: Sequence, cfg: TrainingConfig):
        if not projects:
            raise InputError("training needs at least one project")
        for p in projects:
            if not (p.actual_effort_pm > 0):
                raise DataError(f"project {p.id}: actual effort must be positive, got {p.actual_effort_pm!r}")
        self.reg = reg
        self.cfg = cfg
        ids = reg.ids
        self.strengths = np.array(
            [[normalized_strengths(_x(p.ratings[pid])) for pid in ids] for p in projects]
        )
        self.Se = np.array([p.Se for p in projects], dtype=float)
        self.D = np.array([p.D for p in projects], dtype=float)
        self.actual = np.array([p.actual_effort_pm for p in projects], dtype=float)
        self.ctbx_idx = np.array([reg.position(pid) for pid in reg.ids_at(Site.CTBX_FACTOR)])
        self.adj_idx = np.array([reg.position(pid) for pid in reg.ids_at(Site.ADJUSTMENT_FACTOR)])
        self.turn_idx = reg.position(reg.turn_id)

    def __len__(self):
        return len(self.actual)

    def values(self, C: np.ndarray) -> np.ndarray:
        return np.einsum("npr,pr->np", self.strengths, C)

    def forward(self, C: np.ndarray):
        """Estimates in dataset effort units plus the pieces the gradient needs."""
        V = self.values(C)
        ctbx = np.prod(V[:, self.ctbx_idx], axis=1)
        turn = V[:, self.turn_idx]
        parm = np.prod(V[:, self.adj_idx], axis=1)
        log_ratio = np.log(ctbx / CTBX_REFERENCE)
        ctb = CTB_SCALE * np.exp(CTB_SLOPE * log_ratio / (5.0 * turn))
        cte = ctb / parm
        K = self.D ** STAFFING_EXPONENT * (self.Se / cte) ** self.cfg.beta
        est = DEVELOPMENT_FRACTION * K * self.cfg.effort_unit_factor
        return est, V, turn, log_ratio

    def loss(self, C: np.ndarray) -> float:
        est, *_ = self.forward(C)
        re = (est - self.actual) / self.actual
        return float(np.mean(re * re))

    def mmre(self, C: np.ndarray) -> float:
        est, *_ = self.forward(C)
        return float(np.mean(np.abs(est - self.actual) / self.actual))

    def analytic_gradient(self, C: np.ndarray) -> np.ndarray:
        est, V, turn, log_ratio = self.forward(C)
        beta = self.cfg.beta
        n = len(self)
        re = (est - self.actual) / self.actual
        # d loss / d ln(est) per project
        g_log = 2.0 * re * est / self.actual / n
        dlog_dV = np.zeros_like(V)
        dlog_dV[:, self.adj_idx] = beta / V[:, self.adj_idx]
        dlog_dV[:, self.ctbx_idx] = (-beta * CTB_SLOPE / (5.0 * turn))[:, None] / V[:, self.ctbx_idx]
        dlog_dV[:, self.turn_idx] = beta * CTB_SLOPE * log_ratio / (5.0 * turn * turn)
        g_V = g_log[:, None] * dlog_dV
        return np.einsum("np,npr->pr", g_V, self.strengths)

    def fd_gradient(self, C: np.ndarray, rel_step: float) -> np.ndarray:
        """Central differences with a relative step on every consequent.

        The loss difference is formed per project as (RE+ - RE-)(RE+ + RE-),
        which equals RE+^2 - RE-^2 but does not cancel against the loss of
        projects the perturbation leaves untouched.
        """
        grad = np.zeros_like(C)
        act = self.actual
        for i in range(C.shape[0]):
            for r in range(C.shape[1]):
                h = rel_step * C[i, r]
                Cp = C.copy()
                Cm = C.copy()
                Cp[i, r] += h
                Cm[i, r] -= h
                ep, _, _, _ = self.forward(Cp)
                em, _, _, _ = self.forward(Cm)
                dloss = np.mean(((ep - em) / act) * ((ep + em) / act - 2.0))
                grad[i, r] = dloss / ((Cp[i, r] - Cm[i, r]))
        return grad

    def gradient(self, C: np.ndarray) -> np.ndarray:
        if self.cfg.gradient_mode is GradientMode.ANALYTIC:
            g = self.analytic_gradient(C)
        else:
            g = self.fd_gradient(C, self.cfg.fd_step)
        bad = np.argwhere(~np.isfinite(g))
        if len(bad):
            i, r = bad[0]
            raise NumericError(f"non-finite partial for ({self.reg.ids[i]}, r={r + 1})")
        return g


def _x(rating) -> float:
    return float(getattr(rating, "x", rating))


def loss(bank: NFBank, reg: Registry, projects: Sequence, cfg: TrainingConfig) -> float:
    """Mean squared relative error of the composed model over ``projects``."""
    batch = ProjectBatch(reg, projects, cfg)
    return batch.loss(bank.consequents_matrix(reg))


def gradient(bank: NFBank, reg: Registry, projects: Sequence, cfg: TrainingConfig) -> np.ndarray:
    """Partials of the loss w.r.t. every consequent, shape (34, 18) in registry order."""
    batch = ProjectBatch(reg, projects, cfg)
    return batch.gradient(bank.consequents_matrix(reg))


def project_consequents(C: np.ndarray, reg: Registry) -> np.ndarray:
    out = np.empty_like(C)
    for i, p in enumerate(reg):
        out[i] = project_monotone(C[i], p.direction)
    # clipping an isotonic fit from below keeps it isotonic and is the box-constrained projection
    return np.maximum(out, CONSEQUENT_FLOOR)


def train(bank: NFBank, reg: Registry, projects: Sequence, cfg: TrainingConfig):
    """Full-batch projected gradient descent; returns (new bank, history)."""
    bank.check_against(reg)
    batch = ProjectBatch(reg, projects, cfg)
    C = bank.consequents_matrix(reg)
    history = TrainingHistory()
    current = batch.loss(C)
    history.initial_loss = current
    history.initial_mmre = batch.mmre(C)
    if cfg.epochs == 0:
        return bank, history
    if not math.isfinite(current):
        raise NumericError("initial loss is not finite")

    lr = cfg.learning_rate
    with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
        C = _descend(batch, reg, cfg, C, current, lr, history)
    return bank.with_consequents(reg, C), history


def _descend(batch, reg, cfg, C, current, lr, history):
    for epoch in range(1, cfg.epochs + 1):
        try:
            g = batch.gradient(C)
        except NumericError:
            history.diverged = True
            break
        halvings = 0
        while True:
            candidate = project_consequents(C - lr * g, reg)
            new = batch.loss(candidate)
            if not cfg.step_halving or (math.isfinite(new) and new <= current):
                break
            if halvings == MAX_HALVINGS:
                candidate = None
                break
            lr *= 0.5
            halvings += 1
        if candidate is None:
            history.converged = True
            break
        if not math.isfinite(new):
            history.diverged = True
            break
        if np.array_equal(candidate, C):
            history.converged = True
            break
        C, current = candidate, new
        history.records.append(EpochRecord(epoch, current, batch.mmre(C)))
    return C
