"""Synthetic project generators with a known ("hidden") calibration target."""

from __future__ import annotations

import numpy as np

from nfseer.dataset import ProjectRecord, SeerProject
from nfseer.metrics import project_estimate_pm
from nfseer.nfbank import NFBank
from nfseer.rating_scale import LABELS, parse_rating
from nfseer.registry import Registry, Site
from nfseer.seer import DEFAULT_BETA

COCOMO_LABELS = ("Very Low", "Low", "Nominal", "High", "Very High", "Extra High")


def target_bank(reg: Registry, seed: int = 0, spread=(0.5, 1.8), level=(-0.05, 0.12)) -> NFBank:
    """Monotone distortion of the registry tables.

    Every table is raised to a random power (sharper or flatter sensitivity),
    and adjustment-factor tables are also scaled by a random constant, which
    shifts the overall effort level the defaults predict.
    """
    rng = np.random.default_rng(seed)
    C = reg.defaults_matrix()
    for i, p in enumerate(reg):
        C[i] = C[i] ** rng.uniform(*spread)
        if p.site is Site.ADJUSTMENT_FACTOR:
            C[i] = C[i] * np.exp(rng.uniform(*level))
    return NFBank.from_registry(reg).with_consequents(reg, C)


def random_ratings(reg: Registry, rng: np.random.Generator, spread: float = 3.0) -> dict:
    ratings = {}
    for pid in reg.ids:
        r = int(np.clip(np.rint(rng.normal(8.0, spread)), 1, len(LABELS)))
        ratings[pid] = parse_rating(LABELS[r - 1])
    return ratings


def synthetic_projects(
    reg: Registry,
    target: NFBank,
    n: int = 93,
    noise: float = 0.05,
    seed: int = 0,
    D: float = 12.0,
    beta: float = DEFAULT_BETA,
    unit: float = 12.0,
) -> list[SeerProject]:
    """Projects whose actual effort is the target model's estimate times (1 + noise * N(0, 1))."""
    rng = np.random.default_rng(seed)
    projects = []
    for k in range(n):
        ratings = random_ratings(reg, rng)
        Se = float(np.exp(rng.uniform(np.log(2.0), np.log(400.0)))) * 1000.0
        draft = SeerProject(f"P{k + 1:03d}", ratings, Se, D, 1.0)
        clean = project_estimate_pm(draft, target, reg, beta, unit)
        actual = clean * max(0.5, 1.0 + noise * rng.standard_normal())
        projects.append(SeerProject(draft.id, ratings, Se, D, actual))
    return projects


def cocomo_records(
    drivers: dict,
    mapping,
    reg: Registry,
    target: NFBank,
    n: int = 93,
    sigma: float = 0.6,
    seed: int = 0,
    beta: float = DEFAULT_BETA,
) -> list[ProjectRecord]:
    """COCOMO-style records; ``drivers`` maps driver name -> allowed labels.

    Actual effort is the target model's estimate with log-normal scatter of
    width ``sigma``, which mimics the spread of real historical data.
    """
    from nfseer.dataset import map_to_seer

    rng = np.random.default_rng(seed)
    records = []
    for k in range(n):
        ratings = {}
        for name, allowed in drivers.items():
            nominal = allowed.index("Nominal")
            j = int(np.clip(np.rint(rng.normal(nominal, 1.0)), 0, len(allowed) - 1))
            ratings[name] = allowed[j]
        size = round(float(np.exp(rng.uniform(np.log(2.0), np.log(400.0)))), 1)
        draft = ProjectRecord(f"N{k + 1:03d}", ratings, size, 1.0)
        project = map_to_seer(draft, mapping, reg)
        clean = project_estimate_pm(project, target, reg, beta, mapping.effort_unit_factor)
        actual = round(clean * float(np.exp(sigma * rng.standard_normal())), 1)
        records.append(ProjectRecord(draft.id, ratings, size, max(actual, 0.1)))
    return records
