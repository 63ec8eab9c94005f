"""Bank of single-input Sugeno sub-models, one per effort parameter.

Each sub-model maps a rating position x in [0, 19] to a parameter value via
five layers: triangular memberships centred on r = 1..18 (layer 1), single
premise firing strengths equal to the grades (layer 2), normalisation
(layer 3), weighting of the constant consequents P_r (layer 4) and their sum
(layer 5). Only the consequents are learnable.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping

import numpy as np

from nfseer.errors import InputError, LoadError, NumericError
from nfseer.rating_scale import N_LEVELS, as_position, check_position
from nfseer.registry import Direction, Registry, monotone_violation

BANK_FORMAT = "nfseer-bank/1"
CENTERS = np.arange(1.0, N_LEVELS + 1.0)


def membership_grades(x: float) -> np.ndarray:
    """Layer 1/2 output: the 18 triangular grades at x (ends are flat outside [1, 18])."""
    x = check_position(x)
    xc = min(max(x, 1.0), float(N_LEVELS))
    return np.maximum(0.0, 1.0 - np.abs(xc - CENTERS))


def normalized_strengths(x: float) -> np.ndarray:
    w = membership_grades(x)
    total = w.sum()
    if not total > 0:
        raise NumericError(f"no membership fires at x={x!r}")
    return w / total


def project_monotone(values, direction: Direction | str) -> np.ndarray:
    """Least-squares projection onto weakly monotone sequences (pool adjacent violators)."""
    y = np.asarray(values, dtype=float)
    if y.ndim != 1:
        raise InputError("project_monotone expects a 1-d sequence")
    if not np.isfinite(y).all():
        raise InputError("project_monotone received non-finite values")
    if Direction(direction) is Direction.MONOTONE_DECREASING:
        return np.array(_pav_increasing(y[::-1].tolist())[::-1])
    return np.array(_pav_increasing(y.tolist()))


def _pav_increasing(y: list[float]) -> list[float]:
    # blocks as (sum, count); merge while the new block mean undercuts the previous one
    sums: list[float] = []
    counts: list[int] = []
    for v in y:
        s, c = v, 1
        while sums and sums[-1] * c > s * counts[-1]:
            s += sums.pop()
            c += counts.pop()
        sums.append(s)
        counts.append(c)
    out: list[float] = []
    for s, c in zip(sums, counts):
        out.extend([s / c] * c)
    return out


@dataclass(frozen=True)
class NFSubModel:
    param_id: str
    consequents: tuple[float, ...]
    direction: Direction

    def __post_init__(self):
        if len(self.consequents) != N_LEVELS:
            raise InputError(f"{self.param_id}: expected {N_LEVELS} consequents, got {len(self.consequents)}")
        for r, v in enumerate(self.consequents, start=1):
            if not (math.isfinite(v) and v > 0):
                raise InputError(f"{self.param_id}: consequent {r} must be positive and finite, got {v!r}")

    def is_monotone(self) -> bool:
        return monotone_violation(self.consequents, self.direction) is None


def evaluate_submodel(m: NFSubModel, x: float) -> float:
    wbar = normalized_strengths(x)
    return float(np.dot(wbar, m.consequents))


class NFBank:
    """Immutable collection of sub-models keyed by parameter id (registry order)."""

    def __init__(self, submodels):
        subs = {}
        for m in submodels:
            if m.param_id in subs:
                raise InputError(f"duplicate sub-model for {m.param_id}")
            subs[m.param_id] = m
        self._subs = subs

    @classmethod
    def from_registry(cls, reg: Registry) -> NFBank:
        return cls(NFSubModel(p.id, tuple(p.defaults), p.direction) for p in reg)

    def __getitem__(self, pid: str) -> NFSubModel:
        try:
            return self._subs[pid]
        except KeyError:
            raise InputError(f"bank has no sub-model for {pid!r}") from None

    def __iter__(self):
        return iter(self._subs.values())

    def __len__(self):
        return len(self._subs)

    def __eq__(self, other):
        return isinstance(other, NFBank) and self._subs == other._subs

    @property
    def ids(self) -> list[str]:
        return list(self._subs)

    def check_against(self, reg: Registry) -> None:
        missing = [pid for pid in reg.ids if pid not in self._subs]
        extra = [pid for pid in self._subs if pid not in reg]
        if missing or extra:
            raise InputError(f"bank does not match registry (missing: {missing}, extra: {extra})")
        for p in reg:
            if self._subs[p.id].direction is not p.direction:
                raise InputError(f"{p.id}: bank direction differs from registry")

    def consequents_matrix(self, reg: Registry) -> np.ndarray:
        return np.array([self[pid].consequents for pid in reg.ids], dtype=float)

    def with_consequents(self, reg: Registry, matrix: np.ndarray) -> NFBank:
        matrix = np.asarray(matrix, dtype=float)
        return NFBank(
            NFSubModel(pid, tuple(float(v) for v in row), self[pid].direction)
            for pid, row in zip(reg.ids, matrix)
        )

    def monotone_violations(self) -> list[str]:
        return [m.param_id for m in self if not m.is_monotone()]

    def to_dict(self, reg: Registry | None = None) -> dict:
        records = []
        for m in self:
            rec = {"id": m.param_id, "direction": m.direction.value, "consequents": list(m.consequents)}
            if reg is not None and m.param_id in reg:
                p = reg[m.param_id]
                rec = {"id": p.id, "mnemonic": p.mnemonic, "site": p.site.value,
                       "direction": m.direction.value, "values": list(p.defaults),
                       "consequents": list(m.consequents)}
            records.append(rec)
        return {"format": BANK_FORMAT, "parameters": records}

    def dumps(self, reg: Registry | None = None) -> str:
        doc = self.to_dict(reg)
        lines = ",\n".join("    " + json.dumps(rec) for rec in doc["parameters"])
        return f'{{\n  "format": "{BANK_FORMAT}",\n  "parameters": [\n{lines}\n  ]\n}}\n'


def bank_from_dict(doc: dict) -> NFBank:
    if not isinstance(doc, dict) or not isinstance(doc.get("parameters"), list):
        raise LoadError("bank file must be an object with a 'parameters' list")
    subs = []
    for rec in doc["parameters"]:
        try:
            m = NFSubModel(str(rec["id"]), tuple(float(v) for v in rec["consequents"]),
                           Direction(rec["direction"]))
        except (KeyError, TypeError, ValueError) as exc:
            raise LoadError(f"bank record {rec.get('id', '?')}: {exc}") from None
        if not m.is_monotone():
            raise LoadError(f"bank record {m.param_id}: consequents violate {m.direction.value}")
        subs.append(m)
    try:
        return NFBank(subs)
    except InputError as exc:
        raise LoadError(str(exc)) from None


def load_bank(source) -> NFBank:
    path = Path(source)
    if not path.exists():
        raise LoadError(f"bank file not found: {path}")
    try:
        doc = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise LoadError(f"bank file is not valid JSON: {exc}") from None
    return bank_from_dict(doc)


def evaluate_bank(bank: NFBank, ratings: Mapping[str, object], reg: Registry) -> dict[str, float]:
    """Translate one project's 34 rating positions into parameter values keyed by id."""
    for pid in reg.ids:
        if pid not in ratings:
            raise InputError(f"missing rating for parameter {pid}")
    for pid in ratings:
        if pid not in reg:
            raise InputError(f"unexpected rating for unknown parameter {pid}")
    return {pid: evaluate_submodel(bank[pid], as_position(ratings[pid])) for pid in reg.ids}
