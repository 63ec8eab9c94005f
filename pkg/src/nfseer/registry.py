"""Catalogue of the 34 effort parameters and their default value tables."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from enum import Enum
from importlib import resources
from pathlib import Path

import numpy as np

from nfseer.errors import LoadError, LookupFailure
from nfseer.rating_scale import N_LEVELS, check_position

N_PARAMETERS = 34
N_CTBX = 6
REGISTRY_FORMAT = "nfseer-registry/1"


class Site(str, Enum):
    CTBX_FACTOR = "CTBX_FACTOR"
    TURN_INPUT = "TURN_INPUT"
    ADJUSTMENT_FACTOR = "ADJUSTMENT_FACTOR"


class Direction(str, Enum):
    MONOTONE_INCREASING = "MONOTONE_INCREASING"
    MONOTONE_DECREASING = "MONOTONE_DECREASING"


def monotone_violation(values, direction: Direction) -> int | None:
    """Return the first 1-based index r where values[r] breaks the direction, else None."""
    for r in range(1, len(values)):
        prev, cur = values[r - 1], values[r]
        if direction is Direction.MONOTONE_DECREASING and cur > prev:
            return r + 1
        if direction is Direction.MONOTONE_INCREASING and cur < prev:
            return r + 1
    return None


@dataclass(frozen=True)
class ParameterDefinition:
    id: str
    mnemonic: str
    site: Site
    direction: Direction
    defaults: tuple[float, ...]
    name: str = ""

    def __post_init__(self):
        if len(self.defaults) != N_LEVELS:
            raise LoadError(f"{self.mnemonic}: expected {N_LEVELS} values, got {len(self.defaults)}")
        for r, v in enumerate(self.defaults, start=1):
            if not (math.isfinite(v) and v > 0):
                raise LoadError(f"{self.mnemonic}: value at index {r} must be positive and finite, got {v!r}")
        bad = monotone_violation(self.defaults, self.direction)
        if bad is not None:
            raise LoadError(
                f"{self.mnemonic}: values violate {self.direction.value} between index {bad - 1} and {bad}"
            )

    def to_record(self) -> dict:
        return {
            "id": self.id,
            "mnemonic": self.mnemonic,
            "name": self.name,
            "site": self.site.value,
            "direction": self.direction.value,
            "values": list(self.defaults),
        }


@dataclass(frozen=True)
class Registry:
    parameters: tuple[ParameterDefinition, ...]
    _index: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        params = self.parameters
        if len(params) != N_PARAMETERS:
            raise LoadError(f"expected {N_PARAMETERS} parameters, got {len(params)}")
        index = {}
        for i, p in enumerate(params):
            if p.id in index or any(q.mnemonic == p.mnemonic for q in params[:i]):
                raise LoadError(f"duplicate parameter {p.mnemonic}")
            index[p.id] = i
        n_ctbx = sum(p.site is Site.CTBX_FACTOR for p in params)
        n_turn = sum(p.site is Site.TURN_INPUT for p in params)
        if n_ctbx != N_CTBX:
            raise LoadError(f"expected {N_CTBX} CTBX_FACTOR parameters, got {n_ctbx}")
        if n_turn != 1:
            raise LoadError(f"expected 1 TURN_INPUT parameter, got {n_turn}")
        object.__setattr__(self, "_index", index)

    def __len__(self):
        return len(self.parameters)

    def __iter__(self):
        return iter(self.parameters)

    def __contains__(self, pid):
        return pid in self._index

    def __getitem__(self, pid: str) -> ParameterDefinition:
        try:
            return self.parameters[self._index[pid]]
        except KeyError:
            raise LookupFailure(f"unknown parameter {pid!r}") from None

    def position(self, pid: str) -> int:
        self[pid]
        return self._index[pid]

    @property
    def ids(self) -> list[str]:
        return [p.id for p in self.parameters]

    def ids_at(self, site: Site) -> list[str]:
        return [p.id for p in self.parameters if p.site is site]

    @property
    def turn_id(self) -> str:
        return self.ids_at(Site.TURN_INPUT)[0]

    def defaults_matrix(self) -> np.ndarray:
        return np.array([p.defaults for p in self.parameters], dtype=float)

    def to_dict(self) -> dict:
        return {"format": REGISTRY_FORMAT, "parameters": [p.to_record() for p in self.parameters]}


def parameter_from_record(rec: dict) -> ParameterDefinition:
    try:
        mnemonic = str(rec["mnemonic"])
        pid = str(rec.get("id", mnemonic))
        site = Site(rec["site"])
        direction = Direction(rec["direction"])
        values = tuple(float(v) for v in rec["values"])
    except KeyError as exc:
        raise LoadError(f"registry record {rec.get('mnemonic', '?')}: missing field {exc.args[0]!r}") from None
    except (TypeError, ValueError) as exc:
        raise LoadError(f"registry record {rec.get('mnemonic', '?')}: {exc}") from None
    return ParameterDefinition(pid, mnemonic, site, direction, values, str(rec.get("name", "")))


def registry_from_dict(doc: dict) -> Registry:
    if not isinstance(doc, dict) or not isinstance(doc.get("parameters"), list):
        raise LoadError("registry file must be an object with a 'parameters' list")
    return Registry(tuple(parameter_from_record(rec) for rec in doc["parameters"]))


def load_registry(source=None) -> Registry:
    """Load and validate a registry file; ``None`` loads the bundled placeholder table."""
    if source is None:
        text = resources.files("nfseer.data").joinpath("registry.json").read_text()
    else:
        path = Path(source)
        if not path.exists():
            raise LoadError(f"registry file not found: {path}")
        text = path.read_text()
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise LoadError(f"registry file is not valid JSON: {exc}") from None
    return registry_from_dict(doc)


def default_value(reg: Registry, pid: str, x: float) -> float:
    """Piecewise-linear interpolation of the default table, flat outside [1, 18]."""
    p = reg[pid]
    x = check_position(x)
    return float(np.interp(x, np.arange(1.0, N_LEVELS + 1.0), p.defaults))
