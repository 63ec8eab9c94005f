"""SEER-SEM effort kernel: size, staffing complexity and parameter values to effort."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Mapping, Sequence

from nfseer.errors import InputError, NumericError
from nfseer.registry import N_CTBX, Registry, Site, load_registry

# Development share of total life-cycle effort.
DEVELOPMENT_FRACTION = 0.393469
CTB_SCALE = 2000.0
CTB_SLOPE = -3.70945
CTBX_REFERENCE = 4.11
STAFFING_EXPONENT = 0.4
DEFAULT_BETA = 1.2


def _check_positive(values: Sequence[float], what: str) -> None:
    for i, v in enumerate(values):
        if not (isinstance(v, (int, float)) and math.isfinite(v) and v > 0):
            raise InputError(f"{what}[{i}] must be a positive finite number, got {v!r}")


def compute_ctbx(factors: Sequence[float]) -> float:
    factors = [float(f) for f in factors]
    if len(factors) != N_CTBX:
        raise InputError(f"expected {N_CTBX} CTBX factors, got {len(factors)}")
    _check_positive(factors, "ctbx factor")
    return math.prod(factors)


def compute_ctb(ctbx: float, turn: float) -> float:
    """Basic technology constant ``2000 * exp(-3.70945 * ln(ctbx / 4.11) / (5 * turn))``."""
    _check_positive([ctbx], "ctbx")
    _check_positive([turn], "turn")
    ctb = CTB_SCALE * math.exp(CTB_SLOPE * math.log(ctbx / CTBX_REFERENCE) / (5.0 * turn))
    if not (math.isfinite(ctb) and ctb > 0):
        raise NumericError(f"basic technology constant is not finite (ctbx={ctbx!r}, turn={turn!r})")
    return ctb


def compute_parm_adjustment(factors: Sequence[float], expected_count: int | None = None) -> float:
    factors = [float(f) for f in factors]
    if expected_count is not None and len(factors) != expected_count:
        raise InputError(f"expected {expected_count} adjustment factors, got {len(factors)}")
    _check_positive(factors, "adjustment factor")
    return math.prod(factors)


@dataclass(frozen=True)
class SeerInput:
    Se: float
    D: float
    values: Mapping[str, float]
    beta: float = DEFAULT_BETA

    def __post_init__(self):
        for name in ("Se", "D", "beta"):
            v = getattr(self, name)
            if not (isinstance(v, (int, float)) and math.isfinite(v) and v > 0):
                raise InputError(f"{name} must be positive and finite, got {v!r}")


@dataclass(frozen=True)
class EffortEstimate:
    ctbx: float
    Ctb: float
    parm_adjustment: float
    Cte: float
    K: float
    E: float

    @property
    def E_pm(self) -> float:
        return self.E * 12.0


@lru_cache(maxsize=1)
def bundled_registry() -> Registry:
    return load_registry()


def split_values(values: Mapping[str, float], reg: Registry) -> tuple[list[float], float, list[float]]:
    """Split id-keyed values into (ctbx factors, TURN, adjustment factors) in registry order."""
    missing = [pid for pid in reg.ids if pid not in values]
    if missing:
        raise InputError(f"missing parameter value(s): {', '.join(missing)}")
    extra = sorted(set(values) - set(reg.ids))
    if extra:
        raise InputError(f"unknown parameter value(s): {', '.join(extra)}")
    ctbx = [float(values[pid]) for pid in reg.ids_at(Site.CTBX_FACTOR)]
    adj = [float(values[pid]) for pid in reg.ids_at(Site.ADJUSTMENT_FACTOR)]
    return ctbx, float(values[reg.turn_id]), adj


def estimate_effort(inp: SeerInput, reg: Registry | None = None) -> EffortEstimate:
    """Development effort in person-years, with every intermediate exposed."""
    reg = reg or bundled_registry()
    ctbx_factors, turn, adj = split_values(inp.values, reg)
    ctbx = compute_ctbx(ctbx_factors)
    ctb = compute_ctb(ctbx, turn)
    parm = compute_parm_adjustment(adj, len(reg.ids_at(Site.ADJUSTMENT_FACTOR)))
    cte = ctb / parm
    K = inp.D ** STAFFING_EXPONENT * (inp.Se / cte) ** inp.beta
    E = DEVELOPMENT_FRACTION * K
    if not (math.isfinite(K) and K > 0):
        raise NumericError(f"life-cycle effort is not finite and positive: {K!r}")
    return EffortEstimate(ctbx, ctb, parm, cte, K, E)
