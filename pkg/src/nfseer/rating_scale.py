"""The 18-step SEER-SEM rating scale and its embedding into [0, 19]."""

from __future__ import annotations

import math
from dataclasses import dataclass

from nfseer.errors import DomainError, ParseError

LABELS: tuple[str, ...] = (
    "VLo-", "VLo", "VLo+",
    "Low-", "Low", "Low+",
    "Nom-", "Nom", "Nom+",
    "Hi-", "Hi", "Hi+",
    "VHi-", "VHi", "VHi+",
    "EHi-", "EHi", "EHi+",
)
N_LEVELS = len(LABELS)
X_MIN = 0.0
X_MAX = float(N_LEVELS + 1)

_BY_KEY = {label.lower(): i + 1 for i, label in enumerate(LABELS)}


@dataclass(frozen=True)
class RatingPosition:
    label: str
    r: int
    x: float


def _normalize(text: str) -> str:
    # U+2212 (minus) and U+2013 (en dash) both show up in hand-edited files
    return text.strip().replace("−", "-").replace("–", "-").lower()


def parse_rating(text: str) -> RatingPosition:
    """Parse a rating label such as ``"Nom"`` or ``"VHi+"``.

    Matching is case-insensitive and accepts a typographic minus.
    """
    r = _BY_KEY.get(_normalize(str(text)))
    if r is None:
        raise ParseError(f"unknown rating label {text!r}")
    return RatingPosition(LABELS[r - 1], r, float(r))


def check_position(x: float) -> float:
    x = float(x)
    if not (X_MIN <= x <= X_MAX):
        raise DomainError(f"rating position {x!r} outside [{X_MIN:g}, {X_MAX:g}]")
    return x


def rating_from_position(x: float) -> RatingPosition:
    """Nearest label to a continuous position; exact midpoints round up."""
    x = check_position(x)
    r = int(math.floor(x + 0.5))
    r = min(max(r, 1), N_LEVELS)
    return RatingPosition(LABELS[r - 1], r, x)


def as_position(value) -> float:
    """Accept a label, a RatingPosition or a number and return x."""
    if isinstance(value, RatingPosition):
        return check_position(value.x)
    if isinstance(value, str):
        try:
            x = float(value)
        except ValueError:
            return parse_rating(value).x
        return check_position(x)
    return check_position(value)
