"""Neuro-fuzzy calibration of the SEER-SEM effort model."""

from nfseer.rating_scale import LABELS, RatingPosition, parse_rating, rating_from_position
from nfseer.registry import ParameterDefinition, Registry, default_value, load_registry
from nfseer.seer import EffortEstimate, SeerInput, estimate_effort
from nfseer.nfbank import NFBank, NFSubModel, evaluate_bank, evaluate_submodel, project_monotone

__version__ = "0.1.0"

__all__ = [
    "LABELS",
    "RatingPosition",
    "parse_rating",
    "rating_from_position",
    "ParameterDefinition",
    "Registry",
    "default_value",
    "load_registry",
    "SeerInput",
    "EffortEstimate",
    "estimate_effort",
    "NFSubModel",
    "NFBank",
    "evaluate_submodel",
    "evaluate_bank",
    "project_monotone",
]
