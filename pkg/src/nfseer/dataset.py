"""COCOMO-style project ingestion, mapping onto SEER-SEM ratings, and case splits."""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np

from nfseer.errors import CaseError, InputError, LoadError, MappingError, ParseError
from nfseer.rating_scale import RatingPosition, parse_rating
from nfseer.registry import Registry

ID_COLUMN = "id"
SIZE_COLUMN = "size_ksloc"
EFFORT_COLUMN = "actual_effort_pm"
D_COLUMN = "D"
RESERVED_COLUMNS = (ID_COLUMN, SIZE_COLUMN, EFFORT_COLUMN, D_COLUMN)
MAPPING_FORMAT = "nfseer-mapping/1"

CASES = ("C1", "C2", "C3", "C4-1", "C4-2")
# train-set MRE ceilings for the outlier-filtered cases (inclusive)
CASE_MRE_CEILING = {"C1": 0.5, "C3": 1.5}
CASE_TRAIN_FRACTION = {"C4-1": 0.75, "C4-2": 0.5}


@dataclass(frozen=True)
class ProjectRecord:
    id: str
    driver_ratings: Mapping[str, str]
    size_ksloc: float
    actual_effort_pm: float
    D: float | None = None


@dataclass(frozen=True)
class MappingEntry:
    driver: str
    parameter: str
    translation: Mapping[str, str]


@dataclass(frozen=True)
class MappingConfig:
    entries: tuple[MappingEntry, ...]
    default_rating: str = "Nom"
    effort_unit_factor: float = 12.0
    default_D: float = 12.0
    ignore: frozenset[str] = field(default_factory=frozenset)

    def __post_init__(self):
        seen = set()
        for e in self.entries:
            if e.parameter in seen:
                raise LoadError(f"SEER parameter {e.parameter} is targeted by more than one mapping entry")
            seen.add(e.parameter)
            for label in e.translation.values():
                try:
                    parse_rating(label)
                except ParseError as exc:
                    raise LoadError(f"mapping entry {e.driver}->{e.parameter}: {exc}") from None
        try:
            parse_rating(self.default_rating)
        except ParseError as exc:
            raise LoadError(f"default_rating: {exc}") from None
        if not (self.effort_unit_factor > 0 and math.isfinite(self.effort_unit_factor)):
            raise LoadError("effort_unit_factor must be positive")
        if not (self.default_D > 0 and math.isfinite(self.default_D)):
            raise LoadError("default_D must be positive")

    @property
    def drivers(self) -> set[str]:
        return {e.driver for e in self.entries}

    def check_against(self, reg: Registry) -> None:
        for e in self.entries:
            if e.parameter not in reg:
                raise LoadError(f"mapping entry {e.driver} targets unknown parameter {e.parameter}")


@dataclass(frozen=True)
class SeerProject:
    id: str
    ratings: Mapping[str, RatingPosition]
    Se: float
    D: float
    actual_effort_pm: float

    def positions(self) -> dict[str, float]:
        return {pid: rp.x for pid, rp in self.ratings.items()}


def _positive_float(raw: str, column: str, line: int) -> float:
    try:
        v = float(raw)
    except ValueError:
        raise LoadError(f"line {line}: {column} is not numeric: {raw!r}") from None
    if not (math.isfinite(v) and v > 0):
        raise LoadError(f"line {line}: {column} must be positive, got {raw!r}")
    return v


def load_projects(source) -> list[ProjectRecord]:
    """Read a comma-separated project file with a header row.

    Required columns are ``id``, ``size_ksloc`` and ``actual_effort_pm``; an
    optional ``D`` column overrides the mapping's staffing complexity, and every
    other column is a driver rating. Line numbers in errors count the header as 1.
    """
    path = Path(source)
    if not path.exists():
        raise LoadError(f"dataset file not found: {path}")
    with path.open(newline="") as fh:
        reader = csv.DictReader(fh)
        header = [h.strip() for h in (reader.fieldnames or [])]
        for col in (ID_COLUMN, SIZE_COLUMN, EFFORT_COLUMN):
            if col not in header:
                raise LoadError(f"dataset header is missing required column {col!r}")
        reader.fieldnames = header
        drivers = [h for h in header if h not in RESERVED_COLUMNS]
        records: list[ProjectRecord] = []
        seen: set[str] = set()
        for line, row in enumerate(reader, start=2):
            if None in row:
                raise LoadError(f"line {line}: more cells than header columns")
            cells = {k: (v or "").strip() for k, v in row.items()}
            for col in header:
                if cells.get(col, "") == "":
                    raise LoadError(f"line {line}: missing value for {col!r}")
            pid = cells[ID_COLUMN]
            if pid in seen:
                raise LoadError(f"line {line}: duplicate project id {pid!r}")
            seen.add(pid)
            D = _positive_float(cells[D_COLUMN], D_COLUMN, line) if D_COLUMN in header else None
            records.append(ProjectRecord(
                id=pid,
                driver_ratings={d: cells[d] for d in drivers},
                size_ksloc=_positive_float(cells[SIZE_COLUMN], SIZE_COLUMN, line),
                actual_effort_pm=_positive_float(cells[EFFORT_COLUMN], EFFORT_COLUMN, line),
                D=D,
            ))
    return records


def write_projects(records: Sequence[ProjectRecord], path) -> None:
    drivers = list(records[0].driver_ratings) if records else []
    has_d = any(r.D is not None for r in records)
    cols = [ID_COLUMN, SIZE_COLUMN, EFFORT_COLUMN] + ([D_COLUMN] if has_d else []) + drivers
    with Path(path).open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(cols)
        for r in records:
            row = [r.id, repr(r.size_ksloc), repr(r.actual_effort_pm)]
            if has_d:
                row.append(repr(r.D))
            w.writerow(row + [r.driver_ratings[d] for d in drivers])


def mapping_from_dict(doc: dict) -> MappingConfig:
    if not isinstance(doc, dict) or not isinstance(doc.get("entries"), list):
        raise LoadError("mapping file must be an object with an 'entries' list")
    tables = doc.get("translations", {})
    entries = []
    for raw in doc["entries"]:
        try:
            driver, parameter, table = raw["driver"], raw["parameter"], raw["translation"]
        except KeyError as exc:
            raise LoadError(f"mapping entry {raw!r} is missing {exc.args[0]!r}") from None
        if isinstance(table, str):
            if table not in tables:
                raise LoadError(f"mapping entry {driver}->{parameter}: unknown translation table {table!r}")
            table = tables[table]
        entries.append(MappingEntry(str(driver), str(parameter), dict(table)))
    return MappingConfig(
        entries=tuple(entries),
        default_rating=str(doc.get("default_rating", "Nom")),
        effort_unit_factor=float(doc.get("effort_unit_factor", 12.0)),
        default_D=float(doc.get("default_D", 12.0)),
        ignore=frozenset(doc.get("ignore", [])),
    )


def load_mapping(source=None) -> MappingConfig:
    if source is None:
        text = resources.files("nfseer.data").joinpath("mapping.json").read_text()
    else:
        path = Path(source)
        if not path.exists():
            raise LoadError(f"mapping file not found: {path}")
        text = path.read_text()
    try:
        return mapping_from_dict(json.loads(text))
    except json.JSONDecodeError as exc:
        raise LoadError(f"mapping file is not valid JSON: {exc}") from None


def _translate(label: str, table: Mapping[str, str]) -> str | None:
    if label in table:
        return table[label]
    folded = {k.strip().lower(): v for k, v in table.items()}
    return folded.get(label.strip().lower())


def map_to_seer(rec: ProjectRecord, mapping: MappingConfig, reg: Registry) -> SeerProject:
    known = mapping.drivers | mapping.ignore
    for driver in rec.driver_ratings:
        if driver not in known:
            raise MappingError(f"project {rec.id}: driver {driver!r} has no mapping entry")
    default = parse_rating(mapping.default_rating)
    ratings: dict[str, RatingPosition] = {pid: default for pid in reg.ids}
    for e in mapping.entries:
        if e.parameter not in reg:
            raise MappingError(f"mapping entry {e.driver} targets unknown parameter {e.parameter}")
        if e.driver not in rec.driver_ratings:
            continue
        label = rec.driver_ratings[e.driver]
        seer_label = _translate(label, e.translation)
        if seer_label is None:
            raise MappingError(f"project {rec.id}: no translation for {e.driver}={label!r} ({e.parameter})")
        ratings[e.parameter] = parse_rating(seer_label)
    D = rec.D if rec.D is not None else mapping.default_D
    return SeerProject(rec.id, ratings, rec.size_ksloc * 1000.0, D, rec.actual_effort_pm)


def map_all(records: Sequence[ProjectRecord], mapping: MappingConfig, reg: Registry) -> list[SeerProject]:
    return [map_to_seer(r, mapping, reg) for r in records]


def check_case(case: str) -> str:
    if case not in CASES:
        raise InputError(f"unknown case {case!r}; valid cases: {', '.join(CASES)}")
    return case


def make_case_split(case: str, projects: Sequence, baseline_mre=None, seed: int = 0):
    """Return (train, test) for one of the evaluation cases.

    ``baseline_mre`` is a sequence aligned with ``projects`` (or a mapping by
    project id) and is required for C1 and C3. C4 splits shuffle with ``seed``
    and keep both halves in the original project order.
    """
    check_case(case)
    projects = list(projects)
    if not projects:
        raise InputError("no projects to split")
    n = len(projects)
    if case == "C2":
        train_idx = list(range(n))
        test_idx = list(range(n))
    elif case in CASE_MRE_CEILING:
        if baseline_mre is None:
            raise InputError(f"case {case} needs baseline MREs")
        if isinstance(baseline_mre, Mapping):
            mres = [baseline_mre[p.id] for p in projects]
        else:
            mres = list(baseline_mre)
        if len(mres) != n:
            raise InputError(f"got {len(mres)} baseline MREs for {n} projects")
        ceiling = CASE_MRE_CEILING[case]
        train_idx = [i for i, m in enumerate(mres) if m <= ceiling]
        test_idx = list(range(n))
    else:
        order = np.random.default_rng(seed).permutation(n)
        n_train = math.ceil(CASE_TRAIN_FRACTION[case] * n)
        train_idx = sorted(int(i) for i in order[:n_train])
        test_idx = sorted(int(i) for i in order[n_train:])
    if not train_idx:
        raise CaseError(f"case {case} leaves an empty training set")
    return [projects[i] for i in train_idx], [projects[i] for i in test_idx]
