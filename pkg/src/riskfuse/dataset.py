"""NASA-93 style dataset ingestion and feature mapping.

Loads COCOMO-81 format project records from CSV or ARFF files, resolves
the risk-criteria catalog (six groups P..U) against the dataset columns,
and maps ordinal ratings onto normalized [0, 1] feature values.
"""

from __future__ import annotations

import csv
import logging
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import numpy as np

from .errors import DataError

log = logging.getLogger(__name__)

ORDINAL_LEVELS = ("very_low", "low", "nominal", "high", "very_high", "extra_high")

# Equally spaced default mapping; override through the pipeline config.
DEFAULT_ORDINAL_VALUES = {
    "very_low": 0.0,
    "low": 0.2,
    "nominal": 0.4,
    "high": 0.6,
    "very_high": 0.8,
    "extra_high": 1.0,
}

_SHORT_TOKENS = {
    "vl": "very_low",
    "l": "low",
    "n": "nominal",
    "h": "high",
    "vh": "very_high",
    "xh": "extra_high",
}

_MISSING_TOKENS = {"", "?", "na", "nan"}

# COCOMO-81 effort-multiplier columns as they appear in the PROMISE files.
RATING_COLUMNS = (
    "rely", "data", "cplx", "time", "stor", "virt", "turn",
    "acap", "aexp", "pcap", "vexp", "lexp", "modp", "tool", "sced",
)

_SIZE_COLUMNS = ("kloc", "equivphyskloc", "size", "ksloc")
_EFFORT_COLUMNS = ("effort", "act_effort", "acteffort", "actual_effort")
_ID_COLUMNS = ("recordnumber", "id", "project", "projectname")


@dataclass(frozen=True)
class ProjectRecord:
    """One project: ordinal ratings plus size and actual effort."""

    identifier: str
    ratings: dict[str, str | None]
    size: float | None = None
    effort: float | None = None
    extras: dict[str, str] = field(default_factory=dict)

    def __post_init__(self):
        for column, level in self.ratings.items():
            if level is not None and level not in ORDINAL_LEVELS:
                raise DataError(
                    f"record {self.identifier}: rating {column}={level!r} is not "
                    f"one of {ORDINAL_LEVELS}"
                )
        if self.size is not None and self.size <= 0:
            raise DataError(f"record {self.identifier}: size must be positive")
        if self.effort is not None and self.effort <= 0:
            raise DataError(f"record {self.identifier}: effort must be positive")


@dataclass(frozen=True)
class CriteriaCatalog:
    """Risk criteria grouped P..U with dataset-column resolution.

    ``columns`` maps each code to the dataset column carrying it, or
    None when the attribute does not exist in COCOMO-81 data.  SIZE is
    special-cased onto the numeric size field.
    """

    groups: dict[str, tuple[str, ...]]
    columns: dict[str, str | None]
    notes: tuple[str, ...] = ()

    def __post_init__(self):
        seen: set[str] = set()
        for group, codes in self.groups.items():
            for code in codes:
                if code in seen:
                    raise DataError(f"code {code} appears in more than one group")
                seen.add(code)
        unknown = set(self.columns) - seen
        if unknown:
            raise DataError(f"column mapping for codes outside the catalog: {unknown}")

    @property
    def codes(self) -> tuple[str, ...]:
        return tuple(code for codes in self.groups.values() for code in codes)

    def resolvable_codes(self) -> tuple[str, ...]:
        return tuple(c for c in self.codes if self.columns.get(c) is not None)

    def group_names(self) -> tuple[str, ...]:
        return tuple(self.groups)


def default_catalog() -> CriteriaCatalog:
    """The bundled six-group catalog for NASA-93 COCOMO data.

    DATA is listed under both product and platform risk in the source
    material; it is kept once (product) and the duplicate is flagged.
    """
    return CriteriaCatalog(
        groups={
            "P": ("SCED",),
            "Q": ("RELY", "DATA", "SIZE", "CPLX", "DOCU"),
            "R": ("TIME", "STOR"),
            "S": ("ACAP", "AEXP", "LTEX", "PCAP", "VEXP", "PCON"),
            "T": ("TOOL", "SITE", "PREC", "FLEX", "RESL", "TEAM", "PMAT", "INCREMENTS"),
            "U": ("RUSE",),
        },
        columns={
            "SCED": "sced",
            "RELY": "rely",
            "DATA": "data",
            "SIZE": "kloc",
            "CPLX": "cplx",
            "DOCU": None,
            "TIME": "time",
            "STOR": "stor",
            "ACAP": "acap",
            "AEXP": "aexp",
            "LTEX": "lexp",
            "PCAP": "pcap",
            "VEXP": "vexp",
            "PCON": None,
            "TOOL": "tool",
            "SITE": None,
            "PREC": None,
            "FLEX": None,
            "RESL": None,
            "TEAM": None,
            "PMAT": None,
            "INCREMENTS": None,
            "RUSE": None,
        },
        notes=("duplicate DATA row in source grouping kept once under group Q",),
    )


def _parse_rating(token: str, column: str, line: int) -> str | None:
    cleaned = token.strip().lower()
    if cleaned in _MISSING_TOKENS:
        return None
    if cleaned in _SHORT_TOKENS:
        return _SHORT_TOKENS[cleaned]
    if cleaned in ORDINAL_LEVELS:
        return cleaned
    raise DataError(
        f"line {line}: unknown ordinal token {token!r} in column '{column}'"
    )


def _parse_number(token: str, column: str, line: int) -> float | None:
    cleaned = token.strip()
    if cleaned.lower() in _MISSING_TOKENS:
        return None
    try:
        return float(cleaned)
    except ValueError:
        raise DataError(
            f"line {line}: cannot parse {token!r} in column '{column}' as a number"
        ) from None


def _build_record(columns: list[str], values: list[str], line: int, index: int) -> ProjectRecord:
    if len(values) != len(columns):
        raise DataError(
            f"line {line}: row has {len(values)} fields, header has {len(columns)}"
        )
    ratings: dict[str, str | None] = {}
    extras: dict[str, str] = {}
    identifier = str(index + 1)
    size = effort = None
    for column, token in zip(columns, values):
        name = column.strip().lower()
        if name in RATING_COLUMNS:
            ratings[name] = _parse_rating(token, name, line)
        elif name in _SIZE_COLUMNS:
            size = _parse_number(token, name, line)
        elif name in _EFFORT_COLUMNS:
            effort = _parse_number(token, name, line)
        elif name in _ID_COLUMNS and identifier == str(index + 1):
            identifier = token.strip() or identifier
        else:
            extras[name] = token.strip()
    return ProjectRecord(
        identifier=identifier, ratings=ratings, size=size, effort=effort, extras=extras
    )


def _load_csv(path: Path) -> list[ProjectRecord]:
    with path.open(newline="") as handle:
        reader = csv.reader(handle)
        rows = [(line, row) for line, row in enumerate(reader, start=1) if row]
    if not rows:
        raise DataError(f"{path}: no header row found")
    header = [cell.strip() for cell in rows[0][1]]
    records = [
        _build_record(header, row, line, i) for i, (line, row) in enumerate(rows[1:])
    ]
    return records


def _load_arff(path: Path) -> list[ProjectRecord]:
    columns: list[str] = []
    records: list[ProjectRecord] = []
    in_data = False
    index = 0
    with path.open() as handle:
        for line_no, raw in enumerate(handle, start=1):
            line = raw.strip()
            if not line or line.startswith("%"):
                continue
            lowered = line.lower()
            if lowered.startswith("@attribute"):
                parts = line.split(None, 2)
                if len(parts) < 2:
                    raise DataError(f"line {line_no}: malformed @attribute declaration")
                columns.append(parts[1].strip("'\""))
            elif lowered.startswith("@data"):
                in_data = True
                if not columns:
                    raise DataError(f"{path}: @data before any @attribute")
            elif lowered.startswith("@"):
                continue
            elif in_data:
                values = next(csv.reader([line]))
                records.append(_build_record(columns, values, line_no, index))
                index += 1
    if not in_data:
        raise DataError(f"{path}: no @data section found")
    return records


def load_dataset(path: str | Path, format: str | None = None) -> list[ProjectRecord]:
    """Load project records from a CSV or ARFF file.

    Args:
        path: file to read.
        format: "csv" or "arff"; inferred from the suffix when omitted.

    Returns:
        One record per data row.  An empty data section yields an empty
        list with a logged warning.
    """
    path = Path(path)
    if not path.is_file():
        raise DataError(f"dataset file not readable: {path}")
    if format is None:
        format = path.suffix.lstrip(".").lower() or "csv"
    if format == "csv":
        records = _load_csv(path)
    elif format == "arff":
        records = _load_arff(path)
    else:
        raise DataError(f"unsupported dataset format {format!r} (csv or arff)")
    if not records:
        log.warning("%s: data section is empty", path)
    log.info("%s: loaded %d records", path, len(records))
    return records


@dataclass(frozen=True)
class FeatureMapping:
    """Ordinal and numeric value mapping fitted over a loaded dataset.

    Ordinal ratings use the configured level values; numeric attributes
    are min-max normalized over the observed range.  Missing entries
    fall back to ``missing_value``.
    """

    ordinal_values: dict[str, float]
    numeric_ranges: dict[str, tuple[float, float]]
    missing_value: float = DEFAULT_ORDINAL_VALUES["nominal"]

    @classmethod
    def fit(
        cls,
        records: list[ProjectRecord],
        ordinal_values: dict[str, float] | None = None,
        missing_value: float = DEFAULT_ORDINAL_VALUES["nominal"],
    ) -> "FeatureMapping":
        values = dict(DEFAULT_ORDINAL_VALUES if ordinal_values is None else ordinal_values)
        sizes = [r.size for r in records if r.size is not None]
        efforts = [r.effort for r in records if r.effort is not None]
        ranges: dict[str, tuple[float, float]] = {}
        if sizes:
            ranges["size"] = (min(sizes), max(sizes))
        if efforts:
            ranges["effort"] = (min(efforts), max(efforts))
        return cls(ordinal_values=values, numeric_ranges=ranges, missing_value=missing_value)

    def normalize_numeric(self, name: str, value: float | None) -> float:
        if value is None:
            return self.missing_value
        lo, hi = self.numeric_ranges.get(name, (None, None))
        if lo is None:
            raise DataError(f"no fitted range for numeric attribute '{name}'")
        if hi <= lo:
            return self.missing_value
        return float(np.clip((value - lo) / (hi - lo), 0.0, 1.0))

    def rating_value(self, level: str | None) -> float:
        if level is None:
            return self.missing_value
        try:
            return self.ordinal_values[level]
        except KeyError:
            raise DataError(f"no mapped value for ordinal level {level!r}") from None


def map_ratings_to_features(
    record: ProjectRecord,
    catalog: CriteriaCatalog,
    mapping: FeatureMapping,
    codes: tuple[str, ...] | None = None,
) -> np.ndarray:
    """Normalized [0, 1] feature value per requested catalog code.

    Args:
        codes: catalog codes to resolve, defaulting to every code the
            catalog can resolve against the dataset columns.

    Raises:
        DataError: for a code the catalog cannot map onto the dataset.
    """
    if codes is None:
        codes = catalog.resolvable_codes()
    features = np.empty(len(codes))
    for i, code in enumerate(codes):
        column = catalog.columns.get(code)
        if column is None:
            raise DataError(f"criterion code {code!r} is not resolvable in this dataset")
        if code == "SIZE":
            features[i] = mapping.normalize_numeric("size", record.size)
        else:
            features[i] = mapping.rating_value(record.ratings.get(column))
    return features


def group_features(
    record: ProjectRecord, catalog: CriteriaCatalog, mapping: FeatureMapping
) -> np.ndarray:
    """Per-group feature vector: mean of each group's resolvable codes.

    Groups with no resolvable member (reuse risk on COCOMO-81 data) fall
    back to the mapping's missing value, yielding a constant column.
    """
    values = []
    for group in catalog.group_names():
        resolvable = [c for c in catalog.groups[group] if catalog.columns.get(c)]
        if not resolvable:
            values.append(mapping.missing_value)
            continue
        member_values = map_ratings_to_features(record, catalog, mapping, tuple(resolvable))
        values.append(float(member_values.mean()))
    return np.array(values)


def normalized_effort(record: ProjectRecord, mapping: FeatureMapping) -> float:
    """Actual effort scaled by the dataset maximum.

    Targets land in (0, 1], never exactly zero, which keeps percentage
    error metrics well defined.  This is the default risk-magnitude
    target.
    """
    if record.effort is None:
        raise DataError(f"record {record.identifier} has no recorded effort")
    ranges = mapping.numeric_ranges.get("effort")
    if ranges is None or ranges[1] <= 0:
        raise DataError("no positive effort range fitted over the dataset")
    return float(record.effort / ranges[1])


def bundled_path(name: str) -> Path:
    """Path of a data file shipped with the package."""
    return Path(str(resources.files("riskfuse").joinpath("data", name)))
