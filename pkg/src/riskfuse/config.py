"""Pipeline configuration: defaults, validation, JSON loading.

A single JSON document configures every stage: the DEMATEL linguistic
scale, the clustering radius, the crow-search constants, the coefficient
search range, the split/cross-validation protocol, the dataset column
mapping, and the TOPSIS criteria kinds.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from .dataset import DEFAULT_ORDINAL_VALUES
from .errors import DataError
from .fuzzy import DEFAULT_DEMATEL_SCALE, LinguisticScale, TriangularFuzzyNumber
from .topsis import CriterionKind

# Coefficient search ranges for the parameter-scaling tuner.
MAGNITUDE_DELTA = 1.0   # mode A: U in [10^-delta, 10^+delta], signs preserved
SIGNED_LIMIT = 10.0     # mode B: U in [-M, +M]


@dataclass(frozen=True)
class PipelineConfig:
    """Everything a pipeline run needs besides the data files."""

    scale: LinguisticScale = DEFAULT_DEMATEL_SCALE
    cluster_radius: float = 0.5
    split_fraction: float = 0.7
    cv_folds: int = 3
    seed: int = 0
    # Crow-search constants (reference protocol defaults).
    population_size: int = 10
    max_iterations: int = 100
    flight_length: float = 2.0
    ap_min: float = 0.1
    ap_max: float = 0.8
    beta: float = 0.9
    runs: int = 20
    coefficient_mode: str = "magnitude"
    # Dataset mapping.
    anfis_inputs: str = "groups"
    ordinal_values: dict[str, float] = field(
        default_factory=lambda: dict(DEFAULT_ORDINAL_VALUES)
    )
    missing_value: float = DEFAULT_ORDINAL_VALUES["nominal"]
    # TOPSIS: one kind per criterion, or empty for all-benefit.
    criteria_kinds: tuple[CriterionKind, ...] = ()

    def __post_init__(self):
        if not (0.0 < self.split_fraction < 1.0):
            raise DataError(
                f"split_fraction must be inside (0, 1), got {self.split_fraction}"
            )
        if self.cv_folds < 2:
            raise DataError(f"cv_folds must be >= 2, got {self.cv_folds}")
        if self.cluster_radius <= 0:
            raise DataError(f"cluster_radius must be positive, got {self.cluster_radius}")
        if self.runs < 1:
            raise DataError(f"runs must be >= 1, got {self.runs}")
        if self.coefficient_mode not in ("magnitude", "signed"):
            raise DataError(
                f"coefficient_mode must be 'magnitude' or 'signed', "
                f"got {self.coefficient_mode!r}"
            )
        if self.anfis_inputs not in ("groups", "codes"):
            raise DataError(
                f"anfis_inputs must be 'groups' or 'codes', got {self.anfis_inputs!r}"
            )

    def coefficient_bounds(self) -> tuple[float, float]:
        """Per-dimension bounds of the coefficient search box."""
        if self.coefficient_mode == "magnitude":
            return (10.0**-MAGNITUDE_DELTA, 10.0**MAGNITUDE_DELTA)
        return (-SIGNED_LIMIT, SIGNED_LIMIT)

    def kinds_for(self, n_criteria: int) -> tuple[CriterionKind, ...]:
        if not self.criteria_kinds:
            return tuple(CriterionKind.BENEFIT for _ in range(n_criteria))
        if len(self.criteria_kinds) != n_criteria:
            raise DataError(
                f"config supplies {len(self.criteria_kinds)} criteria kinds "
                f"for {n_criteria} criteria"
            )
        return self.criteria_kinds


def _scale_from_dict(payload: dict) -> LinguisticScale:
    try:
        labels = tuple(payload["labels"])
        tfns = tuple(TriangularFuzzyNumber(*triple) for triple in payload["tfns"])
    except (KeyError, TypeError) as exc:
        raise DataError(f"malformed linguistic scale definition: {exc}") from exc
    return LinguisticScale(
        name=payload.get("name", "custom"), labels=labels, tfns=tfns
    )


def config_from_dict(payload: dict) -> PipelineConfig:
    """Build a PipelineConfig from a parsed JSON document.

    Unknown keys are rejected so typos do not silently fall back to
    defaults.
    """
    payload = dict(payload)
    kwargs = {}
    if "scale" in payload:
        kwargs["scale"] = _scale_from_dict(payload.pop("scale"))
    if "criteria_kinds" in payload:
        try:
            kwargs["criteria_kinds"] = tuple(
                CriterionKind(kind) for kind in payload.pop("criteria_kinds")
            )
        except ValueError as exc:
            raise DataError(str(exc)) from exc
    simple_keys = (
        "cluster_radius", "split_fraction", "cv_folds", "seed",
        "population_size", "max_iterations", "flight_length",
        "ap_min", "ap_max", "beta", "runs", "coefficient_mode",
        "anfis_inputs", "ordinal_values", "missing_value",
    )
    for key in simple_keys:
        if key in payload:
            kwargs[key] = payload.pop(key)
    if payload:
        raise DataError(f"unknown configuration keys: {sorted(payload)}")
    return PipelineConfig(**kwargs)


def load_config(path: str | Path) -> PipelineConfig:
    """Read a JSON configuration file."""
    path = Path(path)
    if not path.is_file():
        raise DataError(f"configuration file not readable: {path}")
    try:
        payload = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise DataError(f"{path}: invalid JSON ({exc})") from exc
    return config_from_dict(payload)
