"""Intuitionistic fuzzy TOPSIS ranking.

Builds the weighted IF decision matrix, extracts positive and negative
ideal solutions per criterion, measures normalized Euclidean separation
from both, and ranks alternatives by the relative closeness coefficient.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Sequence

import numpy as np

from .errors import DataError, NumericalError
from .fuzzy import IntuitionisticFuzzyValue, ifv_multiply


class CriterionKind(Enum):
    BENEFIT = "benefit"
    COST = "cost"


@dataclass(frozen=True)
class IfDecisionMatrix:
    """Alternatives-by-criteria grid of intuitionistic fuzzy values."""

    rows: tuple[tuple[IntuitionisticFuzzyValue, ...], ...]
    criteria_kinds: tuple[CriterionKind, ...]

    def __post_init__(self):
        if not self.rows:
            raise DataError("decision matrix needs at least one alternative")
        width = len(self.rows[0])
        if any(len(row) != width for row in self.rows):
            raise DataError("decision matrix rows must all have the same length")
        if len(self.criteria_kinds) != width:
            raise DataError(
                f"{len(self.criteria_kinds)} criterion kinds for {width} criteria"
            )

    @property
    def n_alternatives(self) -> int:
        return len(self.rows)

    @property
    def n_criteria(self) -> int:
        return len(self.rows[0])


@dataclass(frozen=True)
class IdealSolutions:
    """Per-criterion positive and negative ideal IFVs."""

    positive: tuple[IntuitionisticFuzzyValue, ...]
    negative: tuple[IntuitionisticFuzzyValue, ...]


def lift_crisp_weights(weights: Sequence[float]) -> tuple[IntuitionisticFuzzyValue, ...]:
    """Lift crisp weights in [0, 1] to IFVs (w, 1-w, 0).

    Used when no expert intuitionistic weights are supplied.
    """
    return tuple(IntuitionisticFuzzyValue.from_crisp(float(w)) for w in weights)


def weighted_if_matrix(
    raw: IfDecisionMatrix, weights: Sequence[IntuitionisticFuzzyValue]
) -> IfDecisionMatrix:
    """Multiply every cell by its criterion's intuitionistic weight."""
    if len(weights) != raw.n_criteria:
        raise DataError(
            f"{len(weights)} weights supplied for {raw.n_criteria} criteria"
        )
    rows = tuple(
        tuple(ifv_multiply(cell, weights[j]) for j, cell in enumerate(row))
        for row in raw.rows
    )
    return IfDecisionMatrix(rows=rows, criteria_kinds=raw.criteria_kinds)


def ideal_solutions(m: IfDecisionMatrix) -> IdealSolutions:
    """Extract per-criterion ideal IFVs.

    Benefit criteria: positive ideal takes (max mu, min nu) across the
    alternatives and the negative ideal (min mu, max nu); the roles swap
    for cost criteria.  Hesitation is recomputed as 1 - mu - nu.
    """
    positive = []
    negative = []
    for j, kind in enumerate(m.criteria_kinds):
        mus = [row[j].mu for row in m.rows]
        nus = [row[j].nu for row in m.rows]
        best = IntuitionisticFuzzyValue(max(mus), min(nus))
        worst = IntuitionisticFuzzyValue(min(mus), max(nus))
        if kind is CriterionKind.BENEFIT:
            positive.append(best)
            negative.append(worst)
        else:
            positive.append(worst)
            negative.append(best)
    return IdealSolutions(positive=tuple(positive), negative=tuple(negative))


def _distance(row, ideals) -> float:
    total = 0.0
    for cell, ideal in zip(row, ideals):
        total += (
            (cell.mu - ideal.mu) ** 2
            + (cell.nu - ideal.nu) ** 2
            + (cell.pi - ideal.pi) ** 2
        )
    return float(np.sqrt(total / (2.0 * len(row))))


def separation_measures(
    m: IfDecisionMatrix, ideals: IdealSolutions
) -> tuple[np.ndarray, np.ndarray]:
    """Normalized Euclidean distances of every alternative to the
    positive and negative ideals."""
    if len(ideals.positive) != m.n_criteria:
        raise DataError("ideal solutions do not match the matrix criteria count")
    v_pos = np.array([_distance(row, ideals.positive) for row in m.rows])
    v_neg = np.array([_distance(row, ideals.negative) for row in m.rows])
    return v_pos, v_neg


def closeness(vp: np.ndarray, vn: np.ndarray) -> np.ndarray:
    """Relative closeness xi = vn / (vn + vp), in [0, 1]."""
    vp = np.asarray(vp, dtype=float)
    vn = np.asarray(vn, dtype=float)
    if vp.shape != vn.shape:
        raise DataError(f"separation vectors differ in length: {vp.shape} vs {vn.shape}")
    totals = vp + vn
    degenerate = np.nonzero(totals == 0.0)[0]
    if degenerate.size:
        raise NumericalError(
            f"alternative(s) {degenerate.tolist()} are equidistant-zero from both "
            "ideals; closeness is undefined"
        )
    return vn / totals


def rank_alternatives(xi: np.ndarray) -> list[int]:
    """Indices sorted by descending closeness; ties break by original index."""
    xi = np.asarray(xi, dtype=float)
    if xi.size == 0:
        raise DataError("cannot rank an empty closeness vector")
    return sorted(range(xi.size), key=lambda i: (-xi[i], i))


def tied_groups(xi: np.ndarray) -> list[list[int]]:
    """Groups of alternatives sharing identical closeness (for reports)."""
    xi = np.asarray(xi, dtype=float)
    groups: dict[float, list[int]] = {}
    for i, value in enumerate(xi):
        groups.setdefault(float(value), []).append(i)
    return [members for members in groups.values() if len(members) > 1]


def evaluate(
    raw: IfDecisionMatrix, weights: Sequence[IntuitionisticFuzzyValue]
) -> tuple[IfDecisionMatrix, np.ndarray, list[int]]:
    """Full chain: weighting, ideals, separations, closeness, ranking.

    Returns the weighted matrix, the closeness coefficients, and the
    ranked alternative indices.
    """
    weighted = weighted_if_matrix(raw, weights)
    ideals = ideal_solutions(weighted)
    v_pos, v_neg = separation_measures(weighted, ideals)
    xi = closeness(v_pos, v_neg)
    return weighted, xi, rank_alternatives(xi)
