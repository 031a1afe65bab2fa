"""Fuzzy DEMATEL: criterion weights from respondent judgment matrices.

The procedure defuzzifies the respondents' triangular fuzzy judgments
per cell (CFCS), normalizes the resulting direct-relation matrix,
derives the total-relation matrix through the resolvent (I - Q)^-1,
and turns row/column prominence into priority weights.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DataError, NumericalError
from .fuzzy import (
    LinguisticScale,
    TriangularFuzzyNumber,
    cfcs_defuzzify,
    tfn_from_linguistic,
)

# Judgment cells may be TFNs, linguistic labels, or plain numbers
# (treated as degenerate TFNs).
JudgmentCell = TriangularFuzzyNumber | str | float | int

FIXED_POINT_TOL = 1e-8


@dataclass(frozen=True)
class DirectRelationMatrix:
    """Crisp direct-relation matrix averaged over respondents."""

    entries: np.ndarray
    respondent_count: int

    def __post_init__(self):
        entries = np.asarray(self.entries, dtype=float)
        object.__setattr__(self, "entries", entries)
        if entries.ndim != 2 or entries.shape[0] != entries.shape[1]:
            raise DataError(f"direct-relation matrix must be square, got {entries.shape}")
        if np.any(np.diag(entries) != 0.0):
            raise DataError("direct-relation matrix must have a zero diagonal")
        if np.any(entries < 0.0):
            raise DataError("direct-relation matrix entries must be nonnegative")

    @property
    def size(self) -> int:
        return self.entries.shape[0]


@dataclass(frozen=True)
class DematelResult:
    """All intermediate and final DEMATEL artifacts.

    Attributes:
        q: normalized direct-relation matrix.
        t: total-relation matrix.
        r_row: row sums of t (influence given).
        c_col: column sums of t (influence received).
        prominence: r_row + c_col.
        relation: r_row - c_col.
        weights: normalized prominence, summing to 1.
    """

    q: np.ndarray
    t: np.ndarray
    r_row: np.ndarray
    c_col: np.ndarray
    prominence: np.ndarray
    relation: np.ndarray
    weights: np.ndarray


def _cell_to_tfn(cell: JudgmentCell, scale: LinguisticScale) -> TriangularFuzzyNumber:
    if isinstance(cell, TriangularFuzzyNumber):
        return cell
    if isinstance(cell, str):
        return tfn_from_linguistic(cell, scale)
    return TriangularFuzzyNumber.crisp(float(cell))


def aggregate_responses(
    matrices: list[list[list[JudgmentCell]]],
    scale: LinguisticScale,
) -> DirectRelationMatrix:
    """Aggregate respondent judgment matrices into one crisp matrix.

    Each cell of the result is the CFCS defuzzification of that cell's
    judgments across all respondents (CFCS averages over respondents as
    its final step).  Diagonals are forced to zero.

    Args:
        matrices: one n-by-n grid per respondent; cells may be TFNs,
            linguistic labels resolved through ``scale``, or numbers.
        scale: linguistic scale used to resolve label cells.
    """
    if not matrices:
        raise DataError("aggregate_responses needs at least one respondent matrix")
    n = len(matrices[0])
    for r, matrix in enumerate(matrices):
        if len(matrix) != n or any(len(row) != n for row in matrix):
            raise DataError(f"respondent {r}: matrix is not {n}x{n}")

    crisp = np.zeros((n, n))
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            judgments = [_cell_to_tfn(matrix[i][j], scale) for matrix in matrices]
            crisp[i, j] = cfcs_defuzzify(judgments)
    return DirectRelationMatrix(entries=crisp, respondent_count=len(matrices))


def normalize_direct_matrix(s: DirectRelationMatrix) -> np.ndarray:
    """Normalize the direct-relation matrix by its maximum row sum.

    Q = S / max_j(sum_i s_ji); every entry of Q lies in [0, 1].
    """
    row_sums = s.entries.sum(axis=1)
    max_row = row_sums.max()
    if max_row <= 0.0:
        raise NumericalError("direct-relation matrix is all zero; cannot normalize")
    return s.entries / max_row


def total_relation_matrix(q: np.ndarray) -> np.ndarray:
    """Total-relation matrix T = Q (I - Q)^-1.

    Solved through an LU factorization of (I - Q) rather than an explicit
    inverse.  The spectral radius of Q must be below 1 for the underlying
    influence series to converge.

    Raises:
        NumericalError: if the spectral radius is >= 1 or (I - Q) is
            numerically singular.
    """
    q = np.asarray(q, dtype=float)
    n = q.shape[0]
    radius = np.max(np.abs(np.linalg.eigvals(q)))
    if radius >= 1.0 - 1e-12:
        raise NumericalError(
            f"spectral radius of normalized matrix is {radius:.6g} >= 1; "
            "total-relation series does not converge"
        )
    ident = np.eye(n)
    try:
        # T (I - Q) = Q  <=>  (I - Q)^T T^T = Q^T
        t = np.linalg.solve((ident - q).T, q.T).T
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"(I - Q) is singular: {exc}") from exc
    residual = np.max(np.abs(t - (q + q @ t))) if n else 0.0
    if residual > FIXED_POINT_TOL:
        raise NumericalError(
            f"total-relation solve is unstable (fixed-point residual {residual:.3g})"
        )
    return t


def prominence_relation(t: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Row sums R_i and column sums C_i of the total-relation matrix."""
    t = np.asarray(t, dtype=float)
    if t.ndim != 2 or t.shape[0] != t.shape[1]:
        raise DataError(f"total-relation matrix must be square, got {t.shape}")
    return t.sum(axis=1), t.sum(axis=0)


def priority_weights(r: np.ndarray, c: np.ndarray) -> np.ndarray:
    """Priority weights w_i = (R_i + C_i) / sum_k (R_k + C_k)."""
    r = np.asarray(r, dtype=float)
    c = np.asarray(c, dtype=float)
    if r.shape != c.shape:
        raise DataError(f"R and C lengths differ: {r.shape} vs {c.shape}")
    prominence = r + c
    total = prominence.sum()
    if total <= 0.0:
        raise NumericalError("total prominence is zero; weights are undefined")
    return prominence / total


def evaluate(s: DirectRelationMatrix) -> DematelResult:
    """Run the full DEMATEL chain on a crisp direct-relation matrix."""
    q = normalize_direct_matrix(s)
    t = total_relation_matrix(q)
    r_row, c_col = prominence_relation(t)
    weights = priority_weights(r_row, c_col)
    return DematelResult(
        q=q,
        t=t,
        r_row=r_row,
        c_col=c_col,
        prominence=r_row + c_col,
        relation=r_row - c_col,
        weights=weights,
    )
