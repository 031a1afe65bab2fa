"""Fuzzy value types shared by the whole package.

Provides triangular fuzzy numbers with linguistic scales, the CFCS
(Converting Fuzzy data into Crisp Scores) defuzzification used to turn
expert judgments into crisp matrices, and intuitionistic fuzzy values
with the product operator needed for weighted decision matrices.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

from .errors import DataError

IFV_TOL = 1e-9


@dataclass(frozen=True)
class TriangularFuzzyNumber:
    """Triangular fuzzy number (l, m, u) with l <= m <= u."""

    l: float
    m: float
    u: float

    def __post_init__(self):
        for name, value in (("l", self.l), ("m", self.m), ("u", self.u)):
            if not math.isfinite(value):
                raise DataError(f"TFN component {name} must be finite, got {value!r}")
        if not (self.l <= self.m <= self.u):
            raise DataError(
                f"TFN requires l <= m <= u, got ({self.l}, {self.m}, {self.u})"
            )

    def scaled(self, factor: float) -> "TriangularFuzzyNumber":
        """Return the TFN with every component multiplied by a positive factor."""
        if factor <= 0:
            raise DataError(f"scale factor must be positive, got {factor}")
        return TriangularFuzzyNumber(self.l * factor, self.m * factor, self.u * factor)

    @classmethod
    def crisp(cls, value: float) -> "TriangularFuzzyNumber":
        """Degenerate TFN (c, c, c) representing a crisp judgment."""
        return cls(value, value, value)


@dataclass(frozen=True)
class LinguisticScale:
    """Ordered linguistic terms with one TFN per term.

    Modal values must be strictly increasing so the scale preserves the
    ordering of the judgments it encodes.
    """

    name: str
    labels: tuple[str, ...]
    tfns: tuple[TriangularFuzzyNumber, ...]

    def __post_init__(self):
        if len(self.labels) != len(self.tfns):
            raise DataError(
                f"scale '{self.name}': {len(self.labels)} labels but {len(self.tfns)} TFNs"
            )
        if len(self.labels) < 2:
            raise DataError(f"scale '{self.name}' needs at least 2 levels")
        modes = [t.m for t in self.tfns]
        if any(b <= a for a, b in zip(modes, modes[1:])):
            raise DataError(
                f"scale '{self.name}': modal values must be strictly increasing, got {modes}"
            )

    def __contains__(self, label: str) -> bool:
        return label in self.labels


# Conventional five-level influence scale for DEMATEL judgments; the
# pipeline configuration may replace it with any valid LinguisticScale.
DEFAULT_DEMATEL_SCALE = LinguisticScale(
    name="dematel-influence-0-4",
    labels=("No influence", "Very low", "Low", "High", "Very high"),
    tfns=(
        TriangularFuzzyNumber(0.00, 0.00, 0.25),
        TriangularFuzzyNumber(0.00, 0.25, 0.50),
        TriangularFuzzyNumber(0.25, 0.50, 0.75),
        TriangularFuzzyNumber(0.50, 0.75, 1.00),
        TriangularFuzzyNumber(0.75, 1.00, 1.00),
    ),
)


def tfn_from_linguistic(label: str, scale: LinguisticScale) -> TriangularFuzzyNumber:
    """Look up the TFN mapped to a linguistic term.

    Raises:
        KeyError: if the label is not part of the scale.
    """
    try:
        index = scale.labels.index(label)
    except ValueError:
        raise KeyError(
            f"unknown label {label!r} for scale '{scale.name}' "
            f"(expected one of {list(scale.labels)})"
        ) from None
    return scale.tfns[index]


def cfcs_defuzzify(judgments: Sequence[TriangularFuzzyNumber]) -> float:
    """Convert a group of triangular fuzzy judgments into one crisp score.

    Implements the five-step CFCS procedure: normalize l/m/u over the span
    of all judgments, compute left and right normalized scores, combine
    them into a total normalized crisp value, rescale back, and average
    over the judgments.  The result always lies within [min l, max u].

    Args:
        judgments: non-empty sequence of TFNs (one per respondent).

    Returns:
        Crisp score aggregating the judgments.
    """
    if not judgments:
        raise DataError("cfcs_defuzzify requires at least one judgment")
    lo = min(t.l for t in judgments)
    hi = max(t.u for t in judgments)
    span = hi - lo
    if span == 0.0:
        # Every judgment is the same degenerate TFN; it is already crisp.
        return judgments[0].m

    crisp_sum = 0.0
    for t in judgments:
        xl = (t.l - lo) / span
        xm = (t.m - lo) / span
        xu = (t.u - lo) / span
        left = xm / (1.0 + xm - xl)
        right = xu / (1.0 + xu - xm)
        total = (left * (1.0 - left) + right * right) / (1.0 - left + right)
        crisp_sum += lo + total * span
    return crisp_sum / len(judgments)


@dataclass(frozen=True)
class IntuitionisticFuzzyValue:
    """Intuitionistic fuzzy value (mu, nu, pi) with pi = 1 - mu - nu.

    ``pi`` may be omitted at construction; it is then derived from mu and
    nu.  All invariants are enforced within a 1e-9 tolerance.
    """

    mu: float
    nu: float
    pi: float = field(default=None)  # type: ignore[assignment]

    def __post_init__(self):
        if self.pi is None:
            object.__setattr__(self, "pi", 1.0 - self.mu - self.nu)
        for name, value in (("mu", self.mu), ("nu", self.nu), ("pi", self.pi)):
            if not (-IFV_TOL <= value <= 1.0 + IFV_TOL):
                raise DataError(f"IFV component {name}={value} outside [0, 1]")
        if self.mu + self.nu > 1.0 + IFV_TOL:
            raise DataError(f"IFV requires mu + nu <= 1, got {self.mu} + {self.nu}")
        if abs(self.pi - (1.0 - self.mu - self.nu)) > IFV_TOL:
            raise DataError(
                f"IFV hesitation pi={self.pi} inconsistent with 1 - mu - nu"
            )

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.mu, self.nu, self.pi)

    @classmethod
    def from_crisp(cls, value: float) -> "IntuitionisticFuzzyValue":
        """Lift a crisp score in [0, 1] to the IFV (value, 1 - value, 0)."""
        if not (0.0 <= value <= 1.0):
            raise DataError(f"crisp value {value} outside [0, 1] cannot be lifted")
        return cls(value, 1.0 - value, 0.0)


def ifv_multiply(
    a: IntuitionisticFuzzyValue, w: IntuitionisticFuzzyValue
) -> IntuitionisticFuzzyValue:
    """Standard intuitionistic fuzzy product.

    Membership multiplies, non-membership combines as a probabilistic sum,
    and hesitation is recomputed so the invariants hold:

        mu = a.mu * w.mu
        nu = a.nu + w.nu - a.nu * w.nu
        pi = 1 - mu - nu
    """
    mu = a.mu * w.mu
    nu = a.nu + w.nu - a.nu * w.nu
    return IntuitionisticFuzzyValue(mu, nu, 1.0 - mu - nu)
