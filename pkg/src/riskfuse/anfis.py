"""First-order Takagi-Sugeno neuro-fuzzy model.

Covers the five-layer forward pass (fuzzification, product firing
strengths, normalization, rule consequents, weighted sum), subtractive
clustering for rule extraction, least-squares consequent fitting, error
metrics, and the multiplicative parameter scaling the optimizer tunes.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from .errors import DataError, NumericalError

# Subtractive clustering constants (standard defaults).
SQUASH_FACTOR = 1.25
ACCEPT_RATIO = 0.5
REJECT_RATIO = 0.15

# Lower clamp for width/shape parameters driven nonpositive by scaling.
MIN_SHAPE_PARAM = 1e-6


@dataclass(frozen=True)
class BellMembership:
    """Generalized bell membership with center m, width l > 0, shape k > 0."""

    m: float
    l: float
    k: float

    def __post_init__(self):
        if self.l <= 0.0:
            raise DataError(f"bell width must be positive, got {self.l}")
        if self.k <= 0.0:
            raise DataError(f"bell shape exponent must be positive, got {self.k}")


def bell_membership(u: float, mf: BellMembership) -> float:
    """Membership degree 1 / (1 + |(u - m) / l|^(2k)), in (0, 1]."""
    return 1.0 / (1.0 + abs((u - mf.m) / mf.l) ** (2.0 * mf.k))


@dataclass(frozen=True)
class AnfisRule:
    """One fuzzy rule: a bell premise per input plus a linear consequent.

    The consequent holds one slope per input followed by the bias, so its
    length is input dimension + 1.
    """

    premises: tuple[BellMembership, ...]
    consequent: np.ndarray

    def __post_init__(self):
        consequent = np.asarray(self.consequent, dtype=float)
        object.__setattr__(self, "consequent", consequent)
        if consequent.shape != (len(self.premises) + 1,):
            raise DataError(
                f"consequent length {consequent.shape} does not match "
                f"{len(self.premises)} premises + bias"
            )


@dataclass(frozen=True)
class AnfisModel:
    """Immutable rule set with the input spans observed at initialization.

    ``input_normalization`` records per-dimension (min, max) of the
    training inputs; ``normalize_inputs`` maps raw feature vectors onto
    that span.  ``forward`` operates in the same coordinates the model
    was built in and applies no transformation itself.
    """

    input_dim: int
    rules: tuple[AnfisRule, ...]
    input_normalization: np.ndarray
    diagnostics: tuple[str, ...] = field(default=(), compare=False)

    def __post_init__(self):
        norm = np.asarray(self.input_normalization, dtype=float)
        object.__setattr__(self, "input_normalization", norm)
        if not self.rules:
            raise DataError("model needs at least one rule")
        if norm.shape != (self.input_dim, 2):
            raise DataError(
                f"normalization spans must be ({self.input_dim}, 2), got {norm.shape}"
            )
        if np.any(norm[:, 1] - norm[:, 0] <= 0.0):
            raise DataError("normalization spans must be positive")
        for rule in self.rules:
            if len(rule.premises) != self.input_dim:
                raise DataError("rule premise count does not match input_dim")

    @property
    def n_parameters(self) -> int:
        """Tunable parameter count: 3 premise values per rule and
        dimension, plus input_dim + 1 consequent values per rule."""
        r = len(self.rules)
        return r * self.input_dim * 3 + r * (self.input_dim + 1)

    def normalize_inputs(self, raw: np.ndarray) -> np.ndarray:
        """Map raw inputs onto [0, 1] over the recorded spans."""
        raw = np.asarray(raw, dtype=float)
        lo = self.input_normalization[:, 0]
        hi = self.input_normalization[:, 1]
        return (raw - lo) / (hi - lo)


def _membership_matrix(model: AnfisModel, x: np.ndarray) -> np.ndarray:
    """Firing strengths for a batch: shape (n_samples, n_rules)."""
    x = np.atleast_2d(np.asarray(x, dtype=float))
    strengths = np.ones((x.shape[0], len(model.rules)))
    # Far-off inputs overflow |z|^(2k) to inf, which cleanly underflows the
    # membership to zero; that is the intended limit behavior.
    with np.errstate(over="ignore"):
        for j, rule in enumerate(model.rules):
            for d, mf in enumerate(rule.premises):
                z = np.abs((x[:, d] - mf.m) / mf.l)
                strengths[:, j] *= 1.0 / (1.0 + z ** (2.0 * mf.k))
    return strengths


def _normalized_strengths(model: AnfisModel, x: np.ndarray) -> np.ndarray:
    w = _membership_matrix(model, x)
    totals = w.sum(axis=1)
    dead = totals <= 0.0
    if np.any(dead):
        raise NumericalError(
            f"all rule activations underflowed to zero for {int(dead.sum())} "
            "input(s); the model cannot evaluate there"
        )
    return w / totals[:, None]


def rule_outputs(model: AnfisModel, inputs: np.ndarray) -> np.ndarray:
    """Per-rule consequent outputs q . x + s at one input vector."""
    inputs = np.atleast_1d(np.asarray(inputs, dtype=float))
    return np.array(
        [rule.consequent[:-1] @ inputs + rule.consequent[-1] for rule in model.rules]
    )


def forward(model: AnfisModel, inputs: np.ndarray) -> float:
    """Model output: normalized-firing-strength weighted sum of the rule
    consequents.

    Raises:
        NumericalError: if every rule activation underflows to zero.
    """
    inputs = np.atleast_1d(np.asarray(inputs, dtype=float))
    if inputs.shape != (model.input_dim,):
        raise DataError(
            f"expected input of shape ({model.input_dim},), got {inputs.shape}"
        )
    wbar = _normalized_strengths(model, inputs[None, :])[0]
    return float(wbar @ rule_outputs(model, inputs))


def forward_batch(model: AnfisModel, x: np.ndarray) -> np.ndarray:
    """Vectorized forward pass over rows of x."""
    x = np.atleast_2d(np.asarray(x, dtype=float))
    wbar = _normalized_strengths(model, x)
    consequents = np.stack([rule.consequent for rule in model.rules])
    f = x @ consequents[:, :-1].T + consequents[:, -1]
    return (wbar * f).sum(axis=1)


def subtractive_clustering(data: np.ndarray, radius: float) -> np.ndarray:
    """Select cluster centers by the subtractive potential method.

    Every returned center is one of the data points.  Uses the standard
    constants: squash factor 1.25, accept ratio 0.5, reject ratio 0.15.

    Args:
        data: (n_samples, dim) array, expected pre-normalized to [0, 1].
        radius: neighborhood radius controlling cluster granularity.

    Returns:
        (n_centers, dim) array with at least one center.
    """
    data = np.asarray(data, dtype=float)
    if data.ndim == 1:
        data = data[:, None]
    if data.size == 0:
        raise DataError("subtractive clustering needs non-empty data")
    if radius <= 0.0:
        raise DataError(f"radius must be positive, got {radius}")

    alpha = 4.0 / radius**2
    beta = 4.0 / (SQUASH_FACTOR * radius) ** 2
    sq_dists = ((data[:, None, :] - data[None, :, :]) ** 2).sum(axis=2)
    potential = np.exp(-alpha * sq_dists).sum(axis=1)

    first = int(np.argmax(potential))
    first_potential = potential[first]
    centers = [first]
    potential = potential - first_potential * np.exp(-beta * sq_dists[first])

    while True:
        candidate = int(np.argmax(potential))
        p = potential[candidate]
        if p > ACCEPT_RATIO * first_potential:
            accept = True
        elif p < REJECT_RATIO * first_potential:
            break
        else:
            # Gray zone: accept only if far enough from existing centers.
            d_min = math.sqrt(min(sq_dists[candidate, c] for c in centers))
            accept = d_min / radius + p / first_potential >= 1.0
        if accept:
            centers.append(candidate)
            potential = potential - p * np.exp(-beta * sq_dists[candidate])
        else:
            potential[candidate] = 0.0
            if np.all(potential <= 0.0):
                break
    return data[centers]


def _input_matrix(inputs) -> np.ndarray:
    """Stack sample inputs (scalars or vectors) into an (n, d) matrix."""
    x = np.array([np.atleast_1d(np.asarray(inp, dtype=float)) for inp in inputs])
    if x.ndim != 2:
        raise DataError("sample inputs must share one dimensionality")
    return x


def _data_spans(x: np.ndarray) -> np.ndarray:
    """Per-dimension (min, max); degenerate dimensions fall back to the
    nominal unit span so widths stay positive."""
    lo = x.min(axis=0)
    hi = x.max(axis=0)
    degenerate = hi - lo < 1e-12
    hi = np.where(degenerate, lo + 1.0, hi)
    return np.column_stack([lo, hi])


def init_fis(
    train: list[tuple[np.ndarray, float]], radius: float
) -> AnfisModel:
    """Build a Sugeno model from training data via subtractive clustering.

    One rule per cluster center: premise centers at the cluster
    coordinates, widths radius * span / sqrt(8) per dimension, shape
    exponent 1, and consequents fitted by least squares.
    """
    if not train:
        raise DataError("init_fis needs non-empty training data")
    x = _input_matrix(inp for inp, _ in train)

    centers = subtractive_clustering(x, radius)
    spans = _data_spans(x)
    widths = radius * (spans[:, 1] - spans[:, 0]) / math.sqrt(8.0)
    dim = x.shape[1]
    rules = tuple(
        AnfisRule(
            premises=tuple(
                BellMembership(m=float(center[d]), l=float(widths[d]), k=1.0)
                for d in range(dim)
            ),
            consequent=np.zeros(dim + 1),
        )
        for center in centers
    )
    model = AnfisModel(input_dim=dim, rules=rules, input_normalization=spans)
    return fit_consequents_least_squares(model, train)


def fit_consequents_least_squares(
    model: AnfisModel, train: list[tuple[np.ndarray, float]]
) -> AnfisModel:
    """Refit all rule consequents by (minimum-norm) linear least squares.

    Premises stay fixed, so the model output is linear in the consequent
    coefficients and the global optimum is a single solve.  Rank-deficient
    designs do not fail; the minimum-norm solution is used and a
    diagnostic is recorded on the returned model.
    """
    if not train:
        raise DataError("cannot fit consequents on empty data")
    x = _input_matrix(inp for inp, _ in train)
    y = np.array([target for _, target in train], dtype=float)

    wbar = _normalized_strengths(model, x)  # (n, r)
    n_rules = len(model.rules)
    dim = model.input_dim
    # Design columns per rule: wbar_j * x_d for each d, then wbar_j.
    design = np.empty((x.shape[0], n_rules * (dim + 1)))
    for j in range(n_rules):
        base = j * (dim + 1)
        design[:, base : base + dim] = wbar[:, j : j + 1] * x
        design[:, base + dim] = wbar[:, j]

    solution, _, rank, _ = np.linalg.lstsq(design, y, rcond=None)
    diagnostics = model.diagnostics
    if rank < design.shape[1]:
        diagnostics = diagnostics + (
            f"rank-deficient consequent design (rank {rank} of "
            f"{design.shape[1]}); minimum-norm solution used",
        )

    rules = tuple(
        replace(rule, consequent=solution[j * (dim + 1) : (j + 1) * (dim + 1)].copy())
        for j, rule in enumerate(model.rules)
    )
    return replace(model, rules=rules, diagnostics=diagnostics)


def rmse(model: AnfisModel, dataset: list[tuple[np.ndarray, float]]) -> float:
    """Root mean squared prediction error over a dataset."""
    if not dataset:
        raise DataError("rmse needs a non-empty dataset")
    x = _input_matrix(inp for inp, _ in dataset)
    y = np.array([target for _, target in dataset], dtype=float)
    errors = forward_batch(model, x) - y
    return float(np.sqrt(np.mean(errors**2)))


def mape(model: AnfisModel, dataset: list[tuple[np.ndarray, float]]) -> float:
    """Mean absolute percentage error; every target must be nonzero."""
    if not dataset:
        raise DataError("mape needs a non-empty dataset")
    y = np.array([target for _, target in dataset], dtype=float)
    if np.any(y == 0.0):
        raise ValueError("mape undefined for zero targets")
    x = _input_matrix(inp for inp, _ in dataset)
    errors = forward_batch(model, x) - y
    return float(np.mean(np.abs(errors / y)) * 100.0)


def parameter_vector(model: AnfisModel) -> np.ndarray:
    """Flatten all tunable parameters in the documented fixed order:
    per rule, per input dimension (m, l, k); then per rule the
    consequent (slopes..., bias)."""
    parts: list[float] = []
    for rule in model.rules:
        for mf in rule.premises:
            parts.extend((mf.m, mf.l, mf.k))
    for rule in model.rules:
        parts.extend(rule.consequent.tolist())
    return np.array(parts)


def apply_parameter_scaling(model0: AnfisModel, coefficients: np.ndarray) -> AnfisModel:
    """Scale every tunable parameter of a base model multiplicatively.

    Each parameter of the returned model equals its initial value times
    the matching coefficient (ordered as in ``parameter_vector``).  Width
    and shape parameters that would become nonpositive are clamped to
    1e-6 and a diagnostic is recorded.
    """
    coefficients = np.asarray(coefficients, dtype=float)
    if coefficients.shape != (model0.n_parameters,):
        raise DataError(
            f"expected {model0.n_parameters} coefficients, got {coefficients.shape}"
        )

    dim = model0.input_dim
    clamped = 0
    idx = 0
    new_rules: list[AnfisRule] = []
    scaled_premises: list[list[BellMembership]] = []
    for rule in model0.rules:
        premises = []
        for mf in rule.premises:
            m = mf.m * coefficients[idx]
            l = mf.l * coefficients[idx + 1]
            k = mf.k * coefficients[idx + 2]
            idx += 3
            if l < MIN_SHAPE_PARAM:
                l = MIN_SHAPE_PARAM
                clamped += 1
            if k < MIN_SHAPE_PARAM:
                k = MIN_SHAPE_PARAM
                clamped += 1
            premises.append(BellMembership(m=m, l=l, k=k))
        scaled_premises.append(premises)
    for rule, premises in zip(model0.rules, scaled_premises):
        n = dim + 1
        consequent = rule.consequent * coefficients[idx : idx + n]
        idx += n
        new_rules.append(AnfisRule(premises=tuple(premises), consequent=consequent))

    diagnostics = model0.diagnostics
    if clamped:
        diagnostics = diagnostics + (
            f"clamped {clamped} width/shape parameter(s) to {MIN_SHAPE_PARAM}",
        )
    return replace(model0, rules=tuple(new_rules), diagnostics=diagnostics)


def model_to_dict(model: AnfisModel) -> dict:
    """JSON-serializable description of a model."""
    return {
        "input_dim": model.input_dim,
        "rules": [
            {
                "premises": [[mf.m, mf.l, mf.k] for mf in rule.premises],
                "consequent": rule.consequent.tolist(),
            }
            for rule in model.rules
        ],
        "input_normalization": model.input_normalization.tolist(),
        "diagnostics": list(model.diagnostics),
    }


def model_from_dict(payload: dict) -> AnfisModel:
    rules = tuple(
        AnfisRule(
            premises=tuple(BellMembership(m, l, k) for m, l, k in spec["premises"]),
            consequent=np.array(spec["consequent"], dtype=float),
        )
        for spec in payload["rules"]
    )
    return AnfisModel(
        input_dim=int(payload["input_dim"]),
        rules=rules,
        input_normalization=np.array(payload["input_normalization"], dtype=float),
        diagnostics=tuple(payload.get("diagnostics", ())),
    )


def save_model(model: AnfisModel, path: str | Path) -> None:
    Path(path).write_text(json.dumps(model_to_dict(model), indent=2))


def load_model(path: str | Path) -> AnfisModel:
    return model_from_dict(json.loads(Path(path).read_text()))
