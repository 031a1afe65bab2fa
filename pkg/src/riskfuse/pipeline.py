"""End-to-end risk evaluation pipeline.

Chains the stages: DEMATEL criterion weights from respondent judgments,
a crow-search-tuned neuro-fuzzy model for risk magnitudes (70/30 split
with k-fold cross-validation inside the training portion), intuitionistic
TOPSIS ranking of the risk factors, and the final weighted risk score.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Sequence

import numpy as np

from . import anfis, dematel, topsis
from .config import PipelineConfig
from .dataset import (
    CriteriaCatalog,
    FeatureMapping,
    ProjectRecord,
    default_catalog,
    group_features,
    map_ratings_to_features,
    normalized_effort,
)
from .ecsa import EcsaConfig, optimize
from .errors import DataError, PipelineError, RiskfuseError
from .fuzzy import IntuitionisticFuzzyValue, LinguisticScale
from .topsis import IfDecisionMatrix, lift_crisp_weights

P_OUT_TOL = 1e-9

Sample = tuple[np.ndarray, float]


@dataclass(frozen=True)
class RiskReport:
    """Everything a pipeline run produced, JSON-native throughout.

    The aggregate score always recomputes from the recorded weights and
    potential scores, and the ranking is a permutation of the factor
    indices; both are enforced at construction.
    """

    criteria: list[str]
    weights: list[float]
    potential_scores: list[float]
    closeness: list[float]
    ranking: list[int]
    p_out: float
    intermediates: dict = field(default_factory=dict)
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        if len(self.weights) != len(self.potential_scores):
            raise DataError("weights and potential scores differ in length")
        recomputed = float(np.dot(self.weights, self.potential_scores))
        if abs(recomputed - self.p_out) > P_OUT_TOL:
            raise DataError(
                f"p_out {self.p_out} does not recompute from weights and scores "
                f"({recomputed})"
            )
        if sorted(self.ranking) != list(range(len(self.criteria))):
            raise DataError("ranking is not a permutation of the factor indices")

    def to_dict(self) -> dict:
        return {
            "criteria": self.criteria,
            "weights": self.weights,
            "potential_scores": self.potential_scores,
            "closeness": self.closeness,
            "ranking": self.ranking,
            "p_out": self.p_out,
            "intermediates": self.intermediates,
            "metadata": self.metadata,
        }

    @classmethod
    def from_dict(cls, payload: dict) -> "RiskReport":
        return cls(
            criteria=list(payload["criteria"]),
            weights=list(payload["weights"]),
            potential_scores=list(payload["potential_scores"]),
            closeness=list(payload["closeness"]),
            ranking=list(payload["ranking"]),
            p_out=payload["p_out"],
            intermediates=payload.get("intermediates", {}),
            metadata=payload.get("metadata", {}),
        )


def derive_weights(
    respondent_matrices: list, scale: LinguisticScale
) -> np.ndarray:
    """DEMATEL priority weights from respondent judgment matrices.

    A single criterion trivially receives the full weight: its 1x1
    judgment matrix is all diagonal, which the DEMATEL chain would
    reject as degenerate.
    """
    s = dematel.aggregate_responses(respondent_matrices, scale)
    if s.size == 1:
        return np.array([1.0])
    return dematel.evaluate(s).weights


def split_train_test(records: list, fraction: float, seed: int) -> tuple[list, list]:
    """Seeded shuffle then split; the training part takes
    floor(n * fraction) records and the partition is exact."""
    if not records:
        raise DataError("cannot split an empty record list")
    if not (0.0 < fraction < 1.0):
        raise DataError(f"split fraction must be inside (0, 1), got {fraction}")
    order = np.random.default_rng(seed).permutation(len(records))
    cut = math.floor(len(records) * fraction)
    train = [records[i] for i in order[:cut]]
    test = [records[i] for i in order[cut:]]
    return train, test


def cv_folds(records: list, k: int, seed: int) -> list[tuple[list, list]]:
    """Seeded k-fold rotation: k (train, test) pairs with fold sizes
    differing by at most one."""
    if k < 2:
        raise DataError(f"fold count must be >= 2, got {k}")
    if len(records) < k:
        raise DataError(f"{len(records)} records cannot fill {k} folds")
    order = np.random.default_rng(seed).permutation(len(records))
    chunks = np.array_split(order, k)
    pairs = []
    for i in range(k):
        test = [records[j] for j in chunks[i]]
        train = [records[j] for c, chunk in enumerate(chunks) if c != i for j in chunk]
        pairs.append((train, test))
    return pairs


@dataclass(frozen=True)
class TuningResult:
    """Best tuned model with per-run statistics."""

    model: anfis.AnfisModel
    coefficients: np.ndarray
    base_train_rmse: float
    train_rmse: float
    test_rmse: float
    test_mape: float
    run_stats: list[dict]


def tune_anfis_with_ecsa(
    train: list[Sample],
    test: list[Sample],
    config: PipelineConfig,
    base_model: anfis.AnfisModel | None = None,
) -> TuningResult:
    """Tune a neuro-fuzzy model by searching parameter-scaling coefficients.

    Builds the base model by subtractive clustering (unless one is
    supplied), then runs the configured number of independent crow
    searches over the coefficient box.  The objective scales the base
    parameters, refits the consequents by least squares, and scores
    training RMSE.  The all-ones coefficient vector is injected into
    every initial population, so the tuned training RMSE never exceeds
    the base model's.  The winner across runs is picked by test RMSE.
    """
    if base_model is None:
        base_model = anfis.init_fis(train, config.cluster_radius)
    base_model = anfis.fit_consequents_least_squares(base_model, train)
    base_train_rmse = anfis.rmse(base_model, train)

    n_coeff = base_model.n_parameters
    lo, hi = config.coefficient_bounds()
    identity = np.ones(n_coeff)

    def objective(coefficients: np.ndarray) -> float:
        scaled = anfis.apply_parameter_scaling(base_model, coefficients)
        refit = anfis.fit_consequents_least_squares(scaled, train)
        return anfis.rmse(refit, train)

    run_seeds = np.random.SeedSequence(config.seed).generate_state(config.runs)
    run_stats: list[dict] = []
    best: tuple[float, np.ndarray] | None = None
    for run_index, run_seed in enumerate(run_seeds):
        ecsa_config = EcsaConfig(
            bounds=((lo, hi),) * n_coeff,
            population_size=config.population_size,
            max_iterations=config.max_iterations,
            flight_length=config.flight_length,
            ap_min=config.ap_min,
            ap_max=config.ap_max,
            beta=config.beta,
            seed=int(run_seed),
        )
        result = optimize(objective, ecsa_config, initial_guesses=[identity])
        candidate = anfis.fit_consequents_least_squares(
            anfis.apply_parameter_scaling(base_model, result.best_position), train
        )
        train_rmse = anfis.rmse(candidate, train)
        test_rmse = anfis.rmse(candidate, test)
        run_stats.append(
            {
                "run": run_index,
                "seed": int(run_seed),
                "best_fitness": result.best_fitness,
                "train_rmse": train_rmse,
                "test_rmse": test_rmse,
                "evaluations": result.metadata["evaluations"],
            }
        )
        if best is None or test_rmse < best[0]:
            best = (test_rmse, result.best_position)

    coefficients = best[1]
    model = anfis.fit_consequents_least_squares(
        anfis.apply_parameter_scaling(base_model, coefficients), train
    )
    return TuningResult(
        model=model,
        coefficients=coefficients,
        base_train_rmse=base_train_rmse,
        train_rmse=anfis.rmse(model, train),
        test_rmse=anfis.rmse(model, test),
        test_mape=anfis.mape(model, test),
        run_stats=run_stats,
    )


def potential_scores(model: anfis.AnfisModel, factor_inputs: Sequence[np.ndarray]) -> np.ndarray:
    """Model output per risk factor's probe feature vector."""
    return np.array([anfis.forward(model, probe) for probe in factor_inputs])


def aggregate_risk(w: np.ndarray, f: np.ndarray) -> float:
    """Weighted risk score: the weight/score dot product."""
    w = np.asarray(w, dtype=float)
    f = np.asarray(f, dtype=float)
    if w.shape != f.shape:
        raise DataError(f"weights {w.shape} and scores {f.shape} differ in length")
    return float(w @ f)


def _factor_probes(
    features: np.ndarray, owners: list[list[int]]
) -> list[np.ndarray]:
    """One probe vector per factor: dataset-mean features with the
    factor's own components stressed to their observed maximum."""
    mean = features.mean(axis=0)
    peaks = features.max(axis=0)
    probes = []
    for owned in owners:
        probe = mean.copy()
        for column in owned:
            probe[column] = peaks[column]
        probes.append(probe)
    return probes


def _feature_owners(
    catalog: CriteriaCatalog, mode: str
) -> tuple[list[str], list[list[int]]]:
    """Feature column names plus, per criterion group, the columns it owns."""
    groups = list(catalog.group_names())
    if mode == "groups":
        return groups, [[i] for i in range(len(groups))]
    codes = list(catalog.resolvable_codes())
    owners = [
        [codes.index(c) for c in catalog.groups[g] if c in codes] for g in groups
    ]
    return codes, owners


def prepare_samples(
    records: list[ProjectRecord],
    catalog: CriteriaCatalog,
    mapping: FeatureMapping,
    mode: str,
) -> tuple[list[Sample], np.ndarray, list[list[int]]]:
    """Turn records into (features, target) samples plus the full feature
    matrix and, per criterion group, the feature columns it owns."""
    usable = [r for r in records if r.effort is not None]
    if not usable:
        raise DataError("no records carry an effort value to learn from")
    _, owners = _feature_owners(catalog, mode)
    rows = []
    for record in usable:
        if mode == "groups":
            rows.append(group_features(record, catalog, mapping))
        else:
            rows.append(map_ratings_to_features(record, catalog, mapping))
    features = np.array(rows)
    samples = [
        (features[i], normalized_effort(record, mapping))
        for i, record in enumerate(usable)
    ]
    return samples, features, owners


def _ifv_cells(rows) -> list[list[list[float]]]:
    return [[list(cell.as_tuple()) for cell in row] for row in rows]


def run_pipeline(
    records: list[ProjectRecord],
    respondent_matrices: list,
    config: PipelineConfig,
    catalog: CriteriaCatalog | None = None,
) -> RiskReport:
    """Execute the full risk-evaluation flow and collect every artifact.

    Stage failures raise :class:`PipelineError` carrying the stage name.
    Fixed seeds make the resulting report byte-identical across runs.
    """
    catalog = catalog or default_catalog()
    criteria = list(catalog.group_names())
    n = len(criteria)
    seeds = np.random.SeedSequence(config.seed).generate_state(4)
    split_seed, cv_seed, tune_seed = (int(s) for s in seeds[:3])

    # DEMATEL criterion weights.
    try:
        if not respondent_matrices:
            raise DataError("no respondent matrices supplied")
        s = dematel.aggregate_responses(respondent_matrices, config.scale)
        if s.size != n:
            raise DataError(
                f"judgment matrices are {s.size}x{s.size} but the catalog "
                f"defines {n} criteria"
            )
        # A lone criterion has an all-diagonal judgment matrix; it gets
        # the full weight without the (degenerate) total-relation solve.
        dematel_result = dematel.evaluate(s) if n > 1 else None
    except RiskfuseError as exc:
        raise PipelineError("dematel", str(exc)) from exc
    weights = dematel_result.weights if dematel_result else np.array([1.0])

    # Feature extraction.
    try:
        mapping = FeatureMapping.fit(records, config.ordinal_values, config.missing_value)
        samples, features, owners = prepare_samples(
            records, catalog, mapping, config.anfis_inputs
        )
    except RiskfuseError as exc:
        raise PipelineError("features", str(exc)) from exc

    # Protocol: split, per-fold tuning, winner by fold-test error.
    try:
        train, test = split_train_test(samples, config.split_fraction, split_seed)
        folds = cv_folds(train, config.cv_folds, cv_seed)
    except RiskfuseError as exc:
        raise PipelineError("split", str(exc)) from exc

    fold_metrics = []
    best_tuning: TuningResult | None = None
    try:
        for fold_index, (fold_train, fold_test) in enumerate(folds):
            fold_config = _with_seed(config, tune_seed + fold_index)
            tuning = tune_anfis_with_ecsa(fold_train, fold_test, fold_config)
            fold_metrics.append(
                {
                    "fold": fold_index,
                    "train_size": len(fold_train),
                    "test_size": len(fold_test),
                    "base_train_rmse": tuning.base_train_rmse,
                    "train_rmse": tuning.train_rmse,
                    "test_rmse": tuning.test_rmse,
                    "test_mape": tuning.test_mape,
                }
            )
            if best_tuning is None or tuning.test_rmse < best_tuning.test_rmse:
                best_tuning = tuning
        model = best_tuning.model
        heldout_rmse = anfis.rmse(model, test)
        heldout_mape = anfis.mape(model, test)
    except RiskfuseError as exc:
        raise PipelineError("tuning", str(exc)) from exc

    # Potential scores per risk factor.
    try:
        probes = _factor_probes(features, owners)
        f = potential_scores(model, probes)
    except RiskfuseError as exc:
        raise PipelineError("scores", str(exc)) from exc

    # Intuitionistic TOPSIS ranking of the factors.
    try:
        kinds = config.kinds_for(n)
        if dematel_result is not None:
            evidence = dematel_result.t / dematel_result.t.max()
        else:
            evidence = np.ones((n, n))
        clipped = np.clip(f, 0.0, 1.0)
        raw_rows = tuple(
            tuple(
                IntuitionisticFuzzyValue.from_crisp(float(clipped[i] * evidence[i, j]))
                for j in range(n)
            )
            for i in range(n)
        )
        raw_matrix = IfDecisionMatrix(rows=raw_rows, criteria_kinds=kinds)
        if n == 1:
            # A single factor coincides with its own ideal; closeness is
            # degenerate, the ranking is trivial.
            weighted_matrix = topsis.weighted_if_matrix(
                raw_matrix, lift_crisp_weights(weights)
            )
            xi = np.array([1.0])
            ranking = [0]
        else:
            weighted_matrix, xi, ranking = topsis.evaluate(
                raw_matrix, lift_crisp_weights(weights)
            )
        ties = topsis.tied_groups(xi)
    except RiskfuseError as exc:
        raise PipelineError("topsis", str(exc)) from exc

    # Aggregate risk score.
    try:
        p_out = aggregate_risk(weights, f)
    except RiskfuseError as exc:
        raise PipelineError("aggregate", str(exc)) from exc

    intermediates = {
        "direct_relation": s.entries.tolist(),
        "normalized_relation": dematel_result.q.tolist() if dematel_result else [[0.0]],
        "total_relation": dematel_result.t.tolist() if dematel_result else [[0.0]],
        "prominence": dematel_result.prominence.tolist() if dematel_result else [0.0],
        "relation": dematel_result.relation.tolist() if dematel_result else [0.0],
        "raw_if_matrix": _ifv_cells(raw_matrix.rows),
        "weighted_if_matrix": _ifv_cells(weighted_matrix.rows),
        "criteria_kinds": [k.value for k in kinds],
        "factor_probes": [p.tolist() for p in probes],
        "model": anfis.model_to_dict(model),
    }
    metadata = {
        "seed": config.seed,
        "stage_seeds": {"split": split_seed, "cv": cv_seed, "tuning": tune_seed},
        "records": len(records),
        "train_size": len(train),
        "test_size": len(test),
        "fold_metrics": fold_metrics,
        "heldout_rmse": heldout_rmse,
        "heldout_mape": heldout_mape,
        "run_stats": best_tuning.run_stats,
        "ties": ties,
        "model_diagnostics": list(model.diagnostics),
    }
    return RiskReport(
        criteria=criteria,
        weights=[float(w) for w in weights],
        potential_scores=[float(v) for v in f],
        closeness=[float(v) for v in xi],
        ranking=[int(i) for i in ranking],
        p_out=p_out,
        intermediates=intermediates,
        metadata=metadata,
    )


def _with_seed(config: PipelineConfig, seed: int) -> PipelineConfig:
    return replace(config, seed=seed)
