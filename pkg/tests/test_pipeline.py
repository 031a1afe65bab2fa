import json

import numpy as np
import pytest

from riskfuse.anfis import init_fis, parameter_vector, rmse
from riskfuse.config import PipelineConfig
from riskfuse.dataset import bundled_path
from riskfuse.errors import DataError, PipelineError
from riskfuse.fuzzy import DEFAULT_DEMATEL_SCALE, IntuitionisticFuzzyValue, TriangularFuzzyNumber
from riskfuse.pipeline import (
    RiskReport,
    aggregate_risk,
    cv_folds,
    derive_weights,
    potential_scores,
    run_pipeline,
    split_train_test,
    tune_anfis_with_ecsa,
)
from riskfuse.topsis import (
    CriterionKind,
    IfDecisionMatrix,
    closeness,
    ideal_solutions,
    rank_alternatives,
    separation_measures,
)

TFN = TriangularFuzzyNumber


def linear_samples(rng, n=50, dim=2):
    xs = rng.uniform(0.0, 1.0, size=(n, dim))
    slope = np.arange(1, dim + 1, dtype=float)
    return [(x, float(x @ slope + 0.5)) for x in xs]


def bumpy_samples(rng, n=80):
    xs = rng.uniform(0.0, 1.0, size=(n, 1))
    return [(x, float(np.sin(3.0 * x[0]) + 0.1 * x[0])) for x in xs]


@pytest.fixture(scope="module")
def respondent_fixture():
    payload = json.loads(bundled_path("respondents.json").read_text())
    return payload["respondents"]


class TestDeriveWeights:
    def test_two_by_two_trace(self):
        matrices = [[[0.0, 2.0], [1.0, 0.0]]]
        weights = derive_weights(matrices, DEFAULT_DEMATEL_SCALE)
        assert weights == pytest.approx([0.5, 0.5], abs=1e-12)

    def test_near_symmetric_judgments_near_uniform(self):
        cell = TFN(0.25, 0.5, 0.75)
        matrix = [[0.0 if i == j else cell for j in range(3)] for i in range(3)]
        matrix[0][1] = TFN(0.2500001, 0.5000001, 0.7500001)
        weights = derive_weights([matrix], DEFAULT_DEMATEL_SCALE)
        assert weights == pytest.approx(np.full(3, 1 / 3), abs=1e-5)

    def test_single_criterion(self):
        assert derive_weights([[[0.0]]], DEFAULT_DEMATEL_SCALE) == pytest.approx([1.0])


class TestSplit:
    def test_nasa_proportions(self, nasa_records):
        train, test = split_train_test(nasa_records, 0.7, seed=3)
        assert (len(train), len(test)) == (65, 28)

    def test_partition_exact(self, nasa_records):
        train, test = split_train_test(nasa_records, 0.7, seed=3)
        ids = sorted(r.identifier for r in train + test)
        assert ids == sorted(r.identifier for r in nasa_records)

    def test_boundary_fractions_rejected(self, nasa_records):
        for fraction in (0.0, 1.0, 1.2):
            with pytest.raises(DataError):
                split_train_test(nasa_records, fraction, seed=0)
        with pytest.raises(DataError):
            split_train_test([], 0.7, seed=0)

    def test_seed_determinism(self, nasa_records):
        first = split_train_test(nasa_records, 0.7, seed=9)
        second = split_train_test(nasa_records, 0.7, seed=9)
        assert [r.identifier for r in first[0]] == [r.identifier for r in second[0]]


class TestCvFolds:
    def test_93_records_three_folds(self, nasa_records):
        folds = cv_folds(nasa_records, 3, seed=1)
        assert [len(test) for _, test in folds] == [31, 31, 31]
        assert all(len(train) == 62 for train, _ in folds)

    def test_remainder_distribution(self):
        folds = cv_folds(list(range(94)), 3, seed=1)
        assert sorted(len(test) for _, test in folds) == [31, 31, 32]

    def test_rotation_covers_everything(self):
        records = list(range(10))
        folds = cv_folds(records, 3, seed=2)
        for train, test in folds:
            assert sorted(train + test) == records

    def test_too_few_records(self):
        with pytest.raises(DataError):
            cv_folds([1, 2], 3, seed=0)


class TestTuning:
    def test_exactly_representable_data_keeps_base(self, rng, quick_config):
        samples = linear_samples(rng)
        train, test = split_train_test(samples, 0.7, seed=1)
        tuning = tune_anfis_with_ecsa(train, test, quick_config)
        assert tuning.base_train_rmse < 1e-8
        assert tuning.train_rmse <= tuning.base_train_rmse + 1e-12

    def test_perturbed_base_strictly_improved(self, rng):
        config = PipelineConfig(runs=3, max_iterations=30, cluster_radius=0.4)
        samples = bumpy_samples(rng)
        train, test = split_train_test(samples, 0.7, seed=2)
        base = init_fis(train, config.cluster_radius)
        widened = parameter_vector(base).copy()
        coefficients = np.ones_like(widened)
        dim = base.input_dim
        for j in range(len(base.rules)):
            for d in range(dim):
                coefficients[(j * dim + d) * 3 + 1] = 2.0  # double every width
        from riskfuse.anfis import apply_parameter_scaling

        perturbed = apply_parameter_scaling(base, coefficients)
        tuning = tune_anfis_with_ecsa(train, test, config, base_model=perturbed)
        assert tuning.train_rmse <= tuning.base_train_rmse
        assert tuning.train_rmse < 0.95 * tuning.base_train_rmse

    def test_deterministic_under_master_seed(self, rng, quick_config):
        samples = bumpy_samples(rng, n=40)
        train, test = split_train_test(samples, 0.7, seed=4)
        a = tune_anfis_with_ecsa(train, test, quick_config)
        b = tune_anfis_with_ecsa(train, test, quick_config)
        assert np.array_equal(a.coefficients, b.coefficients)
        assert a.test_rmse == b.test_rmse


class TestScoresAndAggregate:
    def test_training_point_scored_close(self, rng, quick_config):
        samples = linear_samples(rng, n=40)
        model = init_fis(samples, quick_config.cluster_radius)
        x, y = samples[0]
        model_rmse = rmse(model, samples)
        scores = potential_scores(model, [x])
        assert abs(scores[0] - y) <= max(5.0 * model_rmse, 1e-6)

    def test_identical_factors_identical_scores(self, rng, quick_config):
        samples = linear_samples(rng, n=40)
        model = init_fis(samples, quick_config.cluster_radius)
        probe = samples[0][0]
        scores = potential_scores(model, [probe, probe])
        assert scores[0] == scores[1]

    def test_empty_factor_list(self, rng, quick_config):
        samples = linear_samples(rng, n=40)
        model = init_fis(samples, quick_config.cluster_radius)
        assert potential_scores(model, []).size == 0

    def test_aggregate_examples(self):
        assert aggregate_risk([0.5, 0.5], [0.2, 0.4]) == pytest.approx(0.3)
        assert aggregate_risk([1.0, 0.0], [0.7, 0.9]) == pytest.approx(0.7)
        assert aggregate_risk([0.3, 0.7], [0.0, 0.0]) == 0.0
        with pytest.raises(DataError):
            aggregate_risk([0.5], [0.2, 0.4])


class TestRiskReport:
    def test_p_out_must_recompute(self):
        with pytest.raises(DataError):
            RiskReport(
                criteria=["a", "b"],
                weights=[0.5, 0.5],
                potential_scores=[0.2, 0.4],
                closeness=[0.5, 0.5],
                ranking=[0, 1],
                p_out=0.9,
            )

    def test_ranking_must_be_permutation(self):
        with pytest.raises(DataError):
            RiskReport(
                criteria=["a", "b"],
                weights=[0.5, 0.5],
                potential_scores=[0.2, 0.4],
                closeness=[0.5, 0.5],
                ranking=[0, 0],
                p_out=0.3,
            )


@pytest.fixture(scope="module")
def quick_pipeline_report(nasa_records, respondent_fixture):
    config = PipelineConfig(runs=2, max_iterations=10, population_size=4, seed=5)
    return run_pipeline(nasa_records, respondent_fixture, config)


class TestRunPipeline:
    def test_report_is_deterministic(self, nasa_records, respondent_fixture, quick_pipeline_report):
        config = PipelineConfig(runs=2, max_iterations=10, population_size=4, seed=5)
        again = run_pipeline(nasa_records, respondent_fixture, config)
        assert again.to_dict() == quick_pipeline_report.to_dict()

    def test_report_consistency(self, quick_pipeline_report):
        report = quick_pipeline_report
        assert sorted(report.ranking) == list(range(6))
        assert report.p_out == pytest.approx(
            float(np.dot(report.weights, report.potential_scores)), abs=1e-9
        )
        assert sum(report.weights) == pytest.approx(1.0, abs=1e-9)

    def test_topsis_internally_consistent(self, quick_pipeline_report):
        report = quick_pipeline_report
        kinds = tuple(
            CriterionKind(k) for k in report.intermediates["criteria_kinds"]
        )
        rows = tuple(
            tuple(IntuitionisticFuzzyValue(*cell) for cell in row)
            for row in report.intermediates["weighted_if_matrix"]
        )
        matrix = IfDecisionMatrix(rows=rows, criteria_kinds=kinds)
        ideals = ideal_solutions(matrix)
        v_pos, v_neg = separation_measures(matrix, ideals)
        xi = closeness(v_pos, v_neg)
        assert xi == pytest.approx(report.closeness, abs=1e-12)
        assert rank_alternatives(xi) == report.ranking

    def test_missing_respondents_names_stage(self, nasa_records):
        config = PipelineConfig(runs=2, max_iterations=5, population_size=4)
        with pytest.raises(PipelineError, match="dematel"):
            run_pipeline(nasa_records, [], config)

    def test_wrong_matrix_size_names_stage(self, nasa_records):
        config = PipelineConfig(runs=2, max_iterations=5, population_size=4)
        with pytest.raises(PipelineError, match="dematel"):
            run_pipeline(nasa_records, [[[0.0, 1.0], [1.0, 0.0]]], config)

    def test_fold_metrics_recorded(self, quick_pipeline_report):
        metrics = quick_pipeline_report.metadata["fold_metrics"]
        assert len(metrics) == 3
        for entry in metrics:
            assert entry["train_rmse"] <= entry["base_train_rmse"] + 1e-12
            assert entry["test_mape"] > 0.0

    def test_single_criterion_run(self, nasa_records):
        from riskfuse.dataset import CriteriaCatalog

        catalog = CriteriaCatalog(groups={"Q": ("RELY",)}, columns={"RELY": "rely"})
        config = PipelineConfig(runs=2, max_iterations=5, population_size=4, seed=3)
        report = run_pipeline(nasa_records, [[[0.0]]], config, catalog=catalog)
        assert report.weights == [1.0]
        assert report.ranking == [0]
        assert report.p_out == pytest.approx(report.potential_scores[0])
