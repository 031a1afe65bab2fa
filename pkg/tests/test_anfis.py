import numpy as np
import pytest

from riskfuse.anfis import (
    AnfisModel,
    AnfisRule,
    BellMembership,
    apply_parameter_scaling,
    bell_membership,
    fit_consequents_least_squares,
    forward,
    forward_batch,
    init_fis,
    load_model,
    mape,
    model_from_dict,
    model_to_dict,
    parameter_vector,
    rmse,
    rule_outputs,
    save_model,
    subtractive_clustering,
)
from riskfuse.errors import DataError, NumericalError


def make_model(premise_specs, consequents, spans=None):
    """premise_specs: per rule, per dim (m, l, k); consequents: per rule."""
    dim = len(premise_specs[0])
    rules = tuple(
        AnfisRule(
            premises=tuple(BellMembership(*p) for p in premises),
            consequent=np.array(consequent, dtype=float),
        )
        for premises, consequent in zip(premise_specs, consequents)
    )
    if spans is None:
        spans = np.column_stack([np.zeros(dim), np.ones(dim)])
    return AnfisModel(input_dim=dim, rules=rules, input_normalization=spans)


def random_model(rng, dim=None, n_rules=None):
    dim = dim or int(rng.integers(1, 4))
    n_rules = n_rules or int(rng.integers(1, 5))
    specs = [
        [(rng.uniform(-1, 2), rng.uniform(0.2, 2.0), rng.uniform(0.5, 3.0)) for _ in range(dim)]
        for _ in range(n_rules)
    ]
    consequents = rng.normal(size=(n_rules, dim + 1))
    return make_model(specs, consequents)


class TestBellMembership:
    def test_center_gives_one(self):
        mf = BellMembership(m=0.3, l=0.4, k=2.0)
        assert bell_membership(0.3, mf) == 1.0

    def test_unit_distance_gives_half(self):
        mf = BellMembership(m=1.0, l=0.5, k=1.0)
        assert bell_membership(1.5, mf) == pytest.approx(0.5)

    def test_derived_point(self):
        assert bell_membership(2.0, BellMembership(0.0, 1.0, 1.0)) == pytest.approx(0.2)

    def test_positivity_constraints(self):
        with pytest.raises(DataError):
            BellMembership(0.0, 0.0, 1.0)
        with pytest.raises(DataError):
            BellMembership(0.0, 1.0, -1.0)

    def test_symmetric_and_decreasing(self, rng):
        mf = BellMembership(m=0.5, l=0.7, k=1.5)
        offsets = rng.uniform(0.0, 3.0, size=50)
        left = np.array([bell_membership(0.5 - d, mf) for d in offsets])
        right = np.array([bell_membership(0.5 + d, mf) for d in offsets])
        assert left == pytest.approx(right)
        ordered = np.sort(offsets)
        values = [bell_membership(0.5 + d, mf) for d in ordered]
        assert all(a >= b for a, b in zip(values, values[1:]))


class TestForward:
    def test_single_active_rule(self):
        # Second rule's center is absurdly far away; its activation
        # underflows to zero and only the first rule fires.
        model = make_model(
            [[(0.0, 1.0, 1.0)], [(1e300, 1.0, 1.0)]],
            [[0.0, 3.0], [0.0, 2.0]],
        )
        assert forward(model, np.array([0.0])) == pytest.approx(3.0)

    def test_equal_weights_average(self):
        model = make_model(
            [[(0.0, 1.0, 1.0)], [(0.0, 1.0, 1.0)]],
            [[0.0, 3.0], [0.0, 2.0]],
        )
        assert forward(model, np.array([0.7])) == pytest.approx(2.5)

    def test_single_rule_normalization_cancels(self):
        model = make_model([[(0.3, 0.5, 1.0)]], [[2.0, 1.0]])
        assert forward(model, np.array([2.0])) == pytest.approx(5.0)

    def test_dead_activation_raises(self):
        model = make_model([[(1e300, 1.0, 1.0)]], [[1.0, 0.0]])
        with pytest.raises(NumericalError):
            forward(model, np.array([0.0]))

    def test_strengths_normalized_and_output_in_hull(self, rng):
        for _ in range(100):
            model = random_model(rng)
            x = rng.uniform(-1, 2, size=model.input_dim)
            outputs = rule_outputs(model, x)
            value = forward(model, x)
            assert outputs.min() - 1e-9 <= value <= outputs.max() + 1e-9

    def test_batch_matches_scalar(self, rng):
        model = random_model(rng, dim=2, n_rules=3)
        xs = rng.uniform(-1, 2, size=(10, 2))
        batch = forward_batch(model, xs)
        singles = [forward(model, x) for x in xs]
        assert batch == pytest.approx(singles)


class TestSubtractiveClustering:
    def test_single_point(self):
        centers = subtractive_clustering(np.array([[0.3, 0.7]]), radius=0.5)
        assert centers == pytest.approx(np.array([[0.3, 0.7]]))

    def test_duplicates_collapse(self):
        data = np.tile(np.array([[0.4, 0.6]]), (7, 1))
        centers = subtractive_clustering(data, radius=0.5)
        assert centers == pytest.approx(np.array([[0.4, 0.6]]))

    def test_two_blobs_found(self, rng):
        a = rng.normal(loc=0.2, scale=0.03, size=(40, 2))
        b = rng.normal(loc=0.8, scale=0.03, size=(40, 2))
        data = np.clip(np.vstack([a, b]), 0.0, 1.0)
        centers = subtractive_clustering(data, radius=0.3)
        assert len(centers) == 2
        means = np.array([a.mean(axis=0), b.mean(axis=0)])
        for mean in means:
            assert min(np.linalg.norm(c - mean) for c in centers) < 0.1

    def test_input_validation(self):
        with pytest.raises(DataError):
            subtractive_clustering(np.empty((0, 2)), radius=0.5)
        with pytest.raises(DataError):
            subtractive_clustering(np.array([[0.1]]), radius=0.0)


class TestInitFis:
    def test_recovers_global_linear_function(self, rng):
        u = rng.uniform(0.0, 1.0, size=60)
        train = [(np.array([x]), 2.0 * x + 1.0) for x in u]
        model = init_fis(train, radius=2.0)
        assert rmse(model, train) < 1e-6

    def test_single_training_point(self):
        train = [(np.array([0.4]), 0.9)]
        model = init_fis(train, radius=0.5)
        assert len(model.rules) == 1
        assert forward(model, np.array([0.4])) == pytest.approx(0.9)

    def test_empty_train_rejected(self):
        with pytest.raises(DataError):
            init_fis([], radius=0.5)


class TestLeastSquaresFit:
    def test_recovers_known_consequents(self, rng):
        generator = random_model(rng, dim=2, n_rules=2)
        xs = rng.uniform(-0.5, 1.5, size=(80, 2))
        train = [(x, forward(generator, x)) for x in xs]
        blank = make_model(
            [[(p.m, p.l, p.k) for p in rule.premises] for rule in generator.rules],
            np.zeros((2, 3)),
        )
        refit = fit_consequents_least_squares(blank, train)
        assert rmse(refit, train) < 1e-8

    def test_constant_targets_reproduced(self, rng):
        xs = rng.uniform(0.0, 1.0, size=(30, 1))
        train = [(x, 4.2) for x in xs]
        model = fit_consequents_least_squares(random_model(rng, dim=1, n_rules=2), train)
        predictions = forward_batch(model, xs)
        assert predictions == pytest.approx(np.full(30, 4.2), abs=1e-8)

    def test_refit_is_idempotent(self, rng):
        model = random_model(rng, dim=2, n_rules=3)
        xs = rng.uniform(0.0, 1.0, size=(40, 2))
        train = [(x, float(np.sin(x.sum()))) for x in xs]
        once = fit_consequents_least_squares(model, train)
        twice = fit_consequents_least_squares(once, train)
        for r1, r2 in zip(once.rules, twice.rules):
            assert r2.consequent == pytest.approx(r1.consequent, abs=1e-9)

    def test_fit_never_hurts(self, rng):
        for _ in range(10):
            model = random_model(rng, dim=1, n_rules=2)
            xs = rng.uniform(0.0, 1.0, size=(25, 1))
            train = [(x, float(rng.normal())) for x in xs]
            assert rmse(fit_consequents_least_squares(model, train), train) <= rmse(model, train) + 1e-12

    def test_rank_deficient_flagged(self):
        # Two identical rules make the design columns collinear.
        model = make_model(
            [[(0.5, 1.0, 1.0)], [(0.5, 1.0, 1.0)]],
            [[0.0, 0.0], [0.0, 0.0]],
        )
        train = [(np.array([x]), float(x)) for x in np.linspace(0, 1, 12)]
        refit = fit_consequents_least_squares(model, train)
        assert any("rank" in note for note in refit.diagnostics)
        assert rmse(refit, train) < 1e-8


class TestErrorMetrics:
    def test_perfect_predictions(self, rng):
        model = random_model(rng, dim=1, n_rules=2)
        xs = rng.uniform(0.0, 1.0, size=(15, 1))
        data = [(x, forward(model, x)) for x in xs]
        assert rmse(model, data) == pytest.approx(0.0, abs=1e-12)
        nonzero = [(x, y) for x, y in data if abs(y) > 1e-9]
        assert mape(model, nonzero) == pytest.approx(0.0, abs=1e-9)

    def test_constant_offset(self):
        model = make_model([[(0.0, 1e6, 1.0)]], [[0.0, 11.0]])  # predicts 11 everywhere
        data = [(np.array([float(i)]), 10.0) for i in range(5)]
        assert rmse(model, data) == pytest.approx(1.0)
        assert mape(model, data) == pytest.approx(10.0)

    def test_mixed_errors(self):
        model = make_model([[(0.0, 1e6, 1.0)]], [[2.0, 9.0]])  # 2x + 9
        data = [(np.array([1.0]), 10.0), (np.array([0.0]), 10.0)]  # errors +1, -1
        assert rmse(model, data) == pytest.approx(1.0)
        assert mape(model, data) == pytest.approx(10.0)

    def test_mape_zero_target_rejected(self, rng):
        model = random_model(rng, dim=1, n_rules=1)
        with pytest.raises(ValueError):
            mape(model, [(np.array([0.5]), 0.0)])


class TestParameterScaling:
    def test_identity_coefficients(self, rng):
        model = random_model(rng, dim=2, n_rules=2)
        scaled = apply_parameter_scaling(model, np.ones(model.n_parameters))
        assert parameter_vector(scaled) == pytest.approx(parameter_vector(model))

    def test_single_width_doubles(self, rng):
        model = random_model(rng, dim=2, n_rules=2)
        coefficients = np.ones(model.n_parameters)
        coefficients[1] = 2.0  # width of rule 0, dimension 0
        scaled = apply_parameter_scaling(model, coefficients)
        before = parameter_vector(model)
        after = parameter_vector(scaled)
        assert after[1] == pytest.approx(2.0 * before[1])
        mask = np.ones(model.n_parameters, dtype=bool)
        mask[1] = False
        assert after[mask] == pytest.approx(before[mask])

    def test_negative_width_clamped_with_diagnostic(self, rng):
        model = random_model(rng, dim=1, n_rules=1)
        coefficients = np.ones(model.n_parameters)
        coefficients[1] = -1.0
        scaled = apply_parameter_scaling(model, coefficients)
        assert all(p.l > 0.0 for rule in scaled.rules for p in rule.premises)
        assert any("clamp" in note for note in scaled.diagnostics)

    def test_length_mismatch(self, rng):
        model = random_model(rng)
        with pytest.raises(DataError):
            apply_parameter_scaling(model, np.ones(model.n_parameters + 1))

    def test_flattening_order(self):
        model = make_model(
            [[(1.0, 2.0, 3.0), (4.0, 5.0, 6.0)]],
            [[7.0, 8.0, 9.0]],
        )
        assert parameter_vector(model) == pytest.approx(
            [1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0, 9.0]
        )


class TestGradients:
    def test_consequent_sensitivities(self, rng):
        # Output is linear in the consequents: the analytic derivative of
        # the output w.r.t. coefficient (j, d) is wbar_j * x_d (bias: wbar_j).
        for _ in range(20):
            model = random_model(rng, dim=2, n_rules=2)
            x = rng.uniform(0.0, 1.0, size=2)
            h = 1e-4
            base_vector = parameter_vector(model)
            premise_count = 2 * 2 * 3
            strengths = []
            for j, rule in enumerate(model.rules):
                w = np.prod([bell_membership(x[d], p) for d, p in enumerate(rule.premises)])
                strengths.append(w)
            wbar = np.array(strengths) / sum(strengths)
            for j in range(2):
                for d in range(3):  # slopes then bias
                    index = premise_count + j * 3 + d
                    analytic = wbar[j] * (x[d] if d < 2 else 1.0)
                    bumped_up = base_vector.copy()
                    bumped_dn = base_vector.copy()
                    bumped_up[index] += h
                    bumped_dn[index] -= h
                    up = _model_with_vector(model, bumped_up)
                    dn = _model_with_vector(model, bumped_dn)
                    numeric = (forward(up, x) - forward(dn, x)) / (2 * h)
                    assert numeric == pytest.approx(analytic, rel=1e-6, abs=1e-9)


def _model_with_vector(model, vector):
    dim = model.input_dim
    specs, consequents = [], []
    idx = 0
    for _ in model.rules:
        premises = []
        for _ in range(dim):
            premises.append((vector[idx], vector[idx + 1], vector[idx + 2]))
            idx += 3
        specs.append(premises)
    for _ in model.rules:
        consequents.append(vector[idx : idx + dim + 1])
        idx += dim + 1
    return make_model(specs, consequents, spans=model.input_normalization)


class TestSerialization:
    def test_round_trip(self, rng, tmp_path):
        model = random_model(rng, dim=2, n_rules=3)
        clone = model_from_dict(model_to_dict(model))
        assert parameter_vector(clone) == pytest.approx(parameter_vector(model))
        path = tmp_path / "model.json"
        save_model(model, path)
        loaded = load_model(path)
        x = rng.uniform(0, 1, size=2)
        assert forward(loaded, x) == pytest.approx(forward(model, x))
