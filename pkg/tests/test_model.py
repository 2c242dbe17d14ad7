import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fontsense.corpus import LabelDistribution, SplitCorpus
from fontsense.model import (
    AdamState,
    MlpModel,
    TrainConfig,
    adam_step,
    backward,
    backward_batch,
    forward,
    forward_batch,
    init_model,
    kl_div,
    load_model,
    mean_kl,
    model_id,
    predict,
    save_model,
    train,
)

from conftest import linst


def random_simplex(rng, n):
    raw = rng.uniform(0.05, 1.0, n)
    return raw / raw.sum()


def numeric_gradients(model, x, target, h=1e-5):
    """Central finite differences of the KL loss, parameter by parameter."""

    def loss():
        return kl_div(target, forward(model, x).probs)

    grads = {}
    for name, param in model.params().items():
        grad = np.zeros_like(param)
        it = np.nditer(param, flags=["multi_index"])
        while not it.finished:
            idx = it.multi_index
            original = param[idx]
            param[idx] = original + h
            up = loss()
            param[idx] = original - h
            down = loss()
            param[idx] = original
            grad[idx] = (up - down) / (2 * h)
            it.iternext()
        grads[name] = grad
    return grads


def max_relative_error(analytic, numeric):
    worst = 0.0
    for name in analytic:
        a, n = analytic[name], numeric[name]
        denom = np.maximum(np.maximum(np.abs(a), np.abs(n)), 1e-8)
        worst = max(worst, float(np.max(np.abs(a - n) / denom)))
    return worst


simplex_pairs = st.tuples(
    st.lists(st.floats(0.01, 1.0), min_size=6, max_size=6),
    st.lists(st.floats(0.01, 1.0), min_size=6, max_size=6),
).map(lambda ab: (np.array(ab[0]) / sum(ab[0]), np.array(ab[1]) / sum(ab[1])))


class TestInitModel:
    def test_deterministic_per_seed(self):
        a = init_model(8, 4, 10, seed=5)
        b = init_model(8, 4, 10, seed=5)
        for name in a.params():
            np.testing.assert_array_equal(a.params()[name], b.params()[name])

    def test_biases_zero(self):
        m = init_model(8, 4, 10, seed=1)
        assert m.b1.sum() == 0 and m.b2.sum() == 0

    def test_bad_dims(self):
        with pytest.raises(ValueError):
            init_model(8, 0, 10, seed=1)


class TestForward:
    def test_zero_model_uniform(self):
        m = MlpModel(np.zeros((4, 5)), np.zeros(4), np.zeros((10, 4)), np.zeros(10))
        np.testing.assert_allclose(forward(m, np.zeros(5)).probs, np.full(10, 0.1))

    def test_logit_shift_invariance(self):
        m = init_model(5, 4, 6, seed=2)
        x = np.random.default_rng(0).normal(size=5)
        base = forward(m, x).probs
        shifted = MlpModel(m.W1.copy(), m.b1.copy(), m.W2.copy(), m.b2 + 123.4)
        np.testing.assert_allclose(forward(shifted, x).probs, base, atol=1e-12)

    def test_extreme_logit_stable(self):
        m = MlpModel(np.eye(4), np.zeros(4), np.zeros((10, 4)), np.zeros(10))
        m2 = MlpModel(m.W1, m.b1, m.W2.copy(), np.array([1000.0] + [0.0] * 9))
        probs = forward(m2, np.zeros(4)).probs
        assert probs[0] >= 1 - 1e-9
        assert np.all(np.isfinite(probs))

    def test_dimension_mismatch(self):
        m = init_model(5, 4, 6, seed=2)
        with pytest.raises(ValueError):
            forward(m, np.zeros(7))

    @given(st.lists(st.floats(-1e6, 1e6), min_size=5, max_size=5))
    @settings(max_examples=60)
    def test_fuzz_valid_distribution(self, values):
        m = init_model(5, 8, 10, seed=3)
        probs = forward(m, np.array(values)).probs
        assert abs(probs.sum() - 1.0) <= 1e-9
        assert np.all(probs >= 0) and np.all(np.isfinite(probs))


class TestKlDiv:
    def test_identical_zero(self):
        t = np.array([0.3, 0.7])
        assert kl_div(t, t) == 0.0

    def test_point_mass_vs_even(self):
        assert kl_div(np.array([1.0, 0.0]), np.array([0.5, 0.5])) == pytest.approx(math.log(2), abs=1e-12)

    def test_clamped_zero_prediction(self):
        value = kl_div(np.array([0.5, 0.5]), np.array([1.0, 0.0]))
        assert value == pytest.approx(13.12236337740433, abs=1e-9)
        assert math.isfinite(value)

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            kl_div(np.array([1.0]), np.array([0.5, 0.5]))

    @given(simplex_pairs)
    def test_non_negative_and_finite(self, pair):
        t, p = pair
        value = kl_div(t, p)
        assert value >= 0 and math.isfinite(value)

    @given(simplex_pairs)
    def test_zero_iff_identical(self, pair):
        t, p = pair
        if np.max(np.abs(t - p)) > 1e-6:
            assert kl_div(t, p) > 1e-13
        assert kl_div(t, t) <= 1e-15


class TestBackward:
    def test_stationary_at_target(self):
        m = init_model(5, 4, 6, seed=7)
        x = np.random.default_rng(1).normal(size=5)
        p = forward(m, x).probs
        grads = backward(m, x, p)
        for g in grads.values():
            np.testing.assert_allclose(g, 0, atol=1e-12)

    def test_zero_input_kills_first_layer_weights(self):
        m = init_model(5, 4, 6, seed=8)
        rng = np.random.default_rng(2)
        grads = backward(m, np.zeros(5), random_simplex(rng, 6))
        np.testing.assert_array_equal(grads["W1"], np.zeros_like(m.W1))
        assert np.any(grads["b2"] != 0)

    def test_matches_finite_differences(self):
        rng = np.random.default_rng(42)
        m = init_model(5, 6, 4, seed=11)
        x = rng.normal(size=5)
        target = random_simplex(rng, 4)
        analytic = backward(m, x, target)
        numeric = numeric_gradients(m, x, target)
        assert max_relative_error(analytic, numeric) < 1e-4

    def test_batch_matches_single_mean(self):
        rng = np.random.default_rng(3)
        m = init_model(5, 6, 4, seed=12)
        X = rng.normal(size=(7, 5))
        T = np.stack([random_simplex(rng, 4) for _ in range(7)])
        batch = backward_batch(m, X, T)
        singles = [backward(m, X[i], T[i]) for i in range(7)]
        for name in batch:
            mean_grad = np.mean([s[name] for s in singles], axis=0)
            np.testing.assert_allclose(batch[name], mean_grad, atol=1e-12)


class TestAdam:
    def test_first_step_matches_closed_form(self):
        params = {"w": np.array([0.0])}
        state = AdamState.for_params(params, lr=1e-3)
        adam_step(params, {"w": np.array([1.0])}, state)
        expected = -1e-3 * 1.0 / (1.0 + 1e-8)
        assert params["w"][0] == pytest.approx(expected, abs=1e-15)
        assert state.t == 1

    def test_zero_gradient_no_move(self):
        params = {"w": np.array([0.25])}
        state = AdamState.for_params(params, lr=1e-3)
        adam_step(params, {"w": np.array([0.0])}, state)
        assert params["w"][0] == 0.25

    def test_deterministic_sequence(self):
        def run():
            params = {"w": np.arange(4, dtype=np.float64)}
            state = AdamState.for_params(params, lr=0.01)
            for step in range(5):
                adam_step(params, {"w": np.full(4, 0.5 + step)}, state)
            return params["w"]

        np.testing.assert_array_equal(run(), run())

    def test_shape_mismatch(self):
        params = {"w": np.zeros(3)}
        state = AdamState.for_params(params, lr=0.01)
        with pytest.raises(ValueError):
            adam_step(params, {"w": np.zeros(4)}, state)


def toy_split(n=10, dim=6, n_fonts=4, seed=0, dev=0):
    rng = np.random.default_rng(seed)
    instances = [
        linst(f"s{i}", " ".join(f"w{j}" for j in range(3)), random_simplex(rng, n_fonts))
        for i in range(n + dev)
    ]
    return SplitCorpus(tuple(instances[:n]), tuple(instances[n:]), (), split_seed=seed), rng


class ArrayFeaturizer:
    """Deterministic stand-in featurizer keyed by instance id."""

    name = "array"

    def __init__(self, vectors):
        self.vectors = vectors
        self.dim = len(next(iter(vectors.values())))

    def featurize_instance(self, instance):
        from fontsense.features import FeatureVector

        return FeatureVector(self.name, self.vectors[instance.instance_id])

    def featurize(self, text):
        raise NotImplementedError


def toy_featurizer(split, dim=6, seed=1):
    rng = np.random.default_rng(seed)
    vectors = {
        inst.instance_id: rng.normal(size=dim)
        for part in (split.train, split.dev, split.test)
        for inst in part
    }
    return ArrayFeaturizer(vectors)


class TestTrain:
    def test_single_epoch_bookkeeping(self):
        split, _ = toy_split(n=8)
        featurizer = toy_featurizer(split)
        config = TrainConfig(epochs=1, batch_size=8, seeds=(0,), hidden_dim=4)
        result = train(split, featurizer, config)
        assert len(result.runs) == 1
        assert len(result.runs[0].log) == 1

    def test_fixed_seed_reproducible(self):
        split, _ = toy_split(n=8, dev=2)
        featurizer = toy_featurizer(split)
        config = TrainConfig(epochs=5, batch_size=4, seeds=(3,), hidden_dim=4)
        a = train(split, featurizer, config).best
        b = train(split, featurizer, config).best
        for name in a.params():
            np.testing.assert_array_equal(a.params()[name], b.params()[name])

    def test_full_batch_step_descends(self):
        # one small-lr full-batch step from a non-stationary point lowers loss
        split, _ = toy_split(n=8)
        featurizer = toy_featurizer(split)
        X = np.stack([featurizer.featurize_instance(i).values for i in split.train])
        T = np.stack([i.target.probs for i in split.train])
        model = init_model(6, 4, 4, seed=0)
        params = model.params()
        state = AdamState.for_params(params, lr=1e-4)
        before = mean_kl(T, forward_batch(model, X)[1])
        adam_step(params, backward_batch(model, X, T), state)
        after = mean_kl(T, forward_batch(model, X)[1])
        assert after < before

    def test_empty_train_rejected(self):
        split = SplitCorpus((), (), (), split_seed=0)
        with pytest.raises(ValueError):
            train(split, toy_featurizer(toy_split(n=2)[0]), TrainConfig(seeds=(0,)))

    def test_best_on_dev_snapshot(self):
        split, _ = toy_split(n=12, dev=4, seed=5)
        featurizer = toy_featurizer(split)
        config = TrainConfig(epochs=12, batch_size=4, seeds=(1,), hidden_dim=8)
        run = train(split, featurizer, config).runs[0]
        best_logged = max(e.dev_f1 for e in run.log)
        assert run.best_dev_f1 == pytest.approx(best_logged)
        # earlier epoch wins ties
        first_best = next(e.epoch for e in run.log if e.dev_f1 == best_logged)
        assert run.best_epoch == first_best


class TestCheckpoint:
    def test_round_trip_exact(self, tmp_path):
        m = init_model(6, 4, 10, seed=9, featurizer_name="nrc")
        path = tmp_path / "model.json"
        save_model(m, path)
        back = load_model(path)
        for name in m.params():
            np.testing.assert_array_equal(m.params()[name], back.params()[name])
        assert back.featurizer_name == "nrc"
        assert model_id(m) == model_id(back)

    def test_unknown_version_rejected(self, tmp_path):
        m = init_model(3, 2, 4, seed=0)
        path = tmp_path / "model.json"
        save_model(m, path)
        payload = json.loads(path.read_text())
        payload["version"] = 99
        path.write_text(json.dumps(payload))
        with pytest.raises(ValueError, match="version"):
            load_model(path)


class TestPredict:
    def test_featurizer_mismatch(self, nrc):
        m = init_model(34, 4, 10, seed=0, featurizer_name="wordvec")
        with pytest.raises(ValueError, match="featurizer"):
            predict(m, "hello", nrc)

    def test_valid_distribution_and_purity(self, nrc):
        m = init_model(34, 4, 10, seed=0, featurizer_name="nrc")
        a = predict(m, "happy launch party", nrc)
        b = predict(m, "happy launch party", nrc)
        assert isinstance(a, LabelDistribution)
        np.testing.assert_array_equal(a.probs, b.probs)

    def test_zero_model_uniform(self, nrc):
        m = MlpModel(np.zeros((4, 34)), np.zeros(4), np.zeros((10, 4)), np.zeros(10), "nrc")
        np.testing.assert_allclose(predict(m, "anything", nrc).probs, np.full(10, 0.1))
