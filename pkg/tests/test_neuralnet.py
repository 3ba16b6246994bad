"""Network init, forward oracle, gradient check, training behaviour."""

from __future__ import annotations

import numpy as np
import pytest

from marketpulse.dataset import MinMaxScaler
from marketpulse.errors import DimensionError, DivergenceError, ModelFormatError
from marketpulse.neuralnet import (
    Mlp,
    NetworkSpec,
    TrainConfig,
    forward,
    gradient,
    init_network,
    load_model,
    mse,
    predict,
    save_model,
    train,
)

# Every architecture exercised by the standard experiment suite.
SUITE_SHAPES = [(2, 1), (3, 1), (4, 2, 1), (5, 3, 1), (6, 3, 1), (7, 3, 1), (4, 3, 1)]


def finite_difference_gradients(mlp, X, targets, h=1e-5):
    """Central-difference MSE gradients; independent of backprop."""
    weight_grads = []
    bias_grads = []
    for arrays, grads in ((mlp.weights, weight_grads), (mlp.biases, bias_grads)):
        for array in arrays:
            grad = np.zeros_like(array)
            it = np.nditer(array, flags=["multi_index"])
            for _ in it:
                idx = it.multi_index
                original = array[idx]
                array[idx] = original + h
                up = mse(mlp, X, targets)
                array[idx] = original - h
                down = mse(mlp, X, targets)
                array[idx] = original
                grad[idx] = (up - down) / (2 * h)
            grads.append(grad)
    return weight_grads, bias_grads


def relative_errors(analytic, numeric, floor=1e-5):
    """Guarded elementwise relative error; the floor absorbs the
    finite-difference noise on near-zero gradient entries."""
    out = []
    for a, n in zip(analytic, numeric):
        denom = np.maximum(np.maximum(np.abs(a), np.abs(n)), floor)
        out.append(np.abs(a - n) / denom)
    return out


def random_problem(shape, seed, batch=8, activation="logistic"):
    rng = np.random.default_rng(seed + 1000)
    mlp = init_network(NetworkSpec(layer_sizes=shape, hidden_activation=activation, seed=seed))
    X = rng.normal(size=(batch, shape[0]))
    targets = rng.normal(size=batch)
    return mlp, X, targets


class TestInit:
    def test_shapes_for_5_3_1(self):
        mlp = init_network(NetworkSpec((5, 3, 1)))
        assert [w.shape for w in mlp.weights] == [(3, 5), (1, 3)]
        assert [b.shape for b in mlp.biases] == [(3,), (1,)]
        assert all(not b.any() for b in mlp.biases)

    def test_same_seed_identical_bytes(self):
        a = init_network(NetworkSpec((4, 2, 1), seed=11))
        b = init_network(NetworkSpec((4, 2, 1), seed=11))
        assert all(x.tobytes() == y.tobytes() for x, y in zip(a.weights, b.weights))

    def test_different_seeds_differ(self):
        a = init_network(NetworkSpec((4, 2, 1), seed=1))
        b = init_network(NetworkSpec((4, 2, 1), seed=2))
        assert any((x != y).any() for x, y in zip(a.weights, b.weights))

    def test_fan_in_bound(self):
        mlp = init_network(NetworkSpec((9, 3, 1), seed=5))
        assert np.abs(mlp.weights[0]).max() <= 1 / 3

    def test_invalid_specs(self):
        with pytest.raises(ValueError):
            NetworkSpec((4,))
        with pytest.raises(ValueError):
            NetworkSpec((4, 2))  # output must be 1
        with pytest.raises(ValueError):
            NetworkSpec((4, 1), hidden_activation="relu")


class TestForward:
    def test_zero_network_outputs_zero(self):
        mlp = Mlp(weights=[np.zeros((2, 3)), np.zeros((1, 2))],
                  biases=[np.zeros(2), np.zeros(1)])
        y, _ = forward(mlp, np.array([0.3, -1.2, 5.0]))
        assert y == 0.0

    def test_hand_computed_2_2_1_oracle(self):
        # Oracle computed by hand with plain math (see derivation):
        # z1 = (0.55, 0.05), h = logistic(z1), y = 0.4*h0 - 0.3*h1 + 0.2
        mlp = Mlp(
            weights=[np.array([[0.1, 0.2], [0.3, -0.1]]), np.array([[0.4, -0.3]])],
            biases=[np.array([0.05, -0.05]), np.array([0.2])],
        )
        y, cache = forward(mlp, np.array([1.0, 2.0]))
        assert y == pytest.approx(0.2999050174590573, abs=1e-12)
        assert cache[1][0, 0] == pytest.approx(0.6341355910108007, abs=1e-12)
        assert cache[1][0, 1] == pytest.approx(0.5124973964842103, abs=1e-12)

    def test_hand_computed_tanh_variant(self):
        mlp = Mlp(
            weights=[np.array([[0.1, 0.2], [0.3, -0.1]]), np.array([[0.4, -0.3]])],
            biases=[np.array([0.05, -0.05]), np.array([0.2])],
            hidden_activation="tanh",
        )
        y, _ = forward(mlp, np.array([1.0, 2.0]))
        assert y == pytest.approx(0.38522057198873016, abs=1e-12)

    def test_wrong_length_rejected(self):
        mlp = init_network(NetworkSpec((3, 1)))
        with pytest.raises(DimensionError):
            forward(mlp, np.array([1.0, 2.0]))


class TestGradient:
    def test_zero_gradient_when_predictions_match_targets(self):
        mlp = Mlp(weights=[np.zeros((1, 2))], biases=[np.array([0.7])])
        X = np.array([[1.0, 2.0], [3.0, -1.0]])
        targets = np.array([0.7, 0.7])
        weight_grads, bias_grads = gradient(mlp, X, targets)
        assert not weight_grads[0].any() and not bias_grads[0].any()

    def test_matches_finite_differences_on_4_3_1(self):
        mlp, X, targets = random_problem((4, 3, 1), seed=3)
        analytic = gradient(mlp, X, targets)
        numeric = finite_difference_gradients(mlp, X, targets)
        for side in (0, 1):
            for err in relative_errors(analytic[side], numeric[side]):
                assert err.max() < 1e-6

    def test_duplicated_batch_same_gradient(self):
        mlp, X, targets = random_problem((3, 1), seed=9)
        once = gradient(mlp, X, targets)
        twice = gradient(mlp, np.vstack([X, X]), np.concatenate([targets, targets]))
        for side in (0, 1):
            for a, b in zip(once[side], twice[side]):
                assert np.allclose(a, b, rtol=1e-12, atol=1e-15)

    def test_permutation_invariance(self):
        mlp, X, targets = random_problem((5, 3, 1), seed=21, batch=16)
        perm = np.random.default_rng(0).permutation(len(X))
        original = gradient(mlp, X, targets)
        permuted = gradient(mlp, X[perm], targets[perm])
        for side in (0, 1):
            for a, b in zip(original[side], permuted[side]):
                assert np.allclose(a, b, rtol=1e-12, atol=1e-14)

    def test_trained_model_permutation_invariance(self):
        rng = np.random.default_rng(8)
        X = rng.uniform(0, 1, size=(64, 4))
        targets = 0.2 + 0.5 * X[:, 0] - 0.3 * X[:, 1] + 0.15 * X[:, 2]
        perm = rng.permutation(64)
        config = TrainConfig(max_epochs=500, target_mse=0.0)
        a, _ = train(init_network(NetworkSpec((4, 3, 1), seed=1)), X, targets, config)
        b, _ = train(init_network(NetworkSpec((4, 3, 1), seed=1)), X[perm], targets[perm], config)
        for wa, wb in zip(a.weights, b.weights):
            assert np.allclose(wa, wb, rtol=0, atol=1e-12)
        for ba, bb in zip(a.biases, b.biases):
            assert np.allclose(ba, bb, rtol=0, atol=1e-12)

    def test_empty_batch_rejected(self):
        mlp = init_network(NetworkSpec((2, 1)))
        with pytest.raises(ValueError):
            gradient(mlp, np.empty((0, 2)), np.empty(0))


class TestTrain:
    def linear_fixture(self, seed=0, n=64):
        rng = np.random.default_rng(seed)
        X = rng.uniform(0, 1, size=(n, 4))
        targets = 0.2 + 0.5 * X[:, 0] - 0.3 * X[:, 1] + 0.15 * X[:, 2] + 0.1 * X[:, 3]
        return X, targets

    def test_converges_on_linear_targets(self):
        X, targets = self.linear_fixture()
        mlp = init_network(NetworkSpec((4, 3, 1), seed=1))
        trained, history = train(mlp, X, targets, TrainConfig(max_epochs=2000, target_mse=0.0))
        assert history[-1] < 1e-3
        assert history[-1] <= history[0]

    def test_single_epoch_history(self):
        X, targets = self.linear_fixture()
        mlp = init_network(NetworkSpec((4, 1), seed=1))
        _, history = train(mlp, X, targets, TrainConfig(max_epochs=1))
        assert len(history) == 1

    def test_huge_learning_rate_diverges(self):
        X, targets = self.linear_fixture()
        mlp = init_network(NetworkSpec((4, 3, 1), seed=1))
        with pytest.raises(DivergenceError, match="epoch"):
            train(mlp, X, targets, TrainConfig(max_epochs=500, learning_rate=1e3))

    def test_target_mse_stops_early(self):
        X, targets = self.linear_fixture()
        mlp = init_network(NetworkSpec((4, 1), seed=1))
        _, history = train(mlp, X, targets, TrainConfig(max_epochs=5000, target_mse=1e-3))
        assert len(history) < 5000
        assert history[-1] <= 1e-3

    def test_deterministic_parameters(self):
        X, targets = self.linear_fixture()
        config = TrainConfig(max_epochs=200)
        a, _ = train(init_network(NetworkSpec((4, 2, 1), seed=7)), X, targets, config)
        b, _ = train(init_network(NetworkSpec((4, 2, 1), seed=7)), X, targets, config)
        assert all(x.tobytes() == y.tobytes() for x, y in zip(a.weights, b.weights))
        assert all(x.tobytes() == y.tobytes() for x, y in zip(a.biases, b.biases))

    def test_input_model_not_mutated(self):
        X, targets = self.linear_fixture()
        mlp = init_network(NetworkSpec((4, 1), seed=3))
        before = [w.copy() for w in mlp.weights]
        train(mlp, X, targets, TrainConfig(max_epochs=50))
        assert all((w == b).all() for w, b in zip(mlp.weights, before))


class TestPredict:
    def test_zero_network_identity_scaler(self):
        mlp = Mlp(weights=[np.zeros((1, 2))], biases=[np.zeros(1)])
        scaler = MinMaxScaler(
            feature_min=np.zeros(2), feature_max=np.ones(2), target_min=0.0, target_max=1.0
        )
        prices = predict(mlp, scaler, np.array([[0.1, 0.9], [0.5, 0.5]]))
        assert (prices == 0.0).all()

    def test_converged_model_reproduces_prices(self):
        rng = np.random.default_rng(5)
        X = rng.uniform(0, 1, size=(80, 3))
        scaled_targets = 0.3 + 0.4 * X[:, 0] + 0.2 * X[:, 1] - 0.1 * X[:, 2]
        mlp = init_network(NetworkSpec((3, 3, 1), seed=2))
        trained, _ = train(mlp, X, scaled_targets, TrainConfig(max_epochs=3000, target_mse=0.0))
        scaler = MinMaxScaler(
            feature_min=np.zeros(3), feature_max=np.ones(3), target_min=40.0, target_max=60.0
        )
        prices = predict(trained, scaler, X)
        actual = scaler.inverse_targets(scaled_targets)
        assert np.abs(prices - actual).max() / actual.mean() < 0.01

    def test_wrong_width_rejected(self):
        mlp = init_network(NetworkSpec((3, 1)))
        scaler = MinMaxScaler(np.zeros(3), np.ones(3), 0.0, 1.0)
        with pytest.raises(DimensionError):
            predict(mlp, scaler, np.ones((4, 2)))


class TestModelFile:
    @pytest.mark.parametrize("shape", SUITE_SHAPES)
    def test_save_load_exact(self, shape):
        mlp = init_network(NetworkSpec(shape, seed=13))
        text = save_model(mlp)
        loaded = load_model(text)
        assert loaded.hidden_activation == mlp.hidden_activation
        assert all(
            (a == b).all() and a.tobytes() == b.tobytes()
            for a, b in zip(loaded.weights, mlp.weights)
        )
        assert all((a == b).all() for a, b in zip(loaded.biases, mlp.biases))

    def test_bad_header_rejected(self):
        with pytest.raises(ModelFormatError):
            load_model("not a model\n")

    def test_truncated_file_rejected(self):
        text = save_model(init_network(NetworkSpec((3, 2, 1))))
        with pytest.raises(ModelFormatError):
            load_model("\n".join(text.splitlines()[:4]))
