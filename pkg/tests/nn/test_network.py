"""Tests for nn/network.py"""

import numpy as np
import pytest

from rimc_calibration.exceptions import ParameterError, ShapeError
from rimc_calibration.nn import AvgPool, BatchNormFrozen, Conv2d, Dense, Flatten, MaxPool, Network, ReLU, forward
from rimc_calibration.nn.network import backward, forward_with_contexts, predict, softmax_cross_entropy


def _cnn(gen):
    conv = Conv2d(c_in=1, c_out=2, kh=3, kw=3, stride=1, pad=1)
    conv.weight = gen.normal(size=(conv.d, conv.k))
    conv.bias = gen.normal(size=2)
    bn = BatchNormFrozen(
        scale=np.array([1.5, 0.5]), shift=np.array([0.1, -0.2]), mean=np.array([0.3, 0.0]), var=np.array([2.0, 0.5])
    )
    head = Dense(weight=gen.normal(size=(8, 3)), bias=None, in_features=8, out_features=3)
    return Network(
        layers=[conv, bn, ReLU(), MaxPool(2, 2), Flatten(), head], input_shape=(1, 4, 4), num_classes=3
    )


class TestForward:
    """Test cases for forward"""

    def test_identity_dense(self):
        """Test a single identity Dense returns its input"""
        net = Network(layers=[Dense(weight=np.eye(4), in_features=4, out_features=4)], input_shape=(4,), num_classes=4)
        x = np.random.default_rng(0).normal(size=(5, 4))
        assert np.array_equal(forward(net, x).logits, x)

    def test_relu_zeroes_negatives(self):
        """Test ReLU output is never negative"""
        net = Network(layers=[ReLU()], input_shape=(3,), num_classes=3)
        out = forward(net, np.array([[-1.0, 0.0, 2.0]])).logits
        assert out.tolist() == [[0.0, 0.0, 2.0]]

    def test_capture_oracle(self, small_mlp):
        """Test captures hold each weighted layer's input and pre-bias feature"""
        x = np.random.default_rng(1).normal(size=(6, 5))
        result = forward(small_mlp, x, capture=True)
        first, second = result.captures
        w0, b0 = small_mlp.layers[0].weight, small_mlp.layers[0].bias
        assert first.layer_index == 0 and second.layer_index == 2
        assert np.array_equal(first.inputs, x)
        assert np.allclose(first.features, x @ w0)
        assert np.allclose(second.inputs, np.maximum(x @ w0 + b0, 0))
        assert np.allclose(result.logits, second.features + small_mlp.layers[2].bias)

    def test_no_capture_by_default(self, small_mlp):
        """Test captures are None unless requested"""
        assert forward(small_mlp, np.zeros((1, 5))).captures is None

    def test_conv_capture_rows(self):
        """Test conv captures unroll one row per output position"""
        net = _cnn(np.random.default_rng(2))
        result = forward(net, np.random.default_rng(3).normal(size=(2, 1, 4, 4)), capture=True)
        conv_capture = result.captures[0]
        assert conv_capture.rows_per_sample == 16
        assert conv_capture.inputs.shape == (32, 9)
        assert result.logits.shape == (2, 3)

    def test_shape_error_names_layer(self, small_mlp):
        """Test a width mismatch names the failing layer index"""
        with pytest.raises(ShapeError, match="layer 0"):
            forward(small_mlp, np.zeros((2, 7)))

    def test_batchnorm(self):
        """Test frozen BN applies scale·(x-mean)/sqrt(var+eps) + shift"""
        bn = BatchNormFrozen(scale=np.array([2.0]), shift=np.array([1.0]), mean=np.array([3.0]), var=np.array([4.0]), eps=0.0)
        out = forward(Network(layers=[bn], input_shape=(1,), num_classes=1), np.array([[5.0]])).logits
        assert out.tolist() == [[3.0]]

    def test_avgpool(self):
        """Test average pooling over 2x2 windows"""
        x = np.arange(16, dtype=float).reshape(1, 1, 4, 4)
        out = forward(Network(layers=[AvgPool(2, 2)], input_shape=(1, 4, 4), num_classes=1), x).logits
        assert out[0, 0].tolist() == [[2.5, 4.5], [10.5, 12.5]]


class TestBackward:
    """Test cases for backward"""

    def _loss(self, net, x, labels):
        return softmax_cross_entropy(forward(net, x).logits, labels)[0]

    @pytest.mark.parametrize("builder", ["mlp", "cnn"])
    def test_weight_gradient_finite_difference(self, builder, small_mlp):
        """Test weight gradients against central differences"""
        gen = np.random.default_rng(4)
        if builder == "mlp":
            net, x = small_mlp, gen.normal(size=(4, 5))
        else:
            net, x = _cnn(gen), gen.normal(size=(3, 1, 4, 4))
        labels = np.array([0, 1, 2, 1])[: x.shape[0]]
        logits, contexts = forward_with_contexts(net, x)
        _, grad = softmax_cross_entropy(logits, labels)
        grads = backward(net, contexts, grad)

        for index, layer in net.weighted_layers():
            w = layer.weight
            for i, j in [(0, 0), (w.shape[0] - 1, w.shape[1] - 1), (1, 0)]:
                original = w[i, j]
                w[i, j] = original + 1e-6
                plus = self._loss(net, x, labels)
                w[i, j] = original - 1e-6
                minus = self._loss(net, x, labels)
                w[i, j] = original
                numeric = (plus - minus) / 2e-6
                assert grads[index]["weight"][i, j] == pytest.approx(numeric, rel=1e-4, abs=1e-8)

    def test_adapter_rejected(self, small_mlp):
        """Test backward refuses layers with adapters"""
        from rimc_calibration.adapters import init_lora

        small_mlp.layers[2].adapter = init_lora(small_mlp.layers[2].weight, 1, 0)
        logits, contexts = forward_with_contexts(small_mlp, np.ones((1, 5)))
        with pytest.raises(ParameterError):
            backward(small_mlp, contexts, np.ones_like(logits))


class TestLossAndPredict:
    """Test cases for softmax_cross_entropy and predict"""

    def test_uniform_logits(self):
        """Test equal logits give log(classes)"""
        loss, grad = softmax_cross_entropy(np.zeros((2, 4)), np.array([0, 3]))
        assert loss == pytest.approx(np.log(4))
        assert np.allclose(grad.sum(axis=1), 0)

    def test_ties_pick_lowest_class(self):
        """Test argmax ties resolve to the lowest index"""
        assert predict(np.array([[1.0, 3.0, 3.0], [0.0, 0.0, 0.0]])).tolist() == [1, 0]
