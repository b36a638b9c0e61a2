// Copyright 2026 The hyperclr Authors
// SPDX-License-Identifier: Apache-2.0
#include "hyperclr/model.hpp"

#include "hyperclr/errors.hpp"
#include "hyperclr/rng.hpp"

#include <fmt/format.h>

#include <cmath>

namespace hyperclr {

namespace {

bool is_linear_layer(const NetworkParams& p, std::size_t i) {
    return i + 1 == p.layer_count() || (i + 1 == p.extractor.size() && !p.relu_features);
}

}  // namespace

NetworkParams NetworkParams::zeros_like() const {
    NetworkParams z;
    z.relu_features = relu_features;
    auto zero = [](const LayerParams& l) {
        return LayerParams{Matrix::Zero(l.weights.rows(), l.weights.cols()), Vector::Zero(l.biases.size())};
    };
    for (const auto& l : extractor) z.extractor.push_back(zero(l));
    for (const auto& l : head) z.head.push_back(zero(l));
    return z;
}

std::size_t NetworkParams::parameter_count() const {
    std::size_t n = 0;
    for (std::size_t i = 0; i < layer_count(); ++i) {
        n += static_cast<std::size_t>(layer(i).weights.size() + layer(i).biases.size());
    }
    return n;
}

void NetworkParams::validate() const {
    if (extractor.empty() || head.empty()) {
        throw StructuralError("network needs at least one extractor layer and one head layer");
    }
    for (std::size_t i = 0; i < layer_count(); ++i) {
        const LayerParams& l = layer(i);
        if (l.biases.size() != l.weights.rows()) {
            throw StructuralError(fmt::format("layer {} has {} biases for {} outputs", i, l.biases.size(),
                                              l.weights.rows()));
        }
        if (i > 0 && l.inputs() != layer(i - 1).outputs()) {
            throw StructuralError(fmt::format("layer {} expects {} inputs but layer {} emits {}", i, l.inputs(),
                                              i - 1, layer(i - 1).outputs()));
        }
        if (!l.weights.allFinite() || !l.biases.allFinite()) {
            throw StructuralError(fmt::format("layer {} has non-finite parameters", i));
        }
    }
}

NetworkParams init_params(std::size_t bands, std::size_t outputs, std::uint64_t seed, const Architecture& arch) {
    if (bands < 1 || outputs < 1) {
        throw StructuralError("network needs at least one input band and one output");
    }
    if (arch.extractor.empty()) {
        throw StructuralError("architecture needs at least one extractor layer");
    }
    Rng rng(derive_seed(seed, Stream::Init));
    auto make = [&](std::size_t in, std::size_t out) {
        const double limit = std::sqrt(6.0 / static_cast<double>(in + out));
        LayerParams l{Matrix(static_cast<Eigen::Index>(out), static_cast<Eigen::Index>(in)),
                      Vector::Zero(static_cast<Eigen::Index>(out))};
        for (Eigen::Index r = 0; r < l.weights.rows(); ++r) {
            for (Eigen::Index c = 0; c < l.weights.cols(); ++c) {
                l.weights(r, c) = rng.uniform(-limit, limit);
            }
        }
        return l;
    };
    NetworkParams p;
    p.relu_features = arch.relu_features;
    std::size_t in = bands;
    for (std::size_t w : arch.extractor) {
        p.extractor.push_back(make(in, w));
        in = w;
    }
    for (std::size_t w : arch.head_hidden) {
        p.head.push_back(make(in, w));
        in = w;
    }
    p.head.push_back(make(in, outputs));
    return p;
}

ForwardResult forward(const NetworkParams& params, const Matrix& batch) {
    if (static_cast<std::size_t>(batch.cols()) != params.inputs()) {
        throw StructuralError(
            fmt::format("batch has {} bands but the network expects {}", batch.cols(), params.inputs()));
    }
    ForwardResult out;
    ForwardTrace& t = out.trace;
    t.input = batch;
    const std::size_t n_layers = params.layer_count();
    t.pre_activations.reserve(n_layers);
    t.activations.reserve(n_layers);
    for (std::size_t i = 0; i < n_layers; ++i) {
        const LayerParams& l = params.layer(i);
        const Matrix& prev = i == 0 ? t.input : t.activations.back();
        Matrix z = prev * l.weights.transpose();
        z.rowwise() += l.biases.transpose();
        Matrix a = is_linear_layer(params, i) ? z : Matrix(z.cwiseMax(0.0));
        t.pre_activations.push_back(std::move(z));
        t.activations.push_back(std::move(a));
    }
    out.features = t.activations[params.extractor.size() - 1];
    out.predictions = t.activations.back();
    return out;
}

NetworkParams backward(const NetworkParams& params, const ForwardTrace& trace, const Matrix& grad_features,
                       const Matrix& grad_predictions) {
    const std::size_t n_layers = params.layer_count();
    if (trace.activations.size() != n_layers || trace.pre_activations.size() != n_layers) {
        throw StructuralError("forward trace does not match the network");
    }
    const Eigen::Index n = trace.input.rows();
    const Eigen::Index feat_layer = static_cast<Eigen::Index>(params.extractor.size()) - 1;
    if (grad_features.rows() != n || static_cast<std::size_t>(grad_features.cols()) != params.feature_dim()) {
        throw StructuralError(fmt::format("feature gradient is {}x{}, expected {}x{}", grad_features.rows(),
                                          grad_features.cols(), n, params.feature_dim()));
    }
    if (grad_predictions.rows() != n || static_cast<std::size_t>(grad_predictions.cols()) != params.outputs()) {
        throw StructuralError(fmt::format("prediction gradient is {}x{}, expected {}x{}", grad_predictions.rows(),
                                          grad_predictions.cols(), n, params.outputs()));
    }

    NetworkParams grads = params.zeros_like();
    // Gradient w.r.t. the current layer's activation output.
    Matrix upstream = grad_predictions;
    for (std::size_t k = n_layers; k-- > 0;) {
        const LayerParams& l = params.layer(k);
        if (static_cast<Eigen::Index>(k) == feat_layer) {
            upstream += grad_features;
        }
        Matrix delta;
        if (is_linear_layer(params, k)) {
            delta = std::move(upstream);
        } else {
            delta = upstream.cwiseProduct((trace.pre_activations[k].array() > 0.0).cast<double>().matrix());
        }
        const Matrix& prev = k == 0 ? trace.input : trace.activations[k - 1];
        LayerParams& g = grads.layer(k);
        g.weights.noalias() = delta.transpose() * prev;
        g.biases = delta.colwise().sum().transpose();
        if (k > 0) {
            upstream.noalias() = delta * l.weights;
        }
    }
    return grads;
}

AdamState AdamState::for_params(const NetworkParams& params) {
    AdamState s;
    s.m = params.zeros_like();
    s.v = params.zeros_like();
    return s;
}

void adam_step(NetworkParams& params, const NetworkParams& grads, AdamState& state, double lr) {
    const std::size_t n_layers = params.layer_count();
    if (grads.layer_count() != n_layers || state.m.layer_count() != n_layers) {
        throw StructuralError("optimizer state does not match the network");
    }
    for (std::size_t i = 0; i < n_layers; ++i) {
        const LayerParams& g = grads.layer(i);
        const LayerParams& p = params.layer(i);
        if (g.weights.rows() != p.weights.rows() || g.weights.cols() != p.weights.cols() ||
            g.biases.size() != p.biases.size()) {
            throw StructuralError(fmt::format("gradient for layer {} has the wrong shape", i));
        }
        if (!g.weights.allFinite() || !g.biases.allFinite()) {
            throw TrainingError(fmt::format("non-finite gradient in layer {}", i));
        }
    }
    ++state.step;
    const double t = static_cast<double>(state.step);
    const double c1 = 1.0 - std::pow(state.beta1, t);
    const double c2 = 1.0 - std::pow(state.beta2, t);
    auto update = [&](auto& theta, const auto& g, auto& m, auto& v) {
        m = state.beta1 * m + (1.0 - state.beta1) * g;
        v = state.beta2 * v + (1.0 - state.beta2) * g.cwiseProduct(g);
        theta.array() -= lr * (m.array() / c1) / ((v.array() / c2).sqrt() + state.epsilon);
    };
    for (std::size_t i = 0; i < n_layers; ++i) {
        LayerParams& p = params.layer(i);
        const LayerParams& g = grads.layer(i);
        update(p.weights, g.weights, state.m.layer(i).weights, state.v.layer(i).weights);
        update(p.biases, g.biases, state.m.layer(i).biases, state.v.layer(i).biases);
    }
}

}  // namespace hyperclr
