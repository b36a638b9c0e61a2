// Copyright 2026 The hyperclr Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "hyperclr/spectra.hpp"

#include <cstdint>
#include <vector>

namespace hyperclr {

/// Affine layer y = x W^T + b.
struct LayerParams {
    Matrix weights;  // out x in
    Vector biases;   // out

    std::size_t inputs() const noexcept { return static_cast<std::size_t>(weights.cols()); }
    std::size_t outputs() const noexcept { return static_cast<std::size_t>(weights.rows()); }
};

/// Hidden widths. The extractor's last width is the feature dimension; the
/// head always ends with a linear layer to the output count.
struct Architecture {
    std::vector<std::size_t> extractor{128, 64, 32};
    std::vector<std::size_t> head_hidden{16};
    /// ReLU on the feature layer. Off by default: rectified features can be
    /// exactly zero, where cosine similarity is undefined.
    bool relu_features = false;
};

/// Feature extractor followed by regression head. Hidden layers apply ReLU;
/// the head's last layer is linear, and the feature layer is linear unless
/// `relu_features` is set.
struct NetworkParams {
    std::vector<LayerParams> extractor;
    std::vector<LayerParams> head;
    bool relu_features = false;

    std::size_t layer_count() const noexcept { return extractor.size() + head.size(); }
    LayerParams& layer(std::size_t i) { return i < extractor.size() ? extractor[i] : head[i - extractor.size()]; }
    const LayerParams& layer(std::size_t i) const {
        return i < extractor.size() ? extractor[i] : head[i - extractor.size()];
    }
    std::size_t inputs() const { return extractor.front().inputs(); }
    std::size_t feature_dim() const { return extractor.back().outputs(); }
    std::size_t outputs() const { return head.back().outputs(); }

    /// Same shapes, all zeros.
    NetworkParams zeros_like() const;
    std::size_t parameter_count() const;

    /// Throws StructuralError if chained shapes do not conform or entries are non-finite.
    void validate() const;
};

/// Glorot-uniform weights, zero biases.
NetworkParams init_params(std::size_t bands, std::size_t outputs, std::uint64_t seed,
                          const Architecture& arch = Architecture{});

struct ForwardTrace {
    Matrix input;
    std::vector<Matrix> pre_activations;  // one per layer
    std::vector<Matrix> activations;      // one per layer (post-ReLU, or linear for the last)
};

struct ForwardResult {
    Matrix features;     // N x feature_dim
    Matrix predictions;  // N x outputs
    ForwardTrace trace;
};

ForwardResult forward(const NetworkParams& params, const Matrix& batch);

/// Reverse-mode gradient of a scalar loss whose partials with respect to the
/// features and the predictions are given. Both injections accumulate through
/// the extractor.
NetworkParams backward(const NetworkParams& params, const ForwardTrace& trace, const Matrix& grad_features,
                       const Matrix& grad_predictions);

struct AdamState {
    NetworkParams m;
    NetworkParams v;
    std::uint64_t step = 0;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;

    static AdamState for_params(const NetworkParams& params);
};

/// One bias-corrected Adam update in place. Throws TrainingError naming the
/// layer if any gradient entry is non-finite (params untouched in that case).
void adam_step(NetworkParams& params, const NetworkParams& grads, AdamState& state, double lr);

}  // namespace hyperclr
