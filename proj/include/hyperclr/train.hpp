// Copyright 2026 The hyperclr Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "hyperclr/augment.hpp"
#include "hyperclr/loss.hpp"
#include "hyperclr/metrics.hpp"
#include "hyperclr/model.hpp"

#include <cstdint>
#include <vector>

namespace hyperclr {

struct TrainConfig {
    std::size_t epochs = 100;
    std::size_t batch_size = 32;
    double lr = 1e-3;
    LossConfig loss;
    /// Applied to build the second view of every minibatch. Ignored when
    /// loss.alpha == 0. The chain's own seed is replaced per minibatch.
    AugmentationChain chain;
    std::uint64_t seed = 0;
    double train_fraction = 0.8;
    std::size_t histogram_bins = 50;
    Architecture architecture;

    void validate() const;
};

struct EpochLoss {
    double regression = 0.0;
    double contrastive = 0.0;
};

struct MetricsReport {
    double r2 = 0.0;
    double mae = 0.0;
    double mean_error = 0.0;
    std::vector<EpochLoss> per_epoch_losses;
    Histogram error_histogram;
    std::size_t n_samples = 0;
    std::size_t skipped_anchors = 0;
};

struct DataSplit {
    std::vector<std::size_t> train;
    std::vector<std::size_t> test;
};

/// Seeded shuffle of [0, n) cut at round(n * train_fraction).
DataSplit split_dataset(std::size_t n, double train_fraction, std::uint64_t seed);

/// Minibatches for one epoch: a seeded shuffle of `train` cut into
/// `batch_size` chunks. A trailing partial chunk is dropped.
std::vector<std::vector<std::size_t>> epoch_batches(std::span<const std::size_t> train, std::size_t batch_size,
                                                    std::uint64_t seed, std::size_t epoch);

/// Seed of the augmentation chain for one minibatch.
std::uint64_t minibatch_augment_seed(std::uint64_t seed, std::size_t epoch, std::size_t batch) noexcept;

Matrix predict(const NetworkParams& params, const Matrix& spectra);

/// Regression metrics of `params` on a labelled batch.
MetricsReport evaluate(const NetworkParams& params, const SpectralBatch& data, std::size_t histogram_bins = 50);

struct TrainResult {
    NetworkParams params;
    MetricsReport report;  // on the held-out split
    DataSplit split;
};

/// Joint training: per minibatch, one augmented view per sample, a shared
/// forward pass over both views, L_R + alpha L_C, backward and an Adam step.
/// Single-threaded and bit-reproducible for a fixed config.
TrainResult train(const SpectralBatch& dataset, const TrainConfig& config);

}  // namespace hyperclr
