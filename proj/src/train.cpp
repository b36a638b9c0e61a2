// Copyright 2026 The hyperclr Authors
// SPDX-License-Identifier: Apache-2.0
#include "hyperclr/train.hpp"

#include "hyperclr/errors.hpp"
#include "hyperclr/rng.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace hyperclr {

void TrainConfig::validate() const {
    if (epochs < 1) {
        throw ConfigError("epochs must be at least 1");
    }
    if (batch_size < 2) {
        throw ConfigError("batch_size must be at least 2");
    }
    if (!(lr > 0.0) || !std::isfinite(lr)) {
        throw ConfigError(fmt::format("lr = {} must be positive", lr));
    }
    if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
        throw ConfigError(fmt::format("train_fraction = {} must lie in (0, 1)", train_fraction));
    }
    if (histogram_bins < 1) {
        throw ConfigError("histogram_bins must be at least 1");
    }
    loss.validate();
    if (loss.alpha != 0.0) {
        chain.validate();
        for (const auto& s : chain.specs) {
            if (const auto* nn = std::get_if<NearestNeighborParams>(&s.params()); nn && nn->k >= batch_size) {
                throw ConfigError(
                    fmt::format("NearestNeighbor.k = {} must be below batch_size = {}", nn->k, batch_size));
            }
        }
    }
}

DataSplit split_dataset(std::size_t n, double train_fraction, std::uint64_t seed) {
    if (n < 2) {
        throw StructuralError("cannot split fewer than two samples");
    }
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    Rng rng(derive_seed(seed, Stream::Split));
    for (std::size_t i = n - 1; i > 0; --i) {
        std::swap(order[i], order[static_cast<std::size_t>(rng.index(i + 1))]);
    }
    auto n_train = static_cast<std::size_t>(std::llround(static_cast<double>(n) * train_fraction));
    n_train = std::clamp<std::size_t>(n_train, 1, n - 1);
    DataSplit s;
    s.train.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_train));
    s.test.assign(order.begin() + static_cast<std::ptrdiff_t>(n_train), order.end());
    return s;
}

std::vector<std::vector<std::size_t>> epoch_batches(std::span<const std::size_t> train, std::size_t batch_size,
                                                    std::uint64_t seed, std::size_t epoch) {
    std::vector<std::size_t> order(train.begin(), train.end());
    Rng rng(derive_seed(seed, Stream::Shuffle, {static_cast<std::uint64_t>(epoch)}));
    for (std::size_t i = order.size(); i-- > 1;) {
        std::swap(order[i], order[static_cast<std::size_t>(rng.index(i + 1))]);
    }
    std::vector<std::vector<std::size_t>> batches;
    for (std::size_t start = 0; start + batch_size <= order.size(); start += batch_size) {
        batches.emplace_back(order.begin() + static_cast<std::ptrdiff_t>(start),
                             order.begin() + static_cast<std::ptrdiff_t>(start + batch_size));
    }
    return batches;
}

std::uint64_t minibatch_augment_seed(std::uint64_t seed, std::size_t epoch, std::size_t batch) noexcept {
    return derive_seed(seed, Stream::Augment, {static_cast<std::uint64_t>(epoch), static_cast<std::uint64_t>(batch)});
}

Matrix predict(const NetworkParams& params, const Matrix& spectra) {
    return forward(params, spectra).predictions;
}

MetricsReport evaluate(const NetworkParams& params, const SpectralBatch& data, std::size_t histogram_bins) {
    if (!data.labels) {
        throw ConfigError("evaluation needs a labelled dataset");
    }
    const Matrix pred = predict(params, data.spectra);
    if (pred.cols() != data.labels->cols()) {
        throw StructuralError(fmt::format("network emits {} outputs but labels have {} columns", pred.cols(),
                                          data.labels->cols()));
    }
    MetricsReport r;
    r.r2 = r2_score(pred, *data.labels);
    r.mae = mae(pred, *data.labels);
    r.mean_error = mean_signed_error(pred, *data.labels);
    r.error_histogram = error_histogram(pred, *data.labels, histogram_bins);
    r.n_samples = data.size();
    return r;
}

TrainResult train(const SpectralBatch& dataset, const TrainConfig& config) {
    config.validate();
    dataset.validate();
    if (!dataset.labels) {
        throw ConfigError("training needs a labelled dataset");
    }
    if (dataset.size() < 2 * config.batch_size) {
        throw ConfigError(fmt::format("dataset of {} samples is smaller than two batches of {}", dataset.size(),
                                      config.batch_size));
    }

    TrainResult result;
    result.split = split_dataset(dataset.size(), config.train_fraction, config.seed);
    const SpectralBatch train_set = dataset.select(result.split.train);
    const SpectralBatch test_set = dataset.select(result.split.test);
    const LabelScaler scaler = LabelScaler::fit(*train_set.labels);
    const bool contrastive = config.loss.alpha != 0.0;

    NetworkParams params = init_params(dataset.bands(), dataset.outputs(), config.seed, config.architecture);
    AdamState adam = AdamState::for_params(params);
    std::vector<std::size_t> local(train_set.size());
    std::iota(local.begin(), local.end(), std::size_t{0});
    std::size_t skipped = 0;

    AugmentationChain chain = config.chain;
    for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
        const auto batches = epoch_batches(local, config.batch_size, config.seed, epoch);
        EpochLoss sum;
        for (std::size_t bi = 0; bi < batches.size(); ++bi) {
            const SpectralBatch batch = train_set.select(batches[bi]);
            const Matrix& labels = *batch.labels;
            Matrix input;
            if (contrastive) {
                chain.seed = minibatch_augment_seed(config.seed, epoch, bi);
                const SpectralBatch views = apply_chain(chain, batch);
                input.resize(2 * batch.spectra.rows(), batch.spectra.cols());
                input.topRows(batch.spectra.rows()) = batch.spectra;
                input.bottomRows(batch.spectra.rows()) = views.spectra;
            } else {
                input = batch.spectra;
            }
            ForwardResult fwd = forward(params, input);
            TotalLossResult loss;
            try {
                loss = total_loss(fwd.features, fwd.predictions, labels, scaler.apply(labels), config.loss);
            } catch (const NumericError& e) {
                throw TrainingError(fmt::format("epoch {} batch {}: {}", epoch, bi, e.what()));
            }
            if (!std::isfinite(loss.total)) {
                throw TrainingError(fmt::format("non-finite loss at epoch {} batch {}", epoch, bi));
            }
            skipped += loss.skipped_anchors;
            sum.regression += loss.regression;
            sum.contrastive += loss.contrastive;
            const NetworkParams grads = backward(params, fwd.trace, loss.grad_features, loss.grad_predictions);
            try {
                adam_step(params, grads, adam, config.lr);
            } catch (const TrainingError& e) {
                throw TrainingError(fmt::format("epoch {} batch {}: {}", epoch, bi, e.what()));
            }
        }
        const auto nb = static_cast<double>(batches.size());
        result.report.per_epoch_losses.push_back({sum.regression / nb, sum.contrastive / nb});
    }

    MetricsReport test_report = evaluate(params, test_set, config.histogram_bins);
    test_report.per_epoch_losses = std::move(result.report.per_epoch_losses);
    test_report.skipped_anchors = skipped;
    result.report = std::move(test_report);
    result.params = std::move(params);
    return result;
}

}  // namespace hyperclr
