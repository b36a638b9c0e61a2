// Copyright 2026 The hyperclr Authors
// SPDX-License-Identifier: Apache-2.0
#include "hyperclr/metrics.hpp"

#include "hyperclr/errors.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace hyperclr {

namespace {

void check_shapes(const Matrix& predictions, const Matrix& labels) {
    if (predictions.rows() != labels.rows() || predictions.cols() != labels.cols()) {
        throw StructuralError(fmt::format("predictions are {}x{} but labels are {}x{}", predictions.rows(),
                                          predictions.cols(), labels.rows(), labels.cols()));
    }
    if (predictions.size() == 0) {
        throw StructuralError("metrics over an empty matrix");
    }
}

}  // namespace

double r2_score(const Matrix& predictions, const Matrix& labels) {
    check_shapes(predictions, labels);
    if (labels.rows() < 2) {
        throw MetricError("R2 needs at least two samples");
    }
    double sum = 0.0;
    for (Eigen::Index j = 0; j < labels.cols(); ++j) {
        const auto y = labels.col(j);
        const double mean = y.mean();
        const double ss_tot = (y.array() - mean).square().sum();
        if (!(ss_tot > 0.0)) {
            throw MetricError(fmt::format("output {} has zero label variance", j));
        }
        const double ss_res = (y - predictions.col(j)).squaredNorm();
        sum += 1.0 - ss_res / ss_tot;
    }
    return sum / static_cast<double>(labels.cols());
}

double mae(const Matrix& predictions, const Matrix& labels) {
    check_shapes(predictions, labels);
    return (predictions - labels).cwiseAbs().sum() / static_cast<double>(labels.size());
}

double mean_signed_error(const Matrix& predictions, const Matrix& labels) {
    check_shapes(predictions, labels);
    return (predictions - labels).sum() / static_cast<double>(labels.size());
}

std::size_t Histogram::total() const noexcept {
    return std::accumulate(counts.begin(), counts.end(), std::size_t{0});
}

Histogram error_histogram(const Matrix& predictions, const Matrix& labels, std::size_t n_bins) {
    check_shapes(predictions, labels);
    if (n_bins < 1) {
        throw StructuralError("histogram needs at least one bin");
    }
    const Matrix err = predictions - labels;
    const double lo = err.minCoeff();
    const double hi = err.maxCoeff();
    Histogram h;
    h.counts.assign(n_bins, 0);
    h.edges.resize(n_bins + 1);
    const double width = (hi - lo) / static_cast<double>(n_bins);
    for (std::size_t i = 0; i <= n_bins; ++i) {
        h.edges[i] = lo + width * static_cast<double>(i);
    }
    h.edges.back() = hi;
    for (Eigen::Index i = 0; i < err.size(); ++i) {
        const double e = err.data()[i];
        std::size_t bin = 0;
        if (width > 0.0) {
            bin = static_cast<std::size_t>((e - lo) / width);
            bin = std::min(bin, n_bins - 1);
        }
        ++h.counts[bin];
    }
    return h;
}

}  // namespace hyperclr
