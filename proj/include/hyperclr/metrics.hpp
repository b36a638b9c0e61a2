// Copyright 2026 The hyperclr Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "hyperclr/spectra.hpp"

#include <cstddef>
#include <vector>

namespace hyperclr {

/// Uniform mean over outputs of 1 - SS_res / SS_tot. Throws MetricError on a
/// zero-variance output column.
double r2_score(const Matrix& predictions, const Matrix& labels);

/// Mean absolute error over all N * s entries.
double mae(const Matrix& predictions, const Matrix& labels);

/// Mean of (prediction - label) over all entries.
double mean_signed_error(const Matrix& predictions, const Matrix& labels);

struct Histogram {
    std::vector<double> edges;  // n_bins + 1
    std::vector<std::size_t> counts;

    std::size_t total() const noexcept;
};

/// Equal-width histogram of prediction - label over [min, max] of the errors;
/// the last bin is closed on the right.
Histogram error_histogram(const Matrix& predictions, const Matrix& labels, std::size_t n_bins);

}  // namespace hyperclr
