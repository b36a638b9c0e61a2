// Copyright 2026 The hyperclr Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "hyperclr/spectra.hpp"

#include <limits>
#include <vector>

namespace hyperclr {

inline constexpr double kInfiniteRadius = std::numeric_limits<double>::infinity();

struct LossConfig {
    double tau = 0.5;
    double alpha = 1.0;
    /// Ball radius in min-max normalised label units; +inf makes every pair positive.
    double radius = 0.1;

    void validate() const;
};

/// Per-anchor positive and negative sets over the joined 2N rows. Self is in neither.
struct PairIndex {
    std::vector<std::vector<std::size_t>> positives;
    std::vector<std::vector<std::size_t>> negatives;

    std::size_t anchors() const noexcept { return positives.size(); }
};

/// j is a positive of i iff j != i and ||y_i - y_j||_2 <= radius.
PairIndex select_pairs(const Matrix& labels, double radius);

struct ContrastiveResult {
    double loss = 0.0;
    Matrix grad;  // same shape as the features
    /// Anchors with no positives or no negatives; they contribute nothing.
    std::size_t skipped_anchors = 0;
};

/// Ball-radius contrastive loss over R = 2N feature rows:
///   L = -(1/N) sum_i sum_{j in P(i)} log( exp(s_ij / tau) / sum_{k in Neg(i)} exp(s_ik / tau) )
/// with s the cosine similarity. The denominator runs over negatives only.
/// Throws LossError on a zero-norm row.
ContrastiveResult contrastive_loss(const Matrix& features, const PairIndex& pairs, double tau);

struct RegressionResult {
    double loss = 0.0;
    Matrix grad;  // d loss / d predictions
};

/// (1/N) sum_i ||y_i - yhat_i||^2.
RegressionResult regression_loss(const Matrix& predictions, const Matrix& labels);

struct TotalLossResult {
    double total = 0.0;
    double regression = 0.0;
    double contrastive = 0.0;
    std::size_t skipped_anchors = 0;
    Matrix grad_features;     // rows of `features`
    Matrix grad_predictions;  // rows of `predictions`
};

/// L_R + alpha L_C.
///
/// `features` holds the N original rows followed by the N augmented views.
/// `predictions` may hold N rows (originals) or 2N rows; only the first N
/// enter L_R, and the view rows receive zero gradient. `labels` are the raw
/// N x s targets; `pair_labels` (N x s, usually normalised) decide the ball
/// and are duplicated for the views. With alpha == 0 the contrastive term is
/// not evaluated and `features` may have any row count.
TotalLossResult total_loss(const Matrix& features, const Matrix& predictions, const Matrix& labels,
                           const Matrix& pair_labels, const LossConfig& config);

/// Per-column min-max scaling fitted on one label matrix and applied to others.
struct LabelScaler {
    Eigen::RowVectorXd min;
    Eigen::RowVectorXd range;  // zero-range columns use 1

    static LabelScaler fit(const Matrix& labels);
    Matrix apply(const Matrix& labels) const;
};

}  // namespace hyperclr
