// Copyright 2026 The hyperclr Authors
// SPDX-License-Identifier: Apache-2.0
#include "hyperclr/loss.hpp"

#include "hyperclr/errors.hpp"

#include <fmt/format.h>

#include <cmath>

namespace hyperclr {

void LossConfig::validate() const {
    if (!(tau > 0.0) || !std::isfinite(tau)) {
        throw ConfigError(fmt::format("tau = {} must be positive and finite", tau));
    }
    if (!(alpha >= 0.0) || !std::isfinite(alpha)) {
        throw ConfigError(fmt::format("alpha = {} must be non-negative and finite", alpha));
    }
    if (!(radius >= 0.0)) {
        throw ConfigError(fmt::format("radius = {} must be non-negative", radius));
    }
}

PairIndex select_pairs(const Matrix& labels, double radius) {
    const auto r = static_cast<std::size_t>(labels.rows());
    PairIndex out;
    out.positives.resize(r);
    out.negatives.resize(r);
    const double r2 = radius * radius;
    for (std::size_t i = 0; i < r; ++i) {
        for (std::size_t j = 0; j < r; ++j) {
            if (i == j) {
                continue;
            }
            const double d2 =
                (labels.row(static_cast<Eigen::Index>(i)) - labels.row(static_cast<Eigen::Index>(j))).squaredNorm();
            if (radius == kInfiniteRadius || d2 <= r2) {
                out.positives[i].push_back(j);
            } else {
                out.negatives[i].push_back(j);
            }
        }
    }
    return out;
}

ContrastiveResult contrastive_loss(const Matrix& features, const PairIndex& pairs, double tau) {
    const Eigen::Index rows = features.rows();
    if (static_cast<std::size_t>(rows) != pairs.anchors()) {
        throw StructuralError(
            fmt::format("pair index covers {} anchors but there are {} feature rows", pairs.anchors(), rows));
    }
    if (rows % 2 != 0) {
        throw StructuralError(fmt::format("contrastive loss expects 2N rows, got {}", rows));
    }
    if (!(tau > 0.0)) {
        throw LossError(fmt::format("temperature {} must be positive", tau));
    }
    const double n = static_cast<double>(rows / 2);

    Vector norms = features.rowwise().norm();
    for (Eigen::Index i = 0; i < rows; ++i) {
        if (!(norms(i) > 0.0) || !std::isfinite(norms(i))) {
            throw LossError(fmt::format("feature row {} has zero or non-finite norm", i));
        }
    }
    const Matrix unit = norms.cwiseInverse().asDiagonal() * features;
    const Matrix sim = unit * unit.transpose();

    ContrastiveResult out;
    // coeff(i, j) = dL / d sim(i, j) for the ordered pair (anchor i, other j).
    Matrix coeff = Matrix::Zero(rows, rows);
    std::vector<double> logits;
    for (Eigen::Index i = 0; i < rows; ++i) {
        const auto& pos = pairs.positives[static_cast<std::size_t>(i)];
        const auto& neg = pairs.negatives[static_cast<std::size_t>(i)];
        if (pos.empty() || neg.empty()) {
            ++out.skipped_anchors;
            continue;
        }
        logits.resize(neg.size());
        double mx = -std::numeric_limits<double>::infinity();
        for (std::size_t q = 0; q < neg.size(); ++q) {
            logits[q] = sim(i, static_cast<Eigen::Index>(neg[q])) / tau;
            mx = std::max(mx, logits[q]);
        }
        double denom = 0.0;
        for (double& l : logits) {
            l = std::exp(l - mx);
            denom += l;
        }
        const double lse = mx + std::log(denom);
        const double npos = static_cast<double>(pos.size());
        double term = 0.0;
        for (std::size_t j : pos) {
            term += lse - sim(i, static_cast<Eigen::Index>(j)) / tau;
            coeff(i, static_cast<Eigen::Index>(j)) -= 1.0 / (n * tau);
        }
        for (std::size_t q = 0; q < neg.size(); ++q) {
            coeff(i, static_cast<Eigen::Index>(neg[q])) += npos * (logits[q] / denom) / (n * tau);
        }
        out.loss += term / n;
    }

    const Matrix sym = coeff + coeff.transpose();
    const Matrix grad_unit = sym * unit;
    out.grad.resize(rows, features.cols());
    for (Eigen::Index i = 0; i < rows; ++i) {
        const double radial = grad_unit.row(i).dot(unit.row(i));
        out.grad.row(i) = (grad_unit.row(i) - radial * unit.row(i)) / norms(i);
    }
    return out;
}

RegressionResult regression_loss(const Matrix& predictions, const Matrix& labels) {
    if (predictions.rows() != labels.rows() || predictions.cols() != labels.cols()) {
        throw StructuralError(fmt::format("predictions are {}x{} but labels are {}x{}", predictions.rows(),
                                          predictions.cols(), labels.rows(), labels.cols()));
    }
    if (predictions.rows() == 0) {
        throw StructuralError("regression loss over zero samples");
    }
    const double n = static_cast<double>(predictions.rows());
    const Matrix residual = labels - predictions;
    return {residual.squaredNorm() / n, (-2.0 / n) * residual};
}

TotalLossResult total_loss(const Matrix& features, const Matrix& predictions, const Matrix& labels,
                           const Matrix& pair_labels, const LossConfig& config) {
    const Eigen::Index n = labels.rows();
    if (predictions.rows() != n && predictions.rows() != 2 * n) {
        throw StructuralError(
            fmt::format("expected {} or {} prediction rows, got {}", n, 2 * n, predictions.rows()));
    }
    RegressionResult reg = regression_loss(predictions.topRows(n), labels);

    TotalLossResult out;
    out.regression = reg.loss;
    out.grad_predictions = Matrix::Zero(predictions.rows(), predictions.cols());
    out.grad_predictions.topRows(n) = reg.grad;
    out.grad_features = Matrix::Zero(features.rows(), features.cols());

    if (config.alpha != 0.0) {
        if (features.rows() != 2 * n) {
            throw StructuralError(fmt::format("expected {} feature rows (originals + views), got {}", 2 * n,
                                              features.rows()));
        }
        if (pair_labels.rows() != n) {
            throw StructuralError("pair labels must have one row per original sample");
        }
        Matrix joined(2 * n, pair_labels.cols());
        joined.topRows(n) = pair_labels;
        joined.bottomRows(n) = pair_labels;
        ContrastiveResult con = contrastive_loss(features, select_pairs(joined, config.radius), config.tau);
        out.contrastive = con.loss;
        out.skipped_anchors = con.skipped_anchors;
        out.grad_features = config.alpha * con.grad;
    }
    out.total = out.regression + config.alpha * out.contrastive;
    return out;
}

LabelScaler LabelScaler::fit(const Matrix& labels) {
    LabelScaler s;
    s.min = labels.colwise().minCoeff();
    s.range = labels.colwise().maxCoeff() - s.min;
    for (Eigen::Index j = 0; j < s.range.size(); ++j) {
        if (!(s.range(j) > 0.0)) {
            s.range(j) = 1.0;
        }
    }
    return s;
}

Matrix LabelScaler::apply(const Matrix& labels) const {
    Matrix out = labels;
    out.rowwise() -= min;
    out.array().rowwise() /= range.array();
    return out;
}

}  // namespace hyperclr
