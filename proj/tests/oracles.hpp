// Copyright 2026 The hyperclr Authors
// SPDX-License-Identifier: Apache-2.0
// Independent reference computations shared by the unit and acceptance tests.
// Nothing here calls into the code it checks beyond plain data types.
#pragma once

#include "hyperclr/loss.hpp"
#include "hyperclr/model.hpp"
#include "hyperclr/rng.hpp"
#include "hyperclr/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

namespace hyperclr::oracle {

inline Matrix random_matrix(Rng& rng, Eigen::Index rows, Eigen::Index cols, double lo = -1.0, double hi = 1.0) {
    Matrix m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = rng.uniform(lo, hi);
    return m;
}

/// O(n^2) ball membership with plain loops.
struct BrutePairs {
    std::vector<std::vector<std::size_t>> pos, neg;
};

inline BrutePairs brute_pairs(const Matrix& labels, double radius) {
    const std::size_t n = static_cast<std::size_t>(labels.rows());
    BrutePairs out{std::vector<std::vector<std::size_t>>(n), std::vector<std::vector<std::size_t>>(n)};
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            double d2 = 0.0;
            for (Eigen::Index c = 0; c < labels.cols(); ++c) {
                const double d = labels(static_cast<Eigen::Index>(i), c) - labels(static_cast<Eigen::Index>(j), c);
                d2 += d * d;
            }
            (std::sqrt(d2) <= radius ? out.pos[i] : out.neg[i]).push_back(j);
        }
    }
    return out;
}

inline double cosine(const Matrix& f, std::size_t i, std::size_t j) {
    double dot = 0.0, ni = 0.0, nj = 0.0;
    for (Eigen::Index c = 0; c < f.cols(); ++c) {
        const double a = f(static_cast<Eigen::Index>(i), c), b = f(static_cast<Eigen::Index>(j), c);
        dot += a * b;
        ni += a * a;
        nj += b * b;
    }
    return dot / (std::sqrt(ni) * std::sqrt(nj));
}

/// Ball-radius contrastive loss, directly from its definition: prefactor
/// 1/N over the 2N anchors, denominator over negatives only.
inline double brute_contrastive(const Matrix& features, const BrutePairs& pairs, double tau) {
    const std::size_t two_n = static_cast<std::size_t>(features.rows());
    const double n = static_cast<double>(two_n) / 2.0;
    double total = 0.0;
    for (std::size_t i = 0; i < two_n; ++i) {
        if (pairs.pos[i].empty() || pairs.neg[i].empty()) continue;
        double denom = 0.0;
        for (std::size_t k : pairs.neg[i]) denom += std::exp(cosine(features, i, k) / tau);
        for (std::size_t j : pairs.pos[i]) total += std::log(std::exp(cosine(features, i, j) / tau) / denom);
    }
    return -total / n;
}

/// Albedo w solving x = w / (1 + 2 mu sqrt(1 - w))^2 by bisection; the right
/// side is increasing in w on [0, 1].
inline double hapke_albedo_bisect(double x, double mu) {
    auto render = [mu](double w) {
        const double t = 1.0 + 2.0 * mu * std::sqrt(1.0 - w);
        return w / (t * t);
    };
    double lo = 0.0, hi = 1.0;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        (render(mid) < x ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

/// Albedo from the closed form as printed, with mu0^4 x^2 under the root.
inline double hapke_albedo_printed(double x, double mu) {
    const double r = std::sqrt(std::pow(mu, 4) * x * x + (1.0 + 4.0 * mu * mu * x) * (1.0 - x));
    const double g = (r - 2.0 * mu * x) / (1.0 + 4.0 * mu * mu * x);
    return 1.0 - g * g;
}

struct GradCheck {
    std::size_t checked = 0;
    double max_rel = 0.0;
};

/// Central differences of `loss` w.r.t. every parameter in `params`, compared
/// with `analytic`. Relative error uses max(|a|, |n|, floor) as denominator.
inline GradCheck check_gradients(NetworkParams params, const NetworkParams& analytic,
                                 const std::function<double(const NetworkParams&)>& loss, double step = 1e-5,
                                 double floor = 1e-5) {
    GradCheck out;
    auto visit = [&](double& p, double a) {
        const double saved = p;
        p = saved + step;
        const double up = loss(params);
        p = saved - step;
        const double down = loss(params);
        p = saved;
        const double numeric = (up - down) / (2.0 * step);
        const double rel = std::abs(a - numeric) / std::max({std::abs(a), std::abs(numeric), floor});
        out.max_rel = std::max(out.max_rel, rel);
        ++out.checked;
    };
    for (std::size_t l = 0; l < params.layer_count(); ++l) {
        LayerParams& lp = params.layer(l);
        const LayerParams& ga = analytic.layer(l);
        for (Eigen::Index r = 0; r < lp.weights.rows(); ++r)
            for (Eigen::Index c = 0; c < lp.weights.cols(); ++c) visit(lp.weights(r, c), ga.weights(r, c));
        for (Eigen::Index r = 0; r < lp.biases.size(); ++r) visit(lp.biases(r), ga.biases(r));
    }
    return out;
}

/// Smallest |pre-activation| over the ReLU layers; a finite-difference step
/// smaller than this cannot cross a kink.
inline double min_relu_margin(const ForwardTrace& trace, const NetworkParams& params) {
    double m = std::numeric_limits<double>::infinity();
    const std::size_t feature_layer = params.extractor.size() - 1;
    for (std::size_t l = 0; l + 1 < trace.pre_activations.size(); ++l) {
        if (l == feature_layer && !params.relu_features) continue;
        m = std::min(m, trace.pre_activations[l].cwiseAbs().minCoeff());
    }
    return m;
}

}  // namespace hyperclr::oracle
