// Copyright 2026 The hyperclr Authors
// SPDX-License-Identifier: Apache-2.0
#include "hyperclr/synth.hpp"

#include "hyperclr/errors.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>

namespace hyperclr {

void EndmemberSet::validate() const {
    if (!grid) {
        throw StructuralError("endmember set without a wavelength grid");
    }
    if (signatures.rows() < 2) {
        throw StructuralError(fmt::format("need at least 2 endmembers, got {}", signatures.rows()));
    }
    if (static_cast<std::size_t>(signatures.cols()) != grid->size()) {
        throw StructuralError(
            fmt::format("endmembers have {} bands but grid has {}", signatures.cols(), grid->size()));
    }
    for (Eigen::Index i = 0; i < signatures.rows(); ++i) {
        for (Eigen::Index j = 0; j < signatures.cols(); ++j) {
            const double v = signatures(i, j);
            if (!(v >= 0.0 && v <= 1.0)) {
                throw StructuralError(fmt::format("endmember {} band {} = {} outside [0, 1]", i, j, v));
            }
        }
    }
}

void MixingConfig::validate(std::size_t endmembers) const {
    if (n_pixels < 1) {
        throw ConfigError("n_pixels must be positive");
    }
    if (std::isnan(snr_db) || snr_db == -std::numeric_limits<double>::infinity()) {
        throw ConfigError("snr_db must be finite or +inf");
    }
    if (!dirichlet_alpha.empty()) {
        if (dirichlet_alpha.size() != endmembers) {
            throw ConfigError(fmt::format("dirichlet_alpha has {} entries for {} endmembers",
                                          dirichlet_alpha.size(), endmembers));
        }
        for (double a : dirichlet_alpha) {
            if (!(a > 0.0) || !std::isfinite(a)) {
                throw ConfigError("dirichlet_alpha entries must be positive and finite");
            }
        }
    }
}

double spectral_angle(const Eigen::Ref<const Eigen::RowVectorXd>& u, const Eigen::Ref<const Eigen::RowVectorXd>& v) {
    const double c = u.dot(v) / (u.norm() * v.norm());
    return std::acos(std::clamp(c, -1.0, 1.0));
}

namespace {

Eigen::RowVectorXd draw_signature(const WavelengthGrid& grid, Rng& rng) {
    const auto b = static_cast<Eigen::Index>(grid.size());
    const double lo = grid.min();
    const double span = grid.extent();
    Eigen::RowVectorXd s(b);
    const double offset = rng.uniform(0.0, 1.0);
    const double slope = rng.uniform(-0.5, 0.5);
    for (Eigen::Index j = 0; j < b; ++j) {
        s(j) = offset + slope * (grid[static_cast<std::size_t>(j)] - lo) / span;
    }
    const auto bumps = rng.integer(3, 6);
    for (std::int64_t k = 0; k < bumps; ++k) {
        const double amp = rng.uniform(-1.0, 1.0);
        const double center = rng.uniform(lo, grid.max());
        const double width = rng.uniform(span / 50.0, span / 8.0);
        for (Eigen::Index j = 0; j < b; ++j) {
            const double d = (grid[static_cast<std::size_t>(j)] - center) / width;
            s(j) += amp * std::exp(-0.5 * d * d);
        }
    }
    const double mn = s.minCoeff();
    const double mx = s.maxCoeff();
    if (!(mx > mn)) {
        s.setConstant(0.5);
        return s;
    }
    s = ((s.array() - mn) / (mx - mn) * 0.9 + 0.05).matrix();
    return s;
}

}  // namespace

EndmemberSet generate_endmembers(std::size_t p, GridRef grid, std::uint64_t seed) {
    if (p < 2) {
        throw GenerationError(fmt::format("need at least 2 endmembers, got {}", p));
    }
    if (!grid) {
        throw StructuralError("endmember generation needs a grid");
    }
    EndmemberSet out;
    out.grid = grid;
    out.signatures.resize(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(grid->size()));
    std::vector<std::uint64_t> attempt(p, 0);
    auto draw = [&](std::size_t i) {
        Rng rng(derive_seed(seed, Stream::Endmembers, {i, attempt[i]}));
        out.signatures.row(static_cast<Eigen::Index>(i)) = draw_signature(*grid, rng);
    };
    for (std::size_t i = 0; i < p; ++i) {
        draw(i);
    }
    int retries = 0;
    for (;;) {
        bool redrew = false;
        for (std::size_t i = 1; i < p && !redrew; ++i) {
            for (std::size_t j = 0; j < i; ++j) {
                const double angle = spectral_angle(out.signatures.row(static_cast<Eigen::Index>(i)),
                                                    out.signatures.row(static_cast<Eigen::Index>(j)));
                if (angle < kMinEndmemberAngle) {
                    if (++retries > 100) {
                        throw GenerationError(
                            fmt::format("could not separate endmembers {} and {} after 100 redraws", j, i));
                    }
                    ++attempt[i];
                    draw(i);
                    redrew = true;
                    break;
                }
            }
        }
        if (!redrew) {
            break;
        }
    }
    return out;
}

Matrix sample_abundances(std::size_t n, std::span<const double> alpha, Rng& rng) {
    if (alpha.empty()) {
        throw StructuralError("Dirichlet concentration vector is empty");
    }
    for (double a : alpha) {
        if (!(a > 0.0)) {
            throw StructuralError("Dirichlet concentrations must be positive");
        }
    }
    const auto p = static_cast<Eigen::Index>(alpha.size());
    Matrix out(static_cast<Eigen::Index>(n), p);
    for (Eigen::Index i = 0; i < out.rows(); ++i) {
        double sum = 0.0;
        do {
            sum = 0.0;
            for (Eigen::Index j = 0; j < p; ++j) {
                out(i, j) = rng.gamma(alpha[static_cast<std::size_t>(j)]);
                sum += out(i, j);
            }
        } while (!(sum > 0.0));
        out.row(i) /= sum;
    }
    return out;
}

Matrix mix_pnmm(const EndmemberSet& endmembers, const Matrix& abundances) {
    if (static_cast<std::size_t>(abundances.cols()) != endmembers.count()) {
        throw StructuralError(fmt::format("abundances have {} columns for {} endmembers", abundances.cols(),
                                          endmembers.count()));
    }
    Matrix linear = abundances * endmembers.signatures;
    return linear + linear.cwiseProduct(linear);
}

Matrix add_noise(const Matrix& clean, double snr_db, Rng& rng) {
    if (snr_db == std::numeric_limits<double>::infinity()) {
        return clean;
    }
    const double power = clean.squaredNorm() / static_cast<double>(clean.size());
    if (!(power > 0.0)) {
        throw GenerationError("cannot calibrate noise against an all-zero signal");
    }
    const double sigma = std::sqrt(power / std::pow(10.0, snr_db / 10.0));
    Matrix out = clean;
    for (Eigen::Index i = 0; i < out.rows(); ++i) {
        for (Eigen::Index j = 0; j < out.cols(); ++j) {
            out(i, j) += sigma * rng.normal();
        }
    }
    return out;
}

double measured_snr_db(const Matrix& clean, const Matrix& noisy) {
    return 10.0 * std::log10(clean.squaredNorm() / (noisy - clean).squaredNorm());
}

SpectralBatch generate_dataset(const MixingConfig& config, const EndmemberSet& endmembers) {
    endmembers.validate();
    config.validate(endmembers.count());
    std::vector<double> alpha = config.dirichlet_alpha;
    if (alpha.empty()) {
        alpha.assign(endmembers.count(), 1.0);
    }
    Rng abundance_rng(derive_seed(config.seed, Stream::Abundances));
    Rng noise_rng(derive_seed(config.seed, Stream::Noise));
    Matrix abundances = sample_abundances(config.n_pixels, alpha, abundance_rng);
    SpectralBatch batch;
    batch.grid = endmembers.grid;
    batch.spectra = add_noise(mix_pnmm(endmembers, abundances), config.snr_db, noise_rng);
    batch.labels = std::move(abundances);
    batch.validate();
    return batch;
}

}  // namespace hyperclr
