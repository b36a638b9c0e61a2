// Copyright 2026 The hyperclr Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "hyperclr/rng.hpp"
#include "hyperclr/spectra.hpp"

#include <cstdint>
#include <limits>
#include <vector>

namespace hyperclr {

/// p x b pure-material signatures on a shared grid.
struct EndmemberSet {
    GridRef grid;
    Matrix signatures;

    std::size_t count() const noexcept { return static_cast<std::size_t>(signatures.rows()); }
    void validate() const;
};

struct MixingConfig {
    std::size_t n_pixels = 10000;
    /// +infinity disables noise.
    double snr_db = 20.0;
    /// Empty means all-ones of length p.
    std::vector<double> dirichlet_alpha;
    std::uint64_t seed = 0;

    void validate(std::size_t endmembers) const;
};

/// Spectral angle arccos(<u, v> / (|u| |v|)) in radians.
double spectral_angle(const Eigen::Ref<const Eigen::RowVectorXd>& u, const Eigen::Ref<const Eigen::RowVectorXd>& v);

inline constexpr double kMinEndmemberAngle = 0.1;

/// Procedural signatures: 3-6 Gaussian bumps over a gentle linear baseline,
/// min-max rescaled into [0.05, 0.95]. Signatures are redrawn until every
/// pair is at least kMinEndmemberAngle apart; GenerationError after 100 redraws.
EndmemberSet generate_endmembers(std::size_t p, GridRef grid, std::uint64_t seed);

/// n x p Dirichlet(alpha) rows via normalised Gamma draws.
Matrix sample_abundances(std::size_t n, std::span<const double> alpha, Rng& rng);

/// Post-nonlinear mixing: per pixel y = a M, output y + y * y (elementwise).
Matrix mix_pnmm(const EndmemberSet& endmembers, const Matrix& abundances);

/// Adds i.i.d. N(0, s^2) with s^2 = mean(clean^2) / 10^(snr_db / 10) over the
/// whole matrix. snr_db = +inf returns the input unchanged.
Matrix add_noise(const Matrix& clean, double snr_db, Rng& rng);

/// Measured SNR in dB of `noisy - clean` against `clean`.
double measured_snr_db(const Matrix& clean, const Matrix& noisy);

/// Complete dataset: labels are the abundances.
SpectralBatch generate_dataset(const MixingConfig& config, const EndmemberSet& endmembers);

}  // namespace hyperclr
