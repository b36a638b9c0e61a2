// Copyright 2026 The hyperclr Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "hyperclr/rng.hpp"
#include "hyperclr/spectra.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <type_traits>
#include <variant>
#include <vector>

namespace hyperclr {

// ---------------------------------------------------------------------------
// Single transforms. Each maps a length-b spectrum to a length-b spectrum on
// the same grid.
// ---------------------------------------------------------------------------

/// x~(l) = x(l - delta), linear interpolation with edge clamping.
Spectrum shift(const Spectrum& x, double delta_nm);

/// x~(l) = x(l_min + l_max - l). Exact index reversal on uniform grids.
Spectrum flip(const Spectrum& x);

/// Hapke single-scattering albedo recovered from a reflectance observed with
/// incidence/emission cosines both equal to `mu0`. Input is clamped to [0, 1].
double hapke_albedo(double reflectance, double mu0);

/// Hapke reflectance w / ((1 + 2 mu1 sqrt(1-w)) (1 + 2 mu2 sqrt(1-w))), with w clamped to [0, 1].
double hapke_reflectance(double albedo, double mu1, double mu2);

/// Per band: invert to albedo with mu0, render with (mu1, mu2).
Spectrum hapke_scatter(const Spectrum& x, double mu0, double mu1, double mu2);

/// Global illumination ratio (E_sun mu1 + E_sky) / (E_sun mu2 + E_sky).
Spectrum atmospheric(const Spectrum& x, double mu1, double mu2, double e_sun, double e_sky);

/// Displacement field sum_i A_i exp(-(l - c_i)^2 / (2 sigma^2)) at one wavelength.
double elastic_displacement(double wavelength, std::span<const double> amplitudes,
                            std::span<const double> centers, double sigma);

/// x~(l) = x(l + displacement(l)).
Spectrum elastic(const Spectrum& x, std::span<const double> amplitudes, std::span<const double> centers,
                 double sigma);

/// Zeroes floor(fraction * b) distinct bands drawn without replacement.
Spectrum band_erasure(const Spectrum& x, double fraction, Rng& rng);

/// Splits the bands into `block_count` contiguous near-equal blocks
/// [floor(i b / K), floor((i+1) b / K)) and shuffles block order.
Spectrum band_permutation(const Spectrum& x, std::size_t block_count, Rng& rng);

/// Mean of the k nearest other spectra in the batch (Euclidean; ties to lower index).
Spectrum nearest_neighbor(const SpectralBatch& batch, std::size_t index, std::size_t k);

// ---------------------------------------------------------------------------
// Randomised specs and chains
// ---------------------------------------------------------------------------

enum class AugmentationKind {
    Shift,
    Flip,
    HapkeScattering,
    Atmospheric,
    Elastic,
    BandErasure,
    BandPermutation,
    NearestNeighbor,
};

inline constexpr AugmentationKind kAllKinds[] = {
    AugmentationKind::Shift,           AugmentationKind::Flip,        AugmentationKind::HapkeScattering,
    AugmentationKind::Atmospheric,     AugmentationKind::Elastic,     AugmentationKind::BandErasure,
    AugmentationKind::BandPermutation, AugmentationKind::NearestNeighbor,
};

std::string_view to_string(AugmentationKind kind) noexcept;
/// Throws ConfigError for unknown names.
AugmentationKind parse_kind(std::string_view name);

/// Closed interval sampled uniformly.
struct Range {
    double lo = 0.0;
    double hi = 0.0;

    double sample(Rng& rng) const { return rng.uniform(lo, hi); }
    friend bool operator==(const Range&, const Range&) = default;
};

// Unset optional ranges resolve against the grid at application time
// (h = mean grid step, span = l_max - l_min).

struct ShiftParams {
    std::optional<Range> delta_nm;  // default [-5h, 5h]
    friend bool operator==(const ShiftParams&, const ShiftParams&) = default;
};

struct FlipParams {
    friend bool operator==(const FlipParams&, const FlipParams&) = default;
};

struct HapkeParams {
    double mu0 = 0.5773;
    Range mu1{0.3, 1.0};
    Range mu2{0.3, 1.0};
    friend bool operator==(const HapkeParams&, const HapkeParams&) = default;
};

struct AtmosphericParams {
    Range e_sun{1.0, 1.0};
    Range e_sky{0.2, 0.2};
    Range mu1{0.3, 1.0};
    Range mu2{0.3, 1.0};
    friend bool operator==(const AtmosphericParams&, const AtmosphericParams&) = default;
};

struct ElasticParams {
    std::size_t kernels = 5;
    std::optional<Range> amplitude_nm;  // default [-3h, 3h]
    std::optional<double> sigma_nm;     // default span / 20
    friend bool operator==(const ElasticParams&, const ElasticParams&) = default;
};

struct BandErasureParams {
    Range fraction{0.05, 0.15};
    friend bool operator==(const BandErasureParams&, const BandErasureParams&) = default;
};

struct BandPermutationParams {
    std::size_t min_blocks = 4;
    std::size_t max_blocks = 16;
    friend bool operator==(const BandPermutationParams&, const BandPermutationParams&) = default;
};

struct NearestNeighborParams {
    std::size_t k = 3;
    friend bool operator==(const NearestNeighborParams&, const NearestNeighborParams&) = default;
};

using AugmentationParams = std::variant<ShiftParams, FlipParams, HapkeParams, AtmosphericParams, ElasticParams,
                                        BandErasureParams, BandPermutationParams, NearestNeighborParams>;

class AugmentationSpec {
public:
    template <class P>
        requires std::is_constructible_v<AugmentationParams, P>
    AugmentationSpec(P params) : params_(std::move(params)) {}  // NOLINT: implicit from any param struct

    /// Spec with the default parameter ranges for `kind`.
    static AugmentationSpec defaults(AugmentationKind kind);

    AugmentationKind kind() const noexcept { return static_cast<AugmentationKind>(params_.index()); }
    const AugmentationParams& params() const noexcept { return params_; }

    /// Throws ConfigError on non-finite bounds, lo > hi, or out-of-domain values.
    void validate() const;

    friend bool operator==(const AugmentationSpec&, const AugmentationSpec&) = default;

private:
    AugmentationParams params_;
};

/// Draws this spec's parameters from `rng` and applies the transform to row
/// `index` of `batch` (the batch supplies the neighbour pool for NearestNeighbor).
Spectrum apply_spec(const AugmentationSpec& spec, const SpectralBatch& batch, std::size_t index, Rng& rng);

enum class ChainMode {
    Sequential,  // every spec, in order
    SampleOne,   // one spec per sample, chosen uniformly
};

std::string_view to_string(ChainMode mode) noexcept;
ChainMode parse_chain_mode(std::string_view name);

struct AugmentationChain {
    std::vector<AugmentationSpec> specs;
    std::uint64_t seed = 0;
    ChainMode mode = ChainMode::Sequential;

    /// "Shift+Atmospheric" style label.
    std::string name() const;
    void validate() const;
};

/// RNG stream used for (sample, spec position) within a chain application.
std::uint64_t chain_stream_seed(std::uint64_t chain_seed, std::size_t sample, std::size_t position) noexcept;

/// Applies the chain to every row. Sequential chains run stage by stage, so a
/// NearestNeighbor stage sees the previous stage's output as its pool.
/// Labels pass through unchanged. Transform failures are rethrown as
/// TransformError naming the sample and spec position.
SpectralBatch apply_chain(const AugmentationChain& chain, const SpectralBatch& batch);

}  // namespace hyperclr
