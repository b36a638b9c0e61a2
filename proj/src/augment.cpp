// Copyright 2026 The hyperclr Authors
// SPDX-License-Identifier: Apache-2.0
#include "hyperclr/augment.hpp"

#include "hyperclr/errors.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace hyperclr {

namespace {

std::vector<double> grid_copy(const WavelengthGrid& g) {
    return {g.values().begin(), g.values().end()};
}

void check_cosine(double mu, const char* name) {
    if (!(mu > 0.0 && mu <= 1.0)) {
        throw TransformError(fmt::format("{} = {} is not a cosine in (0, 1]", name, mu));
    }
}

}  // namespace

Spectrum shift(const Spectrum& x, double delta_nm) {
    const WavelengthGrid& g = *x.grid;
    if (!std::isfinite(delta_nm) || std::abs(delta_nm) >= g.extent()) {
        throw StructuralError(fmt::format("shift {} nm must be smaller than the grid extent {} nm", delta_nm, g.extent()));
    }
    if (delta_nm == 0.0) {
        return x;
    }
    std::vector<double> q = grid_copy(g);
    for (double& w : q) {
        w -= delta_nm;
    }
    return Spectrum(x.grid, interpolate(x, q));
}

Spectrum flip(const Spectrum& x) {
    const WavelengthGrid& g = *x.grid;
    if (g.is_uniform()) {
        std::vector<double> v(x.reflectance.rbegin(), x.reflectance.rend());
        return Spectrum(x.grid, std::move(v));
    }
    std::vector<double> q = grid_copy(g);
    const double mirror = g.min() + g.max();
    for (double& w : q) {
        w = mirror - w;
    }
    return Spectrum(x.grid, interpolate(x, q));
}

double hapke_albedo(double reflectance, double mu0) {
    const double x = std::clamp(reflectance, 0.0, 1.0);
    const double m2 = mu0 * mu0;
    // Solves x (1 + 2 mu0 g)^2 = 1 - g^2 for g = sqrt(1 - w) >= 0.
    const double radicand = 4.0 * m2 * x * x + (1.0 + 4.0 * m2 * x) * (1.0 - x);
    if (!(radicand >= 0.0)) {
        return std::numeric_limits<double>::quiet_NaN();
    }
    const double g = (std::sqrt(radicand) - 2.0 * mu0 * x) / (1.0 + 4.0 * m2 * x);
    return 1.0 - g * g;
}

double hapke_reflectance(double albedo, double mu1, double mu2) {
    const double w = std::clamp(albedo, 0.0, 1.0);
    const double g = std::sqrt(1.0 - w);
    return w / ((1.0 + 2.0 * mu1 * g) * (1.0 + 2.0 * mu2 * g));
}

Spectrum hapke_scatter(const Spectrum& x, double mu0, double mu1, double mu2) {
    check_cosine(mu0, "mu0");
    check_cosine(mu1, "mu1");
    check_cosine(mu2, "mu2");
    std::vector<double> out(x.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
        const double w = hapke_albedo(x.reflectance[i], mu0);
        const double r = hapke_reflectance(w, mu1, mu2);
        if (!std::isfinite(w) || !std::isfinite(r)) {
            throw TransformError(fmt::format("Hapke inversion is not finite at band {}", i));
        }
        out[i] = r;
    }
    return Spectrum(x.grid, std::move(out));
}

Spectrum atmospheric(const Spectrum& x, double mu1, double mu2, double e_sun, double e_sky) {
    check_cosine(mu1, "mu1");
    check_cosine(mu2, "mu2");
    if (!(e_sun >= 0.0) || !(e_sky >= 0.0)) {
        throw TransformError("atmospheric irradiances must be non-negative");
    }
    const double denom = e_sun * mu2 + e_sky;
    if (denom == 0.0) {
        throw TransformError("atmospheric compensation has a zero denominator");
    }
    const double ratio = (e_sun * mu1 + e_sky) / denom;
    if (ratio == 1.0) {
        return x;
    }
    std::vector<double> out(x.reflectance);
    for (double& v : out) {
        v *= ratio;
    }
    return Spectrum(x.grid, std::move(out));
}

double elastic_displacement(double wavelength, std::span<const double> amplitudes,
                            std::span<const double> centers, double sigma) {
    const double inv = 1.0 / (2.0 * sigma * sigma);
    double eps = 0.0;
    for (std::size_t i = 0; i < amplitudes.size(); ++i) {
        const double d = wavelength - centers[i];
        eps += amplitudes[i] * std::exp(-d * d * inv);
    }
    return eps;
}

Spectrum elastic(const Spectrum& x, std::span<const double> amplitudes, std::span<const double> centers,
                 double sigma) {
    if (amplitudes.empty() || amplitudes.size() != centers.size()) {
        throw StructuralError(fmt::format("elastic needs matching non-empty amplitudes ({}) and centers ({})",
                                          amplitudes.size(), centers.size()));
    }
    if (!(sigma > 0.0) || !std::isfinite(sigma)) {
        throw StructuralError(fmt::format("elastic sigma {} must be positive", sigma));
    }
    if (std::all_of(amplitudes.begin(), amplitudes.end(), [](double a) { return a == 0.0; })) {
        return x;
    }
    std::vector<double> q = grid_copy(*x.grid);
    for (double& w : q) {
        w += elastic_displacement(w, amplitudes, centers, sigma);
    }
    return Spectrum(x.grid, interpolate(x, q));
}

Spectrum band_erasure(const Spectrum& x, double fraction, Rng& rng) {
    if (!(fraction >= 0.0 && fraction <= 1.0)) {
        throw StructuralError(fmt::format("erasure fraction {} outside [0, 1]", fraction));
    }
    const std::size_t b = x.size();
    const auto count = static_cast<std::size_t>(std::floor(fraction * static_cast<double>(b)));
    if (count == 0) {
        return x;
    }
    std::vector<std::size_t> idx(b);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::vector<double> out(x.reflectance);
    for (std::size_t i = 0; i < count; ++i) {
        const std::size_t j = i + static_cast<std::size_t>(rng.index(b - i));
        std::swap(idx[i], idx[j]);
        out[idx[i]] = 0.0;
    }
    return Spectrum(x.grid, std::move(out));
}

Spectrum band_permutation(const Spectrum& x, std::size_t block_count, Rng& rng) {
    const std::size_t b = x.size();
    if (block_count < 1 || block_count > b) {
        throw StructuralError(fmt::format("block count {} outside [1, {}]", block_count, b));
    }
    if (block_count == 1) {
        return x;
    }
    std::vector<std::size_t> order(block_count);
    std::iota(order.begin(), order.end(), std::size_t{0});
    for (std::size_t i = block_count - 1; i > 0; --i) {
        const auto j = static_cast<std::size_t>(rng.index(i + 1));
        std::swap(order[i], order[j]);
    }
    std::vector<double> out;
    out.reserve(b);
    for (std::size_t blk : order) {
        const std::size_t begin = blk * b / block_count;
        const std::size_t end = (blk + 1) * b / block_count;
        out.insert(out.end(), x.reflectance.begin() + static_cast<std::ptrdiff_t>(begin),
                   x.reflectance.begin() + static_cast<std::ptrdiff_t>(end));
    }
    return Spectrum(x.grid, std::move(out));
}

Spectrum nearest_neighbor(const SpectralBatch& batch, std::size_t index, std::size_t k) {
    const std::size_t n = batch.size();
    if (k < 1 || k >= n) {
        throw StructuralError(fmt::format("nearest neighbour k = {} needs 1 <= k < N = {}", k, n));
    }
    if (index >= n) {
        throw StructuralError(fmt::format("nearest neighbour index {} out of range for batch of {}", index, n));
    }
    const auto anchor = batch.spectra.row(static_cast<Eigen::Index>(index));
    std::vector<std::pair<double, std::size_t>> dist;
    dist.reserve(n - 1);
    for (std::size_t j = 0; j < n; ++j) {
        if (j == index) {
            continue;
        }
        dist.emplace_back((batch.spectra.row(static_cast<Eigen::Index>(j)) - anchor).squaredNorm(), j);
    }
    std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k), dist.end());
    Eigen::RowVectorXd mean = Eigen::RowVectorXd::Zero(batch.spectra.cols());
    for (std::size_t i = 0; i < k; ++i) {
        mean += batch.spectra.row(static_cast<Eigen::Index>(dist[i].second));
    }
    mean /= static_cast<double>(k);
    return Spectrum(batch.grid, std::vector<double>(mean.data(), mean.data() + mean.size()));
}

// ---------------------------------------------------------------------------

std::string_view to_string(AugmentationKind kind) noexcept {
    switch (kind) {
    case AugmentationKind::Shift: return "Shift";
    case AugmentationKind::Flip: return "Flip";
    case AugmentationKind::HapkeScattering: return "HapkeScattering";
    case AugmentationKind::Atmospheric: return "Atmospheric";
    case AugmentationKind::Elastic: return "Elastic";
    case AugmentationKind::BandErasure: return "BandErasure";
    case AugmentationKind::BandPermutation: return "BandPermutation";
    case AugmentationKind::NearestNeighbor: return "NearestNeighbor";
    }
    return "?";
}

AugmentationKind parse_kind(std::string_view name) {
    for (AugmentationKind k : kAllKinds) {
        if (to_string(k) == name) {
            return k;
        }
    }
    throw ConfigError(fmt::format("unknown augmentation kind '{}'", name));
}

std::string_view to_string(ChainMode mode) noexcept {
    return mode == ChainMode::Sequential ? "sequential" : "sample-one";
}

ChainMode parse_chain_mode(std::string_view name) {
    if (name == "sequential") {
        return ChainMode::Sequential;
    }
    if (name == "sample-one") {
        return ChainMode::SampleOne;
    }
    throw ConfigError(fmt::format("unknown chain mode '{}' (expected sequential or sample-one)", name));
}

AugmentationSpec AugmentationSpec::defaults(AugmentationKind kind) {
    switch (kind) {
    case AugmentationKind::Shift: return ShiftParams{};
    case AugmentationKind::Flip: return FlipParams{};
    case AugmentationKind::HapkeScattering: return HapkeParams{};
    case AugmentationKind::Atmospheric: return AtmosphericParams{};
    case AugmentationKind::Elastic: return ElasticParams{};
    case AugmentationKind::BandErasure: return BandErasureParams{};
    case AugmentationKind::BandPermutation: return BandPermutationParams{};
    case AugmentationKind::NearestNeighbor: return NearestNeighborParams{};
    }
    throw ConfigError("unknown augmentation kind");
}

namespace {

void check_range(const Range& r, std::string_view what, double min_lo, double max_hi, bool open_lo = false) {
    if (!std::isfinite(r.lo) || !std::isfinite(r.hi) || r.lo > r.hi) {
        throw ConfigError(fmt::format("{} range [{}, {}] must be finite with lo <= hi", what, r.lo, r.hi));
    }
    const bool lo_bad = open_lo ? !(r.lo > min_lo) : !(r.lo >= min_lo);
    if (lo_bad || r.hi > max_hi) {
        throw ConfigError(fmt::format("{} range [{}, {}] outside its domain", what, r.lo, r.hi));
    }
}

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Validator {
    void operator()(const ShiftParams& p) const {
        if (p.delta_nm) check_range(*p.delta_nm, "Shift.delta_nm", -kInf, kInf);
    }
    void operator()(const FlipParams&) const {}
    void operator()(const HapkeParams& p) const {
        if (!(p.mu0 > 0.0 && p.mu0 <= 1.0)) {
            throw ConfigError(fmt::format("HapkeScattering.mu0 = {} outside (0, 1]", p.mu0));
        }
        check_range(p.mu1, "HapkeScattering.mu1", 0.0, 1.0, true);
        check_range(p.mu2, "HapkeScattering.mu2", 0.0, 1.0, true);
    }
    void operator()(const AtmosphericParams& p) const {
        check_range(p.e_sun, "Atmospheric.e_sun", 0.0, kInf);
        check_range(p.e_sky, "Atmospheric.e_sky", 0.0, kInf);
        if (p.e_sun.lo == 0.0 && p.e_sky.lo == 0.0) {
            throw ConfigError("Atmospheric.e_sun and e_sky ranges may not both reach zero");
        }
        check_range(p.mu1, "Atmospheric.mu1", 0.0, 1.0, true);
        check_range(p.mu2, "Atmospheric.mu2", 0.0, 1.0, true);
    }
    void operator()(const ElasticParams& p) const {
        if (p.kernels < 1) throw ConfigError("Elastic.kernels must be at least 1");
        if (p.amplitude_nm) check_range(*p.amplitude_nm, "Elastic.amplitude_nm", -kInf, kInf);
        if (p.sigma_nm && !(*p.sigma_nm > 0.0 && std::isfinite(*p.sigma_nm))) {
            throw ConfigError("Elastic.sigma_nm must be positive");
        }
    }
    void operator()(const BandErasureParams& p) const { check_range(p.fraction, "BandErasure.fraction", 0.0, 1.0); }
    void operator()(const BandPermutationParams& p) const {
        if (p.min_blocks < 1 || p.min_blocks > p.max_blocks) {
            throw ConfigError("BandPermutation needs 1 <= min_blocks <= max_blocks");
        }
    }
    void operator()(const NearestNeighborParams& p) const {
        if (p.k < 1) throw ConfigError("NearestNeighbor.k must be at least 1");
    }
};

struct Applier {
    const SpectralBatch& batch;
    std::size_t index;
    Rng& rng;

    const WavelengthGrid& grid() const { return *batch.grid; }
    Spectrum row() const { return batch.spectrum(index); }

    Spectrum operator()(const ShiftParams& p) const {
        const double h = grid().mean_step();
        const Range r = p.delta_nm.value_or(Range{-5.0 * h, 5.0 * h});
        return shift(row(), r.sample(rng));
    }
    Spectrum operator()(const FlipParams&) const { return flip(row()); }
    Spectrum operator()(const HapkeParams& p) const {
        const double mu1 = p.mu1.sample(rng);
        const double mu2 = p.mu2.sample(rng);
        return hapke_scatter(row(), p.mu0, mu1, mu2);
    }
    Spectrum operator()(const AtmosphericParams& p) const {
        const double e_sun = p.e_sun.sample(rng);
        const double e_sky = p.e_sky.sample(rng);
        const double mu1 = p.mu1.sample(rng);
        const double mu2 = p.mu2.sample(rng);
        return atmospheric(row(), mu1, mu2, e_sun, e_sky);
    }
    Spectrum operator()(const ElasticParams& p) const {
        const double h = grid().mean_step();
        const Range amp = p.amplitude_nm.value_or(Range{-3.0 * h, 3.0 * h});
        const double sigma = p.sigma_nm.value_or(grid().extent() / 20.0);
        std::vector<double> amplitudes(p.kernels);
        std::vector<double> centers(p.kernels);
        for (std::size_t i = 0; i < p.kernels; ++i) {
            amplitudes[i] = amp.sample(rng);
            centers[i] = rng.uniform(grid().min(), grid().max());
        }
        return elastic(row(), amplitudes, centers, sigma);
    }
    Spectrum operator()(const BandErasureParams& p) const { return band_erasure(row(), p.fraction.sample(rng), rng); }
    Spectrum operator()(const BandPermutationParams& p) const {
        const auto b = static_cast<std::int64_t>(batch.bands());
        const auto hi = std::min<std::int64_t>(static_cast<std::int64_t>(p.max_blocks), b);
        const auto lo = std::min<std::int64_t>(static_cast<std::int64_t>(p.min_blocks), hi);
        return band_permutation(row(), static_cast<std::size_t>(rng.integer(lo, hi)), rng);
    }
    Spectrum operator()(const NearestNeighborParams& p) const { return nearest_neighbor(batch, index, p.k); }
};

}  // namespace

void AugmentationSpec::validate() const {
    std::visit(Validator{}, params_);
}

Spectrum apply_spec(const AugmentationSpec& spec, const SpectralBatch& batch, std::size_t index, Rng& rng) {
    return std::visit(Applier{batch, index, rng}, spec.params());
}

std::string AugmentationChain::name() const {
    std::string out;
    for (const auto& s : specs) {
        if (!out.empty()) {
            out += '+';
        }
        out += to_string(s.kind());
    }
    return out;
}

void AugmentationChain::validate() const {
    if (specs.empty()) {
        throw ConfigError("augmentation chain is empty");
    }
    for (const auto& s : specs) {
        s.validate();
    }
}

std::uint64_t chain_stream_seed(std::uint64_t chain_seed, std::size_t sample, std::size_t position) noexcept {
    return derive_seed(chain_seed, {static_cast<std::uint64_t>(sample), static_cast<std::uint64_t>(position)});
}

SpectralBatch apply_chain(const AugmentationChain& chain, const SpectralBatch& batch) {
    if (chain.specs.empty()) {
        throw StructuralError("augmentation chain is empty");
    }
    batch.validate();
    const std::size_t n = batch.size();

    auto run_one = [&](const SpectralBatch& source, std::size_t i, std::size_t pos) {
        Rng rng(chain_stream_seed(chain.seed, i, pos));
        try {
            return apply_spec(chain.specs[pos], source, i, rng);
        } catch (const Error& e) {
            throw TransformError(fmt::format("augmentation failed for sample {} at spec {} ({}): {}", i, pos,
                                             to_string(chain.specs[pos].kind()), e.what()));
        }
    };
    auto store = [](SpectralBatch& dst, std::size_t i, const Spectrum& s) {
        dst.spectra.row(static_cast<Eigen::Index>(i)) =
            Eigen::Map<const Vector>(s.reflectance.data(), static_cast<Eigen::Index>(s.size())).transpose();
    };

    if (chain.mode == ChainMode::SampleOne) {
        SpectralBatch out = batch;
        for (std::size_t i = 0; i < n; ++i) {
            // The choice stream sits one position past the last spec.
            Rng choice(chain_stream_seed(chain.seed, i, chain.specs.size()));
            const auto pos = static_cast<std::size_t>(choice.index(chain.specs.size()));
            store(out, i, run_one(batch, i, pos));
        }
        return out;
    }

    SpectralBatch current = batch;
    for (std::size_t pos = 0; pos < chain.specs.size(); ++pos) {
        SpectralBatch next = current;
        for (std::size_t i = 0; i < n; ++i) {
            store(next, i, run_one(current, i, pos));
        }
        current = std::move(next);
    }
    return current;
}

}  // namespace hyperclr
