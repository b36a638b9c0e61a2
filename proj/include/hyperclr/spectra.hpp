// Copyright 2026 The hyperclr Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <vector>

namespace hyperclr {

/// Row-major dense matrix; rows are samples throughout the library.
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;

/// Strictly increasing, positive, finite wavelengths in nm.
class WavelengthGrid {
public:
    explicit WavelengthGrid(std::vector<double> wavelengths);

    /// `bands` equally spaced wavelengths covering [first, last].
    static WavelengthGrid uniform(double first, double last, std::size_t bands);

    std::size_t size() const noexcept { return values_.size(); }
    std::span<const double> values() const noexcept { return values_; }
    double operator[](std::size_t i) const { return values_[i]; }
    double min() const noexcept { return values_.front(); }
    double max() const noexcept { return values_.back(); }
    double extent() const noexcept { return max() - min(); }
    double mean_step() const noexcept { return extent() / static_cast<double>(size() - 1); }

    /// True when every step equals the mean step to within `rel_tol` of it.
    bool is_uniform(double rel_tol = 1e-9) const noexcept;

    friend bool operator==(const WavelengthGrid&, const WavelengthGrid&) = default;

private:
    std::vector<double> values_;
};

using GridRef = std::shared_ptr<const WavelengthGrid>;

GridRef make_grid(std::vector<double> wavelengths);

struct Spectrum {
    GridRef grid;
    std::vector<double> reflectance;

    Spectrum(GridRef g, std::vector<double> values);
    std::size_t size() const noexcept { return reflectance.size(); }
};

/// Piecewise-linear interpolation of `values` (sampled on `grid`) at one
/// wavelength. Queries outside the grid take the nearest edge value.
double interpolate_at(const WavelengthGrid& grid, std::span<const double> values, double wavelength);

/// Vectorised form of `interpolate_at`. Throws StructuralError if `values`
/// does not match the grid length.
std::vector<double> interpolate(const WavelengthGrid& grid, std::span<const double> values,
                                std::span<const double> query_wavelengths);
std::vector<double> interpolate(const Spectrum& spectrum, std::span<const double> query_wavelengths);

/// N spectra on one grid, optionally with an N x s label matrix.
struct SpectralBatch {
    GridRef grid;
    Matrix spectra;
    std::optional<Matrix> labels;

    std::size_t size() const noexcept { return static_cast<std::size_t>(spectra.rows()); }
    std::size_t bands() const noexcept { return static_cast<std::size_t>(spectra.cols()); }
    std::size_t outputs() const noexcept { return labels ? static_cast<std::size_t>(labels->cols()) : 0; }
    bool has_labels() const noexcept { return labels.has_value(); }

    Spectrum spectrum(std::size_t i) const;

    /// Rows in the given order; labels follow.
    SpectralBatch select(std::span<const std::size_t> rows) const;

    /// Throws StructuralError unless the invariants hold.
    void validate() const;
};

SpectralBatch make_batch(std::span<const Spectrum> spectra, std::optional<Matrix> labels = std::nullopt);

}  // namespace hyperclr
