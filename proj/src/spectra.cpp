// Copyright 2026 The hyperclr Authors
// SPDX-License-Identifier: Apache-2.0
#include "hyperclr/spectra.hpp"

#include "hyperclr/errors.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>

namespace hyperclr {

WavelengthGrid::WavelengthGrid(std::vector<double> wavelengths) : values_(std::move(wavelengths)) {
    if (values_.size() < 2) {
        throw StructuralError(fmt::format("wavelength grid needs at least 2 bands, got {}", values_.size()));
    }
    for (std::size_t i = 0; i < values_.size(); ++i) {
        const double w = values_[i];
        if (!std::isfinite(w) || w <= 0.0) {
            throw StructuralError(fmt::format("wavelength {} at band {} is not finite and positive", w, i));
        }
        if (i > 0 && !(w > values_[i - 1])) {
            throw StructuralError(fmt::format("wavelength grid not strictly increasing at band {}", i));
        }
    }
}

WavelengthGrid WavelengthGrid::uniform(double first, double last, std::size_t bands) {
    if (bands < 2) {
        throw StructuralError("uniform grid needs at least 2 bands");
    }
    std::vector<double> v(bands);
    const double step = (last - first) / static_cast<double>(bands - 1);
    for (std::size_t i = 0; i < bands; ++i) {
        v[i] = first + step * static_cast<double>(i);
    }
    v.back() = last;
    return WavelengthGrid(std::move(v));
}

bool WavelengthGrid::is_uniform(double rel_tol) const noexcept {
    const double h = mean_step();
    for (std::size_t i = 1; i < values_.size(); ++i) {
        if (std::abs((values_[i] - values_[i - 1]) - h) > rel_tol * h) {
            return false;
        }
    }
    return true;
}

GridRef make_grid(std::vector<double> wavelengths) {
    return std::make_shared<const WavelengthGrid>(std::move(wavelengths));
}

Spectrum::Spectrum(GridRef g, std::vector<double> values) : grid(std::move(g)), reflectance(std::move(values)) {
    if (!grid) {
        throw StructuralError("spectrum without a wavelength grid");
    }
    if (reflectance.size() != grid->size()) {
        throw StructuralError(
            fmt::format("spectrum has {} values but grid has {} bands", reflectance.size(), grid->size()));
    }
}

double interpolate_at(const WavelengthGrid& grid, std::span<const double> values, double wavelength) {
    const auto w = grid.values();
    if (wavelength <= w.front()) {
        return values.front();
    }
    if (wavelength >= w.back()) {
        return values.back();
    }
    // First knot strictly greater than the query; lies in [1, b-1].
    const auto hi = static_cast<std::size_t>(std::upper_bound(w.begin(), w.end(), wavelength) - w.begin());
    const std::size_t lo = hi - 1;
    const double t = (wavelength - w[lo]) / (w[hi] - w[lo]);
    if (t == 0.0) {
        return values[lo];
    }
    return values[lo] + t * (values[hi] - values[lo]);
}

std::vector<double> interpolate(const WavelengthGrid& grid, std::span<const double> values,
                                std::span<const double> query_wavelengths) {
    if (values.size() != grid.size()) {
        throw StructuralError(
            fmt::format("cannot interpolate {} values on a {}-band grid", values.size(), grid.size()));
    }
    std::vector<double> out(query_wavelengths.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
        if (!std::isfinite(query_wavelengths[i])) {
            throw StructuralError(fmt::format("query wavelength {} is not finite", i));
        }
        out[i] = interpolate_at(grid, values, query_wavelengths[i]);
    }
    return out;
}

std::vector<double> interpolate(const Spectrum& spectrum, std::span<const double> query_wavelengths) {
    return interpolate(*spectrum.grid, spectrum.reflectance, query_wavelengths);
}

Spectrum SpectralBatch::spectrum(std::size_t i) const {
    const auto row = spectra.row(static_cast<Eigen::Index>(i));
    return Spectrum(grid, std::vector<double>(row.data(), row.data() + row.size()));
}

SpectralBatch SpectralBatch::select(std::span<const std::size_t> rows) const {
    SpectralBatch out;
    out.grid = grid;
    out.spectra.resize(static_cast<Eigen::Index>(rows.size()), spectra.cols());
    if (labels) {
        out.labels = Matrix(static_cast<Eigen::Index>(rows.size()), labels->cols());
    }
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i] >= size()) {
            throw StructuralError(fmt::format("row {} out of range for batch of {}", rows[i], size()));
        }
        const auto r = static_cast<Eigen::Index>(rows[i]);
        out.spectra.row(static_cast<Eigen::Index>(i)) = spectra.row(r);
        if (labels) {
            out.labels->row(static_cast<Eigen::Index>(i)) = labels->row(r);
        }
    }
    return out;
}

void SpectralBatch::validate() const {
    if (!grid) {
        throw StructuralError("batch without a wavelength grid");
    }
    if (static_cast<std::size_t>(spectra.cols()) != grid->size()) {
        throw StructuralError(
            fmt::format("batch has {} columns but grid has {} bands", spectra.cols(), grid->size()));
    }
    if (labels) {
        if (labels->rows() != spectra.rows()) {
            throw StructuralError(
                fmt::format("batch has {} spectra but {} label rows", spectra.rows(), labels->rows()));
        }
        if (labels->cols() < 1) {
            throw StructuralError("labels must have at least one column");
        }
    }
}

SpectralBatch make_batch(std::span<const Spectrum> spectra, std::optional<Matrix> labels) {
    if (spectra.empty()) {
        throw StructuralError("cannot build a batch from zero spectra");
    }
    SpectralBatch batch;
    batch.grid = spectra.front().grid;
    const auto n = static_cast<Eigen::Index>(spectra.size());
    const auto b = static_cast<Eigen::Index>(batch.grid->size());
    batch.spectra.resize(n, b);
    for (Eigen::Index i = 0; i < n; ++i) {
        const Spectrum& s = spectra[static_cast<std::size_t>(i)];
        if (s.grid != batch.grid && !(s.grid && *s.grid == *batch.grid)) {
            throw StructuralError(fmt::format("spectrum {} is on a different wavelength grid", i));
        }
        batch.spectra.row(i) = Eigen::Map<const Vector>(s.reflectance.data(), b).transpose();
    }
    batch.labels = std::move(labels);
    batch.validate();
    return batch;
}

}  // namespace hyperclr
