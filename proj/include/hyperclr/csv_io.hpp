// Copyright 2026 The hyperclr Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "hyperclr/spectra.hpp"
#include "hyperclr/synth.hpp"

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace hyperclr {

// CSV layout, comma separated, '.' decimal point, no quoting:
//   spectra / endmembers: first row wavelengths (nm), then one row per spectrum
//   labels: one row per sample, s columns, no header
// Malformed content throws ConfigError naming file and line; open/write
// failures throw IoError.

/// Shortest decimal form that parses back to the same double.
std::string format_double(double v);

Matrix read_matrix_csv(const std::filesystem::path& path);
void write_matrix_csv(const std::filesystem::path& path, const Matrix& m);

struct GridAndRows {
    GridRef grid;
    Matrix rows;
};

GridAndRows read_spectra_csv(const std::filesystem::path& path);
void write_spectra_csv(const std::filesystem::path& path, const WavelengthGrid& grid, const Matrix& rows);

/// Spectra plus optional labels file (empty path means unlabelled).
SpectralBatch read_dataset(const std::filesystem::path& spectra, const std::filesystem::path& labels = {});

EndmemberSet read_endmembers_csv(const std::filesystem::path& path);
void write_endmembers_csv(const std::filesystem::path& path, const EndmemberSet& endmembers);

/// Minimal table writer for report files.
class CsvTable {
public:
    explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

    void add_row(std::vector<std::string> cells);
    std::string str() const;
    void write(const std::filesystem::path& path) const;

private:
    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
};

/// Writes `content` to `path`, throwing IoError on failure.
void write_text_file(const std::filesystem::path& path, std::string_view content);
std::string read_text_file(const std::filesystem::path& path);

}  // namespace hyperclr
