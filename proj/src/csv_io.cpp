// Copyright 2026 The hyperclr Authors
// SPDX-License-Identifier: Apache-2.0
#include "hyperclr/csv_io.hpp"

#include "hyperclr/errors.hpp"

#include <fmt/format.h>

#include <charconv>
#include <fstream>
#include <sstream>

namespace hyperclr {

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

void write_text_file(const std::filesystem::path& path, std::string_view content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError(fmt::format("cannot open '{}' for writing", path.string()));
    }
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) {
        throw IoError(fmt::format("failed writing '{}'", path.string()));
    }
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError(fmt::format("cannot open '{}' for reading", path.string()));
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

namespace {

std::vector<std::vector<double>> parse_rows(const std::filesystem::path& path) {
    const std::string text = read_text_file(path);
    std::vector<std::vector<double>> rows;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string::npos) {
            end = text.size();
        }
        std::string_view line(text.data() + pos, end - pos);
        pos = end + 1;
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.remove_suffix(1);
        }
        if (line.empty()) {
            continue;
        }
        std::vector<double> row;
        std::size_t c = 0;
        while (true) {
            std::size_t comma = line.find(',', c);
            std::string_view cell = line.substr(c, comma == std::string_view::npos ? std::string_view::npos : comma - c);
            while (!cell.empty() && cell.front() == ' ') cell.remove_prefix(1);
            while (!cell.empty() && cell.back() == ' ') cell.remove_suffix(1);
            double v = 0.0;
            const auto res = std::from_chars(cell.data(), cell.data() + cell.size(), v);
            if (cell.empty() || res.ec != std::errc{} || res.ptr != cell.data() + cell.size()) {
                throw ConfigError(fmt::format("{} line {}: '{}' is not a number", path.string(), line_no, cell));
            }
            row.push_back(v);
            if (comma == std::string_view::npos) {
                break;
            }
            c = comma + 1;
        }
        if (!rows.empty() && row.size() != rows.front().size()) {
            throw ConfigError(fmt::format("{} line {}: expected {} values, got {}", path.string(), line_no,
                                          rows.front().size(), row.size()));
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

Matrix to_matrix(const std::vector<std::vector<double>>& rows, std::size_t first) {
    const std::size_t cols = rows.empty() ? 0 : rows.front().size();
    Matrix m(static_cast<Eigen::Index>(rows.size() - first), static_cast<Eigen::Index>(cols));
    for (std::size_t i = first; i < rows.size(); ++i) {
        for (std::size_t j = 0; j < cols; ++j) {
            m(static_cast<Eigen::Index>(i - first), static_cast<Eigen::Index>(j)) = rows[i][j];
        }
    }
    return m;
}

void append_row(std::string& out, const double* values, Eigen::Index n) {
    for (Eigen::Index j = 0; j < n; ++j) {
        if (j > 0) {
            out += ',';
        }
        out += format_double(values[j]);
    }
    out += '\n';
}

}  // namespace

Matrix read_matrix_csv(const std::filesystem::path& path) {
    const auto rows = parse_rows(path);
    if (rows.empty()) {
        throw ConfigError(fmt::format("{} is empty", path.string()));
    }
    return to_matrix(rows, 0);
}

void write_matrix_csv(const std::filesystem::path& path, const Matrix& m) {
    std::string out;
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        append_row(out, m.row(i).data(), m.cols());
    }
    write_text_file(path, out);
}

GridAndRows read_spectra_csv(const std::filesystem::path& path) {
    const auto rows = parse_rows(path);
    if (rows.size() < 2) {
        throw ConfigError(fmt::format("{} needs a wavelength row and at least one spectrum", path.string()));
    }
    GridAndRows out;
    try {
        out.grid = make_grid(rows.front());
    } catch (const StructuralError& e) {
        throw ConfigError(fmt::format("{} line 1: {}", path.string(), e.what()));
    }
    out.rows = to_matrix(rows, 1);
    return out;
}

void write_spectra_csv(const std::filesystem::path& path, const WavelengthGrid& grid, const Matrix& rows) {
    if (static_cast<std::size_t>(rows.cols()) != grid.size()) {
        throw StructuralError("spectra columns do not match the grid");
    }
    std::string out;
    append_row(out, grid.values().data(), static_cast<Eigen::Index>(grid.size()));
    for (Eigen::Index i = 0; i < rows.rows(); ++i) {
        append_row(out, rows.row(i).data(), rows.cols());
    }
    write_text_file(path, out);
}

SpectralBatch read_dataset(const std::filesystem::path& spectra, const std::filesystem::path& labels) {
    GridAndRows s = read_spectra_csv(spectra);
    SpectralBatch batch;
    batch.grid = s.grid;
    batch.spectra = std::move(s.rows);
    if (!labels.empty()) {
        batch.labels = read_matrix_csv(labels);
        if (batch.labels->rows() != batch.spectra.rows()) {
            throw ConfigError(fmt::format("{} has {} rows but {} has {} spectra", labels.string(),
                                          batch.labels->rows(), spectra.string(), batch.spectra.rows()));
        }
    }
    batch.validate();
    return batch;
}

EndmemberSet read_endmembers_csv(const std::filesystem::path& path) {
    GridAndRows s = read_spectra_csv(path);
    EndmemberSet e{s.grid, std::move(s.rows)};
    try {
        e.validate();
    } catch (const StructuralError& err) {
        throw ConfigError(fmt::format("{}: {}", path.string(), err.what()));
    }
    return e;
}

void write_endmembers_csv(const std::filesystem::path& path, const EndmemberSet& endmembers) {
    write_spectra_csv(path, *endmembers.grid, endmembers.signatures);
}

void CsvTable::add_row(std::vector<std::string> cells) {
    if (cells.size() != header_.size()) {
        throw StructuralError(fmt::format("table row has {} cells for {} columns", cells.size(), header_.size()));
    }
    rows_.push_back(std::move(cells));
}

std::string CsvTable::str() const {
    auto join = [](const std::vector<std::string>& cells) {
        std::string s;
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i > 0) s += ',';
            s += cells[i];
        }
        s += '\n';
        return s;
    };
    std::string out = join(header_);
    for (const auto& r : rows_) {
        out += join(r);
    }
    return out;
}

void CsvTable::write(const std::filesystem::path& path) const {
    write_text_file(path, str());
}

}  // namespace hyperclr
