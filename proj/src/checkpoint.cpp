// Copyright 2026 The hyperclr Authors
// SPDX-License-Identifier: Apache-2.0
#include "hyperclr/checkpoint.hpp"

#include "hyperclr/csv_io.hpp"
#include "hyperclr/errors.hpp"

#include <fmt/format.h>

#include <charconv>
#include <sstream>

namespace hyperclr {

std::uint64_t fnv1a64(std::string_view text) noexcept {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string serialize_checkpoint(const Checkpoint& ckpt) {
    const NetworkParams& p = ckpt.params;
    std::string out = "hyperclr-checkpoint 1\n";
    out += fmt::format("config_hash {:016x}\n", ckpt.config_hash);
    out += fmt::format("relu_features {}\n", p.relu_features ? 1 : 0);
    out += fmt::format("layers {} {}\n", p.extractor.size(), p.head.size());
    auto row = [&](const double* v, Eigen::Index n) {
        for (Eigen::Index j = 0; j < n; ++j) {
            if (j > 0) out += ',';
            out += format_double(v[j]);
        }
        out += '\n';
    };
    for (std::size_t i = 0; i < p.layer_count(); ++i) {
        const LayerParams& l = p.layer(i);
        out += fmt::format("layer {} {} {}\n", i, l.outputs(), l.inputs());
        for (Eigen::Index r = 0; r < l.weights.rows(); ++r) {
            row(l.weights.row(r).data(), l.weights.cols());
        }
        row(l.biases.data(), l.biases.size());
    }
    return out;
}

namespace {

class LineReader {
public:
    explicit LineReader(std::string_view text) : text_(text) {}

    std::string_view next() {
        if (pos_ >= text_.size()) {
            throw ConfigError(fmt::format("checkpoint truncated after line {}", line_));
        }
        std::size_t end = text_.find('\n', pos_);
        if (end == std::string_view::npos) end = text_.size();
        std::string_view l = text_.substr(pos_, end - pos_);
        pos_ = end + 1;
        ++line_;
        return l;
    }
    std::size_t line() const { return line_; }

private:
    std::string_view text_;
    std::size_t pos_ = 0;
    std::size_t line_ = 0;
};

std::vector<double> parse_values(std::string_view line, std::size_t expected, std::size_t line_no) {
    std::vector<double> v;
    v.reserve(expected);
    const char* p = line.data();
    const char* end = line.data() + line.size();
    while (p < end) {
        double x = 0.0;
        auto res = std::from_chars(p, end, x);
        if (res.ec != std::errc{}) {
            throw ConfigError(fmt::format("checkpoint line {}: bad number", line_no));
        }
        v.push_back(x);
        p = res.ptr;
        if (p < end) {
            if (*p != ',') throw ConfigError(fmt::format("checkpoint line {}: expected ','", line_no));
            ++p;
        }
    }
    if (v.size() != expected) {
        throw ConfigError(fmt::format("checkpoint line {}: expected {} values, got {}", line_no, expected, v.size()));
    }
    return v;
}

}  // namespace

Checkpoint parse_checkpoint(std::string_view text) {
    LineReader r(text);
    if (r.next() != "hyperclr-checkpoint 1") {
        throw ConfigError("not a hyperclr checkpoint (bad magic line)");
    }
    Checkpoint ck;
    {
        std::istringstream ss{std::string(r.next())};
        std::string key, hex;
        ss >> key >> hex;
        if (key != "config_hash" || hex.size() != 16) throw ConfigError("checkpoint line 2: expected config_hash");
        ck.config_hash = std::stoull(hex, nullptr, 16);
    }
    {
        std::istringstream ss{std::string(r.next())};
        std::string key;
        int flag = -1;
        ss >> key >> flag;
        if (key != "relu_features" || (flag != 0 && flag != 1)) throw ConfigError("checkpoint line 3: expected relu_features");
        ck.params.relu_features = flag == 1;
    }
    std::size_t n_ext = 0, n_head = 0;
    {
        std::istringstream ss{std::string(r.next())};
        std::string key;
        ss >> key >> n_ext >> n_head;
        if (key != "layers" || n_ext < 1 || n_head < 1) throw ConfigError("checkpoint line 4: expected layer counts");
    }
    for (std::size_t i = 0; i < n_ext + n_head; ++i) {
        std::istringstream ss{std::string(r.next())};
        std::string key;
        std::size_t idx = 0, out = 0, in = 0;
        ss >> key >> idx >> out >> in;
        if (key != "layer" || idx != i || out < 1 || in < 1) {
            throw ConfigError(fmt::format("checkpoint line {}: expected header for layer {}", r.line(), i));
        }
        LayerParams l{Matrix(static_cast<Eigen::Index>(out), static_cast<Eigen::Index>(in)),
                      Vector(static_cast<Eigen::Index>(out))};
        for (std::size_t row = 0; row < out; ++row) {
            const auto v = parse_values(r.next(), in, r.line());
            for (std::size_t c = 0; c < in; ++c) {
                l.weights(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(c)) = v[c];
            }
        }
        const auto b = parse_values(r.next(), out, r.line());
        for (std::size_t c = 0; c < out; ++c) {
            l.biases(static_cast<Eigen::Index>(c)) = b[c];
        }
        (i < n_ext ? ck.params.extractor : ck.params.head).push_back(std::move(l));
    }
    try {
        ck.params.validate();
    } catch (const StructuralError& e) {
        throw ConfigError(fmt::format("checkpoint: {}", e.what()));
    }
    return ck;
}

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& ckpt) {
    write_text_file(path, serialize_checkpoint(ckpt));
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
    return parse_checkpoint(read_text_file(path));
}

}  // namespace hyperclr
