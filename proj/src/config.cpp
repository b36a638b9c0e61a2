// Copyright 2026 The hyperclr Authors
// SPDX-License-Identifier: Apache-2.0
#include "hyperclr/config.hpp"

#include "hyperclr/checkpoint.hpp"
#include "hyperclr/csv_io.hpp"
#include "hyperclr/errors.hpp"

#include <fmt/format.h>

#include <cmath>
#include <limits>
#include <set>

namespace hyperclr {

using nlohmann::json;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string join_path(const std::string& base, std::string_view key) {
    return base.empty() ? std::string(key) : fmt::format("{}.{}", base, key);
}

const json& require_object(const json& j, const std::string& where) {
    if (!j.is_object()) {
        throw ConfigError(fmt::format("{}: expected an object", where.empty() ? "config" : where));
    }
    return j;
}

void check_keys(const json& j, const std::string& where, std::initializer_list<std::string_view> allowed) {
    require_object(j, where);
    const std::set<std::string_view> keys(allowed);
    for (const auto& [key, value] : j.items()) {
        if (!keys.contains(key)) {
            throw ConfigError(fmt::format("{}: unknown field", join_path(where, key)));
        }
    }
}

double as_number(const json& v, const std::string& where, bool allow_inf = false) {
    if (allow_inf && v.is_string() && v.get<std::string>() == "inf") {
        return kInf;
    }
    if (!v.is_number()) {
        throw ConfigError(fmt::format("{}: expected a number{}", where, allow_inf ? " or \"inf\"" : ""));
    }
    const double x = v.get<double>();
    if (!std::isfinite(x)) {
        throw ConfigError(fmt::format("{}: must be finite", where));
    }
    return x;
}

std::uint64_t as_unsigned(const json& v, const std::string& where) {
    if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() && v.get<std::int64_t>() < 0)) {
        throw ConfigError(fmt::format("{}: expected a non-negative integer", where));
    }
    return v.get<std::uint64_t>();
}

template <typename T>
void read(const json& j, std::string_view key, const std::string& where, T& out) {
    if (!j.contains(key)) {
        return;
    }
    const json& v = j.at(std::string(key));
    const std::string path = join_path(where, key);
    if constexpr (std::is_same_v<T, bool>) {
        if (!v.is_boolean()) throw ConfigError(fmt::format("{}: expected true or false", path));
        out = v.get<bool>();
    } else if constexpr (std::is_same_v<T, double>) {
        out = as_number(v, path);
    } else if constexpr (std::is_integral_v<T>) {
        out = static_cast<T>(as_unsigned(v, path));
    } else if constexpr (std::is_same_v<T, std::filesystem::path>) {
        if (!v.is_string()) throw ConfigError(fmt::format("{}: expected a path string", path));
        out = v.get<std::string>();
    } else {
        static_assert(sizeof(T) == 0, "unsupported config field type");
    }
}

/// A range is [lo, hi] or a single number meaning [x, x].
Range as_range(const json& v, const std::string& where) {
    if (v.is_number()) {
        const double x = as_number(v, where);
        return {x, x};
    }
    if (!v.is_array() || v.size() != 2) {
        throw ConfigError(fmt::format("{}: expected [lo, hi] or a number", where));
    }
    return {as_number(v[0], where + "[0]"), as_number(v[1], where + "[1]")};
}

void read_range(const json& j, std::string_view key, const std::string& where, Range& out) {
    if (j.contains(key)) out = as_range(j.at(std::string(key)), join_path(where, key));
}

void read_range(const json& j, std::string_view key, const std::string& where, std::optional<Range>& out) {
    if (j.contains(key)) out = as_range(j.at(std::string(key)), join_path(where, key));
}

json range_json(const Range& r) { return json::array({r.lo, r.hi}); }

json number_or_inf(double x) { return std::isinf(x) ? json("inf") : json(x); }

std::vector<AugmentationSpec> specs_from_json(const json& v, const std::string& where) {
    if (!v.is_array()) {
        throw ConfigError(fmt::format("{}: expected an array of augmentations", where));
    }
    std::vector<AugmentationSpec> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        out.push_back(spec_from_json(v[i], fmt::format("{}[{}]", where, i)));
    }
    return out;
}

json specs_json(const std::vector<AugmentationSpec>& specs) {
    json a = json::array();
    for (const auto& s : specs) a.push_back(to_json(s));
    return a;
}

ChainMode mode_from_json(const json& v, const std::string& where) {
    if (!v.is_string()) throw ConfigError(fmt::format("{}: expected \"sequential\" or \"sample-one\"", where));
    try {
        return parse_chain_mode(v.get<std::string>());
    } catch (const ConfigError& e) {
        throw ConfigError(fmt::format("{}: {}", where, e.what()));
    }
}

std::vector<std::size_t> widths_from_json(const json& v, const std::string& where) {
    if (!v.is_array()) throw ConfigError(fmt::format("{}: expected an array of layer widths", where));
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        out.push_back(static_cast<std::size_t>(as_unsigned(v[i], fmt::format("{}[{}]", where, i))));
    }
    return out;
}

void parse_loss(const json& j, LossConfig& loss) {
    const std::string w = "train.loss";
    check_keys(j, w, {"tau", "alpha", "radius"});
    read(j, "tau", w, loss.tau);
    read(j, "alpha", w, loss.alpha);
    if (j.contains("radius")) loss.radius = as_number(j["radius"], w + ".radius", true);
}

void parse_train(const json& j, TrainConfig& t) {
    const std::string w = "train";
    check_keys(j, w, {"epochs", "batch_size", "lr", "train_fraction", "histogram_bins", "loss", "augmentations",
                      "mode"});
    read(j, "epochs", w, t.epochs);
    read(j, "batch_size", w, t.batch_size);
    read(j, "lr", w, t.lr);
    read(j, "train_fraction", w, t.train_fraction);
    read(j, "histogram_bins", w, t.histogram_bins);
    if (j.contains("loss")) parse_loss(j["loss"], t.loss);
    if (j.contains("augmentations")) t.chain.specs = specs_from_json(j["augmentations"], w + ".augmentations");
    if (j.contains("mode")) t.chain.mode = mode_from_json(j["mode"], w + ".mode");
}

void parse_model(const json& j, Architecture& a) {
    const std::string w = "model";
    check_keys(j, w, {"extractor", "head_hidden", "relu_features"});
    if (j.contains("extractor")) a.extractor = widths_from_json(j["extractor"], w + ".extractor");
    if (j.contains("head_hidden")) a.head_hidden = widths_from_json(j["head_hidden"], w + ".head_hidden");
    read(j, "relu_features", w, a.relu_features);
}

void parse_generate(const json& j, GenerateConfig& g) {
    const std::string w = "generate";
    check_keys(j, w, {"n_pixels", "n_endmembers", "bands", "wavelength_min", "wavelength_max", "snr_db",
                      "dirichlet_alpha", "endmembers"});
    read(j, "n_pixels", w, g.mixing.n_pixels);
    read(j, "n_endmembers", w, g.n_endmembers);
    read(j, "bands", w, g.bands);
    read(j, "wavelength_min", w, g.wavelength_min);
    read(j, "wavelength_max", w, g.wavelength_max);
    if (j.contains("snr_db")) g.mixing.snr_db = as_number(j["snr_db"], w + ".snr_db", true);
    if (j.contains("dirichlet_alpha")) {
        const json& a = j["dirichlet_alpha"];
        if (!a.is_array()) throw ConfigError("generate.dirichlet_alpha: expected an array of numbers");
        g.mixing.dirichlet_alpha.clear();
        for (std::size_t i = 0; i < a.size(); ++i) {
            g.mixing.dirichlet_alpha.push_back(as_number(a[i], fmt::format("generate.dirichlet_alpha[{}]", i)));
        }
    }
    read(j, "endmembers", w, g.endmembers);
}

std::string field_error(std::string_view field, const std::exception& e) {
    return fmt::format("{}: {}", field, e.what());
}

}  // namespace

AugmentationSpec spec_from_json(const json& j, const std::string& where) {
    AugmentationKind kind{};
    if (j.is_string()) {
        try {
            return AugmentationSpec::defaults(parse_kind(j.get<std::string>()));
        } catch (const ConfigError& e) {
            throw ConfigError(field_error(where, e));
        }
    }
    check_keys(j, where, {"kind", "params"});
    if (!j.contains("kind") || !j["kind"].is_string()) {
        throw ConfigError(fmt::format("{}.kind: expected an augmentation name", where));
    }
    try {
        kind = parse_kind(j["kind"].get<std::string>());
    } catch (const ConfigError& e) {
        throw ConfigError(field_error(where + ".kind", e));
    }
    const json params = j.contains("params") ? j["params"] : json::object();
    const std::string w = where + ".params";
    AugmentationSpec spec = AugmentationSpec::defaults(kind);
    switch (kind) {
        case AugmentationKind::Shift: {
            check_keys(params, w, {"delta_nm"});
            ShiftParams p;
            read_range(params, "delta_nm", w, p.delta_nm);
            spec = p;
            break;
        }
        case AugmentationKind::Flip:
            check_keys(params, w, {});
            break;
        case AugmentationKind::HapkeScattering: {
            check_keys(params, w, {"mu0", "mu1", "mu2"});
            HapkeParams p;
            read(params, "mu0", w, p.mu0);
            read_range(params, "mu1", w, p.mu1);
            read_range(params, "mu2", w, p.mu2);
            spec = p;
            break;
        }
        case AugmentationKind::Atmospheric: {
            check_keys(params, w, {"e_sun", "e_sky", "mu1", "mu2"});
            AtmosphericParams p;
            read_range(params, "e_sun", w, p.e_sun);
            read_range(params, "e_sky", w, p.e_sky);
            read_range(params, "mu1", w, p.mu1);
            read_range(params, "mu2", w, p.mu2);
            spec = p;
            break;
        }
        case AugmentationKind::Elastic: {
            check_keys(params, w, {"kernels", "amplitude_nm", "sigma_nm"});
            ElasticParams p;
            read(params, "kernels", w, p.kernels);
            read_range(params, "amplitude_nm", w, p.amplitude_nm);
            if (params.contains("sigma_nm")) p.sigma_nm = as_number(params["sigma_nm"], w + ".sigma_nm");
            spec = p;
            break;
        }
        case AugmentationKind::BandErasure: {
            check_keys(params, w, {"fraction"});
            BandErasureParams p;
            read_range(params, "fraction", w, p.fraction);
            spec = p;
            break;
        }
        case AugmentationKind::BandPermutation: {
            check_keys(params, w, {"min_blocks", "max_blocks"});
            BandPermutationParams p;
            read(params, "min_blocks", w, p.min_blocks);
            read(params, "max_blocks", w, p.max_blocks);
            spec = p;
            break;
        }
        case AugmentationKind::NearestNeighbor: {
            check_keys(params, w, {"k"});
            NearestNeighborParams p;
            read(params, "k", w, p.k);
            spec = p;
            break;
        }
    }
    try {
        spec.validate();
    } catch (const ConfigError& e) {
        throw ConfigError(field_error(w, e));
    }
    return spec;
}

json to_json(const AugmentationSpec& spec) {
    json params = json::object();
    std::visit(
        [&](const auto& p) {
            using P = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<P, ShiftParams>) {
                if (p.delta_nm) params["delta_nm"] = range_json(*p.delta_nm);
            } else if constexpr (std::is_same_v<P, HapkeParams>) {
                params["mu0"] = p.mu0;
                params["mu1"] = range_json(p.mu1);
                params["mu2"] = range_json(p.mu2);
            } else if constexpr (std::is_same_v<P, AtmosphericParams>) {
                params["e_sun"] = range_json(p.e_sun);
                params["e_sky"] = range_json(p.e_sky);
                params["mu1"] = range_json(p.mu1);
                params["mu2"] = range_json(p.mu2);
            } else if constexpr (std::is_same_v<P, ElasticParams>) {
                params["kernels"] = p.kernels;
                if (p.amplitude_nm) params["amplitude_nm"] = range_json(*p.amplitude_nm);
                if (p.sigma_nm) params["sigma_nm"] = *p.sigma_nm;
            } else if constexpr (std::is_same_v<P, BandErasureParams>) {
                params["fraction"] = range_json(p.fraction);
            } else if constexpr (std::is_same_v<P, BandPermutationParams>) {
                params["min_blocks"] = p.min_blocks;
                params["max_blocks"] = p.max_blocks;
            } else if constexpr (std::is_same_v<P, NearestNeighborParams>) {
                params["k"] = p.k;
            }
        },
        spec.params());
    return json{{"kind", std::string(to_string(spec.kind()))}, {"params", params}};
}

RunConfig default_run_config() {
    RunConfig c;
    for (AugmentationKind k : kAllKinds) {
        c.sweep.augmentations.push_back(AugmentationSpec::defaults(k));
    }
    c.train.chain.specs = {AugmentationSpec::defaults(AugmentationKind::Shift)};
    c.resolve();
    return c;
}

void RunConfig::resolve() {
    train.seed = seed;
    generate.mixing.seed = seed;
    sweep.base = train;
}

void RunConfig::validate() const {
    if (threads < 1) throw ConfigError("threads: must be at least 1");
    if (generate.n_endmembers < 2) throw ConfigError("generate.n_endmembers: must be at least 2");
    if (generate.bands < 2) throw ConfigError("generate.bands: must be at least 2");
    if (!(generate.wavelength_min > 0.0) || !(generate.wavelength_max > generate.wavelength_min)) {
        throw ConfigError("generate: need 0 < wavelength_min < wavelength_max");
    }
    try {
        generate.mixing.validate(generate.n_endmembers);
    } catch (const ConfigError& e) {
        throw ConfigError(field_error("generate", e));
    }
    if (data.spectra.empty() && !data.labels.empty()) {
        throw ConfigError("data.labels: given without data.spectra");
    }
    for (const auto& width : train.architecture.extractor) {
        if (width < 1) throw ConfigError("model.extractor: widths must be positive");
    }
    if (train.architecture.extractor.empty()) throw ConfigError("model.extractor: needs at least one layer");
    for (const auto& width : train.architecture.head_hidden) {
        if (width < 1) throw ConfigError("model.head_hidden: widths must be positive");
    }
    try {
        train.validate();
    } catch (const ConfigError& e) {
        throw ConfigError(field_error("train", e));
    }
    if (sweep.n_seeds < 1) throw ConfigError("sweep.n_seeds: must be at least 1");
    if (sweep.augmentations.empty()) throw ConfigError("sweep.augmentations: must not be empty");
    const auto& pool = combine.augmentations.empty() ? sweep.augmentations : combine.augmentations;
    if (combine.max_len < 1 || combine.max_len > pool.size()) {
        throw ConfigError(fmt::format("combine.max_len: {} must lie in [1, {}]", combine.max_len, pool.size()));
    }
}

RunConfig parse_run_config(const json& doc) {
    RunConfig c = default_run_config();
    check_keys(doc, "", {"seed", "threads", "out", "data", "generate", "model", "train", "sweep", "combine"});
    read(doc, "seed", "", c.seed);
    read(doc, "threads", "", c.threads);
    read(doc, "out", "", c.out);
    if (doc.contains("data")) {
        const json& d = doc["data"];
        check_keys(d, "data", {"spectra", "labels", "checkpoint"});
        read(d, "spectra", "data", c.data.spectra);
        read(d, "labels", "data", c.data.labels);
        read(d, "checkpoint", "data", c.data.checkpoint);
    }
    if (doc.contains("generate")) parse_generate(doc["generate"], c.generate);
    if (doc.contains("model")) parse_model(doc["model"], c.train.architecture);
    if (doc.contains("train")) parse_train(doc["train"], c.train);
    if (doc.contains("sweep")) {
        const json& s = doc["sweep"];
        check_keys(s, "sweep", {"augmentations", "n_seeds"});
        if (s.contains("augmentations")) c.sweep.augmentations = specs_from_json(s["augmentations"], "sweep.augmentations");
        read(s, "n_seeds", "sweep", c.sweep.n_seeds);
    }
    if (doc.contains("combine")) {
        const json& s = doc["combine"];
        check_keys(s, "combine", {"augmentations", "max_len", "exhaust", "mode"});
        if (s.contains("augmentations")) {
            c.combine.augmentations = specs_from_json(s["augmentations"], "combine.augmentations");
        }
        read(s, "max_len", "combine", c.combine.max_len);
        read(s, "exhaust", "combine", c.combine.exhaust);
        if (s.contains("mode")) c.combine.mode = mode_from_json(s["mode"], "combine.mode");
    }
    c.resolve();
    return c;
}

RunConfig load_run_config(const std::filesystem::path& path) {
    const std::string text = read_text_file(path);
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(fmt::format("{}: invalid JSON: {}", path.string(), e.what()));
    }
    return parse_run_config(doc);
}

json to_json(const RunConfig& c) {
    json j;
    j["seed"] = c.seed;
    j["threads"] = c.threads;
    j["out"] = c.out.string();
    j["data"] = {{"spectra", c.data.spectra.string()},
                 {"labels", c.data.labels.string()},
                 {"checkpoint", c.data.checkpoint.string()}};
    j["generate"] = {{"n_pixels", c.generate.mixing.n_pixels},
                     {"n_endmembers", c.generate.n_endmembers},
                     {"bands", c.generate.bands},
                     {"wavelength_min", c.generate.wavelength_min},
                     {"wavelength_max", c.generate.wavelength_max},
                     {"snr_db", number_or_inf(c.generate.mixing.snr_db)},
                     {"dirichlet_alpha", c.generate.mixing.dirichlet_alpha},
                     {"endmembers", c.generate.endmembers.string()}};
    j["model"] = {{"extractor", c.train.architecture.extractor},
                  {"head_hidden", c.train.architecture.head_hidden},
                  {"relu_features", c.train.architecture.relu_features}};
    j["train"] = {{"epochs", c.train.epochs},
                  {"batch_size", c.train.batch_size},
                  {"lr", c.train.lr},
                  {"train_fraction", c.train.train_fraction},
                  {"histogram_bins", c.train.histogram_bins},
                  {"loss",
                   {{"tau", c.train.loss.tau},
                    {"alpha", c.train.loss.alpha},
                    {"radius", number_or_inf(c.train.loss.radius)}}},
                  {"augmentations", specs_json(c.train.chain.specs)},
                  {"mode", std::string(to_string(c.train.chain.mode))}};
    j["sweep"] = {{"augmentations", specs_json(c.sweep.augmentations)}, {"n_seeds", c.sweep.n_seeds}};
    j["combine"] = {{"augmentations", specs_json(c.combine.augmentations)},
                    {"max_len", c.combine.max_len},
                    {"exhaust", c.combine.exhaust},
                    {"mode", std::string(to_string(c.combine.mode))}};
    return j;
}

GridRef generation_grid(const GenerateConfig& config) {
    const auto g = WavelengthGrid::uniform(config.wavelength_min, config.wavelength_max, config.bands);
    return make_grid({g.values().begin(), g.values().end()});
}

std::uint64_t config_hash(const RunConfig& config) {
    return fnv1a64(to_json(config).dump());
}

}  // namespace hyperclr
