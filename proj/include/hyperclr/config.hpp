// Copyright 2026 The hyperclr Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "hyperclr/harness.hpp"
#include "hyperclr/synth.hpp"
#include "hyperclr/train.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace hyperclr {

struct DataPaths {
    std::filesystem::path spectra;     // empty: generate in memory from `generate`
    std::filesystem::path labels;
    std::filesystem::path checkpoint;  // evaluate input; empty means <out>/checkpoint.txt
};

struct GenerateConfig {
    std::size_t n_endmembers = 4;
    std::size_t bands = 224;
    double wavelength_min = 400.0;
    double wavelength_max = 2500.0;
    MixingConfig mixing;                 // seed is overwritten by RunConfig::seed
    std::filesystem::path endmembers;    // import instead of procedural generation
};

struct CombineConfig {
    /// Empty: reuse the sweep augmentations.
    std::vector<AugmentationSpec> augmentations;
    std::size_t max_len = 4;
    bool exhaust = false;
    ChainMode mode = ChainMode::Sequential;
};

/// Every setting of every subcommand. Command-line flags are applied on top of
/// a parsed document before `validate`.
struct RunConfig {
    std::uint64_t seed = 0;
    std::size_t threads = 1;
    std::filesystem::path out = ".";
    DataPaths data;
    GenerateConfig generate;
    TrainConfig train;   // train.seed mirrors `seed`
    SweepConfig sweep;   // sweep.base mirrors `train`
    CombineConfig combine;

    /// Copies the top-level seed and the train section into the nested configs.
    void resolve();
    void validate() const;
};

/// Default document: the synthetic protocol with all eight augmentations in the sweep.
RunConfig default_run_config();

/// Parses a config document on top of the defaults. Unknown keys and type
/// mismatches raise ConfigError naming the JSON path.
RunConfig parse_run_config(const nlohmann::json& doc);
RunConfig load_run_config(const std::filesystem::path& path);

nlohmann::json to_json(const RunConfig& config);
nlohmann::json to_json(const AugmentationSpec& spec);
AugmentationSpec spec_from_json(const nlohmann::json& j, const std::string& where);

/// Wavelength grid used by `generate` when no endmember file is given.
GridRef generation_grid(const GenerateConfig& config);

/// Hash of the resolved config, written into checkpoints.
std::uint64_t config_hash(const RunConfig& config);

}  // namespace hyperclr
