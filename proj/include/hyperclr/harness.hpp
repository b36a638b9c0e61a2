// Copyright 2026 The hyperclr Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "hyperclr/csv_io.hpp"
#include "hyperclr/train.hpp"

#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

namespace hyperclr {

/// Seed of replicate `k` of a multi-seed experiment.
std::uint64_t replicate_seed(std::uint64_t base_seed, std::size_t k) noexcept;

/// Stable text key of a spec including its parameters.
std::string describe(const AugmentationSpec& spec);

struct RunRecord {
    std::size_t replicate = 0;
    std::uint64_t seed = 0;
    double r2 = 0.0;
    double mae = 0.0;
    double mean_error = 0.0;
};

/// One chain (or the alpha = 0 baseline) evaluated over n seeds.
struct ChainScore {
    std::string name;  // "Baseline" or the chain name
    bool baseline = false;
    double mean_r2 = 0.0;
    double std_r2 = 0.0;  // population std
    double mean_mae = 0.0;
    double std_mae = 0.0;
    double mean_abs_bias = 0.0;  // mean over seeds of |mean signed error|
    std::vector<RunRecord> runs;
};

/// Memoises chain scores across sweep and combination study. Keys cover the
/// chain specs, mode and seed count; callers must use one cache per
/// (dataset, base config).
class ScoreCache {
public:
    std::optional<ChainScore> find(const std::string& key) const;
    void store(const std::string& key, const ChainScore& score);
    std::size_t size() const;

private:
    mutable std::mutex mutex_;
    std::map<std::string, ChainScore> scores_;
};

struct ExperimentOptions {
    std::size_t n_seeds = 3;
    /// Concurrent training runs; each run is itself single-threaded.
    std::size_t threads = 1;
    ScoreCache* cache = nullptr;
};

/// Trains `base` with `specs` as the chain (empty specs = alpha 0 baseline)
/// once per replicate seed and aggregates.
ChainScore score_chain(const SpectralBatch& dataset, const TrainConfig& base,
                       const std::vector<AugmentationSpec>& specs, ChainMode mode,
                       const ExperimentOptions& options);

struct SweepConfig {
    TrainConfig base;
    std::vector<AugmentationSpec> augmentations;
    std::size_t n_seeds = 3;

    void validate() const;
};

/// Baseline plus one row per augmentation, sorted by mean R2 descending.
std::vector<ChainScore> run_sweep(const SweepConfig& config, const SpectralBatch& dataset,
                                  std::size_t threads = 1, ScoreCache* cache = nullptr);

struct CombinationRound {
    std::size_t round = 0;
    std::vector<AugmentationSpec> chain;
    std::string name;
    double r2 = 0.0;
    std::optional<double> delta_r2;  // absent for round 1
    std::size_t candidates_evaluated = 0;
};

struct CombinationState {
    std::vector<AugmentationSpec> selected;
    std::vector<AugmentationSpec> candidates;
    std::vector<CombinationRound> history;
};

struct CombinationOptions {
    std::size_t max_len = 4;
    /// Keep going to max_len even when a round does not improve.
    bool exhaust = false;
    ChainMode mode = ChainMode::Sequential;
    ExperimentOptions experiment;
};

/// Greedy forward selection. Round 1 keeps the best single spec; each later
/// round appends the best remaining spec. Without `exhaust`, a round whose best
/// delta R2 is <= 0 is discarded and ends the search.
CombinationState run_combination_study(const SpectralBatch& dataset, const TrainConfig& base,
                                       const std::vector<AugmentationSpec>& specs,
                                       const CombinationOptions& options);

CsvTable sweep_table(const std::vector<ChainScore>& rows, std::size_t n_seeds);
CsvTable sweep_runs_table(const std::vector<ChainScore>& rows);
CsvTable combination_table(const CombinationState& state, std::size_t n_seeds);
std::string format_sweep_summary(const std::vector<ChainScore>& rows);
std::string format_combination_summary(const CombinationState& state);

}  // namespace hyperclr
