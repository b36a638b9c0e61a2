// Copyright 2026 The hyperclr Authors
// SPDX-License-Identifier: Apache-2.0
#include "hyperclr/harness.hpp"

#include "hyperclr/csv_io.hpp"
#include "hyperclr/errors.hpp"
#include "hyperclr/rng.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <functional>
#include <thread>

namespace hyperclr {

std::uint64_t replicate_seed(std::uint64_t base_seed, std::size_t k) noexcept {
    return derive_seed(base_seed, Stream::Replicate, {static_cast<std::uint64_t>(k)});
}

namespace {

std::string range_str(const Range& r) {
    return fmt::format("[{},{}]", format_double(r.lo), format_double(r.hi));
}

std::string opt_range_str(const std::optional<Range>& r) {
    return r ? range_str(*r) : "default";
}

struct Describer {
    std::string operator()(const ShiftParams& p) const { return fmt::format("delta_nm={}", opt_range_str(p.delta_nm)); }
    std::string operator()(const FlipParams&) const { return ""; }
    std::string operator()(const HapkeParams& p) const {
        return fmt::format("mu0={},mu1={},mu2={}", format_double(p.mu0), range_str(p.mu1), range_str(p.mu2));
    }
    std::string operator()(const AtmosphericParams& p) const {
        return fmt::format("e_sun={},e_sky={},mu1={},mu2={}", range_str(p.e_sun), range_str(p.e_sky),
                           range_str(p.mu1), range_str(p.mu2));
    }
    std::string operator()(const ElasticParams& p) const {
        return fmt::format("kernels={},amplitude_nm={},sigma_nm={}", p.kernels, opt_range_str(p.amplitude_nm),
                           p.sigma_nm ? format_double(*p.sigma_nm) : "default");
    }
    std::string operator()(const BandErasureParams& p) const { return fmt::format("fraction={}", range_str(p.fraction)); }
    std::string operator()(const BandPermutationParams& p) const {
        return fmt::format("blocks=[{},{}]", p.min_blocks, p.max_blocks);
    }
    std::string operator()(const NearestNeighborParams& p) const { return fmt::format("k={}", p.k); }
};

std::string chain_key(const std::vector<AugmentationSpec>& specs, ChainMode mode, std::size_t n_seeds) {
    if (specs.empty()) {
        return fmt::format("Baseline|{}", n_seeds);
    }
    std::string key = fmt::format("{}|{}", to_string(mode), n_seeds);
    for (const auto& s : specs) {
        key += '|';
        key += describe(s);
    }
    return key;
}

std::string chain_name(const std::vector<AugmentationSpec>& specs) {
    if (specs.empty()) {
        return "Baseline";
    }
    AugmentationChain c;
    c.specs = specs;
    return c.name();
}

/// Runs fn(i) for i in [0, n) on up to `threads` workers; first exception wins.
void parallel_for(std::size_t n, std::size_t threads, const std::function<void(std::size_t)>& fn) {
    threads = std::max<std::size_t>(1, std::min(threads, n));
    if (threads == 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < threads; ++t) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < n; i = next++) {
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard lock(error_mutex);
                    if (!error) error = std::current_exception();
                }
            }
        });
    }
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

double population_std(const std::vector<double>& v, double mean) {
    double s = 0.0;
    for (double x : v) s += (x - mean) * (x - mean);
    return std::sqrt(s / static_cast<double>(v.size()));
}

ChainScore aggregate(std::string name, bool baseline, std::vector<RunRecord> runs) {
    ChainScore s;
    s.name = std::move(name);
    s.baseline = baseline;
    std::vector<double> r2, mae;
    double bias = 0.0;
    for (const auto& r : runs) {
        r2.push_back(r.r2);
        mae.push_back(r.mae);
        bias += std::abs(r.mean_error);
    }
    const double n = static_cast<double>(runs.size());
    double sum_r2 = 0.0, sum_mae = 0.0;
    for (std::size_t i = 0; i < runs.size(); ++i) {
        sum_r2 += r2[i];
        sum_mae += mae[i];
    }
    s.mean_r2 = sum_r2 / n;
    s.mean_mae = sum_mae / n;
    s.std_r2 = population_std(r2, s.mean_r2);
    s.std_mae = population_std(mae, s.mean_mae);
    s.mean_abs_bias = bias / n;
    s.runs = std::move(runs);
    return s;
}

}  // namespace

std::string describe(const AugmentationSpec& spec) {
    return fmt::format("{}{{{}}}", to_string(spec.kind()), std::visit(Describer{}, spec.params()));
}

std::optional<ChainScore> ScoreCache::find(const std::string& key) const {
    std::lock_guard lock(mutex_);
    const auto it = scores_.find(key);
    if (it == scores_.end()) return std::nullopt;
    return it->second;
}

void ScoreCache::store(const std::string& key, const ChainScore& score) {
    std::lock_guard lock(mutex_);
    scores_.insert_or_assign(key, score);
}

std::size_t ScoreCache::size() const {
    std::lock_guard lock(mutex_);
    return scores_.size();
}

namespace {

/// Scores many chains, sharing one worker pool across all their seeds.
std::vector<ChainScore> score_chains(const SpectralBatch& dataset, const TrainConfig& base,
                                     const std::vector<std::vector<AugmentationSpec>>& chains, ChainMode mode,
                                     const ExperimentOptions& options) {
    if (options.n_seeds < 1) {
        throw ConfigError("n_seeds must be at least 1");
    }
    const std::size_t n_seeds = options.n_seeds;
    std::vector<std::optional<ChainScore>> cached(chains.size());
    std::vector<std::size_t> pending;
    for (std::size_t c = 0; c < chains.size(); ++c) {
        if (options.cache) {
            cached[c] = options.cache->find(chain_key(chains[c], mode, n_seeds));
        }
        if (!cached[c]) pending.push_back(c);
    }

    std::vector<RunRecord> records(pending.size() * n_seeds);
    parallel_for(records.size(), options.threads, [&](std::size_t job) {
        const auto& specs = chains[pending[job / n_seeds]];
        const std::size_t k = job % n_seeds;
        TrainConfig cfg = base;
        cfg.seed = replicate_seed(base.seed, k);
        if (specs.empty()) {
            cfg.loss.alpha = 0.0;
            cfg.chain.specs.clear();
        } else {
            cfg.chain.specs = specs;
            cfg.chain.mode = mode;
        }
        const TrainResult res = train(dataset, cfg);
        records[job] = RunRecord{k, cfg.seed, res.report.r2, res.report.mae, res.report.mean_error};
    });

    std::vector<ChainScore> out(chains.size());
    for (std::size_t c = 0; c < chains.size(); ++c) {
        if (cached[c]) out[c] = *cached[c];
    }
    for (std::size_t p = 0; p < pending.size(); ++p) {
        const std::size_t c = pending[p];
        std::vector<RunRecord> runs(records.begin() + static_cast<std::ptrdiff_t>(p * n_seeds),
                                    records.begin() + static_cast<std::ptrdiff_t>((p + 1) * n_seeds));
        out[c] = aggregate(chain_name(chains[c]), chains[c].empty(), std::move(runs));
        if (options.cache) {
            options.cache->store(chain_key(chains[c], mode, n_seeds), out[c]);
        }
    }
    return out;
}

}  // namespace

ChainScore score_chain(const SpectralBatch& dataset, const TrainConfig& base,
                       const std::vector<AugmentationSpec>& specs, ChainMode mode,
                       const ExperimentOptions& options) {
    return score_chains(dataset, base, {specs}, mode, options).front();
}

void SweepConfig::validate() const {
    if (augmentations.empty()) {
        throw ConfigError("sweep needs at least one augmentation");
    }
    if (n_seeds < 1) {
        throw ConfigError("n_seeds must be at least 1");
    }
    for (const auto& a : augmentations) {
        a.validate();
    }
}

std::vector<ChainScore> run_sweep(const SweepConfig& config, const SpectralBatch& dataset, std::size_t threads,
                                  ScoreCache* cache) {
    config.validate();
    if (!dataset.has_labels()) {
        throw ConfigError("sweep needs a labelled dataset");
    }
    std::vector<std::vector<AugmentationSpec>> chains;
    chains.emplace_back();  // baseline
    for (const auto& a : config.augmentations) {
        chains.push_back({a});
    }
    std::vector<ChainScore> rows =
        score_chains(dataset, config.base, chains, ChainMode::Sequential, {config.n_seeds, threads, cache});
    std::stable_sort(rows.begin(), rows.end(),
                     [](const ChainScore& a, const ChainScore& b) { return a.mean_r2 > b.mean_r2; });
    return rows;
}

CombinationState run_combination_study(const SpectralBatch& dataset, const TrainConfig& base,
                                       const std::vector<AugmentationSpec>& specs,
                                       const CombinationOptions& options) {
    if (specs.size() < 2) {
        throw ConfigError("combination study needs at least two specs");
    }
    if (options.max_len < 1 || options.max_len > specs.size()) {
        throw ConfigError(fmt::format("max_len {} must lie in [1, {}]", options.max_len, specs.size()));
    }
    for (const auto& s : specs) {
        s.validate();
    }
    CombinationState state;
    state.candidates = specs;

    for (std::size_t round = 1; round <= options.max_len; ++round) {
        std::vector<std::vector<AugmentationSpec>> chains;
        for (const auto& cand : state.candidates) {
            auto chain = state.selected;
            chain.push_back(cand);
            chains.push_back(std::move(chain));
        }
        // A single spec behaves identically in either mode; score round 1 as
        // sequential so it shares cache entries with the sweep.
        const ChainMode mode = round == 1 ? ChainMode::Sequential : options.mode;
        const auto scores = score_chains(dataset, base, chains, mode, options.experiment);
        std::size_t best = 0;
        for (std::size_t i = 1; i < scores.size(); ++i) {
            if (scores[i].mean_r2 > scores[best].mean_r2) best = i;
        }
        CombinationRound rec;
        rec.round = round;
        rec.chain = chains[best];
        rec.name = chain_name(rec.chain);
        rec.r2 = scores[best].mean_r2;
        rec.candidates_evaluated = chains.size();
        if (!state.history.empty()) {
            rec.delta_r2 = rec.r2 - state.history.back().r2;
            if (!options.exhaust && !(*rec.delta_r2 > 0.0)) {
                break;
            }
        }
        state.selected = rec.chain;
        state.candidates.erase(state.candidates.begin() + static_cast<std::ptrdiff_t>(best));
        state.history.push_back(std::move(rec));
    }
    return state;
}

CsvTable sweep_table(const std::vector<ChainScore>& rows, std::size_t n_seeds) {
    CsvTable t({"augmentation", "mean_r2", "std_r2", "mean_mae", "std_mae", "n_seeds"});
    for (const auto& r : rows) {
        t.add_row({r.name, format_double(r.mean_r2), format_double(r.std_r2), format_double(r.mean_mae),
                   format_double(r.std_mae), std::to_string(n_seeds)});
    }
    return t;
}

CsvTable sweep_runs_table(const std::vector<ChainScore>& rows) {
    CsvTable t({"run_id", "seed", "augmentation", "r2", "mae"});
    std::size_t id = 0;
    for (const auto& r : rows) {
        for (const auto& run : r.runs) {
            t.add_row({std::to_string(id++), std::to_string(run.seed), r.name, format_double(run.r2),
                       format_double(run.mae)});
        }
    }
    return t;
}

CsvTable combination_table(const CombinationState& state, std::size_t n_seeds) {
    CsvTable t({"round", "chain", "r2", "delta_r2", "n_seeds"});
    for (const auto& h : state.history) {
        t.add_row({std::to_string(h.round), h.name, format_double(h.r2),
                   h.delta_r2 ? format_double(*h.delta_r2) : std::string(), std::to_string(n_seeds)});
    }
    return t;
}

std::string format_sweep_summary(const std::vector<ChainScore>& rows) {
    std::string s = fmt::format("{:<20} {:>16} {:>16}\n", "augmentation", "R2", "MAE");
    for (const auto& r : rows) {
        s += fmt::format("{:<20} {:>8.4f} ± {:<6.4f} {:>8.4f} ± {:<6.4f}\n", r.name, r.mean_r2, r.std_r2,
                         r.mean_mae, r.std_mae);
    }
    return s;
}

std::string format_combination_summary(const CombinationState& state) {
    std::string s = fmt::format("{:<6} {:<60} {:>8} {:>9}\n", "round", "chain", "R2", "dR2");
    for (const auto& h : state.history) {
        s += fmt::format("{:<6} {:<60} {:>8.4f} {:>9}\n", h.round, h.name, h.r2,
                         h.delta_r2 ? fmt::format("{:+.4f}", *h.delta_r2) : std::string("-"));
    }
    return s;
}

}  // namespace hyperclr
