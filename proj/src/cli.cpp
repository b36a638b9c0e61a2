// Copyright 2026 The hyperclr Authors
// SPDX-License-Identifier: Apache-2.0
#include "hyperclr/cli.hpp"

#include "hyperclr/checkpoint.hpp"
#include "hyperclr/csv_io.hpp"
#include "hyperclr/errors.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>

#include <algorithm>
#include <optional>

namespace hyperclr {

namespace fs = std::filesystem;

int exit_code_for(const std::exception& e) noexcept {
    if (dynamic_cast<const IoError*>(&e)) return kExitIo;
    if (dynamic_cast<const NumericError*>(&e)) return kExitNumeric;
    if (dynamic_cast<const ConfigError*>(&e) || dynamic_cast<const StructuralError*>(&e)) return kExitConfig;
    if (dynamic_cast<const nlohmann::json::exception*>(&e)) return kExitConfig;
    return 1;
}

namespace {

void require_out_dir(const RunConfig& c) {
    std::error_code ec;
    if (!fs::is_directory(c.out, ec)) {
        throw IoError(fmt::format("output directory '{}' does not exist", c.out.string()));
    }
}

void echo_config(const RunConfig& c) {
    write_text_file(c.out / "run_config.json", to_json(c).dump(2) + "\n");
}

EndmemberSet make_endmembers(const RunConfig& c) {
    if (!c.generate.endmembers.empty()) {
        return read_endmembers_csv(c.generate.endmembers);
    }
    return generate_endmembers(c.generate.n_endmembers, generation_grid(c.generate), c.seed);
}

struct Generated {
    EndmemberSet endmembers;
    SpectralBatch dataset;
};

Generated generate(const RunConfig& c) {
    EndmemberSet em = make_endmembers(c);
    try {
        c.generate.mixing.validate(em.count());
    } catch (const ConfigError& e) {
        throw ConfigError(fmt::format("generate: {}", e.what()));
    }
    SpectralBatch data = generate_dataset(c.generate.mixing, em);
    return {std::move(em), std::move(data)};
}

std::string chain_label(const TrainConfig& t) {
    if (t.loss.alpha == 0.0 || t.chain.specs.empty()) return "Baseline";
    return t.chain.name();
}

CsvTable metrics_table(std::uint64_t seed, const std::string& label, const MetricsReport& r) {
    CsvTable t({"run_id", "seed", "augmentation", "r2", "mae"});
    t.add_row({"0", std::to_string(seed), label, format_double(r.r2), format_double(r.mae)});
    return t;
}

CsvTable histogram_table(const Histogram& h) {
    CsvTable t({"bin_left", "bin_right", "count"});
    for (std::size_t i = 0; i < h.counts.size(); ++i) {
        t.add_row({format_double(h.edges[i]), format_double(h.edges[i + 1]), std::to_string(h.counts[i])});
    }
    return t;
}

CsvTable losses_table(const std::vector<EpochLoss>& losses) {
    CsvTable t({"epoch", "regression", "contrastive"});
    for (std::size_t i = 0; i < losses.size(); ++i) {
        t.add_row({std::to_string(i + 1), format_double(losses[i].regression), format_double(losses[i].contrastive)});
    }
    return t;
}

fs::path checkpoint_path(const RunConfig& c) {
    return c.data.checkpoint.empty() ? c.out / "checkpoint.txt" : c.data.checkpoint;
}

const std::vector<AugmentationSpec>& combine_pool(const RunConfig& c) {
    return c.combine.augmentations.empty() ? c.sweep.augmentations : c.combine.augmentations;
}

}  // namespace

SpectralBatch load_or_generate(const RunConfig& config) {
    if (config.data.spectra.empty()) {
        return generate(config).dataset;
    }
    return read_dataset(config.data.spectra, config.data.labels);
}

void cmd_generate(const RunConfig& c, std::ostream& out) {
    require_out_dir(c);
    const Generated g = generate(c);
    write_spectra_csv(c.out / "spectra.csv", *g.dataset.grid, g.dataset.spectra);
    write_matrix_csv(c.out / "labels.csv", *g.dataset.labels);
    write_endmembers_csv(c.out / "endmembers.csv", g.endmembers);
    echo_config(c);
    out << fmt::format("generated N={} b={} s={} snr_db={}\n", g.dataset.size(), g.dataset.bands(),
                       g.dataset.outputs(), format_double(c.generate.mixing.snr_db));
}

void cmd_train(const RunConfig& c, std::ostream& out) {
    require_out_dir(c);
    const SpectralBatch data = load_or_generate(c);
    const TrainResult res = train(data, c.train);
    save_checkpoint(c.out / "checkpoint.txt", Checkpoint{res.params, config_hash(c)});
    metrics_table(c.seed, chain_label(c.train), res.report).write(c.out / "metrics.csv");
    losses_table(res.report.per_epoch_losses).write(c.out / "losses.csv");
    histogram_table(res.report.error_histogram).write(c.out / "histogram.csv");
    echo_config(c);
    out << fmt::format("{}: test R2={:.6f} MAE={:.6f} mean_error={:.6f} (N_test={})\n", chain_label(c.train),
                       res.report.r2, res.report.mae, res.report.mean_error, res.report.n_samples);
}

void cmd_evaluate(const RunConfig& c, std::ostream& out) {
    require_out_dir(c);
    const Checkpoint ck = load_checkpoint(checkpoint_path(c));
    const SpectralBatch data = load_or_generate(c);
    if (ck.params.inputs() != data.bands()) {
        throw ConfigError(fmt::format("checkpoint expects {} bands but the dataset has {}", ck.params.inputs(),
                                      data.bands()));
    }
    const MetricsReport r = evaluate(ck.params, data, c.train.histogram_bins);
    metrics_table(c.seed, chain_label(c.train), r).write(c.out / "eval_metrics.csv");
    histogram_table(r.error_histogram).write(c.out / "eval_histogram.csv");
    echo_config(c);
    out << fmt::format("evaluated {} samples: R2={:.6f} MAE={:.6f} mean_error={:.6f} (checkpoint config_hash {:016x})\n",
                       r.n_samples, r.r2, r.mae, r.mean_error, ck.config_hash);
}

void cmd_sweep(const RunConfig& c, std::ostream& out) {
    require_out_dir(c);
    const SpectralBatch data = load_or_generate(c);
    const auto rows = run_sweep(c.sweep, data, c.threads);
    sweep_table(rows, c.sweep.n_seeds).write(c.out / "sweep.csv");
    sweep_runs_table(rows).write(c.out / "sweep_runs.csv");
    echo_config(c);
    out << format_sweep_summary(rows);
}

void cmd_combine(const RunConfig& c, std::ostream& out) {
    require_out_dir(c);
    const SpectralBatch data = load_or_generate(c);
    CombinationOptions opt;
    opt.max_len = c.combine.max_len;
    opt.exhaust = c.combine.exhaust;
    opt.mode = c.combine.mode;
    opt.experiment = {c.sweep.n_seeds, c.threads, nullptr};
    const CombinationState state = run_combination_study(data, c.train, combine_pool(c), opt);
    combination_table(state, c.sweep.n_seeds).write(c.out / "combination.csv");
    echo_config(c);
    out << format_combination_summary(state);
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Contrastive regression for hyperspectral abundance estimation"};
    app.require_subcommand(1);

    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out_dir;
    std::optional<std::size_t> threads;
    std::optional<std::string> spectra, labels, checkpoint;
    std::optional<double> alpha;
    std::optional<std::size_t> n_seeds, max_len;
    bool exhaust = false;

    app.add_option("--config", config_path, "JSON run config");
    app.add_option("--seed", seed, "top-level seed (config: seed)");
    app.add_option("--out", out_dir, "existing output directory (config: out)");
    app.add_option("--threads", threads, "concurrent training runs in sweep/combine (config: threads)");

    auto add_data = [&](CLI::App* sub) {
        sub->add_option("--spectra", spectra, "spectra CSV (config: data.spectra)");
        sub->add_option("--labels", labels, "labels CSV (config: data.labels)");
    };
    CLI::App* gen = app.add_subcommand("generate", "write a synthetic dataset");
    CLI::App* tr = app.add_subcommand("train", "train one model and report test metrics");
    add_data(tr);
    tr->add_option("--alpha", alpha, "contrastive weight, 0 for the baseline (config: train.loss.alpha)");
    CLI::App* ev = app.add_subcommand("evaluate", "metrics of a checkpoint on a dataset");
    add_data(ev);
    ev->add_option("--checkpoint", checkpoint, "checkpoint file (config: data.checkpoint)");
    CLI::App* sw = app.add_subcommand("sweep", "baseline plus one run set per augmentation");
    add_data(sw);
    sw->add_option("--n-seeds", n_seeds, "replicates per row (config: sweep.n_seeds)");
    CLI::App* co = app.add_subcommand("combine", "greedy augmentation combination study");
    add_data(co);
    co->add_option("--n-seeds", n_seeds, "replicates per chain (config: sweep.n_seeds)");
    co->add_option("--max-len", max_len, "longest chain (config: combine.max_len)");
    co->add_flag("--exhaust", exhaust, "run every round up to max-len (config: combine.exhaust)");
    for (CLI::App* sub : {gen, tr, ev, sw, co}) sub->fallthrough();

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitConfig;
    }

    try {
        RunConfig c = config_path.empty() ? default_run_config() : load_run_config(config_path);
        if (seed) c.seed = *seed;
        if (out_dir) c.out = *out_dir;
        if (threads) c.threads = *threads;
        if (spectra) c.data.spectra = *spectra;
        if (labels) c.data.labels = *labels;
        if (checkpoint) c.data.checkpoint = *checkpoint;
        if (alpha) c.train.loss.alpha = *alpha;
        if (n_seeds) c.sweep.n_seeds = *n_seeds;
        if (max_len) c.combine.max_len = *max_len;
        if (exhaust) c.combine.exhaust = true;
        c.resolve();
        c.validate();

        if (gen->parsed()) cmd_generate(c, out);
        else if (tr->parsed()) cmd_train(c, out);
        else if (ev->parsed()) cmd_evaluate(c, out);
        else if (sw->parsed()) cmd_sweep(c, out);
        else if (co->parsed()) cmd_combine(c, out);
        return kExitOk;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return exit_code_for(e);
    }
}

}  // namespace hyperclr
