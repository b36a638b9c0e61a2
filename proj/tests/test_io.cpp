// Copyright 2026 The hyperclr Authors
// SPDX-License-Identifier: Apache-2.0
#include "hyperclr/checkpoint.hpp"
#include "hyperclr/config.hpp"
#include "hyperclr/csv_io.hpp"
#include "hyperclr/errors.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <functional>
#include <limits>
#include <random>

using namespace hyperclr;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / ("hyperclr_io_" + std::to_string(std::random_device{}()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

std::string error_of(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const std::exception& e) {
        return e.what();
    }
    return {};
}

bool contains(const std::string& s, const std::string& part) { return s.find(part) != std::string::npos; }

}  // namespace

TEST_CASE("format_double round-trips") {
    Rng rng(4);
    for (int i = 0; i < 2000; ++i) {
        const double v = std::ldexp(rng.uniform(-1.0, 1.0), static_cast<int>(rng.index(200)) - 100);
        const std::string s = format_double(v);
        double back = 0.0;
        std::from_chars(s.data(), s.data() + s.size(), back);
        CHECK(back == v);
    }
    CHECK(format_double(0.5) == "0.5");
    CHECK(format_double(3.0) == "3");
}

TEST_CASE("csv round-trips") {
    TempDir dir;
    Rng rng(1);
    const Matrix m = oracle::random_matrix(rng, 7, 5);
    write_matrix_csv(dir.path / "m.csv", m);
    CHECK(read_matrix_csv(dir.path / "m.csv") == m);

    const auto grid = WavelengthGrid::uniform(400.0, 2500.0, 5);
    write_spectra_csv(dir.path / "s.csv", grid, m);
    const GridAndRows gr = read_spectra_csv(dir.path / "s.csv");
    CHECK(gr.rows == m);
    CHECK(std::ranges::equal(gr.grid->values(), grid.values()));

    const Matrix labels = oracle::random_matrix(rng, 7, 3, 0.0, 1.0);
    write_matrix_csv(dir.path / "l.csv", labels);
    const SpectralBatch d = read_dataset(dir.path / "s.csv", dir.path / "l.csv");
    CHECK(d.spectra == m);
    CHECK(*d.labels == labels);
    CHECK_FALSE(read_dataset(dir.path / "s.csv").labels.has_value());

    const EndmemberSet e{gr.grid, oracle::random_matrix(rng, 3, 5, 0.1, 0.9)};
    write_endmembers_csv(dir.path / "e.csv", e);
    CHECK(read_endmembers_csv(dir.path / "e.csv").signatures == e.signatures);
}

TEST_CASE("malformed csv names the line") {
    TempDir dir;
    write_text_file(dir.path / "bad.csv", "1,2,3\n4,5,6\n7,8\n");
    const std::string ragged = error_of([&] { read_matrix_csv(dir.path / "bad.csv"); });
    CHECK(contains(ragged, "line 3"));
    CHECK_THROWS_AS(read_matrix_csv(dir.path / "bad.csv"), ConfigError);

    write_text_file(dir.path / "nan.csv", "1,2\n3,abc\n");
    CHECK(contains(error_of([&] { read_matrix_csv(dir.path / "nan.csv"); }), "line 2"));
    CHECK_THROWS_AS(read_matrix_csv(dir.path / "nan.csv"), ConfigError);

    write_text_file(dir.path / "empty.csv", "");
    CHECK_THROWS_AS(read_matrix_csv(dir.path / "empty.csv"), ConfigError);
    CHECK_THROWS_AS(read_matrix_csv(dir.path / "missing.csv"), IoError);

    write_text_file(dir.path / "s.csv", "400,500\n0.1,0.2\n0.3,0.4\n");
    write_text_file(dir.path / "l.csv", "0.5\n");
    CHECK_THROWS_AS(read_dataset(dir.path / "s.csv", dir.path / "l.csv"), Error);

    write_text_file(dir.path / "grid.csv", "500,400\n0.1,0.2\n");
    CHECK_THROWS_AS(read_spectra_csv(dir.path / "grid.csv"), Error);
    CHECK_THROWS_AS(write_text_file(dir.path / "nope" / "x.csv", "x"), IoError);
}

TEST_CASE("checkpoint round-trip and errors") {
    Architecture arch;
    arch.extractor = {5, 4};
    arch.head_hidden = {3};
    arch.relu_features = true;
    const NetworkParams p = init_params(6, 2, 9, arch);
    const Checkpoint c{p, 0x0123456789abcdefULL};
    const std::string text = serialize_checkpoint(c);
    CHECK(text.rfind("hyperclr-checkpoint 1\n", 0) == 0);
    const Checkpoint back = parse_checkpoint(text);
    CHECK(back.config_hash == c.config_hash);
    CHECK(back.params.relu_features);
    REQUIRE(back.params.layer_count() == p.layer_count());
    for (std::size_t l = 0; l < p.layer_count(); ++l) {
        CHECK(back.params.layer(l).weights == p.layer(l).weights);
        CHECK(back.params.layer(l).biases == p.layer(l).biases);
    }
    CHECK(serialize_checkpoint(back) == text);

    CHECK_THROWS_AS(parse_checkpoint("not a checkpoint\n"), ConfigError);
    CHECK_THROWS_AS(parse_checkpoint(text.substr(0, text.size() / 2)), ConfigError);
    std::string bad = text;
    bad.replace(bad.find("layer 0 5 6"), 11, "layer 0 5 7");
    CHECK_THROWS_AS(parse_checkpoint(bad), ConfigError);

    TempDir dir;
    save_checkpoint(dir.path / "c.txt", c);
    CHECK(serialize_checkpoint(load_checkpoint(dir.path / "c.txt")) == text);
    CHECK_THROWS_AS(load_checkpoint(dir.path / "none.txt"), IoError);
    CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
    CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
}

TEST_CASE("config defaults and round-trip") {
    const RunConfig d = default_run_config();
    CHECK(d.sweep.augmentations.size() == 8);
    CHECK(d.train.epochs == 100);
    CHECK(d.train.batch_size == 32);
    CHECK(d.generate.bands == 224);
    CHECK(d.generate.mixing.n_pixels == 10000);
    CHECK(d.generate.mixing.snr_db == 20.0);
    CHECK(d.train.loss.tau == 0.5);
    CHECK_NOTHROW(d.validate());

    const json j = to_json(d);
    const RunConfig again = parse_run_config(j);
    CHECK(to_json(again) == j);
    CHECK(config_hash(again) == config_hash(d));

    RunConfig other = d;
    other.seed = 1;
    CHECK(config_hash(other) != config_hash(d));
}

TEST_CASE("config parsing and errors") {
    RunConfig c = parse_run_config(json::parse(R"({
        "seed": 3,
        "generate": {"n_pixels": 50, "snr_db": "inf"},
        "train": {"epochs": 2, "loss": {"radius": "inf", "alpha": 0.5},
                  "augmentations": ["Flip", {"kind": "Shift", "params": {"delta_nm": [-1, 2]}}]},
        "combine": {"max_len": 2, "exhaust": true, "mode": "sample-one"}
    })"));
    c.resolve();
    CHECK(c.train.seed == 3);
    CHECK(c.generate.mixing.seed == 3);
    CHECK(std::isinf(c.generate.mixing.snr_db));
    CHECK(std::isinf(c.train.loss.radius));
    CHECK(c.train.loss.alpha == 0.5);
    REQUIRE(c.train.chain.specs.size() == 2);
    CHECK(c.train.chain.specs[0] == AugmentationSpec(FlipParams{}));
    CHECK(c.train.chain.specs[1] == AugmentationSpec(ShiftParams{Range{-1.0, 2.0}}));
    CHECK(c.combine.exhaust);
    CHECK(c.combine.mode == ChainMode::SampleOne);
    CHECK(c.sweep.base.epochs == 2);
    CHECK_NOTHROW(c.validate());
    CHECK(to_json(c)["train"]["loss"]["radius"] == "inf");

    auto err = [](const char* doc) { return error_of([&] { parse_run_config(json::parse(doc)); }); };
    CHECK(contains(err(R"({"bogus": 1})"), "bogus: unknown field"));
    CHECK(contains(err(R"({"train": {"lr": "fast"}})"), "train.lr"));
    CHECK(contains(err(R"({"train": {"loss": {"tau": "inf"}}})"), "train.loss.tau"));
    CHECK(contains(err(R"({"train": {"epochs": -1}})"), "train.epochs"));
    CHECK(contains(err(R"({"train": {"augmentations": ["Warp"]}})"), "train.augmentations"));
    CHECK(contains(err(R"({"train": {"augmentations": [{"kind": "Shift", "params": {"x": 1}}]}})"), "x"));
    CHECK(contains(err(R"({"combine": {"mode": "both"}})"), "combine.mode"));
    CHECK_THROWS_AS(parse_run_config(json::parse(R"({"threads": true})")), ConfigError);

    RunConfig v = default_run_config();
    v.combine.max_len = 9;
    CHECK_THROWS_AS(v.validate(), ConfigError);
    v = default_run_config();
    v.data.labels = "l.csv";
    CHECK_THROWS_AS(v.validate(), ConfigError);

    TempDir dir;
    write_text_file(dir.path / "bad.json", "{ not json");
    CHECK_THROWS_AS(load_run_config(dir.path / "bad.json"), ConfigError);
    CHECK_THROWS_AS(load_run_config(dir.path / "none.json"), IoError);
}

TEST_CASE("every spec survives a JSON round-trip") {
    std::vector<AugmentationSpec> specs;
    for (AugmentationKind k : kAllKinds) specs.push_back(AugmentationSpec::defaults(k));
    specs.push_back(HapkeParams{0.4, Range{0.2, 0.9}, Range{0.5, 0.5}});
    specs.push_back(ElasticParams{3, Range{-1.0, 1.0}, 40.0});
    specs.push_back(BandPermutationParams{2, 3});
    specs.push_back(NearestNeighborParams{5});
    for (const auto& s : specs) {
        CHECK(spec_from_json(to_json(s), "x") == s);
        CHECK(spec_from_json(json(std::string(to_string(s.kind()))), "x") == AugmentationSpec::defaults(s.kind()));
    }
}
