// Copyright 2026 The hyperclr Authors
// SPDX-License-Identifier: Apache-2.0
#include "hyperclr/augment.hpp"
#include "hyperclr/errors.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>

using namespace hyperclr;

namespace {

GridRef uniform_grid(double first, double step, std::size_t b) {
    std::vector<double> wl(b);
    for (std::size_t i = 0; i < b; ++i) wl[i] = first + step * static_cast<double>(i);
    return make_grid(wl);
}

Spectrum ramp(const GridRef& g, double slope = 0.01, double offset = 0.1) {
    std::vector<double> v(g->size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = offset + slope * static_cast<double>(i);
    return Spectrum(g, v);
}

Spectrum random_spectrum(const GridRef& g, Rng& rng) {
    std::vector<double> v(g->size());
    for (double& x : v) x = rng.uniform(0.0, 1.0);
    return Spectrum(g, v);
}

SpectralBatch random_batch(const GridRef& g, std::size_t n, Rng& rng) {
    SpectralBatch b{g, oracle::random_matrix(rng, static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(g->size()),
                                             0.0, 1.0),
                    oracle::random_matrix(rng, static_cast<Eigen::Index>(n), 2)};
    return b;
}

}  // namespace

TEST_CASE("shift identities and index oracles") {
    const auto g = uniform_grid(1000.0, 2.0, 12);
    const Spectrum x = ramp(g);
    CHECK(shift(x, 0.0).reflectance == x.reflectance);

    const Spectrum s2 = shift(x, 4.0);  // +2h
    CHECK(s2.reflectance[0] == x.reflectance[0]);
    CHECK(s2.reflectance[1] == x.reflectance[0]);
    for (std::size_t i = 2; i < x.size(); ++i) CHECK(s2.reflectance[i] == doctest::Approx(x.reflectance[i - 2]).epsilon(1e-14));

    const Spectrum half = shift(x, 1.0);  // +h/2
    CHECK(half.reflectance[0] == x.reflectance[0]);
    for (std::size_t i = 1; i < x.size(); ++i) {
        CHECK(half.reflectance[i] == doctest::Approx(0.5 * (x.reflectance[i - 1] + x.reflectance[i])).epsilon(1e-14));
    }

    const Spectrum neg = shift(x, -4.0);
    CHECK(neg.reflectance.back() == x.reflectance.back());
    CHECK(neg.reflectance[0] == doctest::Approx(x.reflectance[2]).epsilon(1e-14));
    CHECK_THROWS_AS(shift(x, 22.0), StructuralError);
}

TEST_CASE("flip") {
    const auto g = uniform_grid(400.0, 10.0, 3);
    const Spectrum x(g, {0.1, 0.2, 0.9});
    CHECK(flip(x).reflectance == std::vector<double>{0.9, 0.2, 0.1});
    CHECK(flip(Spectrum(g, {0.4, 0.4, 0.4})).reflectance == std::vector<double>{0.4, 0.4, 0.4});

    Rng rng(3);
    const auto big = uniform_grid(400.0, 2100.0 / 223.0, 224);
    for (int t = 0; t < 20; ++t) {
        const Spectrum r = random_spectrum(big, rng);
        CHECK(flip(flip(r)).reflectance == r.reflectance);
    }

    // Non-uniform grid: value at mirror wavelength via interpolation.
    const auto nu = make_grid({1.0, 2.0, 4.0});
    const Spectrum y(nu, {0.0, 1.0, 3.0});
    const auto f = flip(y).reflectance;
    CHECK(f[0] == doctest::Approx(3.0));  // x(5 - 1) = x(4)
    CHECK(f[1] == doctest::Approx(2.0));  // x(3)
    CHECK(f[2] == doctest::Approx(0.0));  // x(1)
}

TEST_CASE("hapke inversion: closed form against bisection") {
    const double mu0 = 0.5773;
    double worst_closed = 0.0;
    double worst_printed = 0.0;
    for (int i = 0; i <= 1000; ++i) {
        const double x = i / 1000.0;
        const double reference = oracle::hapke_albedo_bisect(x, mu0);
        worst_closed = std::max(worst_closed, std::abs(hapke_albedo(x, mu0) - reference));
        worst_printed = std::max(worst_printed, std::abs(oracle::hapke_albedo_printed(x, mu0) - reference));
    }
    CHECK(worst_closed < 1e-10);
    // The mu0^4 x^2 radicand does not invert the forward model.
    CHECK(worst_printed > 1e-3);
}

TEST_CASE("hapke roundtrip and fixed points") {
    const double mu0 = 0.5773;
    Rng rng(4);
    const auto g = uniform_grid(400.0, 10.0, 64);
    for (int t = 0; t < 20; ++t) {
        const Spectrum x = random_spectrum(g, rng);
        const Spectrum y = hapke_scatter(x, mu0, mu0, mu0);
        for (std::size_t i = 0; i < x.size(); ++i) CHECK(std::abs(y.reflectance[i] - x.reflectance[i]) < 1e-10);
    }
    const Spectrum zero(g, std::vector<double>(64, 0.0));
    const Spectrum z = hapke_scatter(zero, mu0, 0.3, 0.9);
    CHECK(std::all_of(z.reflectance.begin(), z.reflectance.end(), [](double v) { return v == 0.0; }));
    CHECK(hapke_reflectance(1.0, 0.3, 0.7) == 1.0);
    CHECK(hapke_albedo(0.0, mu0) == doctest::Approx(0.0).scale(1).epsilon(1e-15));

    CHECK_THROWS_AS(hapke_scatter(zero, 0.0, 0.5, 0.5), TransformError);
    CHECK_THROWS_AS(hapke_scatter(zero, mu0, 1.5, 0.5), TransformError);
}

TEST_CASE("atmospheric") {
    const auto g = make_grid({1.0, 2.0});
    const Spectrum one(make_grid({1.0, 2.0, 3.0}), {0.5, 0.5, 0.5});
    const Spectrum x(g, {0.3, 0.7});
    CHECK(atmospheric(x, 0.6, 0.6, 1.0, 0.2).reflectance == x.reflectance);
    CHECK(atmospheric(x, 0.9, 0.3, 0.0, 0.2).reflectance == x.reflectance);
    const auto r = atmospheric(Spectrum(make_grid({1.0, 2.0}), {0.5, 0.5}), 0.8, 0.4, 1.0, 0.0).reflectance;
    CHECK(r[0] == doctest::Approx(1.0).epsilon(1e-15));
    CHECK_THROWS_AS(atmospheric(x, 0.8, 0.4, 0.0, 0.0), TransformError);
    CHECK_THROWS_AS(atmospheric(x, 0.8, 0.4, -1.0, 0.2), TransformError);
    CHECK(atmospheric(one, 0.5, 1.0, 1.0, 0.2).size() == 3);
}

TEST_CASE("elastic") {
    const auto g = uniform_grid(1000.0, 1.0, 200);
    const Spectrum x = ramp(g, 0.001, 0.2);
    const std::vector<double> zeros{0.0, 0.0};
    const std::vector<double> centers{1050.0, 1150.0};
    CHECK(elastic(x, zeros, centers, 10.0).reflectance == x.reflectance);

    // Very wide kernel: displacement is A everywhere, the same as shift by -A.
    const std::vector<double> a{3.0};
    const std::vector<double> c{1099.5};
    const Spectrum wide = elastic(x, a, c, 1e7);
    const Spectrum shifted = shift(x, -3.0);
    for (std::size_t i = 0; i < x.size(); ++i) CHECK(std::abs(wide.reflectance[i] - shifted.reflectance[i]) < 1e-6);
    CHECK(elastic_displacement(1099.5, a, c, 1e7) == 3.0);

    // Gaussian tail: bands more than 6 sigma from the center do not move.
    const double sigma = 5.0;
    const std::vector<double> c2{1100.0};
    const Spectrum local = elastic(x, a, c2, sigma);
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (std::abs((*g)[i] - 1100.0) > 6.0 * sigma) CHECK(std::abs(local.reflectance[i] - x.reflectance[i]) < 1e-8);
    }
    CHECK(local.reflectance[100] != x.reflectance[100]);
    CHECK_THROWS_AS(elastic(x, a, centers, 1.0), StructuralError);
}

TEST_CASE("band erasure") {
    const auto g = uniform_grid(1.0, 1.0, 10);
    const Spectrum x(g, {1, 2, 3, 4, 5, 6, 7, 8, 9, 10});
    Rng r0(1);
    CHECK(band_erasure(x, 0.0, r0).reflectance == x.reflectance);
    const auto all = band_erasure(x, 1.0, r0).reflectance;
    CHECK(std::all_of(all.begin(), all.end(), [](double v) { return v == 0.0; }));

    // Replay: partial Fisher-Yates over indices with the same stream.
    Rng r(77);
    const auto half = band_erasure(x, 0.5, r).reflectance;
    Rng replay(77);
    std::vector<std::size_t> idx{0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
    std::vector<double> expected = x.reflectance;
    for (std::size_t i = 0; i < 5; ++i) {
        std::swap(idx[i], idx[i + replay.index(10 - i)]);
        expected[idx[i]] = 0.0;
    }
    CHECK(half == expected);
    CHECK(std::count(half.begin(), half.end(), 0.0) == 5);
    Rng again(77);
    CHECK(band_erasure(x, 0.5, again).reflectance == half);
}

TEST_CASE("band permutation") {
    const auto g = uniform_grid(1.0, 1.0, 4);
    const Spectrum x(g, {1, 2, 3, 4});
    Rng r0(1);
    CHECK(band_permutation(x, 1, r0).reflectance == x.reflectance);

    int swaps = 0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        Rng probe(seed);
        const bool swap = probe.index(2) == 0;
        Rng r(seed);
        const auto out = band_permutation(x, 2, r).reflectance;
        if (swap) {
            CHECK(out == std::vector<double>{3, 4, 1, 2});
            ++swaps;
        } else {
            CHECK(out == x.reflectance);
        }
    }
    CHECK(swaps > 0);

    Rng rng(9);
    const auto big = uniform_grid(1.0, 1.0, 37);
    for (int t = 0; t < 20; ++t) {
        const Spectrum s = random_spectrum(big, rng);
        const std::size_t k = 1 + rng.index(37);
        auto out = band_permutation(s, k, rng).reflectance;
        auto in = s.reflectance;
        std::sort(out.begin(), out.end());
        std::sort(in.begin(), in.end());
        CHECK(out == in);
    }
    CHECK_THROWS_AS(band_permutation(x, 5, rng), StructuralError);
}

TEST_CASE("nearest neighbour") {
    const auto g = make_grid({1.0, 2.0});
    Matrix m(3, 2);
    m << 0, 0, 1, 1, 4, 4;
    const SpectralBatch b{g, m, std::nullopt};
    const auto r = nearest_neighbor(b, 0, 2).reflectance;
    CHECK(r == std::vector<double>{2.5, 2.5});

    Matrix d(3, 2);
    d << 0.3, 0.1, 0.9, 0.9, 0.3, 0.1;
    const SpectralBatch dup{g, d, std::nullopt};
    CHECK(nearest_neighbor(dup, 0, 1).reflectance == std::vector<double>{0.3, 0.1});

    Matrix same = Matrix::Constant(4, 2, 0.7);
    for (double v : nearest_neighbor(SpectralBatch{g, same, std::nullopt}, 2, 3).reflectance) {
        CHECK(v == doctest::Approx(0.7).epsilon(1e-15));
    }

    // Tie at equal distance goes to the lower index.
    Matrix t(3, 2);
    t << 0, 0, 1, 0, -1, 0;
    CHECK(nearest_neighbor(SpectralBatch{g, t, std::nullopt}, 0, 1).reflectance == std::vector<double>{1, 0});
    CHECK_THROWS_AS(nearest_neighbor(b, 0, 3), StructuralError);
}

TEST_CASE("spec parsing and validation") {
    for (AugmentationKind k : kAllKinds) {
        CHECK(parse_kind(to_string(k)) == k);
        CHECK(AugmentationSpec::defaults(k).kind() == k);
        CHECK_NOTHROW(AugmentationSpec::defaults(k).validate());
    }
    CHECK_THROWS_AS(parse_kind("Rotate"), ConfigError);
    CHECK_THROWS_AS(AugmentationSpec(BandErasureParams{Range{0.2, 0.1}}).validate(), ConfigError);
    CHECK_THROWS_AS(AugmentationSpec(BandErasureParams{Range{0.5, 1.5}}).validate(), ConfigError);
    CHECK_THROWS_AS(AugmentationSpec(HapkeParams{0.0, {0.3, 1.0}, {0.3, 1.0}}).validate(), ConfigError);
    CHECK(parse_chain_mode("sample-one") == ChainMode::SampleOne);
    CHECK_THROWS_AS(parse_chain_mode("random"), ConfigError);
}

TEST_CASE("chain: identity, determinism, labels") {
    Rng rng(5);
    const auto g = uniform_grid(400.0, 5.0, 40);
    const SpectralBatch b = random_batch(g, 8, rng);

    AugmentationChain zero{{ShiftParams{Range{0.0, 0.0}}}, 1, ChainMode::Sequential};
    const SpectralBatch same = apply_chain(zero, b);
    CHECK(same.spectra == b.spectra);

    for (AugmentationKind k : kAllKinds) {
        AugmentationChain c{{AugmentationSpec::defaults(k)}, 99, ChainMode::Sequential};
        const SpectralBatch o1 = apply_chain(c, b);
        const SpectralBatch o2 = apply_chain(c, b);
        CHECK(o1.spectra == o2.spectra);
        CHECK(*o1.labels == *b.labels);
        CHECK(o1.spectra.cols() == b.spectra.cols());
        CHECK(o1.spectra.allFinite());
    }
}

TEST_CASE("chain: sequential composition replays per-stage streams") {
    Rng rng(6);
    const auto g = uniform_grid(400.0, 5.0, 40);
    const SpectralBatch b = random_batch(g, 6, rng);
    const AugmentationChain c{{ShiftParams{}, FlipParams{}}, 2024, ChainMode::Sequential};
    const SpectralBatch out = apply_chain(c, b);
    const double h = g->mean_step();
    for (std::size_t i = 0; i < b.size(); ++i) {
        Rng stage0(chain_stream_seed(2024, i, 0));
        const double delta = stage0.uniform(-5.0 * h, 5.0 * h);
        const Spectrum expected = flip(shift(b.spectrum(i), delta));
        for (std::size_t j = 0; j < b.bands(); ++j) {
            CHECK(out.spectra(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) == expected.reflectance[j]);
        }
    }
}

TEST_CASE("chain: sample-one applies exactly one spec to the original") {
    Rng rng(7);
    const auto g = uniform_grid(400.0, 5.0, 40);
    const SpectralBatch b = random_batch(g, 10, rng);
    const AugmentationChain c{{FlipParams{}, BandErasureParams{Range{0.5, 0.5}}}, 31, ChainMode::SampleOne};
    const SpectralBatch out = apply_chain(c, b);
    for (std::size_t i = 0; i < b.size(); ++i) {
        Rng choice(chain_stream_seed(31, i, 2));
        const std::size_t pos = choice.index(2);
        Rng stage(chain_stream_seed(31, i, pos));
        const Spectrum expected = apply_spec(c.specs[pos], b, i, stage);
        CHECK(std::equal(expected.reflectance.begin(), expected.reflectance.end(),
                         out.spectra.row(static_cast<Eigen::Index>(i)).begin()));
    }
}

TEST_CASE("chain errors identify the sample and spec") {
    const auto g = uniform_grid(400.0, 5.0, 4);
    Matrix m = Matrix::Constant(2, 4, 0.5);
    const SpectralBatch b{g, m, std::nullopt};
    const AugmentationChain c{{NearestNeighborParams{5}}, 0, ChainMode::Sequential};
    try {
        apply_chain(c, b);
        FAIL("expected TransformError");
    } catch (const TransformError& e) {
        const std::string what = e.what();
        CHECK(what.find("sample 0") != std::string::npos);
        CHECK(what.find("NearestNeighbor") != std::string::npos);
    }
}
