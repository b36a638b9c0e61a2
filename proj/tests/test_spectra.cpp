// Copyright 2026 The hyperclr Authors
// SPDX-License-Identifier: Apache-2.0
#include "hyperclr/errors.hpp"
#include "hyperclr/rng.hpp"
#include "hyperclr/spectra.hpp"

#include <doctest.h>

#include <algorithm>

using namespace hyperclr;

TEST_CASE("grid rejects bad wavelengths") {
    CHECK_THROWS_AS(WavelengthGrid({1000.0}), StructuralError);
    CHECK_THROWS_AS(WavelengthGrid({1000.0, 1000.0}), StructuralError);
    CHECK_THROWS_AS(WavelengthGrid({1002.0, 1000.0}), StructuralError);
    CHECK_THROWS_AS(WavelengthGrid({-1.0, 2.0}), StructuralError);
    CHECK_THROWS_AS(WavelengthGrid({1.0, std::numeric_limits<double>::infinity()}), StructuralError);
    CHECK_NOTHROW(WavelengthGrid({1.0, 2.0}));
}

TEST_CASE("uniform grid") {
    const auto g = WavelengthGrid::uniform(400.0, 2500.0, 224);
    CHECK(g.size() == 224);
    CHECK(g.min() == 400.0);
    CHECK(g.max() == 2500.0);
    CHECK(g.is_uniform());
    CHECK(g.mean_step() == doctest::Approx(2100.0 / 223.0));
    CHECK_FALSE(WavelengthGrid({1.0, 2.0, 4.0}).is_uniform());
}

TEST_CASE("interpolation examples") {
    const WavelengthGrid g({1000.0, 1002.0});
    const std::vector<double> v{0.2, 0.4};
    CHECK(interpolate_at(g, v, 1001.0) == doctest::Approx(0.3).epsilon(1e-15));
    CHECK(interpolate_at(g, v, 1000.0) == 0.2);
    CHECK(interpolate_at(g, v, 1002.0) == 0.4);
    CHECK(interpolate_at(g, v, 900.0) == 0.2);
    CHECK(interpolate_at(g, v, 5000.0) == 0.4);
}

TEST_CASE("interpolation errors") {
    const auto g = make_grid({1.0, 2.0, 3.0});
    CHECK_THROWS_AS(Spectrum(g, {0.1, 0.2}), StructuralError);
    const std::vector<double> short_values{0.1, 0.2};
    const std::vector<double> q{1.5};
    CHECK_THROWS_AS(interpolate(*g, short_values, q), StructuralError);
    const std::vector<double> values{0.1, 0.2, 0.3};
    const std::vector<double> bad{std::nan("")};
    CHECK_THROWS_AS(interpolate(*g, values, bad), StructuralError);
}

TEST_CASE("interpolation properties over random grids") {
    Rng rng(11);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t b = 2 + rng.index(30);
        std::vector<double> wl{100.0 + rng.uniform(0.0, 10.0)};
        for (std::size_t i = 1; i < b; ++i) wl.push_back(wl.back() + rng.uniform(0.1, 5.0));
        const auto grid = make_grid(wl);
        std::vector<double> v(b);
        for (double& x : v) x = rng.uniform();
        const Spectrum s(grid, v);

        // exact at knots
        const auto at_knots = interpolate(s, wl);
        CHECK(at_knots == v);

        // clamping
        const std::vector<double> outside{wl.front() - 1.0, wl.front() - 1000.0, wl.back() + 1.0, wl.back() + 1e6};
        const auto clamped = interpolate(s, outside);
        CHECK(clamped[0] == v.front());
        CHECK(clamped[1] == v.front());
        CHECK(clamped[2] == v.back());
        CHECK(clamped[3] == v.back());

        // monotone within each segment, bounded by its endpoints
        for (std::size_t i = 0; i + 1 < b; ++i) {
            double prev = v[i];
            for (int k = 1; k <= 9; ++k) {
                const double q = wl[i] + (wl[i + 1] - wl[i]) * k / 10.0;
                const double y = interpolate_at(*grid, v, q);
                if (v[i + 1] >= v[i]) {
                    CHECK(y >= prev - 1e-15);
                } else {
                    CHECK(y <= prev + 1e-15);
                }
                CHECK(y >= std::min(v[i], v[i + 1]) - 1e-15);
                CHECK(y <= std::max(v[i], v[i + 1]) + 1e-15);
                prev = y;
            }
        }
    }
}

TEST_CASE("make_batch examples") {
    const auto g = make_grid({1.0, 2.0});
    const std::vector<Spectrum> three{Spectrum(g, {0.1, 0.2}), Spectrum(g, {0.3, 0.4}), Spectrum(g, {0.5, 0.6})};
    const SpectralBatch b = make_batch(three);
    CHECK(b.size() == 3);
    CHECK_FALSE(b.has_labels());
    CHECK(b.spectra(2, 1) == 0.6);

    const std::vector<Spectrum> two{three[0], three[1]};
    const SpectralBatch l = make_batch(two, Matrix::Zero(2, 4));
    CHECK(l.outputs() == 4);
    CHECK_THROWS_AS(make_batch(two, Matrix::Zero(3, 4)), StructuralError);

    const auto other = make_grid({1.0, 3.0});
    const std::vector<Spectrum> mixed{three[0], Spectrum(other, {0.1, 0.2})};
    CHECK_THROWS_AS(make_batch(mixed), StructuralError);
}

TEST_CASE("batch select keeps order and labels") {
    const auto g = make_grid({1.0, 2.0});
    Matrix x(3, 2);
    x << 1, 2, 3, 4, 5, 6;
    Matrix y(3, 1);
    y << 10, 20, 30;
    const SpectralBatch b{g, x, y};
    const std::vector<std::size_t> rows{2, 0};
    const SpectralBatch s = b.select(rows);
    CHECK(s.spectra(0, 0) == 5);
    CHECK(s.spectra(1, 1) == 2);
    CHECK((*s.labels)(0, 0) == 30);
    CHECK(s.grid == g);
    CHECK(b.spectrum(1).reflectance == std::vector<double>{3, 4});
}
