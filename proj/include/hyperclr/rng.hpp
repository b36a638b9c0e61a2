// Copyright 2026 The hyperclr Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <initializer_list>
#include <optional>
#include <random>

namespace hyperclr {

/// Stream identifiers used as the first path component when deriving
/// sub-seeds from a run seed. Values are part of the reproducibility contract.
enum class Stream : std::uint64_t {
    Split = 1,
    Init = 2,
    Shuffle = 3,
    Augment = 4,
    Endmembers = 5,
    Abundances = 6,
    Noise = 7,
    Replicate = 8,
};

/// SplitMix64 output finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Order-sensitive hash of a seed and a path of integers:
///   h = mix64(seed); for k-th component c: h = mix64(h ^ (mix64(c) + golden * (k + 1))).
std::uint64_t derive_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> path) noexcept;

inline std::uint64_t derive_seed(std::uint64_t seed, Stream stream, std::initializer_list<std::uint64_t> rest = {}) noexcept {
    std::uint64_t h = derive_seed(seed, {static_cast<std::uint64_t>(stream)});
    return rest.size() == 0 ? h : derive_seed(h, rest);
}

/// mt19937_64 with library-owned distributions, so sequences do not depend on
/// the standard library's distribution implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform on [0, 1) with 53 random bits.
    double uniform();

    /// Uniform on [lo, hi); returns lo exactly when lo == hi.
    double uniform(double lo, double hi);

    /// Uniform integer in [0, n). n must be positive.
    std::uint64_t index(std::uint64_t n);

    /// Uniform integer in [lo, hi] inclusive.
    std::int64_t integer(std::int64_t lo, std::int64_t hi);

    /// Standard normal (Marsaglia polar method).
    double normal();

    /// Gamma(shape, 1) via Marsaglia-Tsang; shape < 1 uses the boosting identity.
    double gamma(double shape);

private:
    std::mt19937_64 engine_;
    std::optional<double> spare_normal_;
};

}  // namespace hyperclr
