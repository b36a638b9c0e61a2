// Copyright 2026 The hyperclr Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "hyperclr/model.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

namespace hyperclr {

/// Text checkpoint, one token group per line:
///
///   hyperclr-checkpoint 1
///   config_hash <16 hex digits>
///   relu_features <0|1>
///   layers <extractor count> <head count>
///   layer <index> <out> <in>        then <out> weight rows and one bias row,
///                                   comma separated, shortest round-trip decimals
///
/// Layers appear extractor first, in forward order.
struct Checkpoint {
    NetworkParams params;
    std::uint64_t config_hash = 0;
};

/// FNV-1a 64 of a string (used for the resolved config JSON).
std::uint64_t fnv1a64(std::string_view text) noexcept;

std::string serialize_checkpoint(const Checkpoint& ckpt);
Checkpoint parse_checkpoint(std::string_view text);

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& ckpt);
Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace hyperclr
