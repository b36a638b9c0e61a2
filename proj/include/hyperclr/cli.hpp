// Copyright 2026 The hyperclr Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "hyperclr/config.hpp"

#include <ostream>
#include <string>
#include <vector>

namespace hyperclr {

enum ExitCode : int {
    kExitOk = 0,
    kExitConfig = 2,
    kExitIo = 3,
    kExitNumeric = 4,
};

/// Maps a caught exception to the exit-code contract.
int exit_code_for(const std::exception& e) noexcept;

/// Dataset named by `data`, or one generated in memory from `generate`.
SpectralBatch load_or_generate(const RunConfig& config);

/// Subcommand bodies. Each writes its artifacts plus run_config.json into
/// config.out, which must already exist.
void cmd_generate(const RunConfig& config, std::ostream& out);
void cmd_train(const RunConfig& config, std::ostream& out);
void cmd_evaluate(const RunConfig& config, std::ostream& out);
void cmd_sweep(const RunConfig& config, std::ostream& out);
void cmd_combine(const RunConfig& config, std::ostream& out);

/// Full command line: parses flags, runs the subcommand, returns the exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hyperclr
