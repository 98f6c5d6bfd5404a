// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace polariton::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitIo = 3;

using EnvLookup = std::function<std::optional<std::string>(const std::string&)>;

/// Runs one subcommand (`synth`, `extract`, `fit`, `couple`, `predict`,
/// `magic`, `report`). `args` excludes the program name. Returns the exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
        const EnvLookup& env = {});

}  // namespace polariton::cli
