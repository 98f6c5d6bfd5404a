// SPDX-License-Identifier: Apache-2.0

#include <cstdlib>
#include <iostream>

#include "polariton/cli.hpp"

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv + 1, argv + argc);
  const auto env = [](const std::string& name) -> std::optional<std::string> {
    if (const char* value = std::getenv(name.c_str())) return std::string(value);
    return std::nullopt;
  };
  return polariton::cli::run(args, std::cout, std::cerr, env);
}
