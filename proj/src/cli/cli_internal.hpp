// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "polariton/cli.hpp"
#include "polariton/hybrid.hpp"

namespace polariton::cli {

struct Context {
  std::ostream& out;
  std::ostream& err;
};

/// Builds the token list the subcommand parser sees, lowest precedence first:
/// preset expansion, config-file entries, POLARITON_SEED, then the user's own
/// flags. Later tokens win.
std::vector<std::string> layered_tokens(const std::string& command, const std::vector<std::string>& user_args,
                                        const EnvLookup& env);

/// Known presets: block, disc, life. Empty for an unknown name (ValidationError).
std::vector<std::string> preset_tokens(const std::string& command, const std::string& name);

/// Thrown by parse_tokens for --help; carries the rendered help text.
struct HelpRequested {
  std::string text;
};

/// Parses tokens (forward order) into `app`.
void parse_tokens(CLI::App& app, const std::vector<std::string>& tokens);

/// Every option of the parsed app with its effective value, keyed by long name.
nlohmann::json effective_config(const CLI::App& app);

/// Prints the echo line and returns the digest of the effective config.
std::string echo_config(const Context& ctx, const std::string& command, const nlohmann::json& config);

struct ModelOptions {
  double omega_c = 5.870;
  double g = 2.690;
  std::string dispersion = "linear";
  double g_eff = 2.0;
  double b_off = 0.0;
  std::vector<double> poly_coeffs;
  double rising_g_eff = 2.03;
  double rising_b_off = 0.0078;
  double falling_g_eff = -0.70;
  double falling_b_off = -0.751;
  double blend_width = 0.05;

  void add_to(CLI::App& app);
  HybridModel model() const;
};

int cmd_synth(const std::vector<std::string>& tokens, const Context& ctx);
int cmd_extract(const std::vector<std::string>& tokens, const Context& ctx);
int cmd_fit(const std::vector<std::string>& tokens, const Context& ctx);
int cmd_couple(const std::vector<std::string>& tokens, const Context& ctx);
int cmd_predict(const std::vector<std::string>& tokens, const Context& ctx);
int cmd_magic(const std::vector<std::string>& tokens, const Context& ctx);
int cmd_report(const std::vector<std::string>& tokens, const Context& ctx);

}  // namespace polariton::cli
