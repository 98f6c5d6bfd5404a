// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <map>
#include <set>

#include "../numeric.hpp"
#include "cli_internal.hpp"
#include "polariton/errors.hpp"
#include "polariton/io.hpp"

namespace polariton::cli {
namespace {

using nlohmann::json;

const std::set<std::string> kModelCommands = {"synth", "fit", "magic"};

// Value of `--name X` or `--name=X` in args (last occurrence wins); the
// matched tokens are removed when `erase` is set.
std::optional<std::string> take_option(std::vector<std::string>& args, const std::string& name, bool erase) {
  std::optional<std::string> value;
  const std::string flag = "--" + name;
  for (std::size_t i = 0; i < args.size();) {
    if (args[i] == flag && i + 1 < args.size()) {
      value = args[i + 1];
      if (erase) {
        args.erase(args.begin() + static_cast<std::ptrdiff_t>(i), args.begin() + static_cast<std::ptrdiff_t>(i + 2));
        continue;
      }
      i += 2;
      continue;
    }
    if (args[i].rfind(flag + "=", 0) == 0) {
      value = args[i].substr(flag.size() + 1);
      if (erase) {
        args.erase(args.begin() + static_cast<std::ptrdiff_t>(i));
        continue;
      }
    }
    ++i;
  }
  return value;
}

std::string scalar_token(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_number()) return v.dump();
  throw ValidationError("config values must be scalars or arrays of scalars");
}

json typed(const std::string& s) {
  long long i = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), i);
  if (ec == std::errc() && ptr == s.data() + s.size() && !s.empty()) return i;
  if (const auto d = detail::parse_double(s)) return *d;
  return s;
}

std::string option_name(const std::string& token) {
  if (token.rfind("--", 0) != 0) return {};
  return token.substr(2, token.find('=') == std::string::npos ? std::string::npos : token.find('=') - 2);
}

// Drops from `layer` every option that `later` sets again, with its values.
void prune(std::vector<std::string>& layer, const std::vector<std::string>& later) {
  std::set<std::string> names;
  for (const auto& t : later) {
    if (auto n = option_name(t); !n.empty()) names.insert(n);
  }
  std::vector<std::string> kept;
  for (std::size_t i = 0; i < layer.size();) {
    const auto name = option_name(layer[i]);
    if (!name.empty() && names.count(name)) {
      const bool inline_value = layer[i].find('=') != std::string::npos;
      ++i;
      if (!inline_value) {
        while (i < layer.size() && layer[i].rfind("--", 0) != 0) ++i;
      }
      continue;
    }
    kept.push_back(layer[i++]);
  }
  layer = std::move(kept);
}

}  // namespace

std::vector<std::string> preset_tokens(const std::string& command, const std::string& name) {
  static const std::map<std::string, std::vector<std::string>> model = {
      {"block", {"--omega-c=5.870", "--g=2.690", "--dispersion=linear", "--g-eff=2.061", "--b-off=0.1231"}},
      {"disc", {"--omega-c=7.599", "--g=2.574", "--dispersion=linear", "--g-eff=2.249", "--b-off=-0.083"}},
      {"life",
       {"--omega-c=5.56", "--g=0.169", "--dispersion=turnover", "--rising-g-eff=2.03", "--rising-b-off=0.0078",
        "--falling-g-eff=-0.70", "--falling-b-off=-0.751", "--blend-width=0.05"}},
  };
  static const std::map<std::string, std::vector<std::string>> grids = {
      {"block", {"--b-min=0.06", "--b-max=1.2", "--f-min=1", "--f-max=20"}},
      {"disc", {"--b-min=0.22", "--b-max=1.2", "--f-min=1", "--f-max=20"}},
      {"life", {"--b-min=0.0", "--b-max=0.6", "--f-min=1", "--f-max=8"}},
  };
  const auto it = model.find(name);
  if (it == model.end()) throw ValidationError("unknown preset '" + name + "' (expected block, disc or life)");
  auto tokens = it->second;
  if (command == "synth") {
    const auto& g = grids.at(name);
    tokens.insert(tokens.end(), g.begin(), g.end());
  }
  return tokens;
}

std::vector<std::string> layered_tokens(const std::string& command, const std::vector<std::string>& user_args,
                                        const EnvLookup& env) {
  auto user = user_args;
  const auto config_path = take_option(user, "config", true);

  json config = json::object();
  if (config_path) {
    const auto text = read_file(*config_path);
    try {
      config = json::parse(text);
    } catch (const json::parse_error& e) {
      throw ValidationError("config file '" + *config_path + "': " + e.what());
    }
    if (!config.is_object()) throw ValidationError("config file must hold a JSON object");
  }

  std::vector<std::string> preset_layer, config_layer, env_layer;
  std::optional<std::string> preset = take_option(user, "preset", false);
  if (!preset && config.contains("preset")) preset = scalar_token(config.at("preset"));
  if (preset && kModelCommands.count(command)) preset_layer = preset_tokens(command, *preset);

  for (const auto& [key, value] : config.items()) {
    if (value.is_array()) {
      config_layer.push_back("--" + key);
      for (const auto& v : value) config_layer.push_back(scalar_token(v));
    } else {
      config_layer.push_back("--" + key + "=" + scalar_token(value));
    }
  }

  if (command == "synth" && env) {
    if (const auto seed = env("POLARITON_SEED")) env_layer.push_back("--seed=" + *seed);
  }

  prune(env_layer, user);
  prune(config_layer, user);
  prune(config_layer, env_layer);
  for (const auto* later : {&user, &env_layer, &config_layer}) prune(preset_layer, *later);

  std::vector<std::string> tokens;
  for (const auto* layer : {&preset_layer, &config_layer, &env_layer, &user}) {
    tokens.insert(tokens.end(), layer->begin(), layer->end());
  }
  return tokens;
}

void parse_tokens(CLI::App& app, const std::vector<std::string>& tokens) {
  std::vector<std::string> reversed(tokens.rbegin(), tokens.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    throw HelpRequested{app.help()};
  }
}

json effective_config(const CLI::App& app) {
  json config = json::object();
  for (const CLI::Option* opt : app.get_options()) {
    if (opt->get_lnames().empty()) continue;
    const auto& name = opt->get_lnames().front();
    if (name == "help") continue;
    std::vector<std::string> values;
    if (opt->count() > 0) {
      values = opt->reduced_results();
    } else {
      auto def = opt->get_default_str();
      if (def.empty()) continue;
      if (def == "{}" || def == "[]") {
        def.clear();
      } else if (def.front() == '[' && def.back() == ']') {
        def = def.substr(1, def.size() - 2);
        std::size_t start = 0;
        while (start <= def.size()) {
          const auto comma = def.find(',', start);
          values.push_back(def.substr(start, comma == std::string::npos ? std::string::npos : comma - start));
          if (comma == std::string::npos) break;
          start = comma + 1;
        }
      } else {
        values.push_back(def);
      }
      if (def.empty() && opt->get_expected_max() > 1) {
        config[name] = json::array();
        continue;
      }
    }
    if (opt->get_expected_max() > 1) {
      json arr = json::array();
      for (const auto& v : values) arr.push_back(typed(v));
      config[name] = arr;
    } else if (!values.empty()) {
      config[name] = typed(values.back());
    }
  }
  return config;
}

std::string echo_config(const Context& ctx, const std::string& command, const json& config) {
  const json identity = {{"command", command}, {"config", config}};
  const auto digest = fnv1a_hex(identity.dump());
  ctx.out << json{{"command", command}, {"config", config}, {"config_digest", digest}}.dump() << '\n';
  return digest;
}

}  // namespace polariton::cli
