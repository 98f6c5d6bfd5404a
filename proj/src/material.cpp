// SPDX-License-Identifier: Apache-2.0

#include "polariton/material.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "polariton/errors.hpp"

namespace polariton {

void MaterialSpec::validate() const {
  if (!(moment_ratio > 0.0) || !std::isfinite(moment_ratio))
    throw ValidationError("material '" + name + "': moment_ratio must be positive");
  if (!(spin_density > 0.0) || !std::isfinite(spin_density))
    throw ValidationError("material '" + name + "': spin_density must be positive");
  if (!(g_factor > 0.0) || !std::isfinite(g_factor))
    throw ValidationError("material '" + name + "': g_factor must be positive");
}

MaterialSpec MaterialSpec::yig() { return {"yig", 5.0, 2.2e28, 2.0}; }

MaterialSpec MaterialSpec::life() {
  auto spec = yig();
  spec.name = "life";
  spec.spin_density *= kLifeToYigSpinDensityRatio;
  return spec;
}

MaterialLibrary::MaterialLibrary() {
  add(MaterialSpec::yig());
  add(MaterialSpec::life());
}

void MaterialLibrary::add(MaterialSpec spec) {
  spec.validate();
  auto name = spec.name;
  entries_.insert_or_assign(std::move(name), std::move(spec));
}

const MaterialSpec& MaterialLibrary::get(const std::string& name) const {
  const auto it = entries_.find(name);
  if (it == entries_.end()) throw ValidationError("unknown material preset '" + name + "'");
  return it->second;
}

MaterialLibrary MaterialLibrary::from_json_text(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError(std::string("materials file: ") + e.what());
  }
  if (!doc.is_object()) throw ValidationError("materials file must hold a JSON object");

  MaterialLibrary library;
  // pass 0: absolute densities, pass 1: relative entries
  for (int pass = 0; pass < 2; ++pass) {
    for (const auto& [name, entry] : doc.items()) {
      const bool relative = entry.contains("spin_density_ratio");
      if (relative != (pass == 1)) continue;
      try {
        MaterialSpec spec;
        spec.name = name;
        spec.moment_ratio = entry.at("moment_ratio").get<double>();
        spec.g_factor = entry.value("g_factor", 2.0);
        if (relative) {
          const auto& base = library.get(entry.at("relative_to").get<std::string>());
          spec.spin_density = base.spin_density * entry.at("spin_density_ratio").get<double>();
        } else {
          spec.spin_density = entry.at("spin_density").get<double>();
        }
        library.add(std::move(spec));
      } catch (const nlohmann::json::exception& e) {
        throw ValidationError("material '" + name + "': " + e.what());
      }
    }
  }
  return library;
}

MaterialLibrary MaterialLibrary::from_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open materials file '" + path.string() + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return from_json_text(buffer.str());
}

}  // namespace polariton
