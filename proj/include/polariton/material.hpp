// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <map>
#include <string>

namespace polariton {

/// Magnetic material constants entering the macrospin S = (μ/(g·μ_B))·n_s·V_m.
struct MaterialSpec {
  std::string name;
  double moment_ratio = 5.0;   // μ/μ_B
  double spin_density = 0.0;   // m⁻³
  double g_factor = 2.0;

  /// S/V_m in m⁻³.
  double macrospin_density() const { return moment_ratio / g_factor * spin_density; }

  void validate() const;

  static MaterialSpec yig();
  /// Lithium ferrite: same moment as YIG, 2.13x the spin density.
  static MaterialSpec life();
};

inline constexpr double kLifeToYigSpinDensityRatio = 2.13;

/// Named material presets, seeded with `yig` and `life`.
class MaterialLibrary {
 public:
  MaterialLibrary();

  /// Loads a JSON object of presets. Each entry carries `moment_ratio`,
  /// `g_factor` (optional, default 2) and either `spin_density` or
  /// `spin_density_ratio` + `relative_to` (name of an already known preset).
  /// Entries override built-ins of the same name.
  static MaterialLibrary from_json_file(const std::filesystem::path& path);
  static MaterialLibrary from_json_text(const std::string& text);

  const MaterialSpec& get(const std::string& name) const;
  void add(MaterialSpec spec);

  const std::map<std::string, MaterialSpec>& entries() const { return entries_; }

 private:
  std::map<std::string, MaterialSpec> entries_;
};

}  // namespace polariton
