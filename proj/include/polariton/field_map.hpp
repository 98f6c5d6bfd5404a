// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace polariton {

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  double norm_sq() const { return x * x + y * y + z * z; }
};

enum class RegionKind { Sample, Vacuum, Dielectric };

struct Region {
  RegionKind kind = RegionKind::Vacuum;
  double eps_r = 1.0;

  static Region sample(double eps_r = 1.0) { return {RegionKind::Sample, eps_r}; }
  static Region vacuum() { return {RegionKind::Vacuum, 1.0}; }
  static Region dielectric(double eps_r) { return {RegionKind::Dielectric, eps_r}; }

  bool is_sample() const { return kind == RegionKind::Sample; }
};

/// One mesh cell of an exported cavity eigenmode. Fields are real vectors at
/// the instant of maximal magnetic energy; their overall scale is arbitrary.
struct FieldCell {
  Vec3 position;   // m
  double volume;   // m³
  Region region;
  Vec3 e;          // V/m
  Vec3 h;          // A/m
};

struct FieldMap {
  std::vector<FieldCell> cells;
  double omega_c = 0.0;  // GHz

  double sample_volume() const;
  double cavity_volume() const;

  /// Requires positive finite cell volumes, finite fields and a non-empty sample.
  void validate() const;
};

/// Parses the field-map CSV
///   x_m,y_m,z_m,cell_vol_m3,region,ex,ey,ez,hx,hy,hz
/// region ∈ {sample, sample:<eps_r>, vacuum, dielectric:<eps_r>}. Bare `sample`
/// cells take `sample_eps_r`. Lines starting with '#' are ignored.
/// Throws ParseError with the offending line number.
FieldMap read_field_map_csv(std::istream& in, double omega_c, double sample_eps_r = 1.0);
FieldMap read_field_map_csv(const std::filesystem::path& path, double omega_c,
                            double sample_eps_r = 1.0);

void write_field_map_csv(std::ostream& out, const FieldMap& map);

std::string to_string(const Region& region);

}  // namespace polariton
