// SPDX-License-Identifier: Apache-2.0

#include "polariton/field_map.hpp"

#include <array>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>

#include "numeric.hpp"
#include "polariton/errors.hpp"

namespace polariton {
namespace {

constexpr std::string_view kHeader = "x_m,y_m,z_m,cell_vol_m3,region,ex,ey,ez,hx,hy,hz";
constexpr std::size_t kColumns = 11;

bool finite(const Vec3& v) { return std::isfinite(v.x) && std::isfinite(v.y) && std::isfinite(v.z); }

Region parse_region(std::string_view token, double sample_eps_r, std::size_t line) {
  token = detail::trim(token);
  if (token == "vacuum") return Region::vacuum();
  if (token == "sample") return Region::sample(sample_eps_r);
  auto with_eps = [&](std::string_view prefix) -> std::optional<double> {
    if (token.substr(0, prefix.size()) != prefix) return std::nullopt;
    const auto eps = detail::parse_double(token.substr(prefix.size()));
    if (!eps || !(*eps > 0.0)) throw ParseError(line, "invalid relative permittivity in region '" + std::string(token) + "'");
    return eps;
  };
  if (auto eps = with_eps("dielectric:")) return Region::dielectric(*eps);
  if (auto eps = with_eps("sample:")) return Region::sample(*eps);
  throw ParseError(line, "unknown region '" + std::string(token) + "'");
}

}  // namespace

double FieldMap::sample_volume() const {
  detail::CompensatedSum sum;
  for (const auto& c : cells)
    if (c.region.is_sample()) sum.add(c.volume);
  return sum.value();
}

double FieldMap::cavity_volume() const {
  detail::CompensatedSum sum;
  for (const auto& c : cells) sum.add(c.volume);
  return sum.value();
}

void FieldMap::validate() const {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const auto& c = cells[i];
    if (!(c.volume > 0.0) || !std::isfinite(c.volume))
      throw ValidationError("cell " + std::to_string(i) + " has non-positive volume");
    if (!finite(c.position) || !finite(c.e) || !finite(c.h))
      throw ValidationError("cell " + std::to_string(i) + " has non-finite values");
  }
  if (!(sample_volume() > 0.0)) throw ValidationError("field map has no sample cells");
}

FieldMap read_field_map_csv(std::istream& in, double omega_c, double sample_eps_r) {
  FieldMap map;
  map.omega_c = omega_c;
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    const auto text = detail::trim(line);
    if (text.empty() || text.front() == '#') continue;
    if (!header_seen) {
      if (text != kHeader) throw ParseError(line_no, "expected header '" + std::string(kHeader) + "'");
      header_seen = true;
      continue;
    }
    std::array<std::string_view, kColumns> fields;
    std::size_t n = 0;
    std::size_t start = 0;
    while (true) {
      const auto comma = text.find(',', start);
      if (n == kColumns) throw ParseError(line_no, "too many columns");
      fields[n++] = text.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (n != kColumns)
      throw ParseError(line_no, "expected " + std::to_string(kColumns) + " columns, got " + std::to_string(n));

    std::array<double, kColumns> v{};
    for (std::size_t k = 0; k < kColumns; ++k) {
      if (k == 4) continue;
      const auto parsed = detail::parse_double(fields[k]);
      if (!parsed || !std::isfinite(*parsed))
        throw ParseError(line_no, "column " + std::to_string(k + 1) + " is not a finite number");
      v[k] = *parsed;
    }
    if (!(v[3] > 0.0)) throw ParseError(line_no, "cell volume must be positive");
    map.cells.push_back(FieldCell{{v[0], v[1], v[2]}, v[3], parse_region(fields[4], sample_eps_r, line_no),
                                  {v[5], v[6], v[7]}, {v[8], v[9], v[10]}});
  }
  if (!header_seen) throw ParseError(line_no, "missing header");
  if (map.cells.empty()) throw ParseError(line_no, "field map has no cells");
  return map;
}

FieldMap read_field_map_csv(const std::filesystem::path& path, double omega_c, double sample_eps_r) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open field map '" + path.string() + "'");
  return read_field_map_csv(in, omega_c, sample_eps_r);
}

std::string to_string(const Region& region) {
  switch (region.kind) {
    case RegionKind::Vacuum:
      return "vacuum";
    case RegionKind::Sample:
      return region.eps_r == 1.0 ? "sample" : "sample:" + detail::format_double(region.eps_r);
    case RegionKind::Dielectric:
      return "dielectric:" + detail::format_double(region.eps_r);
  }
  return "vacuum";
}

void write_field_map_csv(std::ostream& out, const FieldMap& map) {
  using detail::format_double;
  out << kHeader << '\n';
  for (const auto& c : map.cells) {
    out << format_double(c.position.x) << ',' << format_double(c.position.y) << ','
        << format_double(c.position.z) << ',' << format_double(c.volume) << ',' << to_string(c.region)
        << ',' << format_double(c.e.x) << ',' << format_double(c.e.y) << ',' << format_double(c.e.z)
        << ',' << format_double(c.h.x) << ',' << format_double(c.h.y) << ',' << format_double(c.h.z)
        << '\n';
  }
}

}  // namespace polariton
