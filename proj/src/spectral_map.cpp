// SPDX-License-Identifier: Apache-2.0

#include "polariton/spectral_map.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <random>
#include <string>

#include "numeric.hpp"
#include "polariton/errors.hpp"

namespace polariton {
namespace {

constexpr std::string_view kHeader = "b_tesla,freq_ghz,s21_db";

void require_ascending(const std::vector<double>& grid, const char* name) {
  if (grid.empty()) throw ValidationError(std::string(name) + " grid is empty");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!std::isfinite(grid[i])) throw ValidationError(std::string(name) + " grid has non-finite values");
    if (i > 0 && !(grid[i] > grid[i - 1]))
      throw ValidationError(std::string(name) + " grid must be strictly ascending");
  }
}

double lorentzian(double f, double center, double fwhm) {
  const double x = 2.0 * (f - center) / fwhm;
  return 1.0 / (1.0 + x * x);
}

}  // namespace

void SpectralMap::validate() const {
  require_ascending(b_grid, "field");
  require_ascending(f_grid, "frequency");
  if (magnitude_db.size() != b_grid.size() * f_grid.size())
    throw ValidationError("spectral map matrix does not match its grids");
}

std::vector<double> linspace(double lo, double hi, std::size_t count) {
  std::vector<double> out(count);
  if (count == 1) {
    out[0] = lo;
    return out;
  }
  const double step = (hi - lo) / static_cast<double>(count - 1);
  for (std::size_t i = 0; i < count; ++i) out[i] = lo + step * static_cast<double>(i);
  out.back() = hi;
  return out;
}

double upper_branch_cavity_fraction(double omega_c, double omega_m, double g) {
  const double theta = 0.5 * std::atan2(2.0 * g, omega_c - omega_m);
  const double c = std::cos(theta);
  return c * c;
}

SpectralMap synth_s21_map(const HybridModel& model, const std::vector<double>& b_grid,
                          const std::vector<double>& f_grid, const SynthOptions& options) {
  model.validate();
  if (!(options.linewidths.cavity > 0.0) || !(options.linewidths.magnon > 0.0))
    throw ValidationError("linewidths must be positive");
  if (!(options.noise_db >= 0.0)) throw ValidationError("noise level must be non-negative");

  SpectralMap map{b_grid, f_grid, std::vector<double>(b_grid.size() * f_grid.size())};
  map.validate();

  const double background = std::pow(10.0, options.background_db / 10.0);
  for (std::size_t i = 0; i < b_grid.size(); ++i) {
    const double omega_m = magnon_frequency(model.dispersion, b_grid[i]);
    const auto modes = hybrid_eigenfrequencies(model.omega_c, omega_m, model.g_cm);
    const double upper_weight = upper_branch_cavity_fraction(model.omega_c, omega_m, model.g_cm);
    const double lower_weight = 1.0 - upper_weight;
    const auto& lw = options.linewidths;
    const double upper_width = upper_weight * lw.cavity + lower_weight * lw.magnon;
    const double lower_width = lower_weight * lw.cavity + upper_weight * lw.magnon;
    for (std::size_t j = 0; j < f_grid.size(); ++j) {
      const double f = f_grid[j];
      const double power = background + upper_weight * lorentzian(f, modes.upper, upper_width) +
                           lower_weight * lorentzian(f, modes.lower, lower_width);
      map.at(i, j) = 10.0 * std::log10(power);
    }
  }

  if (options.noise_db > 0.0) {
    std::mt19937_64 rng(options.seed);
    std::normal_distribution<double> noise(0.0, options.noise_db);
    for (auto& v : map.magnitude_db) v += noise(rng);
  }
  return map;
}

void write_spectral_map_csv(std::ostream& out, const SpectralMap& map) {
  using detail::format_double;
  out << kHeader << '\n';
  for (std::size_t i = 0; i < map.b_grid.size(); ++i) {
    const auto b = format_double(map.b_grid[i]);
    for (std::size_t j = 0; j < map.f_grid.size(); ++j)
      out << b << ',' << format_double(map.f_grid[j]) << ',' << format_double(map.at(i, j)) << '\n';
  }
}

SpectralMap read_spectral_map_csv(std::istream& in) {
  struct Row {
    double b, f, v;
    std::size_t line;
  };
  std::vector<Row> rows;
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
    const auto c1 = text.find(',');
    const auto c2 = c1 == std::string_view::npos ? c1 : text.find(',', c1 + 1);
    if (c2 == std::string_view::npos || text.find(',', c2 + 1) != std::string_view::npos)
      throw ParseError(line_no, "expected 3 columns");
    const auto b = detail::parse_double(text.substr(0, c1));
    const auto f = detail::parse_double(text.substr(c1 + 1, c2 - c1 - 1));
    const auto v = detail::parse_double(text.substr(c2 + 1));
    if (!b || !f || !v || !std::isfinite(*b) || !std::isfinite(*f) || !std::isfinite(*v))
      throw ParseError(line_no, "non-numeric value");
    rows.push_back({*b, *f, *v, line_no});
  }
  if (!header_seen) throw ParseError(line_no, "missing header");
  if (rows.empty()) throw ParseError(line_no, "spectral map has no rows");

  SpectralMap map;
  for (const auto& r : rows) {
    if (r.b != rows.front().b) break;
    map.f_grid.push_back(r.f);
  }
  const std::size_t nf = map.f_grid.size();
  if (rows.size() % nf != 0) throw ParseError(rows.back().line, "map is not a rectangular grid");
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const auto& r = rows[k];
    if (k % nf == 0) map.b_grid.push_back(r.b);
    if (r.b != map.b_grid.back() || r.f != map.f_grid[k % nf])
      throw ParseError(r.line, "map is not a rectangular field-major grid");
    map.magnitude_db.push_back(r.v);
  }
  map.validate();
  return map;
}

SpectralMap read_spectral_map_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open spectral map '" + path.string() + "'");
  return read_spectral_map_csv(in);
}

}  // namespace polariton
