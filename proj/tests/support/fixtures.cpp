// SPDX-License-Identifier: Apache-2.0

#include "fixtures.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace fixtures {

using polariton::FieldCell;
using polariton::FieldMap;
using polariton::Region;

FieldMap sphere_in_cylinder(std::size_t nr, std::size_t nphi, std::size_t nz, double radius, double omega_c) {
  FieldMap map;
  map.omega_c = omega_c;
  map.cells.reserve(nr * nphi * nz);
  const double dr = radius / static_cast<double>(nr);
  const double dphi = 2.0 * M_PI / static_cast<double>(nphi);
  const double dz = 2.0 * radius / static_cast<double>(nz);
  for (std::size_t i = 0; i < nr; ++i) {
    const double r1 = dr * static_cast<double>(i);
    const double r2 = r1 + dr;
    // centroid radius of an annular sector
    const double rc = 2.0 / 3.0 * (r2 * r2 * r2 - r1 * r1 * r1) / (r2 * r2 - r1 * r1);
    const double vol = 0.5 * (r2 * r2 - r1 * r1) * dphi * dz;
    for (std::size_t j = 0; j < nphi; ++j) {
      const double phi = dphi * (static_cast<double>(j) + 0.5);
      for (std::size_t k = 0; k < nz; ++k) {
        const double z = -radius + dz * (static_cast<double>(k) + 0.5);
        FieldCell cell{};
        cell.position = {rc * std::cos(phi), rc * std::sin(phi), z};
        cell.volume = vol;
        cell.region = (rc * rc + z * z < radius * radius) ? Region::sample() : Region::vacuum();
        cell.e = {0.0, 0.0, 1.0};
        cell.h = {1.0, 0.0, 0.0};
        map.cells.push_back(cell);
      }
    }
  }
  return map;
}

double sphere_in_cylinder_eta() { return std::sqrt(2.0 / 3.0); }

FieldMap two_region(double vs, double hs, double es, double vv, double hv, double ev, double sample_eps,
                    double omega_c) {
  FieldMap map;
  map.omega_c = omega_c;
  map.cells.push_back(FieldCell{{0, 0, 0}, vs, Region::sample(sample_eps), {0, 0, es}, {hs, 0, 0}});
  map.cells.push_back(FieldCell{{1, 0, 0}, vv, Region::vacuum(), {0, 0, ev}, {hv, 0, 0}});
  return map;
}

double fd_first(const std::function<double(double)>& f, double x, double h) {
  const auto d = [&](double s) { return (f(x + s) - f(x - s)) / (2.0 * s); };
  return (4.0 * d(h / 2.0) - d(h)) / 3.0;
}

double fd_second(const std::function<double(double)>& f, double x, double h) {
  const auto d = [&](double s) { return (f(x + s) - 2.0 * f(x) + f(x - s)) / (s * s); };
  return (4.0 * d(h / 2.0) - d(h)) / 3.0;
}

std::filesystem::path scratch_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("polariton_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

}  // namespace fixtures
