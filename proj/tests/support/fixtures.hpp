// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <functional>
#include <string>

#include "polariton/field_map.hpp"

namespace fixtures {

/// Sphere of radius R centred in a cylinder of radius R and height 2R, with a
/// uniform H along x. Ring cells (nr × nphi × nz) have exact volumes; a cell is
/// sample when its centroid lies inside the sphere.
polariton::FieldMap sphere_in_cylinder(std::size_t nr, std::size_t nphi, std::size_t nz, double radius = 1e-3,
                                       double omega_c = 5.9);

/// Analytic η of the sphere-in-cylinder geometry: sqrt(V_sphere / V_cyl) = sqrt(2/3).
double sphere_in_cylinder_eta();

/// One sample cell and one vacuum cell with prescribed field amplitudes.
/// ζ_m = Vs·hs² / (Vs·hs² + Vv·hv²), likewise for E with eps weighting.
polariton::FieldMap two_region(double vs, double hs, double es, double vv, double hv, double ev,
                               double sample_eps = 1.0, double omega_c = 5.0);

/// Richardson-extrapolated central differences (two levels, h and h/2).
double fd_first(const std::function<double(double)>& f, double x, double h);
double fd_second(const std::function<double(double)>& f, double x, double h);

/// Fresh empty directory under the system temp dir.
std::filesystem::path scratch_dir(const std::string& name);

std::string slurp(const std::filesystem::path& path);

}  // namespace fixtures
