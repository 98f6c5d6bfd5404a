// SPDX-License-Identifier: Apache-2.0

#include "polariton/coupling.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "numeric.hpp"
#include "polariton/constants.hpp"
#include "polariton/errors.hpp"

namespace polariton {
namespace {

using detail::CompensatedSum;

struct MagneticIntegrals {
  double sample_volume = 0.0;
  Vec3 sample_h;            // ∫_Vm H dV
  double sample_energy = 0.0;  // ∫_Vm |H|² dV
  double total_energy = 0.0;   // ∫_Vc |H|² dV
};

MagneticIntegrals integrate_magnetic(const FieldMap& map) {
  CompensatedSum volume, hx, hy, hz, inside, total;
  for (const auto& c : map.cells) {
    const double energy = c.h.norm_sq() * c.volume;
    total.add(energy);
    if (!c.region.is_sample()) continue;
    volume.add(c.volume);
    hx.add(c.h.x * c.volume);
    hy.add(c.h.y * c.volume);
    hz.add(c.h.z * c.volume);
    inside.add(energy);
  }
  MagneticIntegrals out{volume.value(), {hx.value(), hy.value(), hz.value()}, inside.value(), total.value()};
  if (!(out.sample_volume > 0.0)) throw ValidationError("field map has no sample volume");
  return out;
}

double gyromagnetic_ratio(const MaterialSpec& material) {
  return material.g_factor * PhysicalConstants::bohr_magneton / PhysicalConstants::hbar;
}

}  // namespace

double CouplingComponents::transverse() const { return std::hypot(g_x, g_y); }

double form_factor(const FieldMap& map) {
  const auto m = integrate_magnetic(map);
  if (!(m.total_energy > 0.0)) return 0.0;
  const double transverse_sq = m.sample_h.x * m.sample_h.x + m.sample_h.y * m.sample_h.y;
  return std::sqrt(transverse_sq / (m.sample_volume * m.total_energy));
}

double filling_factor_magnetic(const FieldMap& map) {
  const auto m = integrate_magnetic(map);
  if (!(m.total_energy > 0.0)) return 0.0;
  return m.sample_energy / m.total_energy;
}

double filling_factor_electric(const FieldMap& map) {
  CompensatedSum volume, inside, total;
  for (const auto& c : map.cells) {
    const double energy = c.region.eps_r * c.e.norm_sq() * c.volume;
    total.add(energy);
    if (c.region.is_sample()) {
      volume.add(c.volume);
      inside.add(energy);
    }
  }
  if (!(volume.value() > 0.0)) throw ValidationError("field map has no sample volume");
  if (!(total.value() > 0.0)) return 0.0;
  return inside.value() / total.value();
}

CouplingComponents coupling_components(const FieldMap& map, const MaterialSpec& material) {
  material.validate();
  if (!(map.omega_c > 0.0)) throw ValidationError("cavity frequency must be positive");
  const auto m = integrate_magnetic(map);
  if (!(m.total_energy > 0.0)) throw ValidationError("field map carries no magnetic energy");

  const double gamma = gyromagnetic_ratio(material);
  const double omega = ghz_to_angular(map.omega_c);
  const double spins = material.macrospin_density() * m.sample_volume;  // S
  const double norm = std::sqrt(m.total_energy);
  const double hbar_omega_mu0 = PhysicalConstants::hbar * omega * PhysicalConstants::mu0;

  // ∇×U = sqrt(ε_rc)·(ω_c/c)·H/sqrt(∫|H|²); ε_rc cancels and 1/(c·sqrt(ε0)) = sqrt(μ0).
  const double transverse_scale = 0.5 * gamma * std::sqrt(hbar_omega_mu0 * spins) / m.sample_volume / norm;
  const double parallel_scale = gamma * std::sqrt(0.5 * hbar_omega_mu0) / m.sample_volume / norm;

  CouplingComponents out;
  out.g_x = angular_to_ghz(-transverse_scale * m.sample_h.x);
  out.g_y = angular_to_ghz(transverse_scale * m.sample_h.y);
  out.g_z = angular_to_ghz(parallel_scale * m.sample_h.z);
  out.omega_z = -spins * out.g_z;
  return out;
}

double first_principles_coupling(double eta, double omega_c, const MaterialSpec& material) {
  if (!(eta >= 0.0 && eta <= 1.0)) throw ValidationError("form factor must lie in [0, 1]");
  if (!(omega_c > 0.0)) throw ValidationError("cavity frequency must be positive");
  material.validate();
  const double gamma = gyromagnetic_ratio(material);
  const double field = std::sqrt(PhysicalConstants::mu0 * material.macrospin_density() *
                                 PhysicalConstants::hbar * ghz_to_angular(omega_c));
  return angular_to_ghz(0.5 * gamma * eta * field);
}

double material_scale(double g_known, const MaterialSpec& from, const MaterialSpec& to) {
  from.validate();
  to.validate();
  return g_known * std::sqrt(to.macrospin_density() / from.macrospin_density());
}

double filling_factor_coupling(double omega_c, double chi_eff, double zeta_m) {
  if (!(chi_eff >= 0.0) || !(zeta_m >= 0.0)) throw ValidationError("chi_eff and zeta_m must be non-negative");
  return omega_c * std::sqrt(chi_eff * zeta_m);
}

FieldMap rotate_transverse(const FieldMap& map, double theta) {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  auto rotate = [c, s](const Vec3& v) { return Vec3{c * v.x - s * v.y, s * v.x + c * v.y, v.z}; };
  FieldMap out = map;
  for (auto& cell : out.cells) {
    cell.position = rotate(cell.position);
    cell.e = rotate(cell.e);
    cell.h = rotate(cell.h);
  }
  return out;
}

CouplingRegime classify_coupling(double g, double omega_c) {
  if (g == 0.0) return CouplingRegime::NoTransverseCoupling;
  const double ratio = g / omega_c;
  if (ratio >= 1.0) return CouplingRegime::DeepStrong;
  if (ratio >= 0.1) return CouplingRegime::UltraStrong;
  return CouplingRegime::Weak;
}

const char* to_string(CouplingRegime regime) {
  switch (regime) {
    case CouplingRegime::NoTransverseCoupling:
      return "no transverse coupling";
    case CouplingRegime::Weak:
      return "below USC";
    case CouplingRegime::UltraStrong:
      return "USC";
    case CouplingRegime::DeepStrong:
      return "DSC";
  }
  return "unknown";
}

OverlapSummary summarize_overlap(const FieldMap& map) {
  map.validate();
  OverlapSummary out;
  out.eta = form_factor(map);
  out.zeta_m = filling_factor_magnetic(map);
  out.zeta_e = filling_factor_electric(map);
  out.sample_volume = map.sample_volume();
  out.cavity_volume = map.cavity_volume();
  constexpr double slack = 1e-12;
  if (out.eta < 0.0 || out.eta > 1.0 + slack) throw std::logic_error("form factor outside [0, 1]");
  if (out.eta * out.eta > out.zeta_m * (1.0 + slack) + slack)
    throw std::logic_error("form factor squared exceeds magnetic filling factor");
  return out;
}

}  // namespace polariton
