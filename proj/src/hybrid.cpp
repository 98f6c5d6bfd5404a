// SPDX-License-Identifier: Apache-2.0

#include "polariton/hybrid.hpp"

#include <cmath>
#include <utility>

#include "polariton/errors.hpp"

namespace polariton {

void HybridModel::validate() const {
  if (!(omega_c > 0.0) || !std::isfinite(omega_c))
    throw ValidationError("cavity frequency must be positive");
  if (!(g_cm >= 0.0) || !std::isfinite(g_cm))
    throw ValidationError("coupling rate must be non-negative");
  polariton::validate(dispersion);
}

ModePair hybrid_eigenfrequencies(double omega_c, double omega_m, double g) {
  if (omega_m < 0.0) throw DomainError("negative magnon frequency");
  const double mean_sq = 0.5 * (omega_c * omega_c + omega_m * omega_m);
  const double half_diff_sq = 0.5 * (omega_c * omega_c - omega_m * omega_m);
  const double radicand = half_diff_sq * half_diff_sq + 4.0 * omega_c * omega_m * g * g;
  if (radicand < 0.0) throw DomainError("hybrid eigenfrequency discriminant is negative");
  const double root = std::sqrt(radicand);
  const double lower_sq = mean_sq - root;
  if (lower_sq < 0.0)
    throw DomainError("lower hybrid mode is unstable (g^2 > omega_c*omega_m/4)");
  return {std::sqrt(lower_sq), std::sqrt(mean_sq + root)};
}

ModePair hybrid_eigenfrequencies(const HybridModel& model, double field) {
  return hybrid_eigenfrequencies(model.omega_c, magnon_frequency(model.dispersion, field), model.g_cm);
}

ModePair hybrid_eigenfrequencies_rwa(double omega_c, double omega_m, double g) {
  const double mean = 0.5 * (omega_c + omega_m);
  const double half_split = 0.5 * cmp_transition(omega_c, omega_m, g);
  return {mean - half_split, mean + half_split};
}

ModePair hybrid_eigenfrequencies_rwa(const HybridModel& model, double field) {
  return hybrid_eigenfrequencies_rwa(model.omega_c, magnon_frequency(model.dispersion, field),
                                     model.g_cm);
}

double cmp_transition(double omega_c, double omega_m, double g) {
  return 2.0 * std::hypot(0.5 * (omega_c - omega_m), g);
}

double cmp_transition(const HybridModel& model, double field) {
  return cmp_transition(model.omega_c, magnon_frequency(model.dispersion, field), model.g_cm);
}

HybridPartials hybrid_partials(double omega_c, double omega_m, double g) {
  const auto modes = hybrid_eigenfrequencies(omega_c, omega_m, g);
  if (modes.lower <= 0.0) throw DomainError("lower hybrid mode has zero frequency");

  const double q = 0.5 * (omega_c * omega_c - omega_m * omega_m);
  const double r = std::sqrt(q * q + 4.0 * omega_c * omega_m * g * g);
  // r = 0 only at g = 0 on resonance, where the branches touch; take the
  // symmetric (zero) derivative of r there.
  double dr_dc = 0.0, dr_dm = 0.0, dr_dg = 0.0;
  if (r > 0.0) {
    dr_dc = (q * omega_c + 2.0 * omega_m * g * g) / r;
    dr_dm = (-q * omega_m + 2.0 * omega_c * g * g) / r;
    dr_dg = 4.0 * omega_c * omega_m * g / r;
  }
  auto branch = [&](double omega, double sign) {
    const double inv = 0.5 / omega;
    return BranchPartials{(omega_c + sign * dr_dc) * inv, (omega_m + sign * dr_dm) * inv,
                          sign * dr_dg * inv};
  };
  return {modes, branch(modes.lower, -1.0), branch(modes.upper, 1.0)};
}

}  // namespace polariton
