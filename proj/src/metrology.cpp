// SPDX-License-Identifier: Apache-2.0

#include "polariton/metrology.hpp"

#include <cmath>
#include <limits>

#include "polariton/errors.hpp"
#include "polariton/spectral_map.hpp"

namespace polariton {

CmpDerivatives cmp_derivatives(const HybridModel& model, double field) {
  const double omega_m = magnon_frequency(model.dispersion, field);
  const auto dm = dispersion_derivatives(model.dispersion, field);
  const double detuning = model.omega_c - omega_m;
  const double cmp = cmp_transition(model.omega_c, omega_m, model.g_cm);
  if (!(cmp > 0.0)) throw DomainError("CMP transition frequency is zero (g = 0 on resonance)");
  const double slope_sq = dm.first * dm.first;
  return {-detuning * dm.first / cmp,
          (slope_sq - detuning * dm.second) / cmp - detuning * detuning * slope_sq / (cmp * cmp * cmp)};
}

double predicted_fluctuation(const CmpDerivatives& d, double delta_field) {
  return d.first * delta_field + 0.5 * d.second * delta_field * delta_field;
}

MagicPoint magic_point_search(const MagnonDispersion& dispersion, FieldWindow bracket) {
  validate(dispersion);
  if (!(bracket.hi > bracket.lo)) throw ValidationError("magic-point bracket must have lo < hi");
  constexpr std::size_t kIntervals = 1000;
  const auto grid = linspace(bracket.lo, bracket.hi, kIntervals + 1);
  auto slope = [&dispersion](double b) { return dispersion_derivatives(dispersion, b).first; };

  std::size_t changes = 0;
  std::size_t found = 0;
  double previous = slope(grid[0]);
  for (std::size_t i = 1; i < grid.size(); ++i) {
    const double current = slope(grid[i]);
    if ((previous > 0.0 && current <= 0.0) || (previous < 0.0 && current >= 0.0)) {
      // A zero landing exactly on a grid node counts once.
      if (!(previous == 0.0)) {
        ++changes;
        found = i;
      }
    }
    previous = current;
  }
  if (changes == 0) throw DomainError("no turnover: dω_m/dB does not change sign in the bracket");
  if (changes > 1) throw DomainError("dω_m/dB changes sign " + std::to_string(changes) + " times in the bracket");

  double lo = grid[found - 1];
  double hi = grid[found];
  const double lo_sign = slope(lo);
  while (hi - lo >= 1e-9) {
    const double mid = 0.5 * (lo + hi);
    const double s = slope(mid);
    if (s == 0.0) {
      lo = hi = mid;
      break;
    }
    if ((s > 0.0) == (lo_sign > 0.0))
      lo = mid;
    else
      hi = mid;
  }
  const double field = 0.5 * (lo + hi);
  return {field, magnon_frequency(dispersion, field)};
}

SensitivityReport sensitivity_report(const HybridModel& model, FieldWindow bracket,
                                     const SensitivityOptions& options) {
  if (!(model.g_cm > 0.0)) throw ValidationError("sensitivity analysis needs g > 0");
  if (options.scan_points < 2) throw ValidationError("scan needs at least two points");
  const auto magic = magic_point_search(model.dispersion, bracket);

  SensitivityReport report;
  report.b_star = magic.field;
  report.omega_c_required = magic.omega_target;
  report.g_cm = model.g_cm;
  report.options = options;
  report.bracket = bracket;

  const HybridModel tuned{magic.omega_target, model.g_cm, model.dispersion};
  const auto at_magic = cmp_derivatives(tuned, magic.field);
  report.d1 = at_magic.first;
  report.d2 = at_magic.second;
  report.omega_cmp_at_b_star = cmp_transition(tuned, magic.field);

  report.detuned_omega_c = magic.omega_target + options.detune_baseline * model.g_cm;
  const HybridModel detuned{report.detuned_omega_c, model.g_cm, model.dispersion};
  report.detuned_d2 = cmp_derivatives(detuned, magic.field).second;
  report.suppression_ratio_d2 = report.d2 == 0.0 ? std::numeric_limits<double>::infinity()
                                                 : std::abs(report.detuned_d2) / std::abs(report.d2);
  report.double_magic =
      std::abs(report.d1) < options.first_threshold && std::abs(report.d2) < options.second_threshold;

  for (double b : linspace(bracket.lo, bracket.hi, options.scan_points)) {
    const auto d = cmp_derivatives(tuned, b);
    report.scan.push_back({b, cmp_transition(tuned, b), d.first, d.second});
  }
  return report;
}

}  // namespace polariton
