// SPDX-License-Identifier: Apache-2.0

#include "polariton/dispersion.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "polariton/constants.hpp"
#include "polariton/errors.hpp"

namespace polariton {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};

double evaluate(const LinearDispersion& d, double field) {
  return d.slope() * (field + d.b_offset);
}

double evaluate(const PolynomialDispersion& d, double field) {
  double acc = 0.0;
  for (auto it = d.coeffs.rbegin(); it != d.coeffs.rend(); ++it) acc = acc * field + *it;
  return acc;
}

double evaluate(const SmoothTurnoverDispersion& d, double field) {
  const double rise = evaluate(d.rising, field);
  const double fall = evaluate(d.falling, field);
  const double lower = std::min(rise, fall);
  return lower - d.blend_width * std::log1p(std::exp(-std::abs(rise - fall) / d.blend_width));
}

DispersionDerivatives derivatives(const LinearDispersion& d, double) { return {d.slope(), 0.0}; }

DispersionDerivatives derivatives(const PolynomialDispersion& d, double field) {
  double first = 0.0;
  double second = 0.0;
  const auto n = d.coeffs.size();
  for (std::size_t k = n; k-- > 1;) first = first * field + static_cast<double>(k) * d.coeffs[k];
  for (std::size_t k = n; k-- > 2;)
    second = second * field + static_cast<double>(k * (k - 1)) * d.coeffs[k];
  return {first, second};
}

DispersionDerivatives derivatives(const SmoothTurnoverDispersion& d, double field) {
  const double w_rise = d.rising_weight(field);
  const double w_fall = 1.0 - w_rise;
  const double s_rise = d.rising.slope();
  const double s_fall = d.falling.slope();
  const double diff = s_rise - s_fall;
  return {w_rise * s_rise + w_fall * s_fall, -w_rise * w_fall * diff * diff / d.blend_width};
}

void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) throw ValidationError(std::string("non-finite dispersion parameter: ") + what);
}

}  // namespace

double LinearDispersion::slope() const {
  return g_eff * PhysicalConstants::bohr_magneton_over_planck;
}

double SmoothTurnoverDispersion::asymptote_crossing() const {
  const double s_rise = rising.slope();
  const double s_fall = falling.slope();
  if (s_rise == s_fall) throw DomainError("turnover asymptotes are parallel");
  return (s_fall * falling.b_offset - s_rise * rising.b_offset) / (s_rise - s_fall);
}

double SmoothTurnoverDispersion::rising_weight(double field) const {
  const double gap = (evaluate(rising, field) - evaluate(falling, field)) / blend_width;
  // 1 / (1 + exp(gap)) without overflow
  if (gap > 0.0) {
    const double e = std::exp(-gap);
    return e / (1.0 + e);
  }
  return 1.0 / (1.0 + std::exp(gap));
}

double SmoothTurnoverDispersion::blend_width_derivative(double field) const {
  const double w_rise = rising_weight(field);
  const double mean = w_rise * evaluate(rising, field) + (1.0 - w_rise) * evaluate(falling, field);
  return (evaluate(*this, field) - mean) / blend_width;
}

double magnon_frequency(const MagnonDispersion& dispersion, double field) {
  return std::visit([field](const auto& d) { return evaluate(d, field); }, dispersion);
}

DispersionDerivatives dispersion_derivatives(const MagnonDispersion& dispersion, double field) {
  return std::visit([field](const auto& d) { return derivatives(d, field); }, dispersion);
}

void validate(const MagnonDispersion& dispersion) {
  std::visit(Overloaded{
                 [](const LinearDispersion& d) {
                   require_finite(d.g_eff, "g_eff");
                   require_finite(d.b_offset, "b_offset");
                 },
                 [](const PolynomialDispersion& d) {
                   if (d.coeffs.empty()) throw ValidationError("polynomial dispersion has no coefficients");
                   for (double c : d.coeffs) require_finite(c, "polynomial coefficient");
                 },
                 [](const SmoothTurnoverDispersion& d) {
                   require_finite(d.rising.g_eff, "rising g_eff");
                   require_finite(d.rising.b_offset, "rising b_offset");
                   require_finite(d.falling.g_eff, "falling g_eff");
                   require_finite(d.falling.b_offset, "falling b_offset");
                   if (!(d.blend_width > 0.0) || !std::isfinite(d.blend_width))
                     throw ValidationError("turnover blend width must be positive");
                 },
             },
             dispersion);
}

}  // namespace polariton
