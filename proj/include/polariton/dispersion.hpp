// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <variant>
#include <vector>

namespace polariton {

/// Zeeman line ω_m = g_eff·(μ_B/h)·(B + B_off). Frequencies in GHz, fields in T.
struct LinearDispersion {
  double g_eff = 2.0;
  double b_offset = 0.0;

  /// dω_m/dB in GHz/T.
  double slope() const;
};

/// ω_m = Σ_k coeffs[k]·B^k, coefficients in GHz/T^k.
struct PolynomialDispersion {
  std::vector<double> coeffs;
};

/// Soft minimum of two Zeeman asymptotes,
///   ω_m = −w·ln(exp(−ω_rise/w) + exp(−ω_fall/w)),
/// which rounds off the corner where the rising and falling lines meet.
struct SmoothTurnoverDispersion {
  LinearDispersion rising;
  LinearDispersion falling;
  double blend_width = 0.05;  // GHz

  /// Field where the two asymptotes intersect.
  double asymptote_crossing() const;

  /// Softmax weight of the rising asymptote at `field`; the falling weight is 1 − this.
  double rising_weight(double field) const;

  /// ∂ω_m/∂w at fixed asymptotes.
  double blend_width_derivative(double field) const;
};

using MagnonDispersion =
    std::variant<LinearDispersion, PolynomialDispersion, SmoothTurnoverDispersion>;

struct DispersionDerivatives {
  double first = 0.0;   // GHz/T
  double second = 0.0;  // GHz/T²
};

double magnon_frequency(const MagnonDispersion& dispersion, double field);

DispersionDerivatives dispersion_derivatives(const MagnonDispersion& dispersion, double field);

/// Throws ValidationError for a non-finite coefficient, an empty polynomial or a
/// non-positive blend width.
void validate(const MagnonDispersion& dispersion);

}  // namespace polariton
