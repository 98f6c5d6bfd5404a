// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <numbers>

namespace polariton {

/// CODATA 2022 values. Every other module reads physical constants from here.
struct PhysicalConstants {
  /// μ_B/h in GHz/T.
  static constexpr double bohr_magneton_over_planck = 13.9962449171;
  /// μ_B in J/T.
  static constexpr double bohr_magneton = 9.2740100657e-24;
  /// μ_0 in N/A².
  static constexpr double mu0 = 1.25663706127e-6;
  /// ħ in J·s.
  static constexpr double hbar = 1.054571817e-34;
  /// c in m/s.
  static constexpr double speed_of_light = 299792458.0;
};

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Linear frequency in GHz -> angular frequency in rad/s.
constexpr double ghz_to_angular(double ghz) { return kTwoPi * ghz * 1e9; }

/// Angular frequency in rad/s -> linear frequency in GHz.
constexpr double angular_to_ghz(double rad_per_s) { return rad_per_s / (kTwoPi * 1e9); }

}  // namespace polariton
