// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "polariton/field_map.hpp"
#include "polariton/material.hpp"

namespace polariton {

/// η = sqrt(((∫_Vm H_x dV)² + (∫_Vm H_y dV)²) / (V_m ∫_Vc |H|² dV)).
double form_factor(const FieldMap& map);

/// ζ_m = ∫_Vm |H|² dV / ∫_Vc |H|² dV.
double filling_factor_magnetic(const FieldMap& map);

/// ζ_e = ∫_Vm ε_r|E|² dV / ∫_Vc ε_r|E|² dV.
double filling_factor_electric(const FieldMap& map);

/// Coupling rates of the linearized Zeeman interaction, in GHz. g_y is the real
/// coefficient of the i prefactor; g_x² + g_y² equals the uniform-mode g_cm².
struct CouplingComponents {
  double g_x = 0.0;
  double g_y = 0.0;
  double g_z = 0.0;
  double omega_z = 0.0;

  double transverse() const;
};

CouplingComponents coupling_components(const FieldMap& map, const MaterialSpec& material);

/// Uniform-precession coupling g = (γ/2)·η·sqrt(μ0·(S/V_m)·ħ·ω_c), linear GHz in and out.
double first_principles_coupling(double eta, double omega_c, const MaterialSpec& material);

/// g ∝ sqrt((μ/(g·μ_B))·n_s): rescales a known coupling to another material.
double material_scale(double g_known, const MaterialSpec& from, const MaterialSpec& to);

/// g from g² = ω_c²·χ_eff·ζ_m, for a user-supplied effective susceptibility.
double filling_factor_coupling(double omega_c, double chi_eff, double zeta_m);

/// Rotates cell positions and E, H vectors about z by theta (radians).
FieldMap rotate_transverse(const FieldMap& map, double theta);

enum class CouplingRegime { NoTransverseCoupling, Weak, UltraStrong, DeepStrong };

/// USC when g/ω_c >= 0.1, DSC when g/ω_c >= 1.
CouplingRegime classify_coupling(double g, double omega_c);
const char* to_string(CouplingRegime regime);

/// All overlap quantities of one map, with the 0 <= η <= 1 and η² <= ζ_m
/// checks applied (std::logic_error on violation).
struct OverlapSummary {
  double eta = 0.0;
  double zeta_m = 0.0;
  double zeta_e = 0.0;
  double sample_volume = 0.0;
  double cavity_volume = 0.0;
};

OverlapSummary summarize_overlap(const FieldMap& map);

}  // namespace polariton
