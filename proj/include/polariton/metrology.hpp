// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

#include "polariton/fit.hpp"
#include "polariton/hybrid.hpp"

namespace polariton {

struct CmpDerivatives {
  double first = 0.0;   // GHz/T
  double second = 0.0;  // GHz/T²
};

/// Exact first and second field derivatives of the RWA transition frequency
/// ω_CMP = sqrt((ω_c − ω_m)² + 4g²):
///   ω_CMP'  = −(ω_c − ω_m)·ω_m' / ω_CMP
///   ω_CMP'' = [ω_m'² − (ω_c − ω_m)·ω_m''] / ω_CMP − (ω_c − ω_m)²·ω_m'² / ω_CMP³
CmpDerivatives cmp_derivatives(const HybridModel& model, double field);

/// Second-order change of ω_CMP for a bias step δB: ω_CMP'·δB + ½·ω_CMP''·δB².
double predicted_fluctuation(const CmpDerivatives& d, double delta_field);

struct MagicPoint {
  double field = 0.0;         // B*, T
  double omega_target = 0.0;  // ω_m(B*), GHz: the cavity frequency for double suppression
};

/// Turnover of ω_m(B): bisection on dω_m/dB to |ΔB| < 1e-9 T. A 1000-interval
/// scan of the bracket must show exactly one sign change (DomainError otherwise).
MagicPoint magic_point_search(const MagnonDispersion& dispersion, FieldWindow bracket);

struct SensitivityOptions {
  double detune_baseline = 5.0;  // multiples of g
  double first_threshold = 1e-3;   // GHz/T
  double second_threshold = 1.0;   // GHz/T²
  std::size_t scan_points = 201;
};

struct SensitivityScanRow {
  double field = 0.0;
  double omega_cmp = 0.0;
  double first = 0.0;
  double second = 0.0;
};

struct SensitivityReport {
  double b_star = 0.0;
  double omega_c_required = 0.0;
  double g_cm = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;
  double omega_cmp_at_b_star = 0.0;
  double detuned_omega_c = 0.0;
  double detuned_d2 = 0.0;
  double suppression_ratio_d2 = 0.0;  // |d2(detuned)| / |d2(magic)|, +inf if d2(magic) = 0
  bool double_magic = false;
  SensitivityOptions options;
  FieldWindow bracket;
  std::vector<SensitivityScanRow> scan;  // at ω_c = ω_target
};

/// Derivatives at the magic point with ω_c set to ω_target, versus the same
/// evaluation with ω_c detuned by detune_baseline·g. `model.omega_c` is not used.
SensitivityReport sensitivity_report(const HybridModel& model, FieldWindow bracket,
                                     const SensitivityOptions& options = {});

}  // namespace polariton
