// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "polariton/hybrid.hpp"
#include "polariton/least_squares.hpp"
#include "polariton/ridges.hpp"

namespace polariton {

struct FieldWindow {
  double lo = 0.0;  // T
  double hi = 0.0;  // T

  bool contains(double field) const { return field >= lo && field <= hi; }
};

/// Staged avoided-crossing fits.
///  - LinearCrossing: ω_c, g, g_eff, B_off of the hybrid eigenfrequencies with a Zeeman line, on the
///    region where both branches are visible.
///  - PolynomialMagnon: ω_c and g held fixed; ω_m(B) is recovered point-wise by
///    inverting the eigenfrequency relation and fitted with a polynomial.
///  - Turnover: Zeeman lines fitted on a rising and a falling field window
///    (ω_c, g held fixed), then the blend width of the smooth turnover.
enum class FitStage { LinearCrossing, PolynomialMagnon, Turnover };

const char* to_string(FitStage stage);

enum class HybridBranch { Lower, Upper };

struct FitOptions {
  FitStage stage = FitStage::LinearCrossing;
  std::optional<FieldWindow> window;          // LinearCrossing / PolynomialMagnon
  std::optional<FieldWindow> rising_window;   // Turnover
  std::optional<FieldWindow> falling_window;  // Turnover
  int polynomial_order = 3;
  LeastSquaresOptions solver;
};

struct FitParameter {
  std::string name;
  double value = 0.0;
  double sigma = 0.0;  // NaN when unavailable
  bool fixed = false;
};

struct StageWindow {
  std::string stage;
  FieldWindow window;
};

struct FitResult {
  FitStage stage = FitStage::LinearCrossing;
  HybridModel model;
  double rms_residual = 0.0;  // GHz, weighted
  std::vector<FitParameter> parameters;
  std::vector<StageWindow> fit_region;
  SolverStatus status = SolverStatus::Converged;
  bool valid = false;
  int iterations = 0;
  std::size_t points_used = 0;
  std::vector<double> cost_history;
  std::string message;

  const FitParameter& parameter(const std::string& name) const;
};

/// Maps every ridge point to ω_− or ω_+. With two or more branches the order
/// follows frequency (lowest branch → ω_−, highest → ω_+); otherwise each point
/// goes to the nearer branch of `reference`.
std::vector<HybridBranch> assign_branches(const RidgeSet& ridges, const HybridModel& reference);

/// Solves (ω_c² − y)ω_m² − 4ω_c g² ω_m + y(y − ω_c²) = 0 with y = f² for the
/// root consistent with `branch`. Empty when f is on the wrong side of ω_c.
std::optional<double> invert_branch(double omega_c, double g, double freq, HybridBranch branch);

/// Throws ValidationError on too few points (< 4 per free parameter) or a
/// mismatched initial dispersion. Non-convergence and rank deficiency are
/// reported through FitResult::status with valid = false.
FitResult fit_avoided_crossing(const RidgeSet& ridges, const HybridModel& init, const FitOptions& options);

/// Field below which g/ω_m(B) >= 0.1 for a Zeeman-line model. DomainError
/// unless the dispersion is Linear with positive slope.
double usc_bound(const HybridModel& model);
double usc_bound(const FitResult& fit);

}  // namespace polariton
