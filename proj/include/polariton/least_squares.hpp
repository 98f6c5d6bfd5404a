// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>

#include <functional>
#include <string>
#include <vector>

namespace polariton {

/// Weighted nonlinear least-squares problem. `evaluate` fills the (already
/// weighted) residual vector and, when `jacobian` is non-null, its Jacobian.
/// It returns false when the model is undefined at the given parameters; the
/// solver then treats the trial step as rejected.
struct LeastSquaresProblem {
  Eigen::Index num_residuals = 0;
  Eigen::Index num_parameters = 0;
  std::function<bool(const Eigen::VectorXd& params, Eigen::VectorXd& residuals, Eigen::MatrixXd* jacobian)>
      evaluate;
};

struct LeastSquaresOptions {
  int max_iterations = 200;
  /// Converged when every Jacobian column is this close to orthogonal to the
  /// residual vector (cosine test).
  double gradient_tolerance = 1e-10;
  double step_tolerance = 1e-12;
  double cost_tolerance = 1e-15;
  double initial_damping = 1e-3;
  /// Scaled-Jacobian condition number above which the fit is rank deficient.
  double max_condition = 1e12;
};

enum class SolverStatus { Converged, MaxIterations, RankDeficient, InvalidStart };

const char* to_string(SolverStatus status);

struct LeastSquaresSummary {
  Eigen::VectorXd params;
  double cost = 0.0;  // Σ r²
  int iterations = 0;
  SolverStatus status = SolverStatus::MaxIterations;
  std::string reason;
  /// Cost after the start and after every accepted step.
  std::vector<double> cost_history;
  /// s²·(JᵀJ)⁻¹ with s² = cost/(m − n); empty unless full rank and m > n.
  Eigen::MatrixXd covariance;
};

/// Levenberg–Marquardt with Marquardt's diagonal scaling. Only cost-decreasing
/// steps are accepted, so cost_history is non-increasing.
LeastSquaresSummary solve_least_squares(const LeastSquaresProblem& problem, const Eigen::VectorXd& initial,
                                        const LeastSquaresOptions& options = {});

}  // namespace polariton
