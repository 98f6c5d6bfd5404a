// SPDX-License-Identifier: Apache-2.0

#include "polariton/least_squares.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "polariton/errors.hpp"

namespace polariton {
namespace {

constexpr double kMaxDamping = 1e16;

// Largest cosine between the residual vector and any Jacobian column.
double gradient_cosine(const Eigen::MatrixXd& jac, const Eigen::VectorXd& residuals) {
  const double rnorm = residuals.norm();
  if (rnorm == 0.0) return 0.0;
  double worst = 0.0;
  for (Eigen::Index j = 0; j < jac.cols(); ++j) {
    const double cnorm = jac.col(j).norm();
    if (cnorm == 0.0) continue;
    worst = std::max(worst, std::abs(jac.col(j).dot(residuals)) / (cnorm * rnorm));
  }
  return worst;
}

}  // namespace

const char* to_string(SolverStatus status) {
  switch (status) {
    case SolverStatus::Converged:
      return "converged";
    case SolverStatus::MaxIterations:
      return "max_iterations";
    case SolverStatus::RankDeficient:
      return "rank_deficient";
    case SolverStatus::InvalidStart:
      return "invalid_start";
  }
  return "unknown";
}

LeastSquaresSummary solve_least_squares(const LeastSquaresProblem& problem, const Eigen::VectorXd& initial,
                                        const LeastSquaresOptions& options) {
  const Eigen::Index m = problem.num_residuals;
  const Eigen::Index n = problem.num_parameters;
  if (initial.size() != n) throw ValidationError("initial parameter vector has wrong size");
  if (m < n) throw ValidationError("fewer residuals than parameters");

  LeastSquaresSummary out;
  out.params = initial;

  Eigen::VectorXd residuals(m);
  Eigen::MatrixXd jac(m, n);
  if (!problem.evaluate(out.params, residuals, &jac) || !residuals.allFinite() || !jac.allFinite()) {
    out.status = SolverStatus::InvalidStart;
    out.reason = "model undefined at initial parameters";
    out.cost = std::numeric_limits<double>::infinity();
    return out;
  }
  out.cost = residuals.squaredNorm();
  out.cost_history.push_back(out.cost);

  double damping = options.initial_damping;
  Eigen::VectorXd trial_residuals(m);
  Eigen::MatrixXd trial_jac(m, n);
  bool converged = false;

  while (out.iterations < options.max_iterations) {
    if (out.cost == 0.0 || gradient_cosine(jac, residuals) <= options.gradient_tolerance) {
      converged = true;
      out.reason = "gradient tolerance";
      break;
    }
    const Eigen::MatrixXd normal = jac.transpose() * jac;
    const Eigen::VectorXd gradient = jac.transpose() * residuals;
    Eigen::VectorXd scale = normal.diagonal();
    const double floor = std::max(scale.maxCoeff(), 1.0) * 1e-30;
    for (Eigen::Index j = 0; j < n; ++j) scale[j] = std::max(scale[j], floor);

    bool accepted = false;
    while (!accepted && out.iterations < options.max_iterations) {
      ++out.iterations;
      Eigen::MatrixXd damped = normal;
      damped.diagonal() += damping * scale;
      const Eigen::VectorXd step = damped.ldlt().solve(-gradient);
      const Eigen::VectorXd trial = out.params + step;
      const bool ok = step.allFinite() && problem.evaluate(trial, trial_residuals, &trial_jac) &&
                      trial_residuals.allFinite() && trial_jac.allFinite();
      const double trial_cost = ok ? trial_residuals.squaredNorm() : std::numeric_limits<double>::infinity();
      if (trial_cost < out.cost) {
        const double decrease = (out.cost - trial_cost) / out.cost;
        const bool small_step = step.norm() <= options.step_tolerance * (out.params.norm() + options.step_tolerance);
        out.params = trial;
        residuals.swap(trial_residuals);
        jac.swap(trial_jac);
        if (trial_cost > out.cost_history.back())
          throw std::logic_error("least-squares cost increased on an accepted step");
        out.cost = trial_cost;
        out.cost_history.push_back(trial_cost);
        damping = std::max(damping / 3.0, 1e-15);
        accepted = true;
        if (decrease <= options.cost_tolerance) {
          converged = true;
          out.reason = "cost tolerance";
        } else if (small_step) {
          converged = true;
          out.reason = "step tolerance";
        }
      } else {
        damping *= 4.0;
        if (damping > kMaxDamping) break;
      }
    }
    if (converged) break;
    if (!accepted) {
      if (damping > kMaxDamping) {
        // No descent direction left at working precision.
        converged = true;
        out.reason = "no further decrease at working precision";
      }
      break;
    }
  }
  if (converged && out.reason.empty()) out.reason = "converged";

  out.status = converged ? SolverStatus::Converged : SolverStatus::MaxIterations;
  if (!converged) out.reason = "iteration limit reached";

  // Rank and covariance from the column-scaled Jacobian.
  Eigen::VectorXd col_norm(n);
  for (Eigen::Index j = 0; j < n; ++j) col_norm[j] = jac.col(j).norm();
  if ((col_norm.array() == 0.0).any()) {
    out.status = SolverStatus::RankDeficient;
    out.reason = "Jacobian has a zero column";
    return out;
  }
  const Eigen::MatrixXd scaled = jac * col_norm.cwiseInverse().asDiagonal();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(scaled);
  const auto& sv = svd.singularValues();
  if (sv[n - 1] == 0.0 || sv[0] / sv[n - 1] > options.max_condition) {
    out.status = SolverStatus::RankDeficient;
    out.reason = "Jacobian is rank deficient";
    return out;
  }
  if (m > n) {
    const double s2 = out.cost / static_cast<double>(m - n);
    const Eigen::MatrixXd inv_scaled = (scaled.transpose() * scaled).inverse();
    out.covariance = s2 * col_norm.cwiseInverse().asDiagonal() * inv_scaled * col_norm.cwiseInverse().asDiagonal();
  }
  return out;
}

}  // namespace polariton
