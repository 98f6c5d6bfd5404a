// SPDX-License-Identifier: Apache-2.0

#include "polariton/fit.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>

#include "numeric.hpp"
#include "polariton/constants.hpp"
#include "polariton/errors.hpp"

namespace polariton {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct Observation {
  double field;
  double freq;
  double sqrt_weight;
  HybridBranch branch;
};

std::vector<Observation> observations(const RidgeSet& ridges, const HybridModel& reference,
                                      const std::optional<FieldWindow>& window) {
  const auto branches = assign_branches(ridges, reference);
  std::vector<Observation> out;
  for (std::size_t i = 0; i < ridges.points.size(); ++i) {
    const auto& p = ridges.points[i];
    if (window && !window->contains(p.field)) continue;
    if (p.weight <= 0.0) continue;
    out.push_back({p.field, p.freq, std::sqrt(p.weight), branches[i]});
  }
  return out;
}

void require_points(std::size_t available, std::size_t free_params, const char* what) {
  if (available < 4 * free_params)
    throw ValidationError(std::string("insufficient ridge points for ") + what + ": need at least " +
                          std::to_string(4 * free_params) + ", got " + std::to_string(available));
}

double total_weight(const std::vector<Observation>& obs) {
  detail::CompensatedSum s;
  for (const auto& o : obs) s.add(o.sqrt_weight * o.sqrt_weight);
  return s.value();
}

const BranchPartials& pick(const HybridPartials& p, HybridBranch b) {
  return b == HybridBranch::Lower ? p.lower : p.upper;
}

double pick(const ModePair& m, HybridBranch b) { return b == HybridBranch::Lower ? m.lower : m.upper; }

// Hybrid-eigenfrequency residuals against the observations; `dispersion_gradient(B, row)`
// writes ∂ω_m/∂(free dispersion params) for one point.
struct CrossingModel {
  const std::vector<Observation>* obs;
  bool free_cavity;  // ω_c and g are free parameters 0 and 1
  std::function<bool(const Eigen::VectorXd&, HybridModel&)> build;
  std::function<void(const HybridModel&, double field, double* grad)> dispersion_gradient;

  LeastSquaresProblem problem(Eigen::Index num_params) const {
    LeastSquaresProblem p;
    p.num_residuals = static_cast<Eigen::Index>(obs->size());
    p.num_parameters = num_params;
    p.evaluate = [this, num_params](const Eigen::VectorXd& x, Eigen::VectorXd& r, Eigen::MatrixXd* jac) {
      HybridModel model;
      if (!build(x, model)) return false;
      const Eigen::Index offset = free_cavity ? 2 : 0;
      std::vector<double> grad(static_cast<std::size_t>(num_params - offset));
      try {
        for (std::size_t i = 0; i < obs->size(); ++i) {
          const auto& o = (*obs)[i];
          const double omega_m = magnon_frequency(model.dispersion, o.field);
          const auto partials = hybrid_partials(model.omega_c, omega_m, model.g_cm);
          const auto row = static_cast<Eigen::Index>(i);
          r[row] = o.sqrt_weight * (pick(partials.modes, o.branch) - o.freq);
          if (!jac) continue;
          const auto& bp = pick(partials, o.branch);
          if (free_cavity) {
            (*jac)(row, 0) = o.sqrt_weight * bp.omega_c;
            (*jac)(row, 1) = o.sqrt_weight * bp.g;
          }
          dispersion_gradient(model, o.field, grad.data());
          for (std::size_t k = 0; k < grad.size(); ++k)
            (*jac)(row, offset + static_cast<Eigen::Index>(k)) = o.sqrt_weight * bp.omega_m * grad[k];
        }
      } catch (const DomainError&) {
        return false;
      }
      return true;
    };
    return p;
  }
};

std::vector<double> sigmas(const LeastSquaresSummary& s) {
  std::vector<double> out(static_cast<std::size_t>(s.params.size()), kNaN);
  if (s.covariance.size() == 0) return out;
  for (Eigen::Index j = 0; j < s.params.size(); ++j) out[static_cast<std::size_t>(j)] = std::sqrt(s.covariance(j, j));
  return out;
}

double weighted_rms(const HybridModel& model, const std::vector<Observation>& obs) {
  detail::CompensatedSum sum, weight;
  for (const auto& o : obs) {
    try {
      const auto modes = hybrid_eigenfrequencies(model, o.field);
      const double r = pick(modes, o.branch) - o.freq;
      sum.add(o.sqrt_weight * o.sqrt_weight * r * r);
      weight.add(o.sqrt_weight * o.sqrt_weight);
    } catch (const DomainError&) {
    }
  }
  return weight.value() > 0.0 ? std::sqrt(sum.value() / weight.value()) : kNaN;
}

FieldWindow span_of(const std::vector<Observation>& obs) {
  FieldWindow w{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
  for (const auto& o : obs) {
    w.lo = std::min(w.lo, o.field);
    w.hi = std::max(w.hi, o.field);
  }
  return w;
}

void finish(FitResult& result, const LeastSquaresSummary& summary) {
  result.status = summary.status;
  result.iterations += summary.iterations;
  result.cost_history.insert(result.cost_history.end(), summary.cost_history.begin(), summary.cost_history.end());
  if (!result.message.empty()) result.message += "; ";
  result.message += summary.reason;
}

LinearDispersion as_linear(const MagnonDispersion& d, const char* stage) {
  if (const auto* lin = std::get_if<LinearDispersion>(&d)) return *lin;
  throw ValidationError(std::string(stage) + " fit needs a linear initial dispersion");
}

constexpr double kZeeman = PhysicalConstants::bohr_magneton_over_planck;

// Starting coupling, pulled below the mode-softening limit g < sqrt(ω_c·ω_m)/2
// on every observed field.
double feasible_coupling(const std::vector<Observation>& obs, double omega_c, double g, const LinearDispersion& line) {
  double limit = std::numeric_limits<double>::infinity();
  for (const auto& o : obs) {
    const double omega_m = magnon_frequency(line, o.field);
    if (!(omega_m > 0.0)) return g;
    limit = std::min(limit, 0.5 * std::sqrt(omega_c * omega_m));
  }
  return std::abs(g) < limit ? g : 0.9 * limit;
}

// Fits a Zeeman line (g_eff, B_off) through the hybrid eigenfrequencies, optionally with ω_c and g free.
LeastSquaresSummary fit_linear(const std::vector<Observation>& obs, const HybridModel& init, bool free_cavity,
                               const LeastSquaresOptions& solver, HybridModel& fitted) {
  const auto line = as_linear(init.dispersion, "linear");
  CrossingModel cm;
  cm.obs = &obs;
  cm.free_cavity = free_cavity;
  cm.build = [&init, free_cavity](const Eigen::VectorXd& x, HybridModel& m) {
    const Eigen::Index k = free_cavity ? 2 : 0;
    m.omega_c = free_cavity ? x[0] : init.omega_c;
    m.g_cm = free_cavity ? x[1] : init.g_cm;  // enters squared; sign fixed below
    m.dispersion = LinearDispersion{x[k], x[k + 1]};
    return m.omega_c > 0.0;
  };
  cm.dispersion_gradient = [](const HybridModel& m, double field, double* grad) {
    const auto& lin = std::get<LinearDispersion>(m.dispersion);
    grad[0] = kZeeman * (field + lin.b_offset);
    grad[1] = lin.slope();
  };
  Eigen::VectorXd x0(free_cavity ? 4 : 2);
  if (free_cavity)
    x0 << init.omega_c, feasible_coupling(obs, init.omega_c, init.g_cm, line), line.g_eff, line.b_offset;
  else
    x0 << line.g_eff, line.b_offset;
  const auto summary = solve_least_squares(cm.problem(x0.size()), x0, solver);
  cm.build(summary.params, fitted);
  fitted.g_cm = std::abs(fitted.g_cm);
  return summary;
}

FitResult fit_linear_crossing(const RidgeSet& ridges, const HybridModel& init, const FitOptions& options) {
  as_linear(init.dispersion, "LinearCrossing");
  const auto obs = observations(ridges, init, options.window);
  require_points(obs.size(), 4, "the linear crossing fit");

  FitResult result;
  result.stage = FitStage::LinearCrossing;
  const auto summary = fit_linear(obs, init, true, options.solver, result.model);
  finish(result, summary);
  const auto sig = sigmas(summary);
  const auto& lin = std::get<LinearDispersion>(result.model.dispersion);
  result.parameters = {{"omega_c", result.model.omega_c, sig[0], false},
                       {"g_cm", result.model.g_cm, sig[1], false},
                       {"g_eff", lin.g_eff, sig[2], false},
                       {"b_offset", lin.b_offset, sig[3], false}};
  result.fit_region = {{to_string(FitStage::LinearCrossing), options.window.value_or(span_of(obs))}};
  result.points_used = obs.size();
  result.rms_residual = std::sqrt(summary.cost / total_weight(obs));
  return result;
}

FitResult fit_polynomial_magnon(const RidgeSet& ridges, const HybridModel& init, const FitOptions& options) {
  if (options.polynomial_order < 0) throw ValidationError("polynomial order must be non-negative");
  const auto order = static_cast<std::size_t>(options.polynomial_order);
  const auto obs = observations(ridges, init, options.window);

  std::vector<Observation> used;
  std::vector<double> inferred;
  for (const auto& o : obs) {
    if (const auto wm = invert_branch(init.omega_c, init.g_cm, o.freq, o.branch)) {
      used.push_back(o);
      inferred.push_back(*wm);
    }
  }
  require_points(used.size(), order + 1, "the polynomial magnon fit");

  const auto m = static_cast<Eigen::Index>(used.size());
  const auto n = static_cast<Eigen::Index>(order + 1);
  Eigen::MatrixXd design(m, n);
  Eigen::VectorXd target(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    const auto& o = used[static_cast<std::size_t>(i)];
    double power = 1.0;
    for (Eigen::Index k = 0; k < n; ++k) {
      design(i, k) = o.sqrt_weight * power;
      power *= o.field;
    }
    target[i] = o.sqrt_weight * inferred[static_cast<std::size_t>(i)];
  }

  FitResult result;
  result.stage = FitStage::PolynomialMagnon;
  result.model.omega_c = init.omega_c;
  result.model.g_cm = init.g_cm;
  result.points_used = used.size();
  result.fit_region = {{to_string(FitStage::PolynomialMagnon), options.window.value_or(span_of(used))}};
  result.parameters = {{"omega_c", init.omega_c, kNaN, true}, {"g_cm", init.g_cm, kNaN, true}};

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
  qr.setThreshold(1e-13);
  if (qr.rank() < n) {
    result.status = SolverStatus::RankDeficient;
    result.message = "polynomial design matrix is rank deficient";
    result.model.dispersion = PolynomialDispersion{std::vector<double>(order + 1, 0.0)};
    result.rms_residual = kNaN;
    return result;
  }
  const Eigen::VectorXd coeffs = qr.solve(target);
  const double cost = (design * coeffs - target).squaredNorm();
  Eigen::MatrixXd covariance;
  if (m > n) covariance = cost / static_cast<double>(m - n) * (design.transpose() * design).inverse();

  PolynomialDispersion poly;
  for (Eigen::Index k = 0; k < n; ++k) {
    poly.coeffs.push_back(coeffs[k]);
    result.parameters.push_back({"c" + std::to_string(k), coeffs[k],
                                 covariance.size() ? std::sqrt(covariance(k, k)) : kNaN, false});
  }
  result.model.dispersion = poly;
  result.status = SolverStatus::Converged;
  result.message = "linear least squares";
  result.cost_history = {cost};
  result.rms_residual = weighted_rms(result.model, used);
  return result;
}

FitResult fit_turnover(const RidgeSet& ridges, const HybridModel& init, const FitOptions& options) {
  const auto* start = std::get_if<SmoothTurnoverDispersion>(&init.dispersion);
  if (!start) throw ValidationError("Turnover fit needs a smooth-turnover initial dispersion");
  if (!options.rising_window || !options.falling_window)
    throw ValidationError("Turnover fit needs both a rising and a falling field window");

  const auto rising_obs = observations(ridges, init, options.rising_window);
  const auto falling_obs = observations(ridges, init, options.falling_window);
  const auto all_obs = observations(ridges, init, std::nullopt);
  require_points(rising_obs.size(), 2, "the rising asymptote");
  require_points(falling_obs.size(), 2, "the falling asymptote");
  require_points(all_obs.size(), 1, "the turnover blend");

  FitResult result;
  result.stage = FitStage::Turnover;
  result.model = init;
  SmoothTurnoverDispersion turnover = *start;

  auto worst = SolverStatus::Converged;
  auto track = [&worst](SolverStatus s) {
    if (s != SolverStatus::Converged) worst = s;
  };

  HybridModel seed{init.omega_c, init.g_cm, turnover.rising};
  HybridModel fitted;
  const auto rising = fit_linear(rising_obs, seed, false, options.solver, fitted);
  finish(result, rising);
  track(rising.status);
  turnover.rising = std::get<LinearDispersion>(fitted.dispersion);

  seed.dispersion = turnover.falling;
  const auto falling = fit_linear(falling_obs, seed, false, options.solver, fitted);
  finish(result, falling);
  track(falling.status);
  turnover.falling = std::get<LinearDispersion>(fitted.dispersion);

  CrossingModel cm;
  cm.obs = &all_obs;
  cm.free_cavity = false;
  cm.build = [&init, &turnover](const Eigen::VectorXd& x, HybridModel& m) {
    if (!(x[0] > 0.0)) return false;
    auto d = turnover;
    d.blend_width = x[0];
    m = HybridModel{init.omega_c, init.g_cm, d};
    return true;
  };
  cm.dispersion_gradient = [](const HybridModel& m, double field, double* grad) {
    grad[0] = std::get<SmoothTurnoverDispersion>(m.dispersion).blend_width_derivative(field);
  };
  Eigen::VectorXd x0(1);
  x0 << turnover.blend_width;
  const auto blend = solve_least_squares(cm.problem(1), x0, options.solver);
  finish(result, blend);
  track(blend.status);
  cm.build(blend.params, result.model);
  result.status = worst;

  const auto rs = sigmas(rising);
  const auto fs = sigmas(falling);
  const auto bs = sigmas(blend);
  const auto& d = std::get<SmoothTurnoverDispersion>(result.model.dispersion);
  result.parameters = {{"omega_c", init.omega_c, kNaN, true},
                       {"g_cm", init.g_cm, kNaN, true},
                       {"rising.g_eff", d.rising.g_eff, rs[0], false},
                       {"rising.b_offset", d.rising.b_offset, rs[1], false},
                       {"falling.g_eff", d.falling.g_eff, fs[0], false},
                       {"falling.b_offset", d.falling.b_offset, fs[1], false},
                       {"blend_width", d.blend_width, bs[0], false}};
  result.fit_region = {{"rising", *options.rising_window},
                       {"falling", *options.falling_window},
                       {"blend", span_of(all_obs)}};
  result.points_used = all_obs.size();
  result.rms_residual = weighted_rms(result.model, all_obs);
  return result;
}

}  // namespace

const char* to_string(FitStage stage) {
  switch (stage) {
    case FitStage::LinearCrossing:
      return "A";
    case FitStage::PolynomialMagnon:
      return "B";
    case FitStage::Turnover:
      return "C";
  }
  return "?";
}

const FitParameter& FitResult::parameter(const std::string& name) const {
  for (const auto& p : parameters)
    if (p.name == name) return p;
  throw ValidationError("fit has no parameter '" + name + "'");
}

std::vector<HybridBranch> assign_branches(const RidgeSet& ridges, const HybridModel& reference) {
  std::vector<HybridBranch> out(ridges.points.size(), HybridBranch::Lower);
  const auto ids = ridges.branch_ids();

  auto nearest = [&reference](const RidgePoint& p) {
    try {
      const auto modes = hybrid_eigenfrequencies(reference, p.field);
      return std::abs(p.freq - modes.lower) <= std::abs(p.freq - modes.upper) ? HybridBranch::Lower
                                                                               : HybridBranch::Upper;
    } catch (const DomainError&) {
      return HybridBranch::Upper;
    }
  };
  if (ids.size() < 2) {
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = nearest(ridges.points[i]);
    return out;
  }

  // Order branches by frequency: compare on shared fields, else by mean.
  std::map<int, std::map<double, double>> curves;
  for (const auto& p : ridges.points) curves[p.branch_id][p.field] = p.freq;
  auto below = [&curves](int a, int b) {
    const auto& ca = curves.at(a);
    const auto& cb = curves.at(b);
    detail::CompensatedSum diff;
    std::size_t shared = 0;
    for (const auto& [field, f] : ca) {
      const auto it = cb.find(field);
      if (it == cb.end()) continue;
      diff.add(f - it->second);
      ++shared;
    }
    if (shared > 0) return diff.value() < 0.0;
    auto mean = [](const std::map<double, double>& c) {
      detail::CompensatedSum s;
      for (const auto& kv : c) s.add(kv.second);
      return s.value() / static_cast<double>(c.size());
    };
    return mean(ca) < mean(cb);
  };
  std::vector<int> order = ids;
  std::stable_sort(order.begin(), order.end(), below);
  const int lowest = order.front();
  const int highest = order.back();
  for (std::size_t i = 0; i < out.size(); ++i) {
    const auto& p = ridges.points[i];
    if (p.branch_id == lowest)
      out[i] = HybridBranch::Lower;
    else if (p.branch_id == highest)
      out[i] = HybridBranch::Upper;
    else
      out[i] = nearest(p);
  }
  return out;
}

std::optional<double> invert_branch(double omega_c, double g, double freq, HybridBranch branch) {
  if (!(freq > 0.0)) return std::nullopt;
  const double y = freq * freq;
  const double a = omega_c * omega_c - y;
  const double b = 2.0 * omega_c * g * g;
  const double root = std::sqrt(b * b + y * a * a);
  if (branch == HybridBranch::Lower) {
    if (!(a > 0.0)) return std::nullopt;
    return (b + root) / a;
  }
  if (!(a < 0.0)) return std::nullopt;
  return -y * a / (b + root);
}

FitResult fit_avoided_crossing(const RidgeSet& ridges, const HybridModel& init, const FitOptions& options) {
  init.validate();
  ridges.validate();
  FitResult result;
  switch (options.stage) {
    case FitStage::LinearCrossing:
      result = fit_linear_crossing(ridges, init, options);
      break;
    case FitStage::PolynomialMagnon:
      result = fit_polynomial_magnon(ridges, init, options);
      break;
    case FitStage::Turnover:
      result = fit_turnover(ridges, init, options);
      break;
  }
  result.valid = result.status == SolverStatus::Converged;
  return result;
}

double usc_bound(const HybridModel& model) {
  const auto* line = std::get_if<LinearDispersion>(&model.dispersion);
  if (!line) throw DomainError("USC bound needs a linear dispersion");
  const double slope = line->slope();
  if (!(slope > 0.0)) throw DomainError("USC bound needs a positive dispersion slope");
  return 10.0 * model.g_cm / slope - line->b_offset;
}

double usc_bound(const FitResult& fit) { return usc_bound(fit.model); }

}  // namespace polariton
