// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "doctest.h"
#include "polariton/errors.hpp"
#include "polariton/fit.hpp"
#include "polariton/least_squares.hpp"
#include "polariton/ridges.hpp"
#include "polariton/spectral_map.hpp"

using namespace polariton;

namespace {

const HybridModel kBlock{5.870, 2.690, LinearDispersion{2.061, 0.1231}};
const HybridModel kDisc{7.599, 2.574, LinearDispersion{2.249, -0.083}};

RidgeSet exact_ridges(const HybridModel& model, const std::vector<double>& fields, double rel_noise = 0.0,
                      std::uint64_t seed = 1) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n(0.0, 1.0);
  RidgeSet set;
  for (int branch = 0; branch < 2; ++branch) {
    for (double b : fields) {
      const auto m = hybrid_eigenfrequencies(model, b);
      const double f = branch == 0 ? m.lower : m.upper;
      set.points.push_back({b, f * (1.0 + rel_noise * n(rng)), branch, 1.0});
    }
  }
  return set;
}

double param(const FitResult& r, const char* name) { return r.parameter(name).value; }

}  // namespace

TEST_SUITE("synth") {
  TEST_CASE("linspace endpoints") {
    const auto v = linspace(0.06, 1.2, 200);
    CHECK(v.size() == 200);
    CHECK(v.front() == 0.06);
    CHECK(v.back() == 1.2);
  }

  TEST_CASE("cavity fractions sum to one and follow the detuning") {
    CHECK(upper_branch_cavity_fraction(5.0, 5.0, 0.3) == doctest::Approx(0.5));
    CHECK(upper_branch_cavity_fraction(5.0, 1.0, 0.1) > 0.99);
    CHECK(upper_branch_cavity_fraction(5.0, 9.0, 0.1) < 0.01);
    // cos²θ with tan 2θ = 2g/Δ
    const double wc = 6.0, wm = 6.5, g = 0.4;
    const double theta = 0.5 * std::atan2(2.0 * g, wc - wm);
    CHECK(upper_branch_cavity_fraction(wc, wm, g) == doctest::Approx(std::cos(theta) * std::cos(theta)));
  }

  TEST_CASE("map peaks sit on the eigenfrequencies") {
    const auto b = linspace(0.06, 1.2, 40);
    const auto f = linspace(1.0, 20.0, 2000);
    SynthOptions opt;
    opt.linewidths = {0.1, 0.15};
    const auto map = synth_s21_map(kBlock, b, f, opt);
    const double step = f[1] - f[0];
    for (std::size_t i = 0; i < b.size(); ++i) {
      const auto modes = hybrid_eigenfrequencies(kBlock, b[i]);
      std::size_t best = 0;
      for (std::size_t j = 0; j < f.size(); ++j)
        if (map.at(i, j) > map.at(i, best)) best = j;
      const double peak = f[best];
      CHECK(std::min(std::abs(peak - modes.lower), std::abs(peak - modes.upper)) <= step);
    }
  }

  TEST_CASE("same seed gives the same map, different seeds differ") {
    const auto b = linspace(0.1, 1.0, 10);
    const auto f = linspace(2.0, 12.0, 50);
    SynthOptions opt;
    opt.noise_db = 0.5;
    opt.seed = 42;
    const auto a = synth_s21_map(kBlock, b, f, opt);
    const auto c = synth_s21_map(kBlock, b, f, opt);
    CHECK(a.magnitude_db == c.magnitude_db);
    opt.seed = 43;
    CHECK(synth_s21_map(kBlock, b, f, opt).magnitude_db != a.magnitude_db);
  }

  TEST_CASE("undefined eigenfrequencies on the grid") {
    CHECK_THROWS_AS(synth_s21_map(kBlock, linspace(-0.5, 0.5, 5), linspace(1, 5, 10)), DomainError);
  }

  TEST_CASE("csv round trip") {
    const auto map = synth_s21_map(kDisc, linspace(0.3, 1.0, 4), linspace(2.0, 9.0, 7));
    std::stringstream ss;
    write_spectral_map_csv(ss, map);
    const auto back = read_spectral_map_csv(ss);
    CHECK(back.b_grid == map.b_grid);
    CHECK(back.f_grid == map.f_grid);
    CHECK(back.magnitude_db == map.magnitude_db);
  }

  TEST_CASE("csv rejects a ragged grid") {
    std::stringstream ss("b_tesla,freq_ghz,s21_db\n0.1,1,0\n0.1,2,0\n0.2,1,0\n");
    CHECK_THROWS_AS(read_spectral_map_csv(ss), ValidationError);
    std::stringstream bad("b_tesla,freq_ghz,s21_db\n0.1,1,x\n");
    CHECK_THROWS_AS(read_spectral_map_csv(bad), ParseError);
  }
}

TEST_SUITE("ridges") {
  TEST_CASE("column prominence") {
    const std::vector<double> col{0, 1, 0, 5, 2, 3, 0};
    const auto peaks = column_peaks(col);
    REQUIRE(peaks.size() == 3);
    CHECK(peaks[0].first == 1);
    CHECK(peaks[0].second == doctest::Approx(1.0));
    CHECK(peaks[1].first == 3);
    CHECK(peaks[1].second == doctest::Approx(5.0));
    CHECK(peaks[2].first == 5);
    CHECK(peaks[2].second == doctest::Approx(1.0));
  }

  TEST_CASE("extracted ridges follow both branches") {
    const auto b = linspace(0.06, 1.2, 120);
    const auto f = linspace(1.0, 20.0, 800);
    SynthOptions opt;
    opt.linewidths = {0.1, 0.15};
    const auto map = synth_s21_map(kBlock, b, f, opt);
    const auto ridges = extract_ridges(map, 6.0, 2);
    CHECK(ridges.branch_ids() == std::vector<int>{0, 1});
    CHECK_NOTHROW(ridges.validate());
    const double step = f[1] - f[0];
    for (const auto& p : ridges.points) {
      const auto m = hybrid_eigenfrequencies(kBlock, p.field);
      CHECK(std::abs(p.freq - (p.branch_id == 0 ? m.lower : m.upper)) < step);
      CHECK(p.weight > 0.0);
      CHECK(p.weight <= 1.0);
    }
  }

  TEST_CASE("zero coupling leaves a flat cavity ridge") {
    const HybridModel bare{5.87, 0.0, LinearDispersion{2.061, 0.1231}};
    const auto map = synth_s21_map(bare, linspace(0.06, 1.2, 60), linspace(1.0, 20.0, 400), {{0.1, 0.15}, 0.0, 0, -60});
    const auto ridges = extract_ridges(map, 6.0, 2);
    REQUIRE(ridges.branch_ids().size() == 1);
    for (const auto& p : ridges.points) CHECK(p.freq == doctest::Approx(5.87).epsilon(0.005));
  }

  TEST_CASE("ridge csv round trip and default weight") {
    const auto set = exact_ridges(kBlock, {0.2, 0.3, 0.4});
    std::stringstream ss;
    write_ridges_csv(ss, set);
    const auto back = read_ridges_csv(ss);
    REQUIRE(back.points.size() == set.points.size());
    CHECK(back.points[4].freq == set.points[4].freq);
    std::stringstream sparse("b_tesla,branch_id,freq_ghz,weight\n0.1,0,3.0,\n0.2,0,3.1,0.5\n");
    const auto s = read_ridges_csv(sparse);
    CHECK(s.points[0].weight == 1.0);
    CHECK(s.points[1].weight == 0.5);
  }

  TEST_CASE("ridge validation") {
    RidgeSet s;
    s.points = {{0.2, 3.0, 0, 1.0}, {0.1, 3.1, 0, 1.0}};
    CHECK_THROWS_AS(s.validate(), ValidationError);
  }
}

TEST_SUITE("least squares") {
  TEST_CASE("exponential decay with monotone cost") {
    const std::vector<double> t{0, 1, 2, 3, 4, 5, 6, 7};
    std::vector<double> y;
    for (double ti : t) y.push_back(3.0 * std::exp(-0.4 * ti) + 0.5);
    LeastSquaresProblem p;
    p.num_residuals = static_cast<Eigen::Index>(t.size());
    p.num_parameters = 3;
    p.evaluate = [&](const Eigen::VectorXd& x, Eigen::VectorXd& r, Eigen::MatrixXd* J) {
      for (std::size_t i = 0; i < t.size(); ++i) {
        const auto k = static_cast<Eigen::Index>(i);
        const double e = std::exp(-x[1] * t[i]);
        r[k] = x[0] * e + x[2] - y[i];
        if (J) {
          (*J)(k, 0) = e;
          (*J)(k, 1) = -x[0] * t[i] * e;
          (*J)(k, 2) = 1.0;
        }
      }
      return true;
    };
    Eigen::VectorXd x0(3);
    x0 << 1.0, 1.0, 0.0;
    const auto s = solve_least_squares(p, x0, {});
    CHECK(s.status == SolverStatus::Converged);
    CHECK(s.params[0] == doctest::Approx(3.0).epsilon(1e-8));
    CHECK(s.params[1] == doctest::Approx(0.4).epsilon(1e-8));
    CHECK(s.params[2] == doctest::Approx(0.5).epsilon(1e-8));
    for (std::size_t i = 1; i < s.cost_history.size(); ++i) CHECK(s.cost_history[i] <= s.cost_history[i - 1]);
  }

  TEST_CASE("degenerate columns are rank deficient") {
    LeastSquaresProblem p;
    p.num_residuals = 5;
    p.num_parameters = 2;
    p.evaluate = [](const Eigen::VectorXd& x, Eigen::VectorXd& r, Eigen::MatrixXd* J) {
      for (Eigen::Index i = 0; i < 5; ++i) {
        r[i] = (x[0] + x[1]) * static_cast<double>(i) - 1.0;
        if (J) {
          (*J)(i, 0) = static_cast<double>(i);
          (*J)(i, 1) = static_cast<double>(i);
        }
      }
      return true;
    };
    const auto s = solve_least_squares(p, Eigen::VectorXd::Zero(2), {});
    CHECK(s.status == SolverStatus::RankDeficient);
  }

  TEST_CASE("undefined start") {
    LeastSquaresProblem p;
    p.num_residuals = 2;
    p.num_parameters = 1;
    p.evaluate = [](const Eigen::VectorXd&, Eigen::VectorXd&, Eigen::MatrixXd*) { return false; };
    CHECK(solve_least_squares(p, Eigen::VectorXd::Zero(1), {}).status == SolverStatus::InvalidStart);
  }
}

TEST_SUITE("fit") {
  TEST_CASE("branch inversion round trip") {
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 200; ++i) {
      const double wc = 3.0 + 5.0 * u(rng);
      const double wm = wc * (0.4 + 1.2 * u(rng));
      const double g = 0.45 * u(rng) * std::sqrt(wc * wm);
      const auto m = hybrid_eigenfrequencies(wc, wm, g);
      const auto lo = invert_branch(wc, g, m.lower, HybridBranch::Lower);
      const auto hi = invert_branch(wc, g, m.upper, HybridBranch::Upper);
      // each branch inverts on its own side of ω_c
      if (lo) CHECK(*lo == doctest::Approx(wm).epsilon(1e-9));
      if (hi) CHECK(*hi == doctest::Approx(wm).epsilon(1e-9));
      CHECK((lo.has_value() || hi.has_value()));
    }
    CHECK_FALSE(invert_branch(5.0, 1.0, 6.0, HybridBranch::Lower).has_value());
    CHECK_FALSE(invert_branch(5.0, 1.0, 4.0, HybridBranch::Upper).has_value());
  }

  TEST_CASE("stage A recovers exact parameters") {
    const auto ridges = exact_ridges(kBlock, linspace(0.06, 1.2, 60));
    HybridModel init{6.2, 2.3, LinearDispersion{2.2, 0.08}};
    const auto r = fit_avoided_crossing(ridges, init, {});
    CHECK(r.valid);
    CHECK(param(r, "omega_c") == doctest::Approx(5.870).epsilon(1e-9));
    CHECK(param(r, "g_cm") == doctest::Approx(2.690).epsilon(1e-9));
    CHECK(param(r, "g_eff") == doctest::Approx(2.061).epsilon(1e-9));
    CHECK(param(r, "b_offset") == doctest::Approx(0.1231).epsilon(1e-9));
    CHECK(r.rms_residual < 1e-9);
    for (std::size_t i = 1; i < r.cost_history.size(); ++i) CHECK(r.cost_history[i] <= r.cost_history[i - 1]);
  }

  TEST_CASE("stage A with relative noise") {
    const auto ridges = exact_ridges(kDisc, linspace(0.22, 1.2, 100), 0.005, 17);
    const auto r = fit_avoided_crossing(ridges, kDisc, {});
    CHECK(r.valid);
    CHECK(param(r, "omega_c") == doctest::Approx(7.599).epsilon(0.01));
    CHECK(param(r, "g_cm") == doctest::Approx(2.574).epsilon(0.01));
    CHECK(std::abs(param(r, "b_offset") - (-0.083)) < 0.002);
    CHECK(std::isfinite(r.parameter("g_cm").sigma));
  }

  TEST_CASE("stage B recovers a polynomial dispersion") {
    const HybridModel truth{7.599, 2.574, PolynomialDispersion{{-2.6, 31.5, -1.8, 0.6}}};
    const auto ridges = exact_ridges(truth, linspace(0.22, 1.2, 80));
    FitOptions opt;
    opt.stage = FitStage::PolynomialMagnon;
    const auto r = fit_avoided_crossing(ridges, truth, opt);
    CHECK(r.valid);
    const auto& poly = std::get<PolynomialDispersion>(r.model.dispersion);
    REQUIRE(poly.coeffs.size() == 4);
    CHECK(poly.coeffs[0] == doctest::Approx(-2.6).epsilon(1e-8));
    CHECK(poly.coeffs[1] == doctest::Approx(31.5).epsilon(1e-8));
    CHECK(poly.coeffs[2] == doctest::Approx(-1.8).epsilon(1e-8));
    CHECK(poly.coeffs[3] == doctest::Approx(0.6).epsilon(1e-8));
    CHECK(r.parameter("omega_c").fixed);
  }

  TEST_CASE("stage C recovers LiFe-like asymptotes") {
    const SmoothTurnoverDispersion t{{2.03, 0.0078}, {-0.70, -0.751}, 0.05};
    const HybridModel truth{5.0, 0.169, t};
    const auto ridges = exact_ridges(truth, linspace(0.0, 0.6, 150), 0.001, 4);
    HybridModel init = truth;
    auto& d = std::get<SmoothTurnoverDispersion>(init.dispersion);
    d.rising = {2.1, 0.005};
    d.falling = {-0.65, -0.7};
    d.blend_width = 0.08;
    FitOptions opt;
    opt.stage = FitStage::Turnover;
    opt.rising_window = FieldWindow{0.02, 0.12};
    opt.falling_window = FieldWindow{0.3, 0.6};
    const auto r = fit_avoided_crossing(ridges, init, opt);
    CHECK(r.valid);
    CHECK(param(r, "rising.g_eff") == doctest::Approx(2.03).epsilon(0.02));
    CHECK(param(r, "falling.g_eff") == doctest::Approx(-0.70).epsilon(0.02));
    CHECK(param(r, "rising.b_offset") == doctest::Approx(0.0078).epsilon(0.02));
    CHECK(param(r, "falling.b_offset") == doctest::Approx(-0.751).epsilon(0.02));
  }

  TEST_CASE("too few points") {
    const auto ridges = exact_ridges(kBlock, {0.5, 0.6, 0.7});
    CHECK_THROWS_AS(fit_avoided_crossing(ridges, kBlock, {}), ValidationError);
  }

  TEST_CASE("USC bound") {
    CHECK(usc_bound(kBlock) == doctest::Approx(0.80943).epsilon(1e-5));
    CHECK(usc_bound(kDisc) == doctest::Approx(0.90073).epsilon(1e-5));
    // at the bound g/ω_m = 0.1
    const double b = usc_bound(kBlock);
    CHECK(kBlock.g_cm / magnon_frequency(kBlock.dispersion, b) == doctest::Approx(0.1));
    CHECK_THROWS_AS(usc_bound(HybridModel{5.0, 1.0, PolynomialDispersion{{1.0}}}), DomainError);
  }

  TEST_CASE("branch assignment by frequency order") {
    auto ridges = exact_ridges(kBlock, linspace(0.3, 0.9, 10));
    for (auto& p : ridges.points) p.branch_id = 7 - p.branch_id;  // upper branch now has the smaller id
    const auto br = assign_branches(ridges, kBlock);
    for (std::size_t i = 0; i < br.size(); ++i)
      CHECK(br[i] == (ridges.points[i].branch_id == 7 ? HybridBranch::Lower : HybridBranch::Upper));
  }
}
