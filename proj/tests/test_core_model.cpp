// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <random>

#include "doctest.h"
#include "polariton/constants.hpp"
#include "polariton/errors.hpp"
#include "polariton/hybrid.hpp"
#include "support/fixtures.hpp"

using namespace polariton;

namespace {

constexpr double kMuB = 13.9962449171;  // GHz/T

// ω² roots of ω⁴ − (ω_c² + ω_m²)ω² + ω_c²ω_m² − 4ω_cω_m g² = 0, via the
// numerically stable quadratic form.
ModePair quartic_roots(double wc, double wm, double g) {
  const double b = -(wc * wc + wm * wm);
  const double c = wc * wc * wm * wm - 4.0 * wc * wm * g * g;
  const double disc = std::sqrt(b * b - 4.0 * c);
  const double big = 0.5 * (-b + disc);
  const double small = c / big;
  return {std::sqrt(small), std::sqrt(big)};
}

}  // namespace

TEST_SUITE("dispersion") {
  TEST_CASE("linear Zeeman line") {
    const LinearDispersion line{2.061, 0.1231};
    CHECK(line.slope() == doctest::Approx(2.061 * kMuB).epsilon(1e-14));
    CHECK(magnon_frequency(line, 0.81) == doctest::Approx(26.9164).epsilon(1e-5));
    CHECK(magnon_frequency(LinearDispersion{2.249, -0.083}, 0.9) == doctest::Approx(25.7172).epsilon(1e-5));
    const auto d = dispersion_derivatives(line, 0.4);
    CHECK(d.first == doctest::Approx(line.slope()));
    CHECK(d.second == 0.0);
  }

  TEST_CASE("polynomial evaluation and derivatives") {
    const PolynomialDispersion poly{{1.0, -2.0, 0.5, 3.0}};
    const double b = 0.7;
    CHECK(magnon_frequency(poly, b) == doctest::Approx(1.0 - 2.0 * b + 0.5 * b * b + 3.0 * b * b * b));
    const auto d = dispersion_derivatives(poly, b);
    CHECK(d.first == doctest::Approx(-2.0 + b + 9.0 * b * b));
    CHECK(d.second == doctest::Approx(1.0 + 18.0 * b));
  }

  TEST_CASE("smooth turnover approaches its asymptotes") {
    const SmoothTurnoverDispersion t{{2.03, 0.0078}, {-0.70, -0.751}, 0.05};
    CHECK(t.asymptote_crossing() == doctest::Approx(0.186764).epsilon(1e-5));
    const double bx = t.asymptote_crossing();
    CHECK(magnon_frequency(t.rising, bx) == doctest::Approx(5.52803).epsilon(1e-5));
    // ln 2 below the corner at the crossing
    CHECK(magnon_frequency(t, bx) == doctest::Approx(magnon_frequency(t.rising, bx) - 0.05 * std::log(2.0)));
    CHECK(magnon_frequency(t, 0.02) == doctest::Approx(magnon_frequency(t.rising, 0.02)).epsilon(1e-12));
    CHECK(magnon_frequency(t, 0.5) == doctest::Approx(magnon_frequency(t.falling, 0.5)).epsilon(1e-12));
    CHECK(t.rising_weight(bx) == doctest::Approx(0.5));
  }

  TEST_CASE("turnover derivatives match Richardson differences") {
    const SmoothTurnoverDispersion t{{2.03, 0.0078}, {-0.70, -0.751}, 0.4};
    for (double b : {0.05, 0.15, 0.186, 0.21, 0.35}) {
      const auto f = [&](double x) { return magnon_frequency(t, x); };
      const auto d = dispersion_derivatives(t, b);
      CHECK(d.first == doctest::Approx(fixtures::fd_first(f, b, 2e-4)).epsilon(1e-8));
      CHECK(d.second == doctest::Approx(fixtures::fd_second(f, b, 2e-4)).epsilon(1e-6));
    }
    const auto fw = [&](double w) {
      auto copy = t;
      copy.blend_width = w;
      return magnon_frequency(copy, 0.2);
    };
    CHECK(t.blend_width_derivative(0.2) == doctest::Approx(fixtures::fd_first(fw, 0.4, 1e-3)).epsilon(1e-8));
  }

  TEST_CASE("validation") {
    CHECK_THROWS_AS(validate(PolynomialDispersion{}), ValidationError);
    CHECK_THROWS_AS(validate(LinearDispersion{NAN, 0.0}), ValidationError);
    CHECK_THROWS_AS(validate(SmoothTurnoverDispersion{{2, 0}, {-1, -1}, 0.0}), ValidationError);
    CHECK_NOTHROW(validate(SmoothTurnoverDispersion{{2, 0}, {-1, -1}, 0.05}));
  }
}

TEST_SUITE("hybrid") {
  TEST_CASE("degenerate LiFe point") {
    const auto m = hybrid_eigenfrequencies(5.56, 5.56, 0.169);
    CHECK(m.lower == doctest::Approx(5.388350).epsilon(1e-6));
    CHECK(m.upper == doctest::Approx(5.726507).epsilon(1e-6));
  }

  TEST_CASE("zero coupling returns the bare modes") {
    const auto m = hybrid_eigenfrequencies(5.0, 7.0, 0.0);
    CHECK(m.lower == doctest::Approx(5.0));
    CHECK(m.upper == doctest::Approx(7.0));
  }

  TEST_CASE("eigenfrequencies agree with an independent quartic solve") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> wc_d(1.0, 20.0), ratio(0.3, 3.0), gr(0.0, 1.0);
    for (int i = 0; i < 500; ++i) {
      const double wc = wc_d(rng);
      const double wm = wc * ratio(rng);
      const double g = 0.999 * gr(rng) * std::sqrt(wc * wm) / 2.0;
      const auto a = hybrid_eigenfrequencies(wc, wm, g);
      const auto b = quartic_roots(wc, wm, g);
      CHECK(a.lower == doctest::Approx(b.lower).epsilon(1e-9));
      CHECK(a.upper == doctest::Approx(b.upper).epsilon(1e-12));
      CHECK(a.lower <= a.upper);
      // trace and determinant of the ω² problem
      CHECK(a.lower * a.lower + a.upper * a.upper == doctest::Approx(wc * wc + wm * wm).epsilon(1e-12));
    }
  }

  TEST_CASE("mode softening and negative magnon frequency are domain errors") {
    const double wc = 5.0, wm = 5.0;
    CHECK_NOTHROW(hybrid_eigenfrequencies(wc, wm, 0.499 * std::sqrt(wc * wm)));
    CHECK_THROWS_AS(hybrid_eigenfrequencies(wc, wm, 0.501 * std::sqrt(wc * wm)), DomainError);
    CHECK_THROWS_AS(hybrid_eigenfrequencies(wc, -1.0, 0.1), DomainError);
    const HybridModel model{5.87, 2.69, LinearDispersion{2.061, 0.1231}};
    CHECK_THROWS_AS(hybrid_eigenfrequencies(model, -0.2), DomainError);
  }

  TEST_CASE("rotating-wave limit") {
    const double wc = 6.0, wm = 6.3;
    for (double g : {1e-3, 1e-2, 5e-2}) {
      const auto exact = hybrid_eigenfrequencies(wc, wm, g);
      const auto rwa = hybrid_eigenfrequencies_rwa(wc, wm, g);
      // counter-rotating (Bloch–Siegert) shift is of order g²/(ω_c + ω_m)
      CHECK(std::abs(exact.lower - rwa.lower) < 2.0 * g * g / (wc + wm));
      CHECK(std::abs(exact.upper - rwa.upper) < 2.0 * g * g / (wc + wm));
      CHECK(cmp_transition(wc, wm, g) == doctest::Approx(rwa.upper - rwa.lower));
    }
    CHECK(cmp_transition(5.0, 5.0, 0.169) == doctest::Approx(0.338));
  }

  TEST_CASE("analytic partials match differences") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 50; ++i) {
      const double wc = 2.0 + 8.0 * u(rng);
      const double wm = wc * (0.5 + u(rng));
      const double g = (0.05 + 0.35 * u(rng)) * std::sqrt(wc * wm);
      const auto p = hybrid_partials(wc, wm, g);
      const auto lo = [&](double c, double m, double gg) { return hybrid_eigenfrequencies(c, m, gg).lower; };
      const auto hi = [&](double c, double m, double gg) { return hybrid_eigenfrequencies(c, m, gg).upper; };
      const double h = 1e-3;
      CHECK(p.lower.omega_c == doctest::Approx(fixtures::fd_first([&](double x) { return lo(x, wm, g); }, wc, h)).epsilon(1e-6));
      CHECK(p.lower.omega_m == doctest::Approx(fixtures::fd_first([&](double x) { return lo(wc, x, g); }, wm, h)).epsilon(1e-6));
      CHECK(p.lower.g == doctest::Approx(fixtures::fd_first([&](double x) { return lo(wc, wm, x); }, g, h)).epsilon(1e-6));
      CHECK(p.upper.omega_c == doctest::Approx(fixtures::fd_first([&](double x) { return hi(x, wm, g); }, wc, h)).epsilon(1e-6));
      CHECK(p.upper.omega_m == doctest::Approx(fixtures::fd_first([&](double x) { return hi(wc, x, g); }, wm, h)).epsilon(1e-6));
      CHECK(p.upper.g == doctest::Approx(fixtures::fd_first([&](double x) { return hi(wc, wm, x); }, g, h)).epsilon(1e-6));
    }
  }

  TEST_CASE("Hopfield oracle") {
    const auto a = hopfield_oracle(5.56, 5.56, 0.169);
    CHECK(a.lower == doctest::Approx(5.388350).epsilon(1e-6));
    CHECK(a.upper == doctest::Approx(5.726507).epsilon(1e-6));
    CHECK_THROWS_AS(hopfield_oracle(5.0, 5.0, 3.0), DomainError);
    const auto b = hopfield_oracle(5.87, 8.0, 2.69);
    const auto c = hybrid_eigenfrequencies(5.87, 8.0, 2.69);
    CHECK(b.lower == doctest::Approx(c.lower).epsilon(1e-12));
    CHECK(b.upper == doctest::Approx(c.upper).epsilon(1e-12));
  }

  TEST_CASE("model validation") {
    CHECK_THROWS_AS((HybridModel{0.0, 1.0, LinearDispersion{}}.validate()), ValidationError);
    CHECK_THROWS_AS((HybridModel{5.0, -1.0, LinearDispersion{}}.validate()), ValidationError);
    CHECK_NOTHROW((HybridModel{5.0, 1.0, LinearDispersion{}}.validate()));
  }
}
