// SPDX-License-Identifier: Apache-2.0

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <vector>

#include "polariton/errors.hpp"
#include "polariton/hybrid.hpp"

namespace polariton {

ModePair hopfield_oracle(double omega_c, double omega_m, double g) {
  if (g < 0.0) throw ValidationError("oracle coupling must be non-negative");
  using Scalar = long double;
  using Matrix4 = Eigen::Matrix<Scalar, 4, 4>;

  const Scalar wc = omega_c;
  const Scalar wm = omega_m;
  const Scalar k = g;

  // i d/dt (c, b, c†, b†)ᵀ = M (c, b, c†, b†)ᵀ
  Matrix4 dynamics;
  // clang-format off
  dynamics <<  wc,   k,   0,   k,
                k,  wm,   k,   0,
                0,  -k, -wc,  -k,
               -k,   0,  -k, -wm;
  // clang-format on

  Eigen::EigenSolver<Matrix4> solver(dynamics, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success) throw DomainError("oracle eigensolver failed");
  const auto& eig = solver.eigenvalues();

  Scalar scale = 0;
  for (int i = 0; i < 4; ++i) scale = std::max(scale, std::abs(eig[i]));
  std::vector<Scalar> positive;
  for (int i = 0; i < 4; ++i) {
    if (std::abs(eig[i].imag()) > 1e-9L * scale)
      throw DomainError("oracle eigenvalue is complex: coupled system is unstable");
    if (eig[i].real() >= 0) positive.push_back(eig[i].real());
  }
  // Eigenvalues come in ± pairs; a zero mode can show up with either sign.
  if (positive.size() != 2) {
    std::vector<Scalar> magnitudes;
    for (int i = 0; i < 4; ++i) magnitudes.push_back(std::abs(eig[i].real()));
    std::sort(magnitudes.begin(), magnitudes.end());
    return {static_cast<double>(magnitudes[0]), static_cast<double>(magnitudes[3])};
  }
  std::sort(positive.begin(), positive.end());
  return {static_cast<double>(positive[0]), static_cast<double>(positive[1])};
}

}  // namespace polariton
