// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "polariton/dispersion.hpp"

namespace polariton {

/// Two-mode cavity-magnon model. All frequencies are linear, in GHz.
struct HybridModel {
  double omega_c = 1.0;
  double g_cm = 0.0;
  MagnonDispersion dispersion = LinearDispersion{};

  /// Requires omega_c > 0, g_cm >= 0 and a valid dispersion.
  void validate() const;
};

/// Normal-mode pair, lower <= upper.
struct ModePair {
  double lower = 0.0;
  double upper = 0.0;
};

/// Hybrid eigenfrequencies including counter-rotating terms:
///   ω±² = (ω_c² + ω_m²)/2 ± sqrt(((ω_c² − ω_m²)/2)² + 4·ω_c·ω_m·g²).
/// Throws DomainError when ω_−² < 0 (mode softening) or ω_m < 0.
ModePair hybrid_eigenfrequencies(double omega_c, double omega_m, double g);
ModePair hybrid_eigenfrequencies(const HybridModel& model, double field);

/// Rotating-wave approximation: (ω_c + ω_m)/2 ∓ sqrt(((ω_c − ω_m)/2)² + g²).
ModePair hybrid_eigenfrequencies_rwa(double omega_c, double omega_m, double g);
ModePair hybrid_eigenfrequencies_rwa(const HybridModel& model, double field);

/// CMP transition frequency (RWA difference frequency) 2·sqrt(((ω_c − ω_m)/2)² + g²).
double cmp_transition(double omega_c, double omega_m, double g);
double cmp_transition(const HybridModel& model, double field);

/// Partial derivatives of one hybrid branch with respect to (ω_c, ω_m, g).
struct BranchPartials {
  double omega_c = 0.0;
  double omega_m = 0.0;
  double g = 0.0;
};

struct HybridPartials {
  ModePair modes;
  BranchPartials lower;
  BranchPartials upper;
};

/// Analytic gradient of hybrid_eigenfrequencies. Throws DomainError where the
/// eigenfrequencies are undefined or ω_− = 0.
HybridPartials hybrid_partials(double omega_c, double omega_m, double g);

/// Diagonalizes the 4x4 Heisenberg equation-of-motion matrix of the
/// quadratic boson Hamiltonian
///   H/ħ = ω_c c†c + ω_m b†b + g (c + c†)(b + b†)
/// for (c, b, c†, b†) and returns the two positive eigenfrequencies.
/// Independent numerical route to hybrid_eigenfrequencies. Throws DomainError
/// when an eigenvalue has a relative imaginary part above 1e-9.
ModePair hopfield_oracle(double omega_c, double omega_m, double g);

}  // namespace polariton
