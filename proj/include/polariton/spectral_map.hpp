// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "polariton/hybrid.hpp"

namespace polariton {

/// |S21| in dB sampled on a rectangular (B, f) grid. magnitude_db is row-major
/// with one row per field value.
struct SpectralMap {
  std::vector<double> b_grid;  // T, strictly ascending
  std::vector<double> f_grid;  // GHz, strictly ascending
  std::vector<double> magnitude_db;

  double at(std::size_t b_index, std::size_t f_index) const {
    return magnitude_db[b_index * f_grid.size() + f_index];
  }
  double& at(std::size_t b_index, std::size_t f_index) {
    return magnitude_db[b_index * f_grid.size() + f_index];
  }

  void validate() const;
};

struct Linewidths {
  double cavity = 0.005;  // GHz, FWHM
  double magnon = 0.020;  // GHz, FWHM
};

struct SynthOptions {
  Linewidths linewidths;
  double noise_db = 0.0;        // σ of Gaussian noise added to the dB values
  std::uint64_t seed = 0;
  double background_db = -60.0; // off-resonance transmission floor
};

/// Forward model: two Lorentzians at the hybrid eigenfrequencies, weighted by
/// their cavity fraction from the RWA mixing angle (tan 2θ = 2g/(ω_c − ω_m)).
/// Deterministic for a fixed seed. Throws DomainError if the eigenfrequencies
/// are undefined anywhere on b_grid.
SpectralMap synth_s21_map(const HybridModel& model, const std::vector<double>& b_grid,
                          const std::vector<double>& f_grid, const SynthOptions& options = {});

/// Cavity-like fraction (cos²θ) of the upper hybrid branch; the lower branch carries 1 − this.
double upper_branch_cavity_fraction(double omega_c, double omega_m, double g);

/// `count` evenly spaced values from lo to hi inclusive.
std::vector<double> linspace(double lo, double hi, std::size_t count);

/// Long-format CSV `b_tesla,freq_ghz,s21_db`, field-major. '#' lines are comments.
void write_spectral_map_csv(std::ostream& out, const SpectralMap& map);
SpectralMap read_spectral_map_csv(std::istream& in);
SpectralMap read_spectral_map_csv(const std::filesystem::path& path);

}  // namespace polariton
