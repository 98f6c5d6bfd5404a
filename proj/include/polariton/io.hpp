// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>

#include "json.hpp"
#include "polariton/fit.hpp"
#include "polariton/metrology.hpp"

namespace polariton {

nlohmann::json to_json(const MagnonDispersion& dispersion);
MagnonDispersion dispersion_from_json(const nlohmann::json& j);

nlohmann::json to_json(const HybridModel& model);
HybridModel model_from_json(const nlohmann::json& j);

/// Structured fit report: model, parameters with 1σ (null when unavailable),
/// rms residual, fit windows, solver status.
nlohmann::json to_json(const FitResult& fit);
FitResult fit_from_json(const nlohmann::json& j);

nlohmann::json to_json(const SensitivityReport& report);

/// Plot-ready scan table `b_tesla,omega_cmp_ghz,d1,d2`.
void write_sensitivity_scan_csv(std::ostream& out, const SensitivityReport& report);

/// JSON number, or the strings "inf"/"-inf"/"nan" for non-finite values.
nlohmann::json json_number(double value);

/// FNV-1a 64-bit hash, as 16 lowercase hex digits.
std::string fnv1a_hex(std::string_view bytes);

/// Writes `contents` to a sibling temporary file and renames it over `path`.
/// Throws IoError on failure.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

std::string read_file(const std::filesystem::path& path);

}  // namespace polariton
