// SPDX-License-Identifier: Apache-2.0

#include "polariton/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>
#include <system_error>

#include "numeric.hpp"
#include "polariton/errors.hpp"

namespace polariton {
namespace {

using nlohmann::json;

json linear_json(const LinearDispersion& d) { return {{"g_eff", d.g_eff}, {"b_offset_t", d.b_offset}}; }

LinearDispersion linear_from(const json& j) {
  return {j.at("g_eff").get<double>(), j.at("b_offset_t").get<double>()};
}

double number_from(const json& j) {
  if (j.is_null()) return std::numeric_limits<double>::quiet_NaN();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    return std::numeric_limits<double>::quiet_NaN();
  }
  return j.get<double>();
}

FitStage stage_from(const std::string& s) {
  if (s == "A") return FitStage::LinearCrossing;
  if (s == "B") return FitStage::PolynomialMagnon;
  if (s == "C") return FitStage::Turnover;
  throw ValidationError("unknown fit stage '" + s + "'");
}

SolverStatus status_from(const std::string& s) {
  for (auto st : {SolverStatus::Converged, SolverStatus::MaxIterations, SolverStatus::RankDeficient,
                  SolverStatus::InvalidStart})
    if (s == to_string(st)) return st;
  throw ValidationError("unknown solver status '" + s + "'");
}

}  // namespace

json json_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  return value;
}

json to_json(const MagnonDispersion& dispersion) {
  return std::visit(
      [](const auto& d) -> json {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, LinearDispersion>) {
          auto j = linear_json(d);
          j["kind"] = "linear";
          return j;
        } else if constexpr (std::is_same_v<T, PolynomialDispersion>) {
          return {{"kind", "polynomial"}, {"coeffs_ghz_per_t_k", d.coeffs}};
        } else {
          return {{"kind", "smooth_turnover"},
                  {"rising", linear_json(d.rising)},
                  {"falling", linear_json(d.falling)},
                  {"blend_width_ghz", d.blend_width}};
        }
      },
      dispersion);
}

MagnonDispersion dispersion_from_json(const json& j) {
  try {
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "linear") return linear_from(j);
    if (kind == "polynomial") return PolynomialDispersion{j.at("coeffs_ghz_per_t_k").get<std::vector<double>>()};
    if (kind == "smooth_turnover")
      return SmoothTurnoverDispersion{linear_from(j.at("rising")), linear_from(j.at("falling")),
                                      j.at("blend_width_ghz").get<double>()};
    throw ValidationError("unknown dispersion kind '" + kind + "'");
  } catch (const json::exception& e) {
    throw ValidationError(std::string("dispersion: ") + e.what());
  }
}

json to_json(const HybridModel& model) {
  return {{"omega_c_ghz", model.omega_c}, {"g_cm_ghz", model.g_cm}, {"dispersion", to_json(model.dispersion)}};
}

HybridModel model_from_json(const json& j) {
  try {
    return {j.at("omega_c_ghz").get<double>(), j.at("g_cm_ghz").get<double>(),
            dispersion_from_json(j.at("dispersion"))};
  } catch (const json::exception& e) {
    throw ValidationError(std::string("model: ") + e.what());
  }
}

json to_json(const FitResult& fit) {
  json params = json::array();
  for (const auto& p : fit.parameters)
    params.push_back({{"name", p.name}, {"value", p.value}, {"sigma", json_number(p.sigma)}, {"fixed", p.fixed}});
  json windows = json::array();
  for (const auto& w : fit.fit_region)
    windows.push_back({{"stage", w.stage}, {"b_min_t", w.window.lo}, {"b_max_t", w.window.hi}});
  return {{"stage", to_string(fit.stage)},
          {"model", to_json(fit.model)},
          {"parameters", params},
          {"rms_residual_ghz", json_number(fit.rms_residual)},
          {"fit_region", windows},
          {"status", to_string(fit.status)},
          {"valid", fit.valid},
          {"iterations", fit.iterations},
          {"points_used", fit.points_used},
          {"message", fit.message}};
}

FitResult fit_from_json(const json& j) {
  try {
    FitResult fit;
    fit.stage = stage_from(j.at("stage").get<std::string>());
    fit.model = model_from_json(j.at("model"));
    for (const auto& p : j.at("parameters"))
      fit.parameters.push_back({p.at("name").get<std::string>(), p.at("value").get<double>(),
                                number_from(p.at("sigma")), p.value("fixed", false)});
    fit.rms_residual = number_from(j.at("rms_residual_ghz"));
    for (const auto& w : j.at("fit_region"))
      fit.fit_region.push_back({w.at("stage").get<std::string>(),
                                {w.at("b_min_t").get<double>(), w.at("b_max_t").get<double>()}});
    fit.status = status_from(j.at("status").get<std::string>());
    fit.valid = j.at("valid").get<bool>();
    fit.iterations = j.value("iterations", 0);
    fit.points_used = j.value("points_used", std::size_t{0});
    fit.message = j.value("message", std::string{});
    return fit;
  } catch (const json::exception& e) {
    throw ValidationError(std::string("fit result: ") + e.what());
  }
}

json to_json(const SensitivityReport& r) {
  return {{"b_star_t", r.b_star},
          {"omega_c_required_ghz", r.omega_c_required},
          {"g_cm_ghz", r.g_cm},
          {"d1_ghz_per_t", r.d1},
          {"d2_ghz_per_t2", r.d2},
          {"omega_cmp_at_b_star_ghz", r.omega_cmp_at_b_star},
          {"detuned_omega_c_ghz", r.detuned_omega_c},
          {"detuned_d2_ghz_per_t2", r.detuned_d2},
          {"suppression_ratio_d2", json_number(r.suppression_ratio_d2)},
          {"double_magic", r.double_magic},
          {"thresholds", {{"d1_ghz_per_t", r.options.first_threshold}, {"d2_ghz_per_t2", r.options.second_threshold}}},
          {"detune_baseline_g", r.options.detune_baseline},
          {"bracket_t", {r.bracket.lo, r.bracket.hi}},
          {"scan_points", r.scan.size()}};
}

void write_sensitivity_scan_csv(std::ostream& out, const SensitivityReport& report) {
  using detail::format_double;
  out << "b_tesla,omega_cmp_ghz,d1,d2\n";
  for (const auto& row : report.scan)
    out << format_double(row.field) << ',' << format_double(row.omega_cmp) << ',' << format_double(row.first)
        << ',' << format_double(row.second) << '\n';
}

std::string fnv1a_hex(std::string_view bytes) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(hash));
  return buf;
}

void write_file_atomic(const std::filesystem::path& path, std::string_view contents) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + tmp.string() + "' for writing");
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    out.flush();
    if (!out) throw IoError("failed writing '" + tmp.string() + "'");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw IoError("cannot move output into place at '" + path.string() + "'");
  }
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

}  // namespace polariton
