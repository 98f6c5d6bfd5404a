// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <sstream>

#include "cli_internal.hpp"
#include "polariton/coupling.hpp"
#include "polariton/errors.hpp"
#include "polariton/field_map.hpp"
#include "polariton/fit.hpp"
#include "polariton/io.hpp"
#include "polariton/material.hpp"
#include "polariton/metrology.hpp"
#include "polariton/ridges.hpp"
#include "polariton/spectral_map.hpp"

namespace polariton::cli {
namespace {

using nlohmann::json;

std::unique_ptr<CLI::App> make_app(const std::string& name, const std::string& description) {
  auto app = std::make_unique<CLI::App>(description, "polariton " + name);
  app->option_defaults()->always_capture_default()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app->add_option("--config", "JSON file of option values (flags override it)");
  app->add_option("--preset", "Model preset: block, disc or life");
  return app;
}

std::string csv_with_digest(const std::string& digest, const std::string& body) {
  return "# config_digest=" + digest + "\n" + body;
}

void emit(const Context& ctx, const std::string& path, const std::string& contents) {
  if (path.empty()) {
    ctx.out << contents;
  } else {
    write_file_atomic(path, contents);
  }
}

void emit_json(const Context& ctx, const std::string& path, json doc, const std::string& digest) {
  doc["config_digest"] = digest;
  emit(ctx, path, doc.dump(2) + "\n");
}

MaterialLibrary load_library(const std::string& path) {
  return path.empty() ? MaterialLibrary{} : MaterialLibrary::from_json_file(path);
}

std::optional<FieldWindow> window_of(const std::vector<double>& v, const char* name) {
  if (v.empty()) return std::nullopt;
  if (v.size() != 2 || !(v[0] < v[1])) throw ValidationError(std::string("--") + name + " needs LO HI with LO < HI");
  return FieldWindow{v[0], v[1]};
}

void add_extract_options(CLI::App& app, ExtractOptions& opts) {
  app.add_option("--prominence-db", opts.prominence_db, "Minimum peak prominence in dB");
  app.add_option("--max-branches", opts.max_branches, "Number of branches kept");
  app.add_option("--max-jump-ghz", opts.max_jump_ghz, "Largest linking step in GHz (0 = 5% of span)");
}

void check_extract(const ExtractOptions& opts) {
  if (!(opts.prominence_db > 0.0)) throw ValidationError("--prominence-db must be positive");
  if (opts.max_branches == 0) throw ValidationError("--max-branches must be at least 1");
  if (opts.max_jump_ghz < 0.0) throw ValidationError("--max-jump-ghz must be non-negative");
}

}  // namespace

void ModelOptions::add_to(CLI::App& app) {
  app.add_option("--omega-c", omega_c, "Cavity frequency, GHz");
  app.add_option("--g", g, "Coupling rate, GHz");
  app.add_option("--dispersion", dispersion, "Magnon dispersion: linear, polynomial or turnover")
      ->check(CLI::IsMember({"linear", "polynomial", "turnover"}));
  app.add_option("--g-eff", g_eff, "Effective g-factor of the linear dispersion");
  app.add_option("--b-off", b_off, "Field offset of the linear dispersion, T");
  app.add_option("--poly-coeffs", poly_coeffs, "Polynomial dispersion coefficients, GHz/T^k");
  app.add_option("--rising-g-eff", rising_g_eff, "Rising asymptote g-factor");
  app.add_option("--rising-b-off", rising_b_off, "Rising asymptote offset, T");
  app.add_option("--falling-g-eff", falling_g_eff, "Falling asymptote g-factor");
  app.add_option("--falling-b-off", falling_b_off, "Falling asymptote offset, T");
  app.add_option("--blend-width", blend_width, "Turnover blend width, GHz");
}

HybridModel ModelOptions::model() const {
  HybridModel m;
  m.omega_c = omega_c;
  m.g_cm = g;
  if (dispersion == "linear") {
    m.dispersion = LinearDispersion{g_eff, b_off};
  } else if (dispersion == "polynomial") {
    m.dispersion = PolynomialDispersion{poly_coeffs};
  } else {
    m.dispersion = SmoothTurnoverDispersion{{rising_g_eff, rising_b_off}, {falling_g_eff, falling_b_off}, blend_width};
  }
  m.validate();
  return m;
}

int cmd_synth(const std::vector<std::string>& tokens, const Context& ctx) {
  auto app = make_app("synth", "Synthesize an |S21| map from the hybrid model");
  ModelOptions model;
  model.add_to(*app);
  double b_min = 0.06, b_max = 1.2, f_min = 1.0, f_max = 20.0;
  std::size_t b_points = 200, f_points = 400;
  SynthOptions synth;
  std::string out;
  app->add_option("--b-min", b_min, "Lowest field, T");
  app->add_option("--b-max", b_max, "Highest field, T");
  app->add_option("--b-points", b_points, "Field samples");
  app->add_option("--f-min", f_min, "Lowest frequency, GHz");
  app->add_option("--f-max", f_max, "Highest frequency, GHz");
  app->add_option("--f-points", f_points, "Frequency samples");
  app->add_option("--linewidth-cavity", synth.linewidths.cavity, "Cavity FWHM, GHz");
  app->add_option("--linewidth-magnon", synth.linewidths.magnon, "Magnon FWHM, GHz");
  app->add_option("--noise-db", synth.noise_db, "Gaussian noise sigma, dB");
  app->add_option("--seed", synth.seed, "Noise seed");
  app->add_option("--out", out, "Output CSV (stdout if omitted)");
  parse_tokens(*app, tokens);
  const auto digest = echo_config(ctx, "synth", effective_config(*app));

  if (!(b_min < b_max) || b_points < 2) throw ValidationError("field grid needs b-min < b-max and at least 2 points");
  if (!(f_min < f_max) || f_points < 3) throw ValidationError("frequency grid needs f-min < f-max and at least 3 points");
  if (!(synth.linewidths.cavity > 0.0) || !(synth.linewidths.magnon > 0.0))
    throw ValidationError("linewidths must be positive");
  if (synth.noise_db < 0.0) throw ValidationError("--noise-db must be non-negative");

  const auto map = synth_s21_map(model.model(), linspace(b_min, b_max, b_points), linspace(f_min, f_max, f_points), synth);
  std::ostringstream body;
  write_spectral_map_csv(body, map);
  emit(ctx, out, csv_with_digest(digest, body.str()));
  return kExitOk;
}

int cmd_extract(const std::vector<std::string>& tokens, const Context& ctx) {
  auto app = make_app("extract", "Extract mode ridges from an |S21| map");
  ExtractOptions opts;
  std::string map_path, out;
  app->add_option("--map", map_path, "Spectral map CSV")->required();
  add_extract_options(*app, opts);
  app->add_option("--out", out, "Output ridge CSV (stdout if omitted)");
  parse_tokens(*app, tokens);
  const auto digest = echo_config(ctx, "extract", effective_config(*app));
  check_extract(opts);

  const auto ridges = extract_ridges(read_spectral_map_csv(std::filesystem::path(map_path)), opts);
  std::ostringstream body;
  write_ridges_csv(body, ridges);
  emit(ctx, out, csv_with_digest(digest, body.str()));
  return kExitOk;
}

int cmd_fit(const std::vector<std::string>& tokens, const Context& ctx) {
  auto app = make_app("fit", "Staged avoided-crossing fit");
  ModelOptions model;
  model.add_to(*app);
  ExtractOptions extract;
  add_extract_options(*app, extract);
  std::string ridges_path, map_path, init_fit, stage = "A", out;
  std::vector<double> window, rising, falling;
  int poly_order = 3;
  int max_iter = 200;
  app->add_option("--ridges", ridges_path, "Ridge CSV");
  app->add_option("--map", map_path, "Spectral map CSV (ridges are extracted first)");
  app->add_option("--init-fit", init_fit, "FitResult JSON whose model is the starting point");
  app->add_option("--stage", stage, "A, B, C or AB")->check(CLI::IsMember({"A", "B", "C", "AB"}));
  app->add_option("--window", window, "Field window LO HI, T")->expected(2);
  app->add_option("--rising-window", rising, "Rising-asymptote window LO HI, T")->expected(2);
  app->add_option("--falling-window", falling, "Falling-asymptote window LO HI, T")->expected(2);
  app->add_option("--poly-order", poly_order, "Polynomial order for stage B");
  app->add_option("--max-iter", max_iter, "Solver iteration limit");
  app->add_option("--out", out, "Output FitResult JSON (stdout if omitted)");
  parse_tokens(*app, tokens);
  const auto digest = echo_config(ctx, "fit", effective_config(*app));

  if (ridges_path.empty() == map_path.empty()) throw ValidationError("fit needs exactly one of --ridges or --map");
  if (max_iter < 1) throw ValidationError("--max-iter must be at least 1");
  check_extract(extract);

  RidgeSet ridges;
  if (!ridges_path.empty()) {
    ridges = read_ridges_csv(std::filesystem::path(ridges_path));
  } else {
    ridges = extract_ridges(read_spectral_map_csv(std::filesystem::path(map_path)), extract);
  }

  HybridModel init = init_fit.empty() ? model.model() : fit_from_json(json::parse(read_file(init_fit))).model;

  FitOptions options;
  options.window = window_of(window, "window");
  options.rising_window = window_of(rising, "rising-window");
  options.falling_window = window_of(falling, "falling-window");
  options.polynomial_order = poly_order;
  options.solver.max_iterations = max_iter;

  FitResult result;
  if (stage == "A" || stage == "AB") {
    options.stage = FitStage::LinearCrossing;
    result = fit_avoided_crossing(ridges, init, options);
  }
  if (stage == "B" || stage == "AB") {
    std::vector<StageWindow> earlier;
    if (stage == "AB") {
      if (!result.valid) throw ValidationError("stage A did not converge: " + result.message);
      init = result.model;
      earlier = result.fit_region;
    }
    options.stage = FitStage::PolynomialMagnon;
    result = fit_avoided_crossing(ridges, init, options);
    result.fit_region.insert(result.fit_region.begin(), earlier.begin(), earlier.end());
  }
  if (stage == "C") {
    options.stage = FitStage::Turnover;
    result = fit_avoided_crossing(ridges, init, options);
  }
  emit_json(ctx, out, to_json(result), digest);
  return kExitOk;
}

int cmd_couple(const std::vector<std::string>& tokens, const Context& ctx) {
  auto app = make_app("couple", "Overlap integrals and coupling rate of a cavity field map");
  std::string field_map, material = "yig", materials, out;
  double omega_c = 0.0, sample_eps = 1.0;
  std::optional<double> chi_eff;
  app->add_option("--field-map", field_map, "Field-map CSV")->required();
  app->add_option("--omega-c", omega_c, "Cavity mode frequency, GHz")->required();
  app->add_option("--material", material, "Material preset name");
  app->add_option("--materials", materials, "JSON file of extra material presets");
  app->add_option("--sample-eps", sample_eps, "Relative permittivity of bare 'sample' cells");
  app->add_option("--chi-eff", chi_eff, "Effective susceptibility for the filling-factor estimate");
  app->add_option("--out", out, "Output JSON (stdout if omitted)");
  parse_tokens(*app, tokens);
  const auto digest = echo_config(ctx, "couple", effective_config(*app));

  if (!(omega_c > 0.0)) throw ValidationError("--omega-c must be positive");
  if (!(sample_eps > 0.0)) throw ValidationError("--sample-eps must be positive");
  const auto library = load_library(materials);
  const auto& spec = library.get(material);
  const auto map = read_field_map_csv(std::filesystem::path(field_map), omega_c, sample_eps);
  const auto overlap = summarize_overlap(map);
  const auto comps = coupling_components(map, spec);
  const double g = first_principles_coupling(overlap.eta, omega_c, spec);
  const auto regime = classify_coupling(g, omega_c);

  json doc = {
      {"material", spec.name},
      {"omega_c_ghz", omega_c},
      {"eta", overlap.eta},
      {"zeta_m", overlap.zeta_m},
      {"zeta_e", overlap.zeta_e},
      {"sample_volume_m3", overlap.sample_volume},
      {"cavity_volume_m3", overlap.cavity_volume},
      {"g_x_ghz", comps.g_x},
      {"g_y_ghz", comps.g_y},
      {"g_z_ghz", comps.g_z},
      {"omega_z_ghz", comps.omega_z},
      {"g_cm_ghz", g},
      {"g_over_omega_c", g / omega_c},
      {"regime", to_string(regime)},
  };
  if (chi_eff) {
    if (!(*chi_eff >= 0.0)) throw ValidationError("--chi-eff must be non-negative");
    doc["g_filling_factor_ghz"] = filling_factor_coupling(omega_c, *chi_eff, overlap.zeta_m);
  }
  emit_json(ctx, out, doc, digest);
  return kExitOk;
}

int cmd_predict(const std::vector<std::string>& tokens, const Context& ctx) {
  auto app = make_app("predict", "Rescale a measured coupling to another material");
  double g = 0.0;
  std::optional<double> omega_c;
  std::string from = "yig", to = "life", materials, out;
  app->add_option("--g", g, "Measured coupling, GHz")->required();
  app->add_option("--omega-c", omega_c, "Cavity frequency, GHz (adds g/omega_c and the regime)");
  app->add_option("--from", from, "Material of the measurement");
  app->add_option("--to", to, "Target material");
  app->add_option("--materials", materials, "JSON file of extra material presets");
  app->add_option("--out", out, "Output JSON (stdout if omitted)");
  parse_tokens(*app, tokens);
  const auto digest = echo_config(ctx, "predict", effective_config(*app));

  if (!(g >= 0.0) || !std::isfinite(g)) throw ValidationError("--g must be finite and non-negative");
  const auto library = load_library(materials);
  const auto& a = library.get(from);
  const auto& b = library.get(to);
  const double scaled = material_scale(g, a, b);
  json doc = {{"from", a.name},           {"to", b.name},
              {"g_known_ghz", g},         {"g_predicted_ghz", scaled},
              {"scale_factor", g > 0.0 ? scaled / g : material_scale(1.0, a, b)}};
  if (omega_c) {
    if (!(*omega_c > 0.0)) throw ValidationError("--omega-c must be positive");
    doc["omega_c_ghz"] = *omega_c;
    doc["g_over_omega_c"] = scaled / *omega_c;
    doc["regime"] = to_string(classify_coupling(scaled, *omega_c));
  }
  emit_json(ctx, out, doc, digest);
  return kExitOk;
}

int cmd_magic(const std::vector<std::string>& tokens, const Context& ctx) {
  auto app = make_app("magic", "Double-magic operating point and field sensitivity");
  ModelOptions model;
  model.dispersion = "turnover";
  model.omega_c = 5.56;
  model.g = 0.169;
  model.add_to(*app);
  std::vector<double> bracket{0.05, 0.4};
  SensitivityOptions opts;
  std::string out, scan_out;
  app->add_option("--bracket", bracket, "Search bracket LO HI, T")->expected(2);
  app->add_option("--detune-baseline", opts.detune_baseline, "Comparison detuning in units of g");
  app->add_option("--first-threshold", opts.first_threshold, "Bound on |d1|, GHz/T");
  app->add_option("--second-threshold", opts.second_threshold, "Bound on |d2|, GHz/T^2");
  app->add_option("--scan-points", opts.scan_points, "Rows of the sensitivity scan");
  app->add_option("--out", out, "Output JSON (stdout if omitted)");
  app->add_option("--scan-out", scan_out, "Sensitivity scan CSV");
  parse_tokens(*app, tokens);
  const auto digest = echo_config(ctx, "magic", effective_config(*app));

  const auto window = window_of(bracket, "bracket");
  if (opts.scan_points < 2) throw ValidationError("--scan-points must be at least 2");
  const auto report = sensitivity_report(model.model(), *window, opts);
  emit_json(ctx, out, to_json(report), digest);
  if (!scan_out.empty()) {
    std::ostringstream body;
    write_sensitivity_scan_csv(body, report);
    write_file_atomic(scan_out, csv_with_digest(digest, body.str()));
  }
  return kExitOk;
}

int cmd_report(const std::vector<std::string>& tokens, const Context& ctx) {
  auto app = make_app("report", "Coupling-regime summary of a fit");
  std::string fit_path, from = "yig", to = "life", materials, out;
  app->add_option("--fit", fit_path, "FitResult JSON")->required();
  app->add_option("--from", from, "Material of the fitted sample");
  app->add_option("--to", to, "Material for the scaled prediction");
  app->add_option("--materials", materials, "JSON file of extra material presets");
  app->add_option("--out", out, "Output JSON (stdout if omitted)");
  parse_tokens(*app, tokens);
  const auto digest = echo_config(ctx, "report", effective_config(*app));

  json parsed;
  try {
    parsed = json::parse(read_file(fit_path));
  } catch (const json::exception& e) {
    throw ValidationError("fit file '" + fit_path + "': " + e.what());
  }
  const auto fit = fit_from_json(parsed);
  const auto library = load_library(materials);
  const auto& a = library.get(from);
  const auto& b = library.get(to);
  const double g = fit.model.g_cm;
  const double wc = fit.model.omega_c;
  const double scaled = material_scale(g, a, b);

  json doc = {
      {"stage", to_string(fit.stage)},
      {"valid", fit.valid},
      {"omega_c_ghz", wc},
      {"g_cm_ghz", g},
      {"g_over_omega_c", g / wc},
      {"regime", to_string(classify_coupling(g, wc))},
      {"from", a.name},
      {"to", b.name},
      {"g_predicted_ghz", scaled},
      {"g_predicted_over_omega_c", scaled / wc},
      {"regime_predicted", to_string(classify_coupling(scaled, wc))},
  };
  if (std::holds_alternative<LinearDispersion>(fit.model.dispersion)) {
    doc["usc_bound_t"] = json_number(usc_bound(fit));
  } else {
    doc["usc_bound_t"] = nullptr;
  }
  emit_json(ctx, out, doc, digest);
  return kExitOk;
}

}  // namespace polariton::cli
