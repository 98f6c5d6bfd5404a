// SPDX-License-Identifier: Apache-2.0

#include "polariton/ridges.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <string>
#include <tuple>

#include "numeric.hpp"
#include "polariton/errors.hpp"

namespace polariton {
namespace {

constexpr std::string_view kHeader = "b_tesla,branch_id,freq_ghz,weight";

struct Peak {
  double freq;
  double prominence;
};

struct Branch {
  std::vector<RidgePoint> points;
  std::vector<double> prominence;
  std::size_t last_column;
};

// Vertex of the parabola through three equally spaced samples, in units of the spacing.
double parabolic_offset(double left, double mid, double right) {
  const double denom = left - 2.0 * mid + right;
  if (denom >= 0.0) return 0.0;
  return std::clamp(0.5 * (left - right) / denom, -0.5, 0.5);
}

}  // namespace

std::vector<int> RidgeSet::branch_ids() const {
  std::set<int> ids;
  for (const auto& p : points) ids.insert(p.branch_id);
  return {ids.begin(), ids.end()};
}

std::size_t RidgeSet::branch_size(int branch_id) const {
  return static_cast<std::size_t>(
      std::count_if(points.begin(), points.end(), [&](const RidgePoint& p) { return p.branch_id == branch_id; }));
}

void RidgeSet::validate() const {
  std::map<int, double> last_field;
  for (const auto& p : points) {
    if (!std::isfinite(p.field) || !std::isfinite(p.freq) || !std::isfinite(p.weight))
      throw ValidationError("ridge point has non-finite values");
    if (!(p.weight >= 0.0)) throw ValidationError("ridge weights must be non-negative");
    const auto it = last_field.find(p.branch_id);
    if (it != last_field.end() && !(p.field > it->second))
      throw ValidationError("fields must strictly increase within branch " + std::to_string(p.branch_id));
    last_field[p.branch_id] = p.field;
  }
}

std::vector<std::pair<std::size_t, double>> column_peaks(const std::vector<double>& y) {
  std::vector<std::pair<std::size_t, double>> peaks;
  const std::size_t n = y.size();
  if (n < 3) return peaks;
  std::size_t i = 1;
  while (i + 1 < n) {
    if (!(y[i] > y[i - 1])) {
      ++i;
      continue;
    }
    std::size_t end = i;  // last index of a possible plateau
    while (end + 1 < n && y[end + 1] == y[i]) ++end;
    if (end + 1 >= n || !(y[end + 1] < y[i])) {
      i = end + 1;
      continue;
    }
    const std::size_t peak = (i + end) / 2;
    double left_min = y[peak];
    for (std::size_t j = i; j-- > 0;) {
      if (y[j] > y[peak]) break;
      left_min = std::min(left_min, y[j]);
    }
    double right_min = y[peak];
    for (std::size_t j = end + 1; j < n; ++j) {
      if (y[j] > y[peak]) break;
      right_min = std::min(right_min, y[j]);
    }
    peaks.emplace_back(peak, y[peak] - std::max(left_min, right_min));
    i = end + 1;
  }
  return peaks;
}

RidgeSet extract_ridges(const SpectralMap& map, const ExtractOptions& options) {
  map.validate();
  if (!(options.prominence_db > 0.0)) throw ValidationError("prominence threshold must be positive");
  const auto& f = map.f_grid;
  const std::size_t nf = f.size();
  const double max_jump = options.max_jump_ghz > 0.0 ? options.max_jump_ghz : 0.05 * (f.back() - f.front());
  const double step = nf > 1 ? (f.back() - f.front()) / static_cast<double>(nf - 1) : 0.0;

  std::vector<Branch> branches;
  std::vector<double> column(nf);
  for (std::size_t b = 0; b < map.b_grid.size(); ++b) {
    for (std::size_t j = 0; j < nf; ++j) column[j] = map.at(b, j);

    std::vector<Peak> peaks;
    for (const auto& [idx, prominence] : column_peaks(column)) {
      if (prominence < options.prominence_db) continue;
      // Grids are allowed to be non-uniform; interpolate with the local spacing.
      const double offset = parabolic_offset(column[idx - 1], column[idx], column[idx + 1]);
      const double spacing = offset >= 0.0 ? f[idx + 1] - f[idx] : f[idx] - f[idx - 1];
      peaks.push_back({f[idx] + offset * (std::abs(spacing) > 0.0 ? spacing : step), prominence});
    }

    // Greedy nearest-neighbour linking: smallest |Δf| first.
    std::vector<std::tuple<double, std::size_t, std::size_t>> candidates;
    for (std::size_t k = 0; k < branches.size(); ++k) {
      const auto& br = branches[k];
      if (b - br.last_column > options.max_gap_columns + 1) continue;
      for (std::size_t p = 0; p < peaks.size(); ++p) {
        const double jump = std::abs(peaks[p].freq - br.points.back().freq);
        if (jump <= max_jump) candidates.emplace_back(jump, k, p);
      }
    }
    std::sort(candidates.begin(), candidates.end());
    std::vector<bool> branch_taken(branches.size(), false);
    std::vector<bool> peak_taken(peaks.size(), false);
    for (const auto& [jump, k, p] : candidates) {
      if (branch_taken[k] || peak_taken[p]) continue;
      branch_taken[k] = peak_taken[p] = true;
      branches[k].points.push_back({map.b_grid[b], peaks[p].freq, 0, 1.0});
      branches[k].prominence.push_back(peaks[p].prominence);
      branches[k].last_column = b;
    }
    for (std::size_t p = 0; p < peaks.size(); ++p) {
      if (peak_taken[p]) continue;
      branches.push_back({{{map.b_grid[b], peaks[p].freq, 0, 1.0}}, {peaks[p].prominence}, b});
    }
  }

  std::erase_if(branches, [&](const Branch& br) { return br.points.size() < options.min_branch_length; });
  std::stable_sort(branches.begin(), branches.end(),
                   [](const Branch& a, const Branch& b) { return a.points.size() > b.points.size(); });
  if (branches.size() > options.max_branches) branches.resize(options.max_branches);

  auto mean_freq = [](const Branch& br) {
    detail::CompensatedSum s;
    for (const auto& p : br.points) s.add(p.freq);
    return s.value() / static_cast<double>(br.points.size());
  };
  std::stable_sort(branches.begin(), branches.end(),
                   [&](const Branch& a, const Branch& b) { return mean_freq(a) < mean_freq(b); });

  double strongest = 0.0;
  for (const auto& br : branches)
    for (double p : br.prominence) strongest = std::max(strongest, p);

  RidgeSet out;
  for (std::size_t k = 0; k < branches.size(); ++k) {
    for (std::size_t i = 0; i < branches[k].points.size(); ++i) {
      auto point = branches[k].points[i];
      point.branch_id = static_cast<int>(k);
      point.weight = branches[k].prominence[i] / strongest;
      out.points.push_back(point);
    }
  }
  return out;
}

RidgeSet extract_ridges(const SpectralMap& map, double prominence_db, std::size_t max_branches) {
  ExtractOptions options;
  options.prominence_db = prominence_db;
  options.max_branches = max_branches;
  return extract_ridges(map, options);
}

void write_ridges_csv(std::ostream& out, const RidgeSet& ridges) {
  using detail::format_double;
  out << kHeader << '\n';
  for (const auto& p : ridges.points)
    out << format_double(p.field) << ',' << p.branch_id << ',' << format_double(p.freq) << ','
        << format_double(p.weight) << '\n';
}

RidgeSet read_ridges_csv(std::istream& in) {
  RidgeSet ridges;
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    const auto text = detail::trim(line);
    if (text.empty() || text.front() == '#') continue;
    if (!header_seen) {
      if (text != kHeader) throw ParseError(line_no, "expected header '" + std::string(kHeader) + "'");
      header_seen = true;
      continue;
    }
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
      const auto comma = text.find(',', start);
      fields.push_back(text.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (fields.size() != 4) throw ParseError(line_no, "expected 4 columns");
    const auto b = detail::parse_double(fields[0]);
    const auto id = detail::parse_double(fields[1]);
    const auto freq = detail::parse_double(fields[2]);
    double weight = 1.0;
    if (!detail::trim(fields[3]).empty()) {
      const auto w = detail::parse_double(fields[3]);
      if (!w) throw ParseError(line_no, "non-numeric weight");
      weight = *w;
    }
    if (!b || !id || !freq || *id != std::floor(*id)) throw ParseError(line_no, "non-numeric value");
    ridges.points.push_back({*b, *freq, static_cast<int>(*id), weight});
  }
  if (!header_seen) throw ParseError(line_no, "missing header");
  try {
    ridges.validate();
  } catch (const ValidationError& e) {
    throw ParseError(line_no, e.what());
  }
  return ridges;
}

RidgeSet read_ridges_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open ridge file '" + path.string() + "'");
  return read_ridges_csv(in);
}

}  // namespace polariton
