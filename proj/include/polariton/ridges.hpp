// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <iosfwd>
#include <vector>

#include "polariton/spectral_map.hpp"

namespace polariton {

struct RidgePoint {
  double field = 0.0;  // T
  double freq = 0.0;   // GHz
  int branch_id = 0;
  double weight = 1.0;
};

/// Mode-frequency branches. Within a branch, fields strictly increase.
struct RidgeSet {
  std::vector<RidgePoint> points;

  std::vector<int> branch_ids() const;
  std::size_t branch_size(int branch_id) const;
  void validate() const;
};

struct ExtractOptions {
  double prominence_db = 6.0;
  std::size_t max_branches = 2;
  /// Largest frequency step accepted when linking adjacent columns; 0 selects
  /// 5% of the frequency span.
  double max_jump_ghz = 0.0;
  /// A branch stays linkable for this many columns without a peak.
  std::size_t max_gap_columns = 2;
  std::size_t min_branch_length = 5;
};

/// Peak prominence of every local maximum of one column, as (index, prominence) pairs.
std::vector<std::pair<std::size_t, double>> column_peaks(const std::vector<double>& column_db);

/// Per-column peak detection above the prominence threshold, then nearest-
/// neighbour linking across columns. Ties go to the continuation with the
/// smallest |Δf|. Branches are renumbered 0.. by ascending mean frequency and
/// the point weight is the peak prominence relative to the strongest peak.
RidgeSet extract_ridges(const SpectralMap& map, const ExtractOptions& options);
RidgeSet extract_ridges(const SpectralMap& map, double prominence_db, std::size_t max_branches);

/// CSV `b_tesla,branch_id,freq_ghz,weight`; an empty weight cell reads as 1.0.
void write_ridges_csv(std::ostream& out, const RidgeSet& ridges);
RidgeSet read_ridges_csv(std::istream& in);
RidgeSet read_ridges_csv(const std::filesystem::path& path);

}  // namespace polariton
