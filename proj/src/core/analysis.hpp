#pragma once

#include "dmr_table.hpp"
#include "matrix.hpp"

#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace mmcmc {

struct SixNumberSummary {
  double min = 0.0;
  double q1 = 0.0;
  double median = 0.0;
  double mean = 0.0;
  double q3 = 0.0;
  double max = 0.0;
};

// Quartiles use linear interpolation between order statistics.
SixNumberSummary six_number_summary(std::span<const double> values);

struct DmrSummary {
  std::size_t n_dmrs = 0;
  SixNumberSummary size_stats;
  SixNumberSummary decision_stats;
  // Chromosomes in order of first appearance.
  std::vector<std::pair<std::string, std::size_t>> by_chromosome;
  std::map<int, std::size_t> by_stage;
};

DmrSummary summarize_dmrs(const DmrTable &table);

// Plain-text report: counts, size and decision-value summaries, and
// per-chromosome and per-stage tables.
std::string format_summary(const DmrSummary &summary);

struct Overlap {
  std::size_t index_a = 0; // 0-based row in table a
  std::size_t index_b = 0;
  std::size_t shared_cpgs = 0;
  double percent = 0.0; // 100 * |A n B| / |A u B|

  bool operator==(const Overlap &) const = default;
};

using OverlapReport = std::vector<Overlap>;

// Every pair of regions sharing at least one CpG row, ordered by (a, b).
// Empty when nothing overlaps.
OverlapReport compare_dmrs(const DmrTable &a, const DmrTable &b,
                           const MethylationMatrix &index);

struct RegionPlot {
  std::string title;
  std::string chromosome;
  std::vector<std::string> cpg_ids;
  std::vector<double> cancer; // per-CpG mean across cancer samples
  std::vector<double> normal;
};

// `index` is 1-based, as in the printed table.
RegionPlot build_region_plot(const DmrTable &table,
                             const MethylationMatrix &cancer,
                             const MethylationMatrix &normal,
                             std::size_t index);

std::string render_svg(const RegionPlot &plot);

} // namespace mmcmc
