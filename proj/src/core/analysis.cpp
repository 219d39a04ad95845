#include "analysis.hpp"

#include "asgn.hpp"
#include "error.hpp"

#include <algorithm>
#include <cstdio>
#include <numeric>
#include <sstream>

namespace mmcmc {

namespace {

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

// Right-aligned columns, each as wide as its widest cell, one space apart.
void print_columns(std::ostream &out,
                   const std::vector<std::vector<std::string>> &rows) {
  if (rows.empty())
    return;
  std::vector<std::size_t> width(rows.front().size(), 0);
  for (const auto &row : rows)
    for (std::size_t c = 0; c < row.size(); ++c)
      width[c] = std::max(width[c], row[c].size());
  for (const auto &row : rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c > 0)
        out << ' ';
      out << std::string(width[c] - row[c].size(), ' ') << row[c];
    }
    out << '\n';
  }
}

void print_six(std::ostream &out, const SixNumberSummary &s) {
  std::vector<std::string> header{"min", "q1", "median", "mean", "q3", "max"};
  std::vector<std::string> values;
  for (double v : {s.min, s.q1, s.median, s.mean, s.q3, s.max})
    values.push_back(fixed(v, 3));
  print_columns(out, {header, values});
}

} // namespace

SixNumberSummary six_number_summary(std::span<const double> values) {
  if (values.empty())
    return {};
  std::vector<double> v(values.begin(), values.end());
  SixNumberSummary s;
  s.min = *std::min_element(v.begin(), v.end());
  s.max = *std::max_element(v.begin(), v.end());
  s.mean = std::accumulate(v.begin(), v.end(), 0.0) /
           static_cast<double>(v.size());
  s.q1 = percentile(v, 0.25);
  s.median = percentile(v, 0.5);
  s.q3 = percentile(v, 0.75);
  return s;
}

DmrSummary summarize_dmrs(const DmrTable &table) {
  DmrSummary s;
  s.n_dmrs = table.size();
  std::vector<double> sizes, values;
  for (const auto &r : table) {
    sizes.push_back(static_cast<double>(r.cpg_count));
    values.push_back(r.decision_value);
    auto it = std::find_if(s.by_chromosome.begin(), s.by_chromosome.end(),
                           [&](const auto &p) { return p.first == r.chromosome; });
    if (it == s.by_chromosome.end())
      s.by_chromosome.emplace_back(r.chromosome, 1);
    else
      ++it->second;
    ++s.by_stage[r.stage];
  }
  s.size_stats = six_number_summary(sizes);
  s.decision_stats = six_number_summary(values);
  return s;
}

std::string format_summary(const DmrSummary &summary) {
  std::ostringstream out;
  out << "Summary of DMR results\n";
  out << "----------------------\n";
  out << "Number of DMRs: " << summary.n_dmrs << "\n";
  if (summary.n_dmrs == 0)
    return out.str();

  out << "\nRegion size (CpG_Count):\n";
  print_six(out, summary.size_stats);
  out << "\nDecision_Value:\n";
  print_six(out, summary.decision_stats);

  out << "\nDMRs by Chromosome:\n";
  std::vector<std::vector<std::string>> rows{{"", "Chromosome", "n_dmrs"}};
  std::size_t i = 0;
  for (const auto &[chrom, n] : summary.by_chromosome)
    rows.push_back({std::to_string(++i), chrom, std::to_string(n)});
  print_columns(out, rows);

  out << "\nDMRs by Stage:\n";
  rows = {{"", "Stage", "n_dmrs"}};
  i = 0;
  for (const auto &[stage, n] : summary.by_stage)
    rows.push_back({std::to_string(++i), std::to_string(stage),
                    std::to_string(n)});
  print_columns(out, rows);
  return out.str();
}

OverlapReport compare_dmrs(const DmrTable &a, const DmrTable &b,
                           const MethylationMatrix &index) {
  const auto ra = resolve_rows(a, index);
  const auto rb = resolve_rows(b, index);
  OverlapReport report;
  for (std::size_t i = 0; i < ra.size(); ++i) {
    for (std::size_t j = 0; j < rb.size(); ++j) {
      const std::size_t lo = std::max(ra[i].start, rb[j].start);
      const std::size_t hi = std::min(ra[i].end, rb[j].end);
      if (lo > hi)
        continue;
      const std::size_t shared = hi - lo + 1;
      const std::size_t uni = ra[i].size() + rb[j].size() - shared;
      report.push_back({i, j, shared,
                        100.0 * static_cast<double>(shared) /
                            static_cast<double>(uni)});
    }
  }
  return report;
}

RegionPlot build_region_plot(const DmrTable &table,
                             const MethylationMatrix &cancer,
                             const MethylationMatrix &normal,
                             std::size_t index) {
  if (index < 1 || index > table.size())
    throw Error(ErrorCode::out_of_range,
                "DMR index " + std::to_string(index) + " outside 1.." +
                    std::to_string(table.size()));
  validate_pair(cancer, normal);
  const auto &record = table[index - 1];
  const auto rows = resolve_rows(record, cancer);

  RegionPlot plot;
  plot.chromosome = record.chromosome;
  plot.title = "DMR " + std::to_string(index) + ": chr" + record.chromosome +
               " " + record.start_cpg + " - " + record.end_cpg;
  plot.cpg_ids.assign(cancer.cpg_ids().begin() + static_cast<long>(rows.start),
                      cancer.cpg_ids().begin() + static_cast<long>(rows.end) + 1);
  plot.cancer = row_means(cancer, rows.start, rows.end);
  plot.normal = row_means(normal, rows.start, rows.end);
  return plot;
}

} // namespace mmcmc
