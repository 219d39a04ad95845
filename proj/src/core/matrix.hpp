#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace mmcmc {

// A contiguous block of rows sharing one chromosome label.
struct ChromosomeRun {
  std::string chromosome;
  std::size_t start_row = 0;
  std::size_t end_row = 0; // inclusive
};

// CpG-by-sample table of M-values. Missing cells are stored as NaN. Rows must
// carry unique CpG IDs and chromosomes must form contiguous runs.
class MethylationMatrix {
public:
  MethylationMatrix() = default;
  MethylationMatrix(std::vector<std::string> cpg_ids,
                    std::vector<std::string> chromosomes,
                    std::vector<std::string> sample_names,
                    std::vector<double> values);

  std::size_t n_rows() const { return cpg_ids_.size(); }
  std::size_t n_samples() const { return sample_names_.size(); }

  double value(std::size_t row, std::size_t sample) const {
    return values_[row * n_samples() + sample];
  }
  std::span<const double> row(std::size_t r) const {
    return {values_.data() + r * n_samples(), n_samples()};
  }
  std::span<const double> values() const { return values_; }

  const std::vector<std::string> &cpg_ids() const { return cpg_ids_; }
  const std::vector<std::string> &chromosomes() const { return chromosomes_; }
  const std::vector<std::string> &sample_names() const { return sample_names_; }

  const std::vector<ChromosomeRun> &chromosome_runs() const { return runs_; }

  std::optional<std::size_t> find_row(std::string_view cpg_id) const;

private:
  std::vector<std::string> cpg_ids_;
  std::vector<std::string> chromosomes_;
  std::vector<std::string> sample_names_;
  std::vector<double> values_;
  std::vector<ChromosomeRun> runs_;
  std::unordered_map<std::string, std::size_t> index_;
};

// Checks that both matrices list the same CpG IDs and chromosomes in the same
// order. Sample counts may differ. Throws MismatchError naming the first
// offending 1-based row.
void validate_pair(const MethylationMatrix &cancer,
                   const MethylationMatrix &normal);

// Natural-log M-value of a beta-value with offset c.
double beta_to_m(double beta, double c = 1e-6);

// Per-sample mean of the finite values in rows [start_row, end_row]; NaN for
// samples with no finite value in the range.
std::vector<double> region_means(const MethylationMatrix &matrix,
                                 std::size_t start_row, std::size_t end_row);

// Per-row mean across samples, missing excluded.
std::vector<double> row_means(const MethylationMatrix &matrix,
                              std::size_t start_row, std::size_t end_row);

} // namespace mmcmc
