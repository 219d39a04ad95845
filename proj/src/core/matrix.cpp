#include "matrix.hpp"

#include "error.hpp"

#include <cmath>
#include <limits>
#include <unordered_set>

namespace mmcmc {

MethylationMatrix::MethylationMatrix(std::vector<std::string> cpg_ids,
                                     std::vector<std::string> chromosomes,
                                     std::vector<std::string> sample_names,
                                     std::vector<double> values)
    : cpg_ids_(std::move(cpg_ids)), chromosomes_(std::move(chromosomes)),
      sample_names_(std::move(sample_names)), values_(std::move(values)) {
  if (sample_names_.empty())
    throw Error(ErrorCode::validation, "matrix needs at least one sample");
  if (chromosomes_.size() != cpg_ids_.size())
    throw Error(ErrorCode::validation,
                "CpG ID and chromosome columns differ in length");
  if (values_.size() != cpg_ids_.size() * sample_names_.size())
    throw Error(ErrorCode::validation, "value grid has inconsistent shape");

  index_.reserve(cpg_ids_.size());
  for (std::size_t r = 0; r < cpg_ids_.size(); ++r) {
    if (!index_.emplace(cpg_ids_[r], r).second)
      throw Error(ErrorCode::duplicate_cpg,
                  "duplicate CpG ID '" + cpg_ids_[r] + "' at row " +
                      std::to_string(r + 1));
  }

  std::unordered_set<std::string_view> seen;
  for (std::size_t r = 0; r < chromosomes_.size(); ++r) {
    if (!runs_.empty() && runs_.back().chromosome == chromosomes_[r]) {
      runs_.back().end_row = r;
      continue;
    }
    if (!seen.insert(chromosomes_[r]).second)
      throw Error(ErrorCode::validation,
                  "chromosome '" + chromosomes_[r] +
                      "' is not contiguous (reappears at row " +
                      std::to_string(r + 1) + ")");
    runs_.push_back({chromosomes_[r], r, r});
  }
}

std::optional<std::size_t>
MethylationMatrix::find_row(std::string_view cpg_id) const {
  const auto it = index_.find(std::string(cpg_id));
  if (it == index_.end())
    return std::nullopt;
  return it->second;
}

void validate_pair(const MethylationMatrix &cancer,
                   const MethylationMatrix &normal) {
  const std::size_t common = std::min(cancer.n_rows(), normal.n_rows());
  for (std::size_t r = 0; r < common; ++r) {
    if (cancer.cpg_ids()[r] != normal.cpg_ids()[r] ||
        cancer.chromosomes()[r] != normal.chromosomes()[r])
      throw MismatchError(r + 1, "CpG mismatch at row " +
                                     std::to_string(r + 1) + ": cancer has " +
                                     cancer.cpg_ids()[r] + " (chr " +
                                     cancer.chromosomes()[r] +
                                     "), normal has " + normal.cpg_ids()[r] +
                                     " (chr " + normal.chromosomes()[r] + ")");
  }
  if (cancer.n_rows() != normal.n_rows())
    throw MismatchError(common + 1,
                        "CpG mismatch at row " + std::to_string(common + 1) +
                            ": cancer has " + std::to_string(cancer.n_rows()) +
                            " rows, normal has " +
                            std::to_string(normal.n_rows()));
}

double beta_to_m(double beta, double c) {
  if (!(beta >= 0.0 && beta <= 1.0))
    throw Error(ErrorCode::domain,
                "beta-value must lie in [0, 1], got " + std::to_string(beta));
  if (!(c > 0.0))
    throw Error(ErrorCode::domain, "offset c must be positive");
  return std::log((beta + c) / (1.0 - beta + c));
}

std::vector<double> region_means(const MethylationMatrix &matrix,
                                 std::size_t start_row, std::size_t end_row) {
  if (start_row > end_row || end_row >= matrix.n_rows())
    throw Error(ErrorCode::out_of_range, "segment outside matrix rows");
  const std::size_t ns = matrix.n_samples();
  std::vector<double> sums(ns, 0.0);
  std::vector<std::size_t> counts(ns, 0);
  for (std::size_t r = start_row; r <= end_row; ++r) {
    const auto row = matrix.row(r);
    for (std::size_t j = 0; j < ns; ++j) {
      if (std::isfinite(row[j])) {
        sums[j] += row[j];
        ++counts[j];
      }
    }
  }
  std::vector<double> out(ns, std::numeric_limits<double>::quiet_NaN());
  for (std::size_t j = 0; j < ns; ++j)
    if (counts[j] > 0)
      out[j] = sums[j] / static_cast<double>(counts[j]);
  return out;
}

std::vector<double> row_means(const MethylationMatrix &matrix,
                              std::size_t start_row, std::size_t end_row) {
  if (start_row > end_row || end_row >= matrix.n_rows())
    throw Error(ErrorCode::out_of_range, "row range outside matrix");
  std::vector<double> out;
  out.reserve(end_row - start_row + 1);
  for (std::size_t r = start_row; r <= end_row; ++r) {
    double sum = 0.0;
    std::size_t n = 0;
    for (double v : matrix.row(r)) {
      if (std::isfinite(v)) {
        sum += v;
        ++n;
      }
    }
    out.push_back(n > 0 ? sum / static_cast<double>(n)
                        : std::numeric_limits<double>::quiet_NaN());
  }
  return out;
}

} // namespace mmcmc
