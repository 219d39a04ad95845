#pragma once

#include "matrix.hpp"

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace mmcmc {

// Splits one comma-delimited line. Surrounding whitespace and a single layer
// of double quotes are stripped from each cell.
std::vector<std::string> split_csv_line(std::string_view line);

// Parses a numeric cell. Empty cells and "NA" yield std::nullopt; anything
// else that is not a finite number is an error.
std::optional<double> parse_cell(std::string_view cell);

std::string format_double(double value);

struct LoadOptions {
  bool beta_values = false; // convert with beta_to_m on load
  double beta_offset = 1e-6;
};

MethylationMatrix load_methylation_csv(const std::filesystem::path &path,
                                       const LoadOptions &options = {});
MethylationMatrix read_methylation_csv(std::istream &in,
                                       const LoadOptions &options = {},
                                       const std::string &source = "<stream>");

void write_methylation_csv(const MethylationMatrix &matrix,
                           const std::filesystem::path &path);
void write_methylation_csv(const MethylationMatrix &matrix, std::ostream &out);

// One numeric value per line, optional non-numeric header line. Missing
// tokens are kept as NaN.
std::vector<double> read_value_column(const std::filesystem::path &path);

} // namespace mmcmc
