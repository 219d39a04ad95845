#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace mmcmc {

class MethylationMatrix;

struct DmrRecord {
  std::string chromosome;
  std::string start_cpg;
  std::string end_cpg;
  std::size_t cpg_count = 0;
  double decision_value = 0.0; // Bayes factor
  int stage = 1;

  bool operator==(const DmrRecord &) const = default;
};

using DmrTable = std::vector<DmrRecord>;

// Header written and expected by the table CSV functions.
inline constexpr const char *kDmrTableHeader =
    "Chromosome,Start_CpG,End_CpG,CpG_Count,Decision_Value,Stage";

void write_dmr_table(const DmrTable &table, std::ostream &out);
void write_dmr_table(const DmrTable &table, const std::filesystem::path &path);

DmrTable read_dmr_table(std::istream &in,
                        const std::string &source = "<stream>");
DmrTable load_dmr_table(const std::filesystem::path &path);

// Inclusive row range of a record within `index`.
struct RowRange {
  std::size_t start = 0;
  std::size_t end = 0;

  std::size_t size() const { return end - start + 1; }
  bool operator==(const RowRange &) const = default;
};

RowRange resolve_rows(const DmrRecord &record, const MethylationMatrix &index);
std::vector<RowRange> resolve_rows(const DmrTable &table,
                                   const MethylationMatrix &index);

} // namespace mmcmc
