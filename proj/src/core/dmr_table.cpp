#include "dmr_table.hpp"

#include "csv.hpp"
#include "error.hpp"
#include "matrix.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <ostream>

namespace mmcmc {

namespace {

template <class Int>
Int parse_int(const std::string &cell, const std::string &where) {
  Int value{};
  const auto [ptr, ec] =
      std::from_chars(cell.data(), cell.data() + cell.size(), value);
  if (ec != std::errc() || ptr != cell.data() + cell.size())
    throw Error(ErrorCode::parse, where + ": expected an integer, found '" +
                                      cell + "'");
  return value;
}

} // namespace

void write_dmr_table(const DmrTable &table, std::ostream &out) {
  out << kDmrTableHeader << '\n';
  char bv[64];
  for (const auto &r : table) {
    std::snprintf(bv, sizeof(bv), "%.6f", r.decision_value);
    out << r.chromosome << ',' << r.start_cpg << ',' << r.end_cpg << ','
        << r.cpg_count << ',' << bv << ',' << r.stage << '\n';
  }
}

void write_dmr_table(const DmrTable &table, const std::filesystem::path &path) {
  std::ofstream out(path);
  if (!out)
    throw Error(ErrorCode::io, "cannot write " + path.string());
  write_dmr_table(table, out);
  if (!out)
    throw Error(ErrorCode::io, "write failed for " + path.string());
}

DmrTable read_dmr_table(std::istream &in, const std::string &source) {
  std::string line;
  if (!std::getline(in, line))
    throw Error(ErrorCode::parse, source + ": empty file");
  const auto header = split_csv_line(line);
  const auto expected = split_csv_line(kDmrTableHeader);
  if (header != expected)
    throw Error(ErrorCode::parse,
                source + ":1: expected header " + kDmrTableHeader);

  DmrTable table;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r\n") == std::string::npos)
      continue;
    const auto cells = split_csv_line(line);
    const std::string where = source + ":" + std::to_string(line_no);
    if (cells.size() != expected.size())
      throw Error(ErrorCode::parse, where + ": expected 6 columns, found " +
                                        std::to_string(cells.size()));
    DmrRecord r;
    r.chromosome = cells[0];
    r.start_cpg = cells[1];
    r.end_cpg = cells[2];
    r.cpg_count = parse_int<std::size_t>(cells[3], where);
    std::optional<double> bf;
    try {
      bf = parse_cell(cells[4]);
    } catch (const Error &e) {
      throw Error(ErrorCode::parse, where + ": " + e.what());
    }
    if (!bf)
      throw Error(ErrorCode::parse, where + ": missing Decision_Value");
    r.decision_value = *bf;
    r.stage = parse_int<int>(cells[5], where);
    table.push_back(std::move(r));
  }
  return table;
}

DmrTable load_dmr_table(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in)
    throw Error(ErrorCode::io, "cannot open " + path.string());
  return read_dmr_table(in, path.string());
}

RowRange resolve_rows(const DmrRecord &record, const MethylationMatrix &index) {
  const auto start = index.find_row(record.start_cpg);
  if (!start)
    throw Error(ErrorCode::unknown_cpg,
                "CpG '" + record.start_cpg + "' not found in index");
  const auto end = index.find_row(record.end_cpg);
  if (!end)
    throw Error(ErrorCode::unknown_cpg,
                "CpG '" + record.end_cpg + "' not found in index");
  if (*start > *end)
    throw Error(ErrorCode::validation, "region " + record.start_cpg + ".." +
                                           record.end_cpg +
                                           " ends before it starts");
  return {*start, *end};
}

std::vector<RowRange> resolve_rows(const DmrTable &table,
                                   const MethylationMatrix &index) {
  std::vector<RowRange> out;
  out.reserve(table.size());
  for (const auto &r : table)
    out.push_back(resolve_rows(r, index));
  return out;
}

} // namespace mmcmc
