#include "csv.hpp"

#include "error.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace mmcmc {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos)
    return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::string location(const std::string &source, std::size_t line,
                     std::size_t column) {
  return source + ":" + std::to_string(line) + ": column " +
         std::to_string(column);
}

} // namespace

std::vector<std::string> split_csv_line(std::string_view line) {
  std::vector<std::string> cells;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    auto cell = trim(line.substr(
        start, comma == std::string_view::npos ? line.npos : comma - start));
    if (cell.size() >= 2 && cell.front() == '"' && cell.back() == '"')
      cell = cell.substr(1, cell.size() - 2);
    cells.emplace_back(cell);
    if (comma == std::string_view::npos)
      break;
    start = comma + 1;
  }
  return cells;
}

std::optional<double> parse_cell(std::string_view cell) {
  cell = trim(cell);
  if (cell.empty() || cell == "NA")
    return std::nullopt;
  if (cell.front() == '+')
    cell.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] =
      std::from_chars(cell.data(), cell.data() + cell.size(), value);
  if (ec != std::errc() || ptr != cell.data() + cell.size() ||
      !std::isfinite(value))
    throw Error(ErrorCode::parse,
                "non-numeric cell '" + std::string(cell) + "'");
  return value;
}

std::string format_double(double value) {
  if (!std::isfinite(value))
    return "NA";
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, ptr);
}

MethylationMatrix read_methylation_csv(std::istream &in,
                                       const LoadOptions &options,
                                       const std::string &source) {
  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line))
    throw Error(ErrorCode::parse, source + ": empty file");
  ++line_no;
  const auto header = split_csv_line(line);
  if (header.size() < 3)
    throw Error(ErrorCode::parse,
                source + ":1: expected CpG_ID, Chromosome and at least one "
                         "sample column");
  if (header[0] != "CpG_ID" && header[0] != "CpG_site")
    throw Error(ErrorCode::parse,
                location(source, 1, 1) + ": expected 'CpG_ID', found '" +
                    header[0] + "'");
  if (header[1] != "Chromosome")
    throw Error(ErrorCode::parse,
                location(source, 1, 2) + ": expected 'Chromosome', found '" +
                    header[1] + "'");

  std::vector<std::string> samples(header.begin() + 2, header.end());
  std::vector<std::string> ids;
  std::vector<std::string> chroms;
  std::vector<double> values;
  const double missing = std::numeric_limits<double>::quiet_NaN();

  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty())
      continue;
    auto cells = split_csv_line(line);
    if (cells.size() != header.size())
      throw Error(ErrorCode::parse,
                  source + ":" + std::to_string(line_no) + ": expected " +
                      std::to_string(header.size()) + " columns, found " +
                      std::to_string(cells.size()));
    if (cells[0].empty())
      throw Error(ErrorCode::parse,
                  location(source, line_no, 1) + ": empty CpG ID");
    for (std::size_t c = 2; c < cells.size(); ++c) {
      std::optional<double> v;
      try {
        v = parse_cell(cells[c]);
        if (v && options.beta_values)
          v = beta_to_m(*v, options.beta_offset);
      } catch (const Error &e) {
        throw Error(e.code(),
                    location(source, line_no, c + 1) + ": " + e.what());
      }
      values.push_back(v.value_or(missing));
    }
    ids.push_back(std::move(cells[0]));
    chroms.push_back(std::move(cells[1]));
  }
  return MethylationMatrix(std::move(ids), std::move(chroms),
                           std::move(samples), std::move(values));
}

MethylationMatrix load_methylation_csv(const std::filesystem::path &path,
                                       const LoadOptions &options) {
  std::ifstream in(path);
  if (!in)
    throw Error(ErrorCode::io, "cannot open " + path.string());
  return read_methylation_csv(in, options, path.string());
}

void write_methylation_csv(const MethylationMatrix &matrix, std::ostream &out) {
  out << "CpG_ID,Chromosome";
  for (const auto &s : matrix.sample_names())
    out << ',' << s;
  out << '\n';
  for (std::size_t r = 0; r < matrix.n_rows(); ++r) {
    out << matrix.cpg_ids()[r] << ',' << matrix.chromosomes()[r];
    for (double v : matrix.row(r))
      out << ',' << format_double(v);
    out << '\n';
  }
}

void write_methylation_csv(const MethylationMatrix &matrix,
                           const std::filesystem::path &path) {
  std::ofstream out(path);
  if (!out)
    throw Error(ErrorCode::io, "cannot write " + path.string());
  write_methylation_csv(matrix, out);
  if (!out)
    throw Error(ErrorCode::io, "write failed for " + path.string());
}

std::vector<double> read_value_column(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in)
    throw Error(ErrorCode::io, "cannot open " + path.string());
  std::vector<double> values;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty())
      continue;
    const auto cells = split_csv_line(line);
    try {
      values.push_back(
          parse_cell(cells[0]).value_or(std::numeric_limits<double>::quiet_NaN()));
    } catch (const Error &) {
      if (line_no == 1)
        continue; // header
      throw Error(ErrorCode::parse, location(path.string(), line_no, 1) +
                                        ": non-numeric cell '" + cells[0] +
                                        "'");
    }
  }
  return values;
}

} // namespace mmcmc
