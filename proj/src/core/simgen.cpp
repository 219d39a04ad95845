#include "simgen.hpp"

#include "csv.hpp"
#include "error.hpp"
#include "seed.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <random>

namespace mmcmc {

namespace {

constexpr int kPlacementAttempts = 10000;

std::mt19937_64 stream(std::uint64_t seed, std::string_view name) {
  return std::mt19937_64(SeedHasher(seed).add(name).finish());
}

bool overlaps(const TruthInterval &a, std::size_t start, std::size_t end) {
  return start <= a.end_row && a.start_row <= end;
}

MethylationMatrix add_noise(const MethylationMatrix &baseline, double sd,
                            std::mt19937_64 &rng) {
  std::vector<double> values(baseline.values().begin(),
                             baseline.values().end());
  if (sd > 0.0) {
    std::normal_distribution<double> noise(0.0, sd);
    for (auto &v : values)
      v += noise(rng);
  }
  return MethylationMatrix(baseline.cpg_ids(), baseline.chromosomes(),
                           baseline.sample_names(), std::move(values));
}

} // namespace

void validate(const SimConfig &config) {
  if (!(config.noise_sd >= 0.0) || !std::isfinite(config.noise_sd))
    throw Error(ErrorCode::invalid_argument, "noise_sd must be >= 0");
  if (config.n_dmrs > 0 && (config.shifts.empty() || config.lengths.empty()))
    throw Error(ErrorCode::invalid_argument,
                "shifts and lengths must be non-empty");
  for (double s : config.shifts)
    if (!std::isfinite(s))
      throw Error(ErrorCode::invalid_argument, "shifts must be finite");
  for (std::size_t l : config.lengths)
    if (l == 0)
      throw Error(ErrorCode::invalid_argument, "lengths must be positive");
}

SimulatedData simulate_dataset(const MethylationMatrix &baseline,
                               const SimConfig &config) {
  validate(config);
  const std::size_t n_rows = baseline.n_rows();

  auto place_rng = stream(config.seed, "placement");
  std::uniform_int_distribution<std::size_t> pick_length(
      0, config.lengths.empty() ? 0 : config.lengths.size() - 1);
  std::uniform_int_distribution<std::size_t> pick_shift(
      0, config.shifts.empty() ? 0 : config.shifts.size() - 1);

  std::vector<std::size_t> lengths;
  std::vector<double> shifts;
  for (std::size_t i = 0; i < config.n_dmrs; ++i) {
    lengths.push_back(config.lengths[pick_length(place_rng)]);
    shifts.push_back(config.shifts[pick_shift(place_rng)]);
  }
  const std::size_t total =
      std::accumulate(lengths.begin(), lengths.end(), std::size_t{0});
  if (total > n_rows)
    throw Error(ErrorCode::infeasible,
                "injected regions need " + std::to_string(total) +
                    " CpGs but the baseline has " + std::to_string(n_rows));

  GroundTruth truth;
  for (std::size_t i = 0; i < lengths.size(); ++i) {
    const std::size_t len = lengths[i];
    std::uniform_int_distribution<std::size_t> pick_start(0, n_rows - len);
    bool placed = false;
    for (int attempt = 0; attempt < kPlacementAttempts && !placed; ++attempt) {
      const std::size_t start = pick_start(place_rng);
      const std::size_t end = start + len - 1;
      if (baseline.chromosomes()[start] != baseline.chromosomes()[end])
        continue;
      if (std::any_of(truth.begin(), truth.end(), [&](const auto &t) {
            return overlaps(t, start, end);
          }))
        continue;
      truth.push_back({start, end, shifts[i]});
      placed = true;
    }
    if (!placed)
      throw Error(ErrorCode::infeasible,
                  "could not place injected region " + std::to_string(i + 1) +
                      " of length " + std::to_string(len) +
                      " without overlap");
  }
  std::sort(truth.begin(), truth.end(), [](const auto &a, const auto &b) {
    return a.start_row < b.start_row;
  });

  auto cancer_rng = stream(config.seed, "cancer-noise");
  auto normal_rng = stream(config.seed, "normal-noise");
  SimulatedData out{add_noise(baseline, config.noise_sd, cancer_rng),
                    add_noise(baseline, config.noise_sd, normal_rng), truth};

  std::vector<double> cancer(out.cancer.values().begin(),
                             out.cancer.values().end());
  const std::size_t ns = baseline.n_samples();
  for (const auto &t : truth)
    for (std::size_t r = t.start_row; r <= t.end_row; ++r)
      for (std::size_t j = 0; j < ns; ++j)
        cancer[r * ns + j] += t.shift;
  out.cancer = MethylationMatrix(baseline.cpg_ids(), baseline.chromosomes(),
                                 baseline.sample_names(), std::move(cancer));
  return out;
}

MethylationMatrix synthetic_baseline(const std::vector<ChromosomeSize> &layout,
                                     std::size_t n_samples,
                                     std::uint64_t seed) {
  if (n_samples == 0)
    throw Error(ErrorCode::invalid_argument, "n_samples must be >= 1");
  std::mt19937_64 rng(SeedHasher(seed).add("baseline").finish());
  std::normal_distribution<double> unit(0.0, 1.0);
  std::geometric_distribution<std::size_t> block_length(1.0 / 25.0);
  std::bernoulli_distribution methylated(0.55);

  std::vector<double> sample_offset(n_samples);
  for (auto &o : sample_offset)
    o = 0.1 * unit(rng);

  std::vector<std::string> ids, chroms, samples;
  std::vector<double> values;
  for (std::size_t j = 0; j < n_samples; ++j)
    samples.push_back("M_sample_" + std::to_string(j + 1));

  std::size_t global = 0;
  for (const auto &chrom : layout) {
    std::size_t left_in_block = 0;
    double block_mean = 0.0;
    for (std::size_t r = 0; r < chrom.n_cpgs; ++r, ++global) {
      if (left_in_block == 0) {
        left_in_block = block_length(rng) + 1;
        block_mean = methylated(rng) ? 2.0 + 0.5 * unit(rng)
                                     : -2.5 + 0.5 * unit(rng);
      }
      --left_in_block;
      const double site_mean = block_mean + 0.4 * unit(rng);
      for (std::size_t j = 0; j < n_samples; ++j)
        values.push_back(site_mean + sample_offset[j] + 0.3 * unit(rng));
      char id[32];
      std::snprintf(id, sizeof(id), "cg%08zu", global);
      ids.emplace_back(id);
      chroms.push_back(chrom.chromosome);
    }
  }
  return MethylationMatrix(std::move(ids), std::move(chroms),
                           std::move(samples), std::move(values));
}

EvaluationMetrics evaluate(const std::vector<RowRange> &detected,
                           const GroundTruth &truth) {
  EvaluationMetrics m;
  m.n_truth = truth.size();
  m.n_detected = detected.size();

  for (const auto &t : truth)
    if (std::any_of(detected.begin(), detected.end(), [&](const RowRange &d) {
          return overlaps(t, d.start, d.end);
        }))
      ++m.n_truth_found;
  for (const auto &d : detected)
    if (std::none_of(truth.begin(), truth.end(), [&](const TruthInterval &t) {
          return overlaps(t, d.start, d.end);
        }))
      ++m.n_false_discoveries;

  m.sensitivity = m.n_truth == 0 ? 0.0
                                 : static_cast<double>(m.n_truth_found) /
                                       static_cast<double>(m.n_truth);
  m.fdr = static_cast<double>(m.n_false_discoveries) /
          static_cast<double>(std::max<std::size_t>(1, m.n_detected));

  std::size_t extent = 0;
  for (const auto &d : detected)
    extent = std::max(extent, d.end + 1);
  for (const auto &t : truth)
    extent = std::max(extent, t.end_row + 1);
  std::vector<char> in_detected(extent, 0), in_truth(extent, 0);
  for (const auto &d : detected)
    std::fill(in_detected.begin() + static_cast<long>(d.start),
              in_detected.begin() + static_cast<long>(d.end) + 1, 1);
  for (const auto &t : truth)
    std::fill(in_truth.begin() + static_cast<long>(t.start_row),
              in_truth.begin() + static_cast<long>(t.end_row) + 1, 1);
  std::size_t n_det = 0, n_true = 0, n_both = 0;
  for (std::size_t r = 0; r < extent; ++r) {
    n_det += in_detected[r];
    n_true += in_truth[r];
    n_both += in_detected[r] && in_truth[r];
  }
  m.cpg_precision =
      n_det == 0 ? 0.0 : static_cast<double>(n_both) / static_cast<double>(n_det);
  m.cpg_recall = n_true == 0
                     ? 0.0
                     : static_cast<double>(n_both) / static_cast<double>(n_true);
  return m;
}

EvaluationMetrics evaluate(const DmrTable &detected, const GroundTruth &truth,
                           const MethylationMatrix &index) {
  for (const auto &t : truth)
    if (t.end_row >= index.n_rows())
      throw Error(ErrorCode::out_of_range,
                  "truth interval ends at row " + std::to_string(t.end_row) +
                      " beyond the index");
  return evaluate(resolve_rows(detected, index), truth);
}

void write_truth(const GroundTruth &truth, const MethylationMatrix &index,
                 std::ostream &out) {
  out << kTruthHeader << '\n';
  for (const auto &t : truth) {
    if (t.end_row >= index.n_rows())
      throw Error(ErrorCode::out_of_range, "truth interval beyond the index");
    out << index.chromosomes()[t.start_row] << ','
        << index.cpg_ids()[t.start_row] << ',' << index.cpg_ids()[t.end_row]
        << ',' << t.start_row << ',' << t.end_row << ',' << t.size() << ','
        << format_double(t.shift) << '\n';
  }
}

void write_truth(const GroundTruth &truth, const MethylationMatrix &index,
                 const std::filesystem::path &path) {
  std::ofstream out(path);
  if (!out)
    throw Error(ErrorCode::io, "cannot write " + path.string());
  write_truth(truth, index, out);
}

GroundTruth read_truth(std::istream &in, const std::string &source) {
  std::string line;
  if (!std::getline(in, line) ||
      split_csv_line(line) != split_csv_line(kTruthHeader))
    throw Error(ErrorCode::parse,
                source + ":1: expected header " + kTruthHeader);
  GroundTruth truth;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r\n") == std::string::npos)
      continue;
    const auto cells = split_csv_line(line);
    const std::string where = source + ":" + std::to_string(line_no);
    if (cells.size() != 7)
      throw Error(ErrorCode::parse, where + ": expected 7 columns");
    TruthInterval t;
    for (auto [cell, dst] : {std::pair{&cells[3], &t.start_row},
                             std::pair{&cells[4], &t.end_row}}) {
      const auto [ptr, ec] =
          std::from_chars(cell->data(), cell->data() + cell->size(), *dst);
      if (ec != std::errc() || ptr != cell->data() + cell->size())
        throw Error(ErrorCode::parse, where + ": bad row index '" + *cell + "'");
    }
    if (t.start_row > t.end_row)
      throw Error(ErrorCode::parse, where + ": interval ends before it starts");
    std::optional<double> shift;
    try {
      shift = parse_cell(cells[6]);
    } catch (const Error &e) {
      throw Error(ErrorCode::parse, where + ": " + e.what());
    }
    t.shift = shift.value_or(0.0);
    truth.push_back(t);
  }
  return truth;
}

GroundTruth load_truth(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in)
    throw Error(ErrorCode::io, "cannot open " + path.string());
  return read_truth(in, path.string());
}

} // namespace mmcmc
