#pragma once

// Synthetic benchmark generation: spike-in DMRs on a noisy baseline, and
// scoring of detection output against the injected truth.

#include "dmr_table.hpp"
#include "matrix.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace mmcmc {

struct SimConfig {
  double noise_sd = 0.5; // 0 gives the noiseless limit
  std::size_t n_dmrs = 10;
  std::vector<double> shifts{1.0, 2.0};
  std::vector<std::size_t> lengths{10, 20, 50};
  std::uint64_t seed = 0;
};

struct TruthInterval {
  std::size_t start_row = 0;
  std::size_t end_row = 0; // inclusive
  double shift = 0.0;

  std::size_t size() const { return end_row - start_row + 1; }
  bool operator==(const TruthInterval &) const = default;
};

using GroundTruth = std::vector<TruthInterval>; // disjoint, genomic order

struct SimulatedData {
  MethylationMatrix cancer;
  MethylationMatrix normal;
  GroundTruth truth;
};

void validate(const SimConfig &config);

// Both groups are the baseline plus independent N(0, noise_sd^2) noise per
// cell; each injected region adds its shift to every cancer cell inside it.
SimulatedData simulate_dataset(const MethylationMatrix &baseline,
                               const SimConfig &config);

struct ChromosomeSize {
  std::string chromosome;
  std::size_t n_cpgs = 0;
};

// Background matrix for simulations when no real data is at hand:
// methylated/unmethylated blocks of CpGs with per-site and per-sample
// variation, IDs cg00000000, cg00000001, ...
MethylationMatrix synthetic_baseline(const std::vector<ChromosomeSize> &layout,
                                     std::size_t n_samples, std::uint64_t seed);

struct EvaluationMetrics {
  std::size_t n_truth = 0;
  std::size_t n_detected = 0;
  std::size_t n_truth_found = 0;      // truth intervals hit by >= 1 region
  std::size_t n_false_discoveries = 0; // regions hitting no truth interval
  double sensitivity = 0.0;
  double fdr = 0.0;
  double cpg_precision = 0.0;
  double cpg_recall = 0.0;
};

// Overlap means at least one shared CpG row.
EvaluationMetrics evaluate(const DmrTable &detected, const GroundTruth &truth,
                           const MethylationMatrix &index);
EvaluationMetrics evaluate(const std::vector<RowRange> &detected,
                           const GroundTruth &truth);

inline constexpr const char *kTruthHeader =
    "Chromosome,Start_CpG,End_CpG,Start_Row,End_Row,CpG_Count,Shift";

void write_truth(const GroundTruth &truth, const MethylationMatrix &index,
                 std::ostream &out);
void write_truth(const GroundTruth &truth, const MethylationMatrix &index,
                 const std::filesystem::path &path);
GroundTruth read_truth(std::istream &in, const std::string &source = "<stream>");
GroundTruth load_truth(const std::filesystem::path &path);

} // namespace mmcmc
