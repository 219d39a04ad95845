#pragma once

// Multistage region-splitting driver. Each chromosome starts as one segment;
// segments whose Bayes factor exceeds the stage threshold are split and
// re-evaluated at the next stage until the last stage, where they are
// reported as DMRs.

#include "asgn.hpp"
#include "dmr_table.hpp"
#include "matrix.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace mmcmc {

struct Segment {
  std::string chromosome;
  std::size_t start_row = 0;
  std::size_t end_row = 0; // inclusive
  int stage = 1;

  std::size_t cpg_count() const { return end_row - start_row + 1; }
  bool operator==(const Segment &) const = default;
};

// Splits into min(num_splits, cpg_count) contiguous pieces at stage + 1.
// Sizes differ by at most one; the larger pieces come first.
std::vector<Segment> split_segment(const Segment &segment,
                                   std::size_t num_splits);

// log of sum_j f(c_j | cancer) / sum_j f(n_j | normal), skipping non-finite
// entries.
double log_bayes_factor(std::span<const double> cancer_means,
                        std::span<const double> normal_means,
                        const AsgnParams &cancer, const AsgnParams &normal);

// Bayes factor evaluated at the posterior means of both fits.
double bayes_factor(std::span<const double> cancer_means,
                    std::span<const double> normal_means,
                    const PosteriorSummary &fit_cancer,
                    const PosteriorSummary &fit_normal);

// Short-form prior: alpha -> mu_a, mu -> mu_n, sigma2 -> a_d. The remaining
// hyperparameters are fixed at sigma2_a = sigma2_n = b_d = 1.
struct UserPrior {
  double alpha = 0.0;
  double mu = 0.0;
  double sigma2 = 1.0;

  AsgnPriors to_priors() const;
};

struct StageProgress {
  int stage = 0;
  std::size_t n_segments = 0;
  std::size_t n_split = 0;
  std::size_t n_emitted = 0;
  std::size_t n_skipped = 0;
};

struct DetectConfig {
  int stage = 1;
  int max_stages = 3;
  std::size_t num_splits = 50;
  std::vector<double> bf_thresholds{0.5, 0.8, 1.05}; // indexed by stage - 1
  McmcConfig mcmc{};                                 // seed is derived
  std::optional<UserPrior> priors_cancer;
  std::optional<UserPrior> priors_normal;
  std::uint64_t master_seed = 0;
  unsigned threads = 1;
  // Give both groups of a segment the same chain seed.
  bool shared_group_seed = false;
  std::function<void(const StageProgress &)> progress;
};

void validate(const DetectConfig &config);

enum class SegmentDecision { split, emitted, retained, skipped };

struct SegmentTrace {
  Segment segment;
  std::vector<std::uint32_t> path; // child indices from the chromosome root
  std::optional<double> bayes_factor;
  SegmentDecision decision = SegmentDecision::retained;
};

struct DetectResult {
  DmrTable table;                   // genomic order
  std::vector<SegmentTrace> trace;  // every evaluated segment, stage by stage
};

// Seed of the chain fitting `group` ("cancer" or "normal") on a segment.
std::uint64_t segment_seed(std::uint64_t master_seed,
                           const std::string &chromosome, int stage,
                           std::span<const std::uint32_t> path,
                           std::string_view group);

DetectResult detect(const MethylationMatrix &cancer,
                    const MethylationMatrix &normal,
                    const DetectConfig &config);

} // namespace mmcmc
