#include "engine.hpp"

#include "error.hpp"
#include "seed.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <thread>

namespace mmcmc {

namespace {

double log_sum_density(std::span<const double> values, const AsgnParams &p) {
  double peak = -std::numeric_limits<double>::infinity();
  std::vector<double> logs;
  logs.reserve(values.size());
  for (double y : values) {
    if (!std::isfinite(y))
      continue;
    logs.push_back(asgn_log_density(y, p));
    peak = std::max(peak, logs.back());
  }
  if (logs.empty() || !std::isfinite(peak))
    return -std::numeric_limits<double>::infinity();
  double acc = 0.0;
  for (double l : logs)
    acc += std::exp(l - peak);
  return peak + std::log(acc);
}

struct WorkItem {
  Segment segment;
  std::vector<std::uint32_t> path;
  std::optional<PosteriorSummary> parent_cancer;
  std::optional<PosteriorSummary> parent_normal;
};

struct Outcome {
  bool skipped = false;
  double bayes_factor = 0.0;
  PosteriorSummary fit_cancer;
  PosteriorSummary fit_normal;
};

class SegmentEvaluator {
public:
  SegmentEvaluator(const MethylationMatrix &cancer,
                   const MethylationMatrix &normal, const DetectConfig &config)
      : cancer_(cancer), normal_(normal), config_(config) {}

  Outcome operator()(const WorkItem &item) const {
    const auto &seg = item.segment;
    const auto yc =
        finite_values(region_means(cancer_, seg.start_row, seg.end_row));
    const auto yn =
        finite_values(region_means(normal_, seg.start_row, seg.end_row));
    Outcome out;
    if (yc.size() < 3 || yn.size() < 3) {
      out.skipped = true;
      return out;
    }
    out.fit_cancer = fit(yc, item, item.parent_cancer, config_.priors_cancer,
                         "cancer");
    out.fit_normal = fit(yn, item, item.parent_normal, config_.priors_normal,
                         "normal");
    out.bayes_factor = bayes_factor(yc, yn, out.fit_cancer, out.fit_normal);
    return out;
  }

private:
  PosteriorSummary fit(const std::vector<double> &data, const WorkItem &item,
                       const std::optional<PosteriorSummary> &parent,
                       const std::optional<UserPrior> &user,
                       std::string_view group) const {
    AsgnPriors priors;
    if (parent)
      priors = child_priors(*parent);
    else if (user)
      priors = user->to_priors();
    else
      priors = default_priors(data);
    McmcConfig mcmc = config_.mcmc;
    mcmc.seed = segment_seed(config_.master_seed, item.segment.chromosome,
                             item.segment.stage, item.path,
                             config_.shared_group_seed ? "" : group);
    return asgn_fit(data, priors, mcmc);
  }

  const MethylationMatrix &cancer_;
  const MethylationMatrix &normal_;
  const DetectConfig &config_;
};

// Evaluates every item, writing results by index so the output does not
// depend on how work is scheduled across threads.
std::vector<Outcome> evaluate_all(const std::vector<WorkItem> &items,
                                  const SegmentEvaluator &evaluate,
                                  unsigned threads) {
  std::vector<Outcome> outcomes(items.size());
  std::vector<std::exception_ptr> errors(items.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < items.size(); i = next++) {
      try {
        outcomes[i] = evaluate(items[i]);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const auto n_threads = static_cast<unsigned>(
      std::min<std::size_t>(std::max(threads, 1u), items.size()));
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(n_threads);
    for (unsigned t = 0; t < n_threads; ++t)
      pool.emplace_back(worker);
  }
  for (auto &e : errors)
    if (e)
      std::rethrow_exception(e);
  return outcomes;
}

} // namespace

std::vector<Segment> split_segment(const Segment &segment,
                                   std::size_t num_splits) {
  if (num_splits < 2)
    throw Error(ErrorCode::invalid_argument, "num_splits must be >= 2");
  if (segment.start_row > segment.end_row)
    throw Error(ErrorCode::invalid_argument, "segment ends before it starts");
  const std::size_t n = segment.cpg_count();
  const std::size_t pieces = std::min(num_splits, n);
  const std::size_t base = n / pieces;
  const std::size_t extra = n % pieces;

  std::vector<Segment> out;
  out.reserve(pieces);
  std::size_t start = segment.start_row;
  for (std::size_t i = 0; i < pieces; ++i) {
    const std::size_t len = base + (i < extra ? 1 : 0);
    out.push_back({segment.chromosome, start, start + len - 1,
                   segment.stage + 1});
    start += len;
  }
  return out;
}

double log_bayes_factor(std::span<const double> cancer_means,
                        std::span<const double> normal_means,
                        const AsgnParams &cancer, const AsgnParams &normal) {
  const double num = log_sum_density(cancer_means, cancer);
  const double den = log_sum_density(normal_means, normal);
  if (!std::isfinite(num) || !std::isfinite(den))
    throw Error(ErrorCode::degenerate,
                "Bayes factor undefined: a group's density sum is zero or "
                "not finite");
  return num - den;
}

double bayes_factor(std::span<const double> cancer_means,
                    std::span<const double> normal_means,
                    const PosteriorSummary &fit_cancer,
                    const PosteriorSummary &fit_normal) {
  return std::exp(log_bayes_factor(cancer_means, normal_means, fit_cancer.mean,
                                   fit_normal.mean));
}

AsgnPriors UserPrior::to_priors() const {
  AsgnPriors p;
  p.mu_a = alpha;
  p.sigma2_a = 1.0;
  p.mu_n = mu;
  p.sigma2_n = 1.0;
  p.a_d = sigma2;
  p.b_d = 1.0;
  return p;
}

void validate(const DetectConfig &config) {
  if (config.stage < 1)
    throw Error(ErrorCode::invalid_argument, "stage must be >= 1");
  if (config.max_stages < config.stage)
    throw Error(ErrorCode::invalid_argument, "max_stages must be >= stage");
  if (config.num_splits < 2)
    throw Error(ErrorCode::invalid_argument, "num_splits must be >= 2");
  if (config.bf_thresholds.size() <
      static_cast<std::size_t>(config.max_stages))
    throw Error(ErrorCode::invalid_argument,
                "bf_thresholds has " +
                    std::to_string(config.bf_thresholds.size()) +
                    " entries but max_stages is " +
                    std::to_string(config.max_stages));
  for (double t : config.bf_thresholds)
    if (std::isnan(t))
      throw Error(ErrorCode::invalid_argument, "bf_thresholds contain NaN");
  validate(config.mcmc);
  if (config.priors_cancer)
    validate(config.priors_cancer->to_priors());
  if (config.priors_normal)
    validate(config.priors_normal->to_priors());
}

std::uint64_t segment_seed(std::uint64_t master_seed,
                           const std::string &chromosome, int stage,
                           std::span<const std::uint32_t> path,
                           std::string_view group) {
  return SeedHasher(master_seed)
      .add(chromosome)
      .add(static_cast<std::uint64_t>(stage))
      .add(path)
      .add(group)
      .finish();
}

DetectResult detect(const MethylationMatrix &cancer,
                    const MethylationMatrix &normal,
                    const DetectConfig &config) {
  validate_pair(cancer, normal);
  validate(config);

  std::vector<WorkItem> live;
  for (const auto &run : cancer.chromosome_runs())
    live.push_back(
        {{run.chromosome, run.start_row, run.end_row, config.stage}, {}, {}, {}});

  const SegmentEvaluator evaluate(cancer, normal, config);
  DetectResult result;
  std::vector<std::pair<std::size_t, DmrRecord>> records;

  for (int stage = config.stage; !live.empty(); ++stage) {
    const auto outcomes = evaluate_all(live, evaluate, config.threads);
    const double threshold =
        config.bf_thresholds[static_cast<std::size_t>(stage - 1)];
    StageProgress progress{stage, live.size(), 0, 0, 0};
    std::vector<WorkItem> next;

    for (std::size_t i = 0; i < live.size(); ++i) {
      auto &item = live[i];
      const auto &out = outcomes[i];
      SegmentTrace trace{item.segment, item.path, std::nullopt,
                         SegmentDecision::skipped};
      if (out.skipped) {
        ++progress.n_skipped;
        result.trace.push_back(std::move(trace));
        continue;
      }
      trace.bayes_factor = out.bayes_factor;
      if (!(out.bayes_factor > threshold)) {
        trace.decision = SegmentDecision::retained;
      } else if (stage < config.max_stages && item.segment.cpg_count() >= 2) {
        trace.decision = SegmentDecision::split;
        ++progress.n_split;
        const auto children = split_segment(item.segment, config.num_splits);
        for (std::uint32_t c = 0; c < children.size(); ++c) {
          auto path = item.path;
          path.push_back(c);
          next.push_back({children[c], std::move(path), out.fit_cancer,
                          out.fit_normal});
        }
      } else {
        trace.decision = SegmentDecision::emitted;
        ++progress.n_emitted;
        const auto &seg = item.segment;
        records.emplace_back(
            seg.start_row,
            DmrRecord{seg.chromosome, cancer.cpg_ids()[seg.start_row],
                      cancer.cpg_ids()[seg.end_row], seg.cpg_count(),
                      out.bayes_factor, stage});
      }
      result.trace.push_back(std::move(trace));
    }
    if (config.progress)
      config.progress(progress);
    live = std::move(next);
  }

  std::sort(records.begin(), records.end(),
            [](const auto &a, const auto &b) { return a.first < b.first; });
  result.table.reserve(records.size());
  for (auto &r : records)
    result.table.push_back(std::move(r.second));
  return result;
}

} // namespace mmcmc
