// mmcmc command-line front end. Links only the C interface of libmmcmc.
//
// Exit status: 0 success, 1 data error, 2 usage error.

#include "mmcmc/mmcmc.h"

#include <CLI11.hpp>

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

struct Failure {
  int exit_code;
  std::string message;
};

[[noreturn]] void usage_error(const std::string &message) {
  throw Failure{2, message};
}

void check(mmcmc_status status) {
  if (status == MMCMC_OK)
    return;
  const int code = status == MMCMC_ERR_INVALID_ARGUMENT ? 2 : 1;
  throw Failure{code, mmcmc_last_error()};
}

template <class T, void (*Free)(T *)> struct Deleter {
  void operator()(T *p) const { Free(p); }
};
using Matrix = std::unique_ptr<mmcmc_matrix, Deleter<mmcmc_matrix, mmcmc_matrix_free>>;
using Table =
    std::unique_ptr<mmcmc_dmr_table, Deleter<mmcmc_dmr_table, mmcmc_dmr_table_free>>;
using Result = std::unique_ptr<mmcmc_detect_result,
                               Deleter<mmcmc_detect_result, mmcmc_detect_result_free>>;
using Truth = std::unique_ptr<mmcmc_truth, Deleter<mmcmc_truth, mmcmc_truth_free>>;
using Summary =
    std::unique_ptr<mmcmc_summary, Deleter<mmcmc_summary, mmcmc_summary_free>>;
using Overlaps = std::unique_ptr<mmcmc_overlap_report,
                                 Deleter<mmcmc_overlap_report, mmcmc_overlap_report_free>>;
using Text = std::unique_ptr<char, Deleter<char, mmcmc_string_free>>;

Matrix load_matrix(const std::string &path, bool beta) {
  mmcmc_matrix *m = nullptr;
  check(mmcmc_matrix_load_csv(path.c_str(), beta ? 1 : 0, &m));
  return Matrix(m);
}

Table load_table(const std::string &path) {
  mmcmc_dmr_table *t = nullptr;
  check(mmcmc_dmr_table_load_csv(path.c_str(), &t));
  return Table(t);
}

std::vector<std::string> split_list(const std::string &text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ','))
    out.push_back(item);
  return out;
}

// strtod rather than from_chars so that "inf" and "-inf" are accepted.
double parse_real(const std::string &text, const std::string &flag) {
  const char *begin = text.c_str();
  char *end = nullptr;
  errno = 0;
  const double v = std::strtod(begin, &end);
  if (end == begin || *end != '\0' || std::isnan(v))
    usage_error(flag + ": '" + text + "' is not a number");
  return v;
}

std::vector<double> parse_reals(const std::string &text,
                                const std::string &flag) {
  std::vector<double> out;
  for (const auto &item : split_list(text))
    out.push_back(parse_real(item, flag));
  if (out.empty())
    usage_error(flag + ": empty list");
  return out;
}

std::vector<size_t> parse_counts(const std::string &text,
                                 const std::string &flag) {
  std::vector<size_t> out;
  for (const auto &item : split_list(text)) {
    const double v = parse_real(item, flag);
    if (v < 1 || v != std::floor(v))
      usage_error(flag + ": '" + item + "' is not a positive integer");
    out.push_back(static_cast<size_t>(v));
  }
  if (out.empty())
    usage_error(flag + ": empty list");
  return out;
}

mmcmc_user_prior parse_prior(const std::string &text, const std::string &flag) {
  std::optional<double> alpha, mu, sigma2;
  for (const auto &item : split_list(text)) {
    const auto eq = item.find('=');
    if (eq == std::string::npos)
      usage_error(flag + ": expected key=value, got '" + item + "'");
    const std::string key = item.substr(0, eq);
    const double value = parse_real(item.substr(eq + 1), flag);
    if (key == "alpha")
      alpha = value;
    else if (key == "mu")
      mu = value;
    else if (key == "sigma2")
      sigma2 = value;
    else
      usage_error(flag + ": unknown key '" + key + "'");
  }
  if (!alpha || !mu || !sigma2)
    usage_error(flag + ": expected alpha=A,mu=M,sigma2=S");
  return {*alpha, *mu, *sigma2};
}

std::string fmt(const char *pattern, double v) {
  if (std::isnan(v))
    return "NA";
  char buf[64];
  std::snprintf(buf, sizeof(buf), pattern, v);
  return buf;
}

// Writes to --out when given, otherwise standard output.
void emit(const std::string &text, const std::string &out_path) {
  if (out_path.empty()) {
    std::cout << text << std::flush;
    return;
  }
  std::FILE *f = std::fopen(out_path.c_str(), "wb");
  if (f == nullptr)
    throw Failure{1, "cannot write " + out_path};
  const bool ok = std::fwrite(text.data(), 1, text.size(), f) == text.size();
  if (std::fclose(f) != 0 || !ok)
    throw Failure{1, "cannot write " + out_path};
}

struct McmcFlags {
  int64_t nburn = 5000;
  int64_t niter = 10000;
  int64_t thin = 1;
  uint64_t seed = 0;

  void add(CLI::App *app) {
    app->add_option("--nburn", nburn, "Burn-in iterations")->capture_default_str();
    app->add_option("--niter", niter, "Post-burn-in iterations")
        ->capture_default_str();
    app->add_option("--thin", thin, "Keep every thin-th draw")
        ->capture_default_str();
    app->add_option("--seed", seed, "Random seed")->capture_default_str();
  }
  mmcmc_mcmc_config config() const { return {nburn, niter, thin, seed}; }
};

// ---- detect ----------------------------------------------------------------

struct DetectFlags {
  std::string cancer, normal, out;
  int stage = 1;
  int max_stages = 3;
  size_t num_splits = 50;
  std::string thresholds = "0.5,0.8,1.05";
  McmcFlags mcmc;
  std::string prior_cancer, prior_normal;
  unsigned threads = 1;
  bool beta = false;
  bool quiet = false;
};

void progress(int stage, size_t n_segments, size_t n_split, size_t n_emitted,
              void *) {
  std::fprintf(stderr, "stage %d: %zu segments, %zu split, %zu emitted\n",
               stage, n_segments, n_split, n_emitted);
}

int run_detect(const DetectFlags &f) {
  mmcmc_detect_config cfg;
  mmcmc_detect_config_init(&cfg);
  const auto thresholds = parse_reals(f.thresholds, "--bf-thresholds");
  cfg.stage = f.stage;
  cfg.max_stages = f.max_stages;
  cfg.num_splits = f.num_splits;
  cfg.bf_thresholds = thresholds.data();
  cfg.n_bf_thresholds = thresholds.size();
  cfg.mcmc = f.mcmc.config();
  cfg.master_seed = f.mcmc.seed;
  cfg.threads = f.threads;
  if (!f.prior_cancer.empty()) {
    cfg.has_prior_cancer = 1;
    cfg.prior_cancer = parse_prior(f.prior_cancer, "--prior-cancer");
  }
  if (!f.prior_normal.empty()) {
    cfg.has_prior_normal = 1;
    cfg.prior_normal = parse_prior(f.prior_normal, "--prior-normal");
  }
  if (!f.quiet)
    cfg.progress = progress;

  const Matrix cancer = load_matrix(f.cancer, f.beta);
  const Matrix normal = load_matrix(f.normal, f.beta);
  size_t row = 0;
  check(mmcmc_validate_pair(cancer.get(), normal.get(), &row));

  mmcmc_detect_result *raw = nullptr;
  check(mmcmc_detect(cancer.get(), normal.get(), &cfg, &raw));
  const Result result(raw);
  const mmcmc_dmr_table *table = mmcmc_detect_result_table(result.get());
  check(mmcmc_dmr_table_write_csv(table, f.out.c_str()));
  if (!f.quiet)
    std::fprintf(stderr, "%zu DMRs written to %s\n",
                 mmcmc_dmr_table_size(table), f.out.c_str());
  return 0;
}

// ---- fit -------------------------------------------------------------------

struct FitFlags {
  std::string data, out, prior;
  McmcFlags mcmc;
};

int run_fit(const FitFlags &f) {
  double *values = nullptr;
  size_t n = 0;
  check(mmcmc_read_value_column(f.data.c_str(), &values, &n));
  std::unique_ptr<double, Deleter<double, mmcmc_doubles_free>> owned(values);

  mmcmc_asgn_priors priors;
  if (f.prior.empty()) {
    check(mmcmc_default_priors(values, n, &priors));
  } else {
    const auto p = parse_prior(f.prior, "--prior");
    mmcmc_user_priors(p.alpha, p.mu, p.sigma2, &priors);
  }
  const mmcmc_mcmc_config mcmc = f.mcmc.config();
  mmcmc_posterior post;
  check(mmcmc_asgn_fit(values, n, &priors, &mcmc, &post));

  std::string text = "parameter,mean,ci_lower,ci_upper,acceptance_rate\n";
  const char *names[] = {"alpha", "nu", "delta2"};
  const double mean[] = {post.mean.alpha, post.mean.nu, post.mean.delta2};
  const double lo[] = {post.ci_lower.alpha, post.ci_lower.nu,
                       post.ci_lower.delta2};
  const double hi[] = {post.ci_upper.alpha, post.ci_upper.nu,
                       post.ci_upper.delta2};
  for (int k = 0; k < 3; ++k)
    text += std::string(names[k]) + "," + fmt("%.6f", mean[k]) + "," +
            fmt("%.6f", lo[k]) + "," + fmt("%.6f", hi[k]) + "," +
            fmt("%.4f", post.acceptance_rates[k]) + "\n";
  emit(text, f.out);
  return 0;
}

// ---- summarize / compare / plot ---------------------------------------------

int run_summarize(const std::string &dmrs, const std::string &out) {
  const Table table = load_table(dmrs);
  mmcmc_summary *raw = nullptr;
  check(mmcmc_summarize(table.get(), &raw));
  const Summary summary(raw);
  char *text = nullptr;
  check(mmcmc_summary_render(summary.get(), &text));
  const Text owned(text);
  emit(text, out);
  return 0;
}

int run_compare(const std::string &a, const std::string &b,
                const std::string &index, bool beta, const std::string &out) {
  const Table ta = load_table(a);
  const Table tb = load_table(b);
  const Matrix idx = load_matrix(index, beta);
  mmcmc_overlap_report *raw = nullptr;
  check(mmcmc_compare_dmrs(ta.get(), tb.get(), idx.get(), &raw));
  const Overlaps report(raw);
  std::string text = "DMR_A,DMR_B,Shared_CpGs,Overlap_Percent\n";
  const size_t n = mmcmc_overlap_report_size(report.get());
  for (size_t i = 0; i < n; ++i) {
    mmcmc_overlap o;
    check(mmcmc_overlap_report_get(report.get(), i, &o));
    text += std::to_string(o.index_a + 1) + "," + std::to_string(o.index_b + 1) +
            "," + std::to_string(o.shared_cpgs) + "," +
            fmt("%.4f", o.percent) + "\n";
  }
  if (n == 0)
    std::fprintf(stderr, "no overlapping regions\n");
  emit(text, out);
  return 0;
}

int run_plot(const std::string &dmrs, const std::string &cancer_path,
             const std::string &normal_path, size_t index, bool beta,
             const std::string &out) {
  const Table table = load_table(dmrs);
  const Matrix cancer = load_matrix(cancer_path, beta);
  const Matrix normal = load_matrix(normal_path, beta);
  char *svg = nullptr;
  check(mmcmc_plot_region_svg(table.get(), cancer.get(), normal.get(), index,
                              &svg));
  const Text owned(svg);
  emit(svg, out);
  return 0;
}

// ---- simulate / evaluate ----------------------------------------------------

struct SimulateFlags {
  std::string baseline, out_dir;
  bool beta = false;
  size_t rows = 5000;
  size_t samples = 19;
  std::string chromosome = "6";
  double noise_sd = 0.5;
  size_t n_dmrs = 10;
  std::string shifts = "1,2";
  std::string lengths = "10,20,50";
  uint64_t seed = 0;
};

int run_simulate(const SimulateFlags &f) {
  Matrix baseline;
  if (!f.baseline.empty()) {
    baseline = load_matrix(f.baseline, f.beta);
  } else {
    const char *chrom = f.chromosome.c_str();
    mmcmc_matrix *raw = nullptr;
    check(mmcmc_synthetic_baseline(&chrom, &f.rows, 1, f.samples, f.seed,
                                   &raw));
    baseline.reset(raw);
  }
  const auto shifts = parse_reals(f.shifts, "--shifts");
  const auto lengths = parse_counts(f.lengths, "--lengths");
  mmcmc_sim_config cfg;
  mmcmc_sim_config_init(&cfg);
  cfg.noise_sd = f.noise_sd;
  cfg.n_dmrs = f.n_dmrs;
  cfg.shifts = shifts.data();
  cfg.n_shifts = shifts.size();
  cfg.lengths = lengths.data();
  cfg.n_lengths = lengths.size();
  cfg.seed = f.seed;

  mmcmc_matrix *c = nullptr, *n = nullptr;
  mmcmc_truth *t = nullptr;
  check(mmcmc_simulate(baseline.get(), &cfg, &c, &n, &t));
  const Matrix cancer(c), normal(n);
  const Truth truth(t);

  std::error_code ec;
  std::filesystem::create_directories(f.out_dir, ec);
  if (ec)
    throw Failure{1, "cannot create " + f.out_dir + ": " + ec.message()};
  const std::filesystem::path dir(f.out_dir);
  check(mmcmc_matrix_write_csv(cancer.get(), (dir / "cancer.csv").c_str()));
  check(mmcmc_matrix_write_csv(normal.get(), (dir / "normal.csv").c_str()));
  check(mmcmc_truth_write_csv(truth.get(), cancer.get(),
                              (dir / "truth.csv").c_str()));
  return 0;
}

int run_evaluate(const std::string &detected, const std::string &truth_path,
                 const std::string &index, bool beta,
                 std::optional<double> runtime, const std::string &out) {
  const Table table = load_table(detected);
  mmcmc_truth *raw = nullptr;
  check(mmcmc_truth_load_csv(truth_path.c_str(), &raw));
  const Truth truth(raw);
  const Matrix idx = load_matrix(index, beta);
  mmcmc_metrics m;
  check(mmcmc_evaluate(table.get(), truth.get(), idx.get(), &m));
  std::string text = "sensitivity,fdr,n_detected,n_false_discoveries,n_truth,"
                     "n_truth_found,cpg_precision,cpg_recall,runtime_seconds\n";
  text += fmt("%.6f", m.sensitivity) + "," + fmt("%.6f", m.fdr) + "," +
          std::to_string(m.n_detected) + "," +
          std::to_string(m.n_false_discoveries) + "," +
          std::to_string(m.n_truth) + "," + std::to_string(m.n_truth_found) +
          "," + fmt("%.6f", m.cpg_precision) + "," +
          fmt("%.6f", m.cpg_recall) + "," +
          (runtime ? fmt("%.3f", *runtime) : std::string("NA")) + "\n";
  emit(text, out);
  return 0;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Multistage MCMC detection of differentially methylated regions",
               "mmcmc"};
  app.require_subcommand(1);
  app.set_version_flag("--version", mmcmc_version());
  app.get_formatter()->column_width(36);

  // detect
  DetectFlags df;
  auto *detect = app.add_subcommand("detect", "Detect DMRs in a cancer/normal pair");
  detect->add_option("--cancer", df.cancer, "Cancer M-value CSV")
      ->required()->check(CLI::ExistingFile);
  detect->add_option("--normal", df.normal, "Normal M-value CSV")
      ->required()->check(CLI::ExistingFile);
  detect->add_option("--out", df.out, "Output DMR CSV")->required();
  detect->add_option("--stage", df.stage, "Starting stage")->capture_default_str();
  detect->add_option("--max-stages", df.max_stages, "Number of stages")
      ->capture_default_str();
  detect->add_option("--num-splits", df.num_splits, "Subregions per split")
      ->capture_default_str();
  detect->add_option("--bf-thresholds", df.thresholds,
                     "Per-stage Bayes factor thresholds, comma separated")
      ->capture_default_str();
  df.mcmc.add(detect);
  detect->add_option("--prior-cancer", df.prior_cancer,
                     "alpha=A,mu=M,sigma2=S (default: data-driven)");
  detect->add_option("--prior-normal", df.prior_normal,
                     "alpha=A,mu=M,sigma2=S (default: data-driven)");
  detect->add_option("--threads", df.threads, "Worker threads")
      ->capture_default_str()->check(CLI::PositiveNumber);
  detect->add_flag("--beta", df.beta,
                   "Inputs hold beta-values; convert to M-values (default: off)");
  detect->add_flag("--quiet", df.quiet, "No progress on stderr (default: off)");

  // fit
  FitFlags ff;
  auto *fit = app.add_subcommand("fit", "Fit the ASGN model to one column of values");
  fit->add_option("--data", ff.data, "One-column CSV of values")
      ->required()->check(CLI::ExistingFile);
  ff.mcmc.add(fit);
  fit->add_option("--prior", ff.prior,
                  "alpha=A,mu=M,sigma2=S (default: data-driven)");
  fit->add_option("--out", ff.out, "Output CSV (default: stdout)");

  // summarize
  std::string s_dmrs, s_out;
  auto *summarize = app.add_subcommand("summarize", "Summarize a DMR table");
  summarize->add_option("--dmrs", s_dmrs, "DMR CSV")
      ->required()->check(CLI::ExistingFile);
  summarize->add_option("--out", s_out, "Output text file (default: stdout)");

  // compare
  std::string c_a, c_b, c_index, c_out;
  bool c_beta = false;
  auto *compare = app.add_subcommand("compare", "Overlap between two DMR tables");
  compare->add_option("--a", c_a, "First DMR CSV")
      ->required()->check(CLI::ExistingFile);
  compare->add_option("--b", c_b, "Second DMR CSV")
      ->required()->check(CLI::ExistingFile);
  compare->add_option("--index", c_index, "Methylation CSV giving CpG order")
      ->required()->check(CLI::ExistingFile);
  compare->add_flag("--beta", c_beta, "Index holds beta-values (default: off)");
  compare->add_option("--out", c_out, "Output CSV (default: stdout)");

  // plot
  std::string p_dmrs, p_cancer, p_normal, p_out;
  size_t p_index = 1;
  bool p_beta = false;
  auto *plot = app.add_subcommand("plot", "SVG of mean M-values in one DMR");
  plot->add_option("--dmrs", p_dmrs, "DMR CSV")
      ->required()->check(CLI::ExistingFile);
  plot->add_option("--cancer", p_cancer, "Cancer M-value CSV")
      ->required()->check(CLI::ExistingFile);
  plot->add_option("--normal", p_normal, "Normal M-value CSV")
      ->required()->check(CLI::ExistingFile);
  plot->add_option("--index", p_index, "1-based DMR row")->capture_default_str();
  plot->add_flag("--beta", p_beta, "Inputs hold beta-values (default: off)");
  plot->add_option("--out", p_out, "Output SVG")->required();

  // simulate
  SimulateFlags sf;
  auto *simulate =
      app.add_subcommand("simulate", "Spike DMRs into a baseline and add noise");
  simulate->add_option("--baseline", sf.baseline,
                       "Baseline M-value CSV (default: synthetic)")
      ->check(CLI::ExistingFile);
  simulate->add_flag("--beta", sf.beta, "Baseline holds beta-values (default: off)");
  simulate->add_option("--rows", sf.rows, "Synthetic baseline CpGs")
      ->capture_default_str();
  simulate->add_option("--samples", sf.samples, "Synthetic baseline samples")
      ->capture_default_str();
  simulate->add_option("--chromosome", sf.chromosome,
                       "Synthetic baseline chromosome label")
      ->capture_default_str();
  simulate->add_option("--noise-sd", sf.noise_sd, "Per-cell noise sd")
      ->capture_default_str();
  simulate->add_option("--n-dmrs", sf.n_dmrs, "Injected regions")
      ->capture_default_str();
  simulate->add_option("--shifts", sf.shifts, "Candidate shifts, comma separated")
      ->capture_default_str();
  simulate->add_option("--lengths", sf.lengths,
                       "Candidate lengths, comma separated")
      ->capture_default_str();
  simulate->add_option("--seed", sf.seed, "Random seed")->capture_default_str();
  simulate->add_option("--out-dir", sf.out_dir,
                       "Directory for cancer.csv, normal.csv, truth.csv")
      ->required();

  // evaluate
  std::string e_detected, e_truth, e_index, e_out;
  bool e_beta = false;
  std::optional<double> e_runtime;
  auto *evaluate =
      app.add_subcommand("evaluate", "Score detections against injected truth");
  evaluate->add_option("--detected", e_detected, "DMR CSV")
      ->required()->check(CLI::ExistingFile);
  evaluate->add_option("--truth", e_truth, "truth.csv from simulate")
      ->required()->check(CLI::ExistingFile);
  evaluate->add_option("--index", e_index, "Methylation CSV giving CpG order")
      ->required()->check(CLI::ExistingFile);
  evaluate->add_flag("--beta", e_beta, "Index holds beta-values (default: off)");
  evaluate->add_option("--runtime", e_runtime,
                       "Detection runtime in seconds to pass through (default: NA)");
  evaluate->add_option("--out", e_out, "Output CSV (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp &e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    std::fprintf(stderr, "mmcmc: %s (see --help)\n", e.what());
    return 2;
  }

  try {
    if (*detect)
      return run_detect(df);
    if (*fit)
      return run_fit(ff);
    if (*summarize)
      return run_summarize(s_dmrs, s_out);
    if (*compare)
      return run_compare(c_a, c_b, c_index, c_beta, c_out);
    if (*plot)
      return run_plot(p_dmrs, p_cancer, p_normal, p_index, p_beta, p_out);
    if (*simulate)
      return run_simulate(sf);
    if (*evaluate)
      return run_evaluate(e_detected, e_truth, e_index, e_beta, e_runtime,
                          e_out);
  } catch (const Failure &f) {
    std::fprintf(stderr, "mmcmc: %s\n", f.message.c_str());
    return f.exit_code;
  } catch (const std::exception &e) {
    std::fprintf(stderr, "mmcmc: %s\n", e.what());
    return 1;
  }
  return 2;
}
