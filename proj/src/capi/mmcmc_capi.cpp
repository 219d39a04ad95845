// extern "C" surface over the C++ core. Exceptions never cross this
// boundary: every entry point maps them to an mmcmc_status and records the
// message for mmcmc_last_error().

#include "mmcmc/mmcmc.h"

#include "analysis.hpp"
#include "asgn.hpp"
#include "csv.hpp"
#include "dmr_table.hpp"
#include "engine.hpp"
#include "error.hpp"
#include "matrix.hpp"
#include "simgen.hpp"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <limits>
#include <new>
#include <string>

struct mmcmc_matrix {
  mmcmc::MethylationMatrix matrix;
};

struct mmcmc_dmr_table {
  mmcmc::DmrTable table;
};

struct mmcmc_detect_result {
  mmcmc_dmr_table table;
  std::vector<mmcmc::SegmentTrace> trace;
};

struct mmcmc_summary {
  mmcmc::DmrSummary summary;
};

struct mmcmc_overlap_report {
  mmcmc::OverlapReport report;
};

struct mmcmc_truth {
  mmcmc::GroundTruth truth;
};

namespace {

thread_local std::string g_last_error;

mmcmc_status fail(mmcmc_status status, const char *message) {
  g_last_error = message;
  return status;
}

template <class Fn> mmcmc_status guard(Fn &&fn) {
  try {
    fn();
    return MMCMC_OK;
  } catch (const mmcmc::Error &e) {
    return fail(static_cast<mmcmc_status>(e.code()), e.what());
  } catch (const std::bad_alloc &) {
    return fail(MMCMC_ERR_INTERNAL, "out of memory");
  } catch (const std::exception &e) {
    return fail(MMCMC_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(MMCMC_ERR_INTERNAL, "unknown error");
  }
}

#define MMCMC_REQUIRE(ptr)                                                     \
  do {                                                                         \
    if ((ptr) == nullptr)                                                      \
      return fail(MMCMC_ERR_INVALID_ARGUMENT, #ptr " must not be null");       \
  } while (0)

mmcmc::AsgnParams to_cpp(const mmcmc_asgn_params &p) {
  return {p.alpha, p.nu, p.delta2};
}
mmcmc_asgn_params to_c(const mmcmc::AsgnParams &p) {
  return {p.alpha, p.nu, p.delta2};
}
mmcmc::AsgnPriors to_cpp(const mmcmc_asgn_priors &p) {
  return {p.mu_a, p.sigma2_a, p.mu_n, p.sigma2_n, p.a_d, p.b_d};
}
mmcmc_asgn_priors to_c(const mmcmc::AsgnPriors &p) {
  return {p.mu_a, p.sigma2_a, p.mu_n, p.sigma2_n, p.a_d, p.b_d};
}
mmcmc::McmcConfig to_cpp(const mmcmc_mcmc_config &c) {
  return {c.nburn, c.niter, c.thin, c.seed};
}
mmcmc_posterior to_c(const mmcmc::PosteriorSummary &s) {
  mmcmc_posterior out{};
  out.mean = to_c(s.mean);
  out.ci_lower = to_c(s.ci_lower);
  out.ci_upper = to_c(s.ci_upper);
  for (int k = 0; k < 3; ++k)
    out.acceptance_rates[k] = s.acceptance_rates[static_cast<std::size_t>(k)];
  out.n_retained = s.n_retained;
  return out;
}
mmcmc::PosteriorSummary to_cpp(const mmcmc_posterior &p) {
  mmcmc::PosteriorSummary out;
  out.mean = to_cpp(p.mean);
  out.ci_lower = to_cpp(p.ci_lower);
  out.ci_upper = to_cpp(p.ci_upper);
  for (int k = 0; k < 3; ++k)
    out.acceptance_rates[static_cast<std::size_t>(k)] = p.acceptance_rates[k];
  out.n_retained = p.n_retained;
  return out;
}

char *dup_string(const std::string &s) {
  char *out = static_cast<char *>(std::malloc(s.size() + 1));
  if (out == nullptr)
    throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

std::vector<std::string> strings(const char *const *items, std::size_t n,
                                 const char *what) {
  std::vector<std::string> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (items[i] == nullptr)
      throw mmcmc::Error(mmcmc::ErrorCode::invalid_argument,
                         std::string(what) + " entry is null");
    out.emplace_back(items[i]);
  }
  return out;
}

const double kDefaultThresholds[] = {0.5, 0.8, 1.05};
const double kDefaultShifts[] = {1.0, 2.0};
const size_t kDefaultLengths[] = {10, 20, 50};

} // namespace

extern "C" {

const char *mmcmc_version(void) { return "0.1.0"; }

const char *mmcmc_status_string(mmcmc_status status) {
  switch (status) {
  case MMCMC_OK: return "ok";
  case MMCMC_ERR_INVALID_ARGUMENT: return "invalid argument";
  case MMCMC_ERR_DOMAIN: return "domain error";
  case MMCMC_ERR_TOO_FEW_OBSERVATIONS: return "too few observations";
  case MMCMC_ERR_PARSE: return "parse error";
  case MMCMC_ERR_DUPLICATE_CPG: return "duplicate CpG";
  case MMCMC_ERR_VALIDATION: return "validation error";
  case MMCMC_ERR_UNKNOWN_CPG: return "unknown CpG";
  case MMCMC_ERR_OUT_OF_RANGE: return "index out of range";
  case MMCMC_ERR_DEGENERATE: return "degenerate result";
  case MMCMC_ERR_INFEASIBLE: return "infeasible configuration";
  case MMCMC_ERR_IO: return "i/o error";
  case MMCMC_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char *mmcmc_last_error(void) { return g_last_error.c_str(); }

void mmcmc_string_free(char *s) { std::free(s); }

// ---- model ---------------------------------------------------------------

void mmcmc_mcmc_config_init(mmcmc_mcmc_config *config) {
  if (config != nullptr)
    *config = {5000, 10000, 1, 0};
}

mmcmc_status mmcmc_asgn_log_density(double y, const mmcmc_asgn_params *params,
                                    double *out) {
  MMCMC_REQUIRE(params);
  MMCMC_REQUIRE(out);
  return guard([&] { *out = mmcmc::asgn_log_density(y, to_cpp(*params)); });
}

mmcmc_status mmcmc_asgn_density(double y, const mmcmc_asgn_params *params,
                                double *out) {
  MMCMC_REQUIRE(params);
  MMCMC_REQUIRE(out);
  return guard([&] { *out = mmcmc::asgn_density(y, to_cpp(*params)); });
}

mmcmc_status mmcmc_log_prior(const mmcmc_asgn_params *params,
                             const mmcmc_asgn_priors *priors, double *out) {
  MMCMC_REQUIRE(params);
  MMCMC_REQUIRE(priors);
  MMCMC_REQUIRE(out);
  return guard(
      [&] { *out = mmcmc::log_prior(to_cpp(*params), to_cpp(*priors)); });
}

mmcmc_status mmcmc_default_priors(const double *data, size_t n,
                                  mmcmc_asgn_priors *out) {
  MMCMC_REQUIRE(out);
  if (n > 0)
    MMCMC_REQUIRE(data);
  return guard([&] {
    *out = to_c(mmcmc::default_priors(std::span<const double>(data, n)));
  });
}

void mmcmc_child_priors(const mmcmc_posterior *parent,
                        mmcmc_asgn_priors *out) {
  if (parent != nullptr && out != nullptr)
    *out = to_c(mmcmc::child_priors(to_cpp(*parent)));
}

void mmcmc_user_priors(double alpha, double mu, double sigma2,
                       mmcmc_asgn_priors *out) {
  if (out != nullptr)
    *out = to_c(mmcmc::UserPrior{alpha, mu, sigma2}.to_priors());
}

mmcmc_status mmcmc_asgn_fit(const double *data, size_t n,
                            const mmcmc_asgn_priors *priors,
                            const mmcmc_mcmc_config *mcmc,
                            mmcmc_posterior *out) {
  MMCMC_REQUIRE(priors);
  MMCMC_REQUIRE(mcmc);
  MMCMC_REQUIRE(out);
  if (n > 0)
    MMCMC_REQUIRE(data);
  return guard([&] {
    *out = to_c(mmcmc::asgn_fit(std::span<const double>(data, n),
                                to_cpp(*priors), to_cpp(*mcmc)));
  });
}

// ---- matrices ------------------------------------------------------------

mmcmc_status mmcmc_matrix_load_csv(const char *path, int beta_values,
                                   mmcmc_matrix **out) {
  MMCMC_REQUIRE(path);
  MMCMC_REQUIRE(out);
  return guard([&] {
    mmcmc::LoadOptions options;
    options.beta_values = beta_values != 0;
    *out = new mmcmc_matrix{mmcmc::load_methylation_csv(path, options)};
  });
}

mmcmc_status mmcmc_matrix_create(const char *const *cpg_ids,
                                 const char *const *chromosomes, size_t n_rows,
                                 const char *const *sample_names,
                                 size_t n_samples, const double *values,
                                 mmcmc_matrix **out) {
  MMCMC_REQUIRE(out);
  if (n_rows > 0) {
    MMCMC_REQUIRE(cpg_ids);
    MMCMC_REQUIRE(chromosomes);
  }
  MMCMC_REQUIRE(sample_names);
  if (n_rows > 0 && n_samples > 0)
    MMCMC_REQUIRE(values);
  return guard([&] {
    std::vector<double> grid(values, values + n_rows * n_samples);
    *out = new mmcmc_matrix{mmcmc::MethylationMatrix(
        strings(cpg_ids, n_rows, "cpg_ids"),
        strings(chromosomes, n_rows, "chromosomes"),
        strings(sample_names, n_samples, "sample_names"), std::move(grid))};
  });
}

mmcmc_status mmcmc_matrix_write_csv(const mmcmc_matrix *m, const char *path) {
  MMCMC_REQUIRE(m);
  MMCMC_REQUIRE(path);
  return guard([&] { mmcmc::write_methylation_csv(m->matrix, path); });
}

void mmcmc_matrix_free(mmcmc_matrix *m) { delete m; }

size_t mmcmc_matrix_n_rows(const mmcmc_matrix *m) {
  return m ? m->matrix.n_rows() : 0;
}

size_t mmcmc_matrix_n_samples(const mmcmc_matrix *m) {
  return m ? m->matrix.n_samples() : 0;
}

const char *mmcmc_matrix_cpg_id(const mmcmc_matrix *m, size_t row) {
  if (!m || row >= m->matrix.n_rows())
    return nullptr;
  return m->matrix.cpg_ids()[row].c_str();
}

const char *mmcmc_matrix_chromosome(const mmcmc_matrix *m, size_t row) {
  if (!m || row >= m->matrix.n_rows())
    return nullptr;
  return m->matrix.chromosomes()[row].c_str();
}

const char *mmcmc_matrix_sample_name(const mmcmc_matrix *m, size_t sample) {
  if (!m || sample >= m->matrix.n_samples())
    return nullptr;
  return m->matrix.sample_names()[sample].c_str();
}

double mmcmc_matrix_value(const mmcmc_matrix *m, size_t row, size_t sample) {
  if (!m || row >= m->matrix.n_rows() || sample >= m->matrix.n_samples())
    return std::numeric_limits<double>::quiet_NaN();
  return m->matrix.value(row, sample);
}

mmcmc_status mmcmc_validate_pair(const mmcmc_matrix *cancer,
                                 const mmcmc_matrix *normal,
                                 size_t *mismatch_row) {
  MMCMC_REQUIRE(cancer);
  MMCMC_REQUIRE(normal);
  try {
    mmcmc::validate_pair(cancer->matrix, normal->matrix);
    return MMCMC_OK;
  } catch (const mmcmc::MismatchError &e) {
    if (mismatch_row != nullptr)
      *mismatch_row = e.row();
    return fail(MMCMC_ERR_VALIDATION, e.what());
  }
}

mmcmc_status mmcmc_beta_to_m(double beta, double c, double *out) {
  MMCMC_REQUIRE(out);
  return guard([&] { *out = mmcmc::beta_to_m(beta, c); });
}

mmcmc_status mmcmc_region_means(const mmcmc_matrix *m, size_t start_row,
                                size_t end_row, double *out) {
  MMCMC_REQUIRE(m);
  MMCMC_REQUIRE(out);
  return guard([&] {
    const auto means = mmcmc::region_means(m->matrix, start_row, end_row);
    std::copy(means.begin(), means.end(), out);
  });
}

mmcmc_status mmcmc_read_value_column(const char *path, double **values,
                                     size_t *n) {
  MMCMC_REQUIRE(path);
  MMCMC_REQUIRE(values);
  MMCMC_REQUIRE(n);
  return guard([&] {
    const auto column = mmcmc::read_value_column(path);
    auto *buf = static_cast<double *>(
        std::malloc(std::max<std::size_t>(1, column.size()) * sizeof(double)));
    if (buf == nullptr)
      throw std::bad_alloc();
    std::copy(column.begin(), column.end(), buf);
    *values = buf;
    *n = column.size();
  });
}

void mmcmc_doubles_free(double *values) { std::free(values); }

// ---- tables --------------------------------------------------------------

mmcmc_status mmcmc_dmr_table_create(mmcmc_dmr_table **out) {
  MMCMC_REQUIRE(out);
  return guard([&] { *out = new mmcmc_dmr_table{}; });
}

mmcmc_status mmcmc_dmr_table_append(mmcmc_dmr_table *t,
                                    const mmcmc_dmr_record *r) {
  MMCMC_REQUIRE(t);
  MMCMC_REQUIRE(r);
  MMCMC_REQUIRE(r->chromosome);
  MMCMC_REQUIRE(r->start_cpg);
  MMCMC_REQUIRE(r->end_cpg);
  return guard([&] {
    t->table.push_back({r->chromosome, r->start_cpg, r->end_cpg, r->cpg_count,
                        r->decision_value, r->stage});
  });
}

mmcmc_status mmcmc_dmr_table_load_csv(const char *path,
                                      mmcmc_dmr_table **out) {
  MMCMC_REQUIRE(path);
  MMCMC_REQUIRE(out);
  return guard(
      [&] { *out = new mmcmc_dmr_table{mmcmc::load_dmr_table(path)}; });
}

mmcmc_status mmcmc_dmr_table_write_csv(const mmcmc_dmr_table *t,
                                       const char *path) {
  MMCMC_REQUIRE(t);
  MMCMC_REQUIRE(path);
  return guard([&] { mmcmc::write_dmr_table(t->table, path); });
}

void mmcmc_dmr_table_free(mmcmc_dmr_table *t) { delete t; }

size_t mmcmc_dmr_table_size(const mmcmc_dmr_table *t) {
  return t ? t->table.size() : 0;
}

mmcmc_status mmcmc_dmr_table_get(const mmcmc_dmr_table *t, size_t index,
                                 mmcmc_dmr_record *out) {
  MMCMC_REQUIRE(t);
  MMCMC_REQUIRE(out);
  if (index >= t->table.size())
    return fail(MMCMC_ERR_OUT_OF_RANGE, "record index out of range");
  const auto &r = t->table[index];
  *out = {r.chromosome.c_str(), r.start_cpg.c_str(), r.end_cpg.c_str(),
          r.cpg_count,          r.decision_value,    r.stage};
  return MMCMC_OK;
}

// ---- detection -----------------------------------------------------------

void mmcmc_detect_config_init(mmcmc_detect_config *config) {
  if (config == nullptr)
    return;
  *config = {};
  config->stage = 1;
  config->max_stages = 3;
  config->num_splits = 50;
  config->bf_thresholds = kDefaultThresholds;
  config->n_bf_thresholds = 3;
  mmcmc_mcmc_config_init(&config->mcmc);
  config->prior_cancer = {0.0, 0.0, 1.0};
  config->prior_normal = {0.0, 0.0, 1.0};
  config->threads = 1;
}

mmcmc_status mmcmc_detect(const mmcmc_matrix *cancer,
                          const mmcmc_matrix *normal,
                          const mmcmc_detect_config *config,
                          mmcmc_detect_result **out) {
  MMCMC_REQUIRE(cancer);
  MMCMC_REQUIRE(normal);
  MMCMC_REQUIRE(config);
  MMCMC_REQUIRE(out);
  if (config->n_bf_thresholds > 0)
    MMCMC_REQUIRE(config->bf_thresholds);
  return guard([&] {
    mmcmc::DetectConfig cfg;
    cfg.stage = config->stage;
    cfg.max_stages = config->max_stages;
    cfg.num_splits = config->num_splits;
    cfg.bf_thresholds.assign(config->bf_thresholds,
                             config->bf_thresholds + config->n_bf_thresholds);
    cfg.mcmc = to_cpp(config->mcmc);
    if (config->has_prior_cancer)
      cfg.priors_cancer =
          mmcmc::UserPrior{config->prior_cancer.alpha, config->prior_cancer.mu,
                           config->prior_cancer.sigma2};
    if (config->has_prior_normal)
      cfg.priors_normal =
          mmcmc::UserPrior{config->prior_normal.alpha, config->prior_normal.mu,
                           config->prior_normal.sigma2};
    cfg.master_seed = config->master_seed;
    cfg.threads = config->threads;
    cfg.shared_group_seed = config->shared_group_seed != 0;
    if (config->progress != nullptr) {
      auto fn = config->progress;
      void *user = config->progress_user_data;
      cfg.progress = [fn, user](const mmcmc::StageProgress &p) {
        fn(p.stage, p.n_segments, p.n_split, p.n_emitted, user);
      };
    }
    auto result = mmcmc::detect(cancer->matrix, normal->matrix, cfg);
    *out = new mmcmc_detect_result{{std::move(result.table)},
                                   std::move(result.trace)};
  });
}

void mmcmc_detect_result_free(mmcmc_detect_result *r) { delete r; }

const mmcmc_dmr_table *mmcmc_detect_result_table(const mmcmc_detect_result *r) {
  return r ? &r->table : nullptr;
}

size_t mmcmc_detect_result_n_segments(const mmcmc_detect_result *r) {
  return r ? r->trace.size() : 0;
}

mmcmc_status mmcmc_detect_result_segment(const mmcmc_detect_result *r,
                                         size_t index,
                                         mmcmc_segment_trace *out) {
  MMCMC_REQUIRE(r);
  MMCMC_REQUIRE(out);
  if (index >= r->trace.size())
    return fail(MMCMC_ERR_OUT_OF_RANGE, "segment index out of range");
  const auto &t = r->trace[index];
  out->chromosome = t.segment.chromosome.c_str();
  out->start_row = t.segment.start_row;
  out->end_row = t.segment.end_row;
  out->stage = t.segment.stage;
  out->has_bayes_factor = t.bayes_factor.has_value() ? 1 : 0;
  out->bayes_factor = t.bayes_factor.value_or(
      std::numeric_limits<double>::quiet_NaN());
  out->decision = static_cast<mmcmc_segment_decision>(t.decision);
  return MMCMC_OK;
}

mmcmc_status mmcmc_bayes_factor(const double *cancer_means, size_t n_cancer,
                                const double *normal_means, size_t n_normal,
                                const mmcmc_asgn_params *cancer,
                                const mmcmc_asgn_params *normal, double *out) {
  MMCMC_REQUIRE(cancer);
  MMCMC_REQUIRE(normal);
  MMCMC_REQUIRE(out);
  if (n_cancer > 0)
    MMCMC_REQUIRE(cancer_means);
  if (n_normal > 0)
    MMCMC_REQUIRE(normal_means);
  return guard([&] {
    *out = std::exp(mmcmc::log_bayes_factor(
        std::span<const double>(cancer_means, n_cancer),
        std::span<const double>(normal_means, n_normal), to_cpp(*cancer),
        to_cpp(*normal)));
  });
}

mmcmc_status mmcmc_split_segment(size_t start_row, size_t end_row,
                                 size_t num_splits, size_t *starts,
                                 size_t *ends, size_t capacity, size_t *n_out) {
  MMCMC_REQUIRE(n_out);
  if (capacity > 0) {
    MMCMC_REQUIRE(starts);
    MMCMC_REQUIRE(ends);
  }
  return guard([&] {
    const auto parts =
        mmcmc::split_segment({"", start_row, end_row, 1}, num_splits);
    *n_out = parts.size();
    for (std::size_t i = 0; i < parts.size() && i < capacity; ++i) {
      starts[i] = parts[i].start_row;
      ends[i] = parts[i].end_row;
    }
  });
}

// ---- analysis ------------------------------------------------------------

mmcmc_status mmcmc_summarize(const mmcmc_dmr_table *t, mmcmc_summary **out) {
  MMCMC_REQUIRE(t);
  MMCMC_REQUIRE(out);
  return guard([&] { *out = new mmcmc_summary{mmcmc::summarize_dmrs(t->table)}; });
}

void mmcmc_summary_free(mmcmc_summary *s) { delete s; }

size_t mmcmc_summary_n_dmrs(const mmcmc_summary *s) {
  return s ? s->summary.n_dmrs : 0;
}

static void copy_six(const mmcmc::SixNumberSummary &in, mmcmc_six_number *out) {
  *out = {in.min, in.q1, in.median, in.mean, in.q3, in.max};
}

void mmcmc_summary_size_stats(const mmcmc_summary *s, mmcmc_six_number *out) {
  if (s && out)
    copy_six(s->summary.size_stats, out);
}

void mmcmc_summary_decision_stats(const mmcmc_summary *s,
                                  mmcmc_six_number *out) {
  if (s && out)
    copy_six(s->summary.decision_stats, out);
}

size_t mmcmc_summary_n_chromosomes(const mmcmc_summary *s) {
  return s ? s->summary.by_chromosome.size() : 0;
}

mmcmc_status mmcmc_summary_chromosome(const mmcmc_summary *s, size_t index,
                                      const char **chromosome, size_t *count) {
  MMCMC_REQUIRE(s);
  if (index >= s->summary.by_chromosome.size())
    return fail(MMCMC_ERR_OUT_OF_RANGE, "chromosome index out of range");
  const auto &[label, n] = s->summary.by_chromosome[index];
  if (chromosome)
    *chromosome = label.c_str();
  if (count)
    *count = n;
  return MMCMC_OK;
}

size_t mmcmc_summary_n_stages(const mmcmc_summary *s) {
  return s ? s->summary.by_stage.size() : 0;
}

mmcmc_status mmcmc_summary_stage(const mmcmc_summary *s, size_t index,
                                 int *stage, size_t *count) {
  MMCMC_REQUIRE(s);
  if (index >= s->summary.by_stage.size())
    return fail(MMCMC_ERR_OUT_OF_RANGE, "stage index out of range");
  auto it = s->summary.by_stage.begin();
  std::advance(it, static_cast<long>(index));
  if (stage)
    *stage = it->first;
  if (count)
    *count = it->second;
  return MMCMC_OK;
}

mmcmc_status mmcmc_summary_render(const mmcmc_summary *s, char **text) {
  MMCMC_REQUIRE(s);
  MMCMC_REQUIRE(text);
  return guard([&] { *text = dup_string(mmcmc::format_summary(s->summary)); });
}

mmcmc_status mmcmc_compare_dmrs(const mmcmc_dmr_table *a,
                                const mmcmc_dmr_table *b,
                                const mmcmc_matrix *index,
                                mmcmc_overlap_report **out) {
  MMCMC_REQUIRE(a);
  MMCMC_REQUIRE(b);
  MMCMC_REQUIRE(index);
  MMCMC_REQUIRE(out);
  return guard([&] {
    *out = new mmcmc_overlap_report{
        mmcmc::compare_dmrs(a->table, b->table, index->matrix)};
  });
}

void mmcmc_overlap_report_free(mmcmc_overlap_report *r) { delete r; }

size_t mmcmc_overlap_report_size(const mmcmc_overlap_report *r) {
  return r ? r->report.size() : 0;
}

mmcmc_status mmcmc_overlap_report_get(const mmcmc_overlap_report *r,
                                      size_t index, mmcmc_overlap *out) {
  MMCMC_REQUIRE(r);
  MMCMC_REQUIRE(out);
  if (index >= r->report.size())
    return fail(MMCMC_ERR_OUT_OF_RANGE, "overlap index out of range");
  const auto &o = r->report[index];
  *out = {o.index_a, o.index_b, o.shared_cpgs, o.percent};
  return MMCMC_OK;
}

mmcmc_status mmcmc_plot_region_svg(const mmcmc_dmr_table *t,
                                   const mmcmc_matrix *cancer,
                                   const mmcmc_matrix *normal, size_t index,
                                   char **svg) {
  MMCMC_REQUIRE(t);
  MMCMC_REQUIRE(cancer);
  MMCMC_REQUIRE(normal);
  MMCMC_REQUIRE(svg);
  return guard([&] {
    const auto plot = mmcmc::build_region_plot(t->table, cancer->matrix,
                                               normal->matrix, index);
    *svg = dup_string(mmcmc::render_svg(plot));
  });
}

// ---- simulation ----------------------------------------------------------

void mmcmc_sim_config_init(mmcmc_sim_config *config) {
  if (config == nullptr)
    return;
  *config = {};
  config->noise_sd = 0.5;
  config->n_dmrs = 10;
  config->shifts = kDefaultShifts;
  config->n_shifts = 2;
  config->lengths = kDefaultLengths;
  config->n_lengths = 3;
}

mmcmc_status mmcmc_simulate(const mmcmc_matrix *baseline,
                            const mmcmc_sim_config *config,
                            mmcmc_matrix **cancer, mmcmc_matrix **normal,
                            mmcmc_truth **truth) {
  MMCMC_REQUIRE(baseline);
  MMCMC_REQUIRE(config);
  MMCMC_REQUIRE(cancer);
  MMCMC_REQUIRE(normal);
  MMCMC_REQUIRE(truth);
  if (config->n_shifts > 0)
    MMCMC_REQUIRE(config->shifts);
  if (config->n_lengths > 0)
    MMCMC_REQUIRE(config->lengths);
  return guard([&] {
    mmcmc::SimConfig cfg;
    cfg.noise_sd = config->noise_sd;
    cfg.n_dmrs = config->n_dmrs;
    cfg.shifts.assign(config->shifts, config->shifts + config->n_shifts);
    cfg.lengths.assign(config->lengths, config->lengths + config->n_lengths);
    cfg.seed = config->seed;
    auto data = mmcmc::simulate_dataset(baseline->matrix, cfg);
    auto c = std::make_unique<mmcmc_matrix>(mmcmc_matrix{std::move(data.cancer)});
    auto n = std::make_unique<mmcmc_matrix>(mmcmc_matrix{std::move(data.normal)});
    auto t = std::make_unique<mmcmc_truth>(mmcmc_truth{std::move(data.truth)});
    *cancer = c.release();
    *normal = n.release();
    *truth = t.release();
  });
}

mmcmc_status mmcmc_synthetic_baseline(const char *const *chromosomes,
                                      const size_t *sizes,
                                      size_t n_chromosomes, size_t n_samples,
                                      uint64_t seed, mmcmc_matrix **out) {
  MMCMC_REQUIRE(out);
  if (n_chromosomes > 0) {
    MMCMC_REQUIRE(chromosomes);
    MMCMC_REQUIRE(sizes);
  }
  return guard([&] {
    std::vector<mmcmc::ChromosomeSize> layout;
    const auto labels = strings(chromosomes, n_chromosomes, "chromosomes");
    for (std::size_t i = 0; i < n_chromosomes; ++i)
      layout.push_back({labels[i], sizes[i]});
    *out = new mmcmc_matrix{
        mmcmc::synthetic_baseline(layout, n_samples, seed)};
  });
}

mmcmc_status mmcmc_truth_create(const mmcmc_truth_interval *items, size_t n,
                                mmcmc_truth **out) {
  MMCMC_REQUIRE(out);
  if (n > 0)
    MMCMC_REQUIRE(items);
  return guard([&] {
    auto t = std::make_unique<mmcmc_truth>();
    for (std::size_t i = 0; i < n; ++i) {
      if (items[i].start_row > items[i].end_row)
        throw mmcmc::Error(mmcmc::ErrorCode::invalid_argument,
                           "truth interval ends before it starts");
      t->truth.push_back(
          {items[i].start_row, items[i].end_row, items[i].shift});
    }
    *out = t.release();
  });
}

mmcmc_status mmcmc_truth_load_csv(const char *path, mmcmc_truth **out) {
  MMCMC_REQUIRE(path);
  MMCMC_REQUIRE(out);
  return guard([&] { *out = new mmcmc_truth{mmcmc::load_truth(path)}; });
}

mmcmc_status mmcmc_truth_write_csv(const mmcmc_truth *truth,
                                   const mmcmc_matrix *index,
                                   const char *path) {
  MMCMC_REQUIRE(truth);
  MMCMC_REQUIRE(index);
  MMCMC_REQUIRE(path);
  return guard(
      [&] { mmcmc::write_truth(truth->truth, index->matrix, path); });
}

void mmcmc_truth_free(mmcmc_truth *truth) { delete truth; }

size_t mmcmc_truth_size(const mmcmc_truth *truth) {
  return truth ? truth->truth.size() : 0;
}

mmcmc_status mmcmc_truth_get(const mmcmc_truth *truth, size_t index,
                             mmcmc_truth_interval *out) {
  MMCMC_REQUIRE(truth);
  MMCMC_REQUIRE(out);
  if (index >= truth->truth.size())
    return fail(MMCMC_ERR_OUT_OF_RANGE, "truth index out of range");
  const auto &t = truth->truth[index];
  *out = {t.start_row, t.end_row, t.shift};
  return MMCMC_OK;
}

mmcmc_status mmcmc_evaluate(const mmcmc_dmr_table *detected,
                            const mmcmc_truth *truth,
                            const mmcmc_matrix *index, mmcmc_metrics *out) {
  MMCMC_REQUIRE(detected);
  MMCMC_REQUIRE(truth);
  MMCMC_REQUIRE(index);
  MMCMC_REQUIRE(out);
  return guard([&] {
    const auto m =
        mmcmc::evaluate(detected->table, truth->truth, index->matrix);
    *out = {m.n_truth,     m.n_detected, m.n_truth_found, m.n_false_discoveries,
            m.sensitivity, m.fdr,        m.cpg_precision, m.cpg_recall};
  });
}

} // extern "C"
