#pragma once

// Alpha-skew generalized normal (ASGN) model for regional M-values: density,
// priors, and MCMC posterior estimation.

#include <array>
#include <cstdint>
#include <span>
#include <vector>

namespace mmcmc {

struct AsgnParams {
  double alpha = 0.0;  // skewness
  double nu = 0.0;     // location
  double delta2 = 1.0; // scale, > 0

  bool operator==(const AsgnParams &) const = default;
};

// Hyperparameters of alpha ~ N(mu_a, sigma2_a), nu ~ N(mu_n, sigma2_n),
// delta2 ~ IG(a_d, b_d) (shape-rate).
struct AsgnPriors {
  double mu_a = 0.0;
  double sigma2_a = 1.0;
  double mu_n = 0.0;
  double sigma2_n = 1.0;
  double a_d = 2.0;
  double b_d = 1.0;

  bool operator==(const AsgnPriors &) const = default;
};

struct McmcConfig {
  std::int64_t nburn = 5000;
  std::int64_t niter = 10000;
  std::int64_t thin = 1;
  std::uint64_t seed = 0;

  std::int64_t retained() const { return thin > 0 ? niter / thin : 0; }
};

struct PosteriorSummary {
  AsgnParams mean;
  AsgnParams ci_lower; // 2.5% percentile
  AsgnParams ci_upper; // 97.5% percentile
  std::array<double, 3> acceptance_rates{}; // alpha, nu, log(delta2)
  std::int64_t n_retained = 0;

  bool operator==(const PosteriorSummary &) const = default;
};

// Lower bound of the variance-like quantities derived from data.
inline constexpr double kVarianceFloor = 0.01;

void validate(const AsgnParams &params);
void validate(const AsgnPriors &priors);
void validate(const McmcConfig &mcmc);

// log f(y | alpha, nu, delta2). The polynomial factor uses raw y and the
// kernel carries no 1/delta factor; the skewness normalizer is
// 4 * (Gamma(3/2) * alpha^2 + Gamma(1/2)).
double asgn_log_density(double y, const AsgnParams &params);
double asgn_density(double y, const AsgnParams &params);

// Sum of asgn_log_density over finite entries of `data`.
double asgn_log_likelihood(std::span<const double> data,
                           const AsgnParams &params);

double log_prior(const AsgnParams &params, const AsgnPriors &priors);

AsgnPriors default_priors(std::span<const double> data);

// Priors for a subsegment from its parent's posterior means.
AsgnPriors child_priors(const PosteriorSummary &parent);

// Retained draws of a single chain, in iteration order.
struct PosteriorDraws {
  std::vector<AsgnParams> samples;
  std::array<double, 3> acceptance_rates{};
  std::array<double, 3> proposal_scales{}; // frozen after burn-in
};

PosteriorDraws asgn_sample(std::span<const double> data,
                           const AsgnPriors &priors, const McmcConfig &mcmc);

PosteriorSummary summarize_draws(const PosteriorDraws &draws);

PosteriorSummary asgn_fit(std::span<const double> data,
                          const AsgnPriors &priors, const McmcConfig &mcmc);

// Linear-interpolation percentile (p in [0, 1]) of an unsorted sample.
double percentile(std::vector<double> values, double p);

// Finite entries of `data`, in order.
std::vector<double> finite_values(std::span<const double> data);

} // namespace mmcmc
