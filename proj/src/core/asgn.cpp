#include "asgn.hpp"

#include "error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

namespace mmcmc {

namespace {

const double kGammaThreeHalves = std::tgamma(1.5);
const double kGammaHalf = std::tgamma(0.5);
const double kLogSqrt2 = 0.5 * std::numbers::ln2;
const double kLog2Pi = std::log(2.0 * std::numbers::pi);

double log_normal_pdf(double x, double mean, double var) {
  const double d = x - mean;
  return -0.5 * (kLog2Pi + std::log(var)) - d * d / (2.0 * var);
}

bool positive_finite(double x) { return std::isfinite(x) && x > 0.0; }

} // namespace

void validate(const AsgnParams &params) {
  if (!std::isfinite(params.alpha) || !std::isfinite(params.nu))
    throw Error(ErrorCode::domain, "ASGN parameters must be finite");
  if (!positive_finite(params.delta2))
    throw Error(ErrorCode::domain,
                "ASGN scale delta2 must be positive, got " +
                    std::to_string(params.delta2));
}

void validate(const AsgnPriors &priors) {
  if (!std::isfinite(priors.mu_a) || !std::isfinite(priors.mu_n))
    throw Error(ErrorCode::invalid_argument, "prior means must be finite");
  if (!positive_finite(priors.sigma2_a) || !positive_finite(priors.sigma2_n) ||
      !positive_finite(priors.a_d) || !positive_finite(priors.b_d))
    throw Error(ErrorCode::invalid_argument,
                "prior variances, shape and rate must be positive");
}

void validate(const McmcConfig &mcmc) {
  if (mcmc.nburn < 0)
    throw Error(ErrorCode::invalid_argument, "nburn must be >= 0");
  if (mcmc.niter < 1)
    throw Error(ErrorCode::invalid_argument, "niter must be >= 1");
  if (mcmc.thin < 1)
    throw Error(ErrorCode::invalid_argument, "thin must be >= 1");
  if (mcmc.retained() < 2)
    throw Error(ErrorCode::invalid_argument,
                "niter / thin must retain at least 2 samples");
}

double asgn_log_density(double y, const AsgnParams &params) {
  validate(params);
  const double normalizer =
      kGammaThreeHalves * params.alpha * params.alpha + kGammaHalf;
  if (!(normalizer > 0.0))
    throw Error(ErrorCode::domain, "ASGN normalizer must be positive");
  const double u = 1.0 - params.alpha * y;
  const double d = y - params.nu;
  return kLogSqrt2 + std::log(u * u + 1.0) - std::log(4.0 * normalizer) -
         d * d / (2.0 * params.delta2);
}

double asgn_density(double y, const AsgnParams &params) {
  return std::exp(asgn_log_density(y, params));
}

double asgn_log_likelihood(std::span<const double> data,
                           const AsgnParams &params) {
  validate(params);
  double total = 0.0;
  for (double y : data)
    if (std::isfinite(y))
      total += asgn_log_density(y, params);
  return total;
}

double log_prior(const AsgnParams &params, const AsgnPriors &priors) {
  validate(priors);
  if (!(params.delta2 > 0.0))
    throw Error(ErrorCode::domain, "delta2 must be positive");
  const double a = priors.a_d;
  const double b = priors.b_d;
  const double x = params.delta2;
  const double log_ig =
      a * std::log(b) - std::lgamma(a) - (a + 1.0) * std::log(x) - b / x;
  return log_normal_pdf(params.alpha, priors.mu_a, priors.sigma2_a) +
         log_normal_pdf(params.nu, priors.mu_n, priors.sigma2_n) + log_ig;
}

std::vector<double> finite_values(std::span<const double> data) {
  std::vector<double> out;
  out.reserve(data.size());
  std::copy_if(data.begin(), data.end(), std::back_inserter(out),
               [](double v) { return std::isfinite(v); });
  return out;
}

AsgnPriors default_priors(std::span<const double> data) {
  const auto values = finite_values(data);
  if (values.size() < 3)
    throw Error(ErrorCode::too_few_observations,
                "default priors need at least 3 finite observations, got " +
                    std::to_string(values.size()));
  const double n = static_cast<double>(values.size());
  const double mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  double ss = 0.0;
  for (double v : values)
    ss += (v - mean) * (v - mean);
  const double var = std::max(ss / (n - 1.0), kVarianceFloor);

  AsgnPriors priors;
  priors.mu_a = 0.0;
  priors.sigma2_a = 1.0;
  priors.mu_n = mean;
  priors.sigma2_n = var;
  priors.a_d = 2.0;
  priors.b_d = var;
  return priors;
}

AsgnPriors child_priors(const PosteriorSummary &parent) {
  AsgnPriors priors;
  priors.mu_a = parent.mean.alpha;
  priors.sigma2_a = 1.0;
  priors.mu_n = parent.mean.nu;
  priors.sigma2_n = 1.0;
  priors.a_d = 2.0;
  priors.b_d = parent.mean.delta2;
  return priors;
}

double percentile(std::vector<double> values, double p) {
  if (values.empty())
    throw Error(ErrorCode::invalid_argument, "percentile of empty sample");
  std::sort(values.begin(), values.end());
  const double h = p * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const auto hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (h - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

} // namespace mmcmc
