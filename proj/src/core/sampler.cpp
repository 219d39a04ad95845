// Metropolis-within-Gibbs sampler over (alpha, nu, log delta2).

#include "asgn.hpp"
#include "error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>
#include <string>

namespace mmcmc {

namespace {

constexpr double kInitialScale = 0.5;
constexpr double kTargetAcceptance = 0.35; // centre of the 0.2-0.5 band
constexpr double kAdaptExponent = 0.6;
constexpr double kMinLogScale = -12.0;
constexpr double kMaxLogScale = 4.0;

// Log posterior evaluated from sufficient statistics. The nu/delta2 part of
// the likelihood only needs the sample mean and sum of squares; the skewness
// factor needs a pass over the data.
class LogTarget {
public:
  LogTarget(std::span<const double> data, const AsgnPriors &priors)
      : data_(data), priors_(priors), n_(static_cast<double>(data.size())) {
    mean_ = std::accumulate(data.begin(), data.end(), 0.0) / n_;
    for (double y : data)
      ss_ += (y - mean_) * (y - mean_);
  }

  double mean() const { return mean_; }
  double variance() const { return ss_ / (n_ - 1.0); }

  double skew_term(double alpha) const {
    const double normalizer = gamma_3_2_ * alpha * alpha + gamma_1_2_;
    double sum = 0.0;
    for (double y : data_) {
      const double u = 1.0 - alpha * y;
      sum += std::log(u * u + 1.0);
    }
    return sum - n_ * std::log(4.0 * normalizer);
  }

  double kernel_term(double nu, double delta2) const {
    const double d = mean_ - nu;
    return -(ss_ + n_ * d * d) / (2.0 * delta2);
  }

  // Prior of alpha, nu and log(delta2) including the change-of-variable
  // Jacobian for the log scale.
  double prior_alpha(double alpha) const {
    const double d = alpha - priors_.mu_a;
    return -d * d / (2.0 * priors_.sigma2_a);
  }
  double prior_nu(double nu) const {
    const double d = nu - priors_.mu_n;
    return -d * d / (2.0 * priors_.sigma2_n);
  }
  double prior_log_delta2(double log_delta2) const {
    return -priors_.a_d * log_delta2 - priors_.b_d * std::exp(-log_delta2);
  }

private:
  std::span<const double> data_;
  AsgnPriors priors_;
  double n_;
  double mean_ = 0.0;
  double ss_ = 0.0;
  double gamma_3_2_ = std::tgamma(1.5);
  double gamma_1_2_ = std::tgamma(0.5);
};

struct ChainState {
  double alpha;
  double nu;
  double log_delta2;
  double skew;   // cached skew_term(alpha)
  double kernel; // cached kernel_term(nu, delta2)
};

} // namespace

PosteriorDraws asgn_sample(std::span<const double> data,
                           const AsgnPriors &priors, const McmcConfig &mcmc) {
  validate(priors);
  validate(mcmc);
  const auto values = finite_values(data);
  if (values.size() < 3)
    throw Error(ErrorCode::too_few_observations,
                "ASGN fit needs at least 3 finite observations, got " +
                    std::to_string(values.size()));

  const LogTarget target(values, priors);
  std::mt19937_64 rng(mcmc.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);

  ChainState s{};
  s.alpha = 0.0;
  s.nu = target.mean();
  s.log_delta2 = std::log(std::max(target.variance(), kVarianceFloor));
  s.skew = target.skew_term(s.alpha);
  s.kernel = target.kernel_term(s.nu, std::exp(s.log_delta2));

  std::array<double, 3> log_scale;
  log_scale.fill(std::log(kInitialScale));
  std::array<std::int64_t, 3> accepted{};

  auto accept = [&](double log_ratio) {
    if (!std::isfinite(log_ratio))
      return false;
    return log_ratio >= 0.0 || std::log(uniform(rng)) < log_ratio;
  };

  PosteriorDraws out;
  out.samples.reserve(static_cast<std::size_t>(mcmc.retained()));
  const std::int64_t total = mcmc.nburn + mcmc.niter;

  for (std::int64_t it = 0; it < total; ++it) {
    const bool burning = it < mcmc.nburn;
    std::array<bool, 3> moved{};

    {
      const double prop = s.alpha + std::exp(log_scale[0]) * normal(rng);
      const double skew = target.skew_term(prop);
      const double ratio = skew + target.prior_alpha(prop) - s.skew -
                           target.prior_alpha(s.alpha);
      if (accept(ratio)) {
        s.alpha = prop;
        s.skew = skew;
        moved[0] = true;
      }
    }
    {
      const double prop = s.nu + std::exp(log_scale[1]) * normal(rng);
      const double kernel = target.kernel_term(prop, std::exp(s.log_delta2));
      const double ratio =
          kernel + target.prior_nu(prop) - s.kernel - target.prior_nu(s.nu);
      if (accept(ratio)) {
        s.nu = prop;
        s.kernel = kernel;
        moved[1] = true;
      }
    }
    {
      const double prop = s.log_delta2 + std::exp(log_scale[2]) * normal(rng);
      const double kernel = target.kernel_term(s.nu, std::exp(prop));
      const double ratio = kernel + target.prior_log_delta2(prop) - s.kernel -
                           target.prior_log_delta2(s.log_delta2);
      if (accept(ratio)) {
        s.log_delta2 = prop;
        s.kernel = kernel;
        moved[2] = true;
      }
    }

    if (burning) {
      const double step =
          1.0 / std::pow(static_cast<double>(it + 1), kAdaptExponent);
      for (std::size_t k = 0; k < 3; ++k) {
        log_scale[k] += step * ((moved[k] ? 1.0 : 0.0) - kTargetAcceptance);
        log_scale[k] = std::clamp(log_scale[k], kMinLogScale, kMaxLogScale);
      }
      continue;
    }

    for (std::size_t k = 0; k < 3; ++k)
      accepted[k] += moved[k] ? 1 : 0;
    const std::int64_t post = it - mcmc.nburn + 1;
    if (post % mcmc.thin == 0)
      out.samples.push_back({s.alpha, s.nu, std::exp(s.log_delta2)});
  }

  for (std::size_t k = 0; k < 3; ++k) {
    out.acceptance_rates[k] =
        static_cast<double>(accepted[k]) / static_cast<double>(mcmc.niter);
    out.proposal_scales[k] = std::exp(log_scale[k]);
  }
  return out;
}

PosteriorSummary summarize_draws(const PosteriorDraws &draws) {
  if (draws.samples.size() < 2)
    throw Error(ErrorCode::invalid_argument,
                "posterior summary needs at least 2 retained draws");
  const auto n = draws.samples.size();
  std::vector<double> alpha(n), nu(n), delta2(n);
  for (std::size_t i = 0; i < n; ++i) {
    alpha[i] = draws.samples[i].alpha;
    nu[i] = draws.samples[i].nu;
    delta2[i] = draws.samples[i].delta2;
  }
  auto mean_of = [n](const std::vector<double> &v) {
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(n);
  };

  PosteriorSummary out;
  out.mean = {mean_of(alpha), mean_of(nu), mean_of(delta2)};
  out.ci_lower = {percentile(alpha, 0.025), percentile(nu, 0.025),
                  percentile(delta2, 0.025)};
  out.ci_upper = {percentile(alpha, 0.975), percentile(nu, 0.975),
                  percentile(delta2, 0.975)};
  out.acceptance_rates = draws.acceptance_rates;
  out.n_retained = static_cast<std::int64_t>(n);
  return out;
}

PosteriorSummary asgn_fit(std::span<const double> data,
                          const AsgnPriors &priors, const McmcConfig &mcmc) {
  return summarize_draws(asgn_sample(data, priors, mcmc));
}

} // namespace mmcmc
