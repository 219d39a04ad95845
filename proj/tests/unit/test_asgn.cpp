#include "asgn.hpp"
#include "error.hpp"
#include "test_support.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

using namespace mmcmc;
using testing::normal_pdf;

namespace {

// Independent evaluation with Gamma(3/2) = sqrt(pi)/2 and Gamma(1/2) = sqrt(pi).
double density_oracle(double y, double alpha, double nu, double delta2) {
  const double sqrt_pi = std::sqrt(std::numbers::pi);
  const double u = 1.0 - alpha * y;
  return std::sqrt(2.0) * (u * u + 1.0) /
         (4.0 * (0.5 * sqrt_pi * alpha * alpha + sqrt_pi)) *
         std::exp(-(y - nu) * (y - nu) / (2.0 * delta2));
}

std::vector<double> normal_draws(std::size_t n, double mean, double sd,
                                 std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> d(mean, sd);
  std::vector<double> out(n);
  for (auto &v : out)
    v = d(rng);
  return out;
}

McmcConfig short_chain(std::uint64_t seed = 1) {
  return {500, 1000, 1, seed};
}

} // namespace

TEST_CASE("density at the standard normal mode") {
  CHECK(asgn_density(0.0, {0.0, 0.0, 1.0}) == doctest::Approx(0.3989423).epsilon(1e-7));
  CHECK(asgn_log_density(0.0, {0.0, 0.0, 1.0}) ==
        doctest::Approx(-0.9189385).epsilon(1e-7));
}

TEST_CASE("density with unit skew at zero") {
  CHECK(std::abs(asgn_density(0.0, {1.0, 0.0, 1.0}) - 0.2659615) < 1e-6);
  CHECK(asgn_density(0.0, {1.0, 0.0, 1.0}) ==
        doctest::Approx(2.828427 / 10.634723).epsilon(1e-6));
}

TEST_CASE("density three units from the mode") {
  CHECK(std::abs(asgn_density(3.0, {0.0, 0.0, 1.0}) - 0.0044318) < 1e-7);
}

TEST_CASE("log density at the location is free of the scale when alpha is 0") {
  for (double nu : {-3.0, 0.5, 7.0})
    for (double d2 : {0.01, 1.0, 50.0})
      CHECK(asgn_log_density(nu, {0.0, nu, d2}) ==
            doctest::Approx(-0.5 * std::log(2.0 * std::numbers::pi)));
}

TEST_CASE("density matches the closed form for arbitrary parameters") {
  for (double alpha : {-3.0, -1.5, 0.0, 0.7, 4.0})
    for (double y : {-4.0, -0.3, 0.0, 1.1, 5.0})
      CHECK(asgn_density(y, {alpha, 0.4, 2.0}) ==
            doctest::Approx(density_oracle(y, alpha, 0.4, 2.0)).epsilon(1e-12));
}

TEST_CASE("density rejects a non-positive scale") {
  CHECK_THROWS_AS(asgn_density(0.0, {0.0, 0.0, 0.0}), Error);
  CHECK_THROWS_AS(asgn_density(0.0, {0.0, 0.0, -1.0}), Error);
  try {
    asgn_log_density(0.0, {0.0, 0.0, -1.0});
  } catch (const Error &e) {
    CHECK(e.code() == ErrorCode::domain);
  }
}

TEST_CASE("log prior closed form") {
  const AsgnPriors p{0, 1, 0, 1, 1, 1};
  CHECK(log_prior({0.0, 0.0, 1.0}, p) ==
        doctest::Approx(-2.8378771).epsilon(1e-7));
}

TEST_CASE("log prior normal terms peak at the prior means") {
  const AsgnPriors p{0.3, 2.0, -1.0, 0.5, 2.0, 1.0};
  const double ig = 2.0 * std::log(1.0) - std::lgamma(2.0) - 3.0 * std::log(1.5) -
                    1.0 / 1.5;
  const double expected = -0.5 * std::log(2.0 * std::numbers::pi * 2.0) -
                          0.5 * std::log(2.0 * std::numbers::pi * 0.5) + ig;
  CHECK(log_prior({0.3, -1.0, 1.5}, p) == doctest::Approx(expected));
  CHECK(log_prior({0.3, -1.0, 1.5}, p) > log_prior({0.4, -1.0, 1.5}, p));
  CHECK(log_prior({0.3, -1.0, 1.5}, p) > log_prior({0.3, -0.9, 1.5}, p));
}

TEST_CASE("log prior rejects a non-positive scale") {
  CHECK_THROWS_AS(log_prior({0.0, 0.0, 0.0}, AsgnPriors{}), Error);
}

TEST_CASE("default priors from data") {
  SUBCASE("constant data engages the variance floor") {
    const std::vector<double> d{0, 0, 0, 0};
    const auto p = default_priors(d);
    CHECK(p.mu_n == 0.0);
    CHECK(p.sigma2_n == doctest::Approx(0.01));
    CHECK(p.b_d == doctest::Approx(0.01));
  }
  SUBCASE("mean and sample variance") {
    const std::vector<double> d{1, 2, 3};
    const auto p = default_priors(d);
    CHECK(p.mu_n == doctest::Approx(2.0));
    CHECK(p.sigma2_n == doctest::Approx(1.0));
    CHECK(p.b_d == doctest::Approx(1.0));
    CHECK(p.mu_a == 0.0);
    CHECK(p.sigma2_a == 1.0);
    CHECK(p.a_d == 2.0);
  }
  SUBCASE("missing values are ignored") {
    const std::vector<double> d{1, testing::kNaN, 2, 3};
    CHECK(default_priors(d).mu_n == doctest::Approx(2.0));
  }
  SUBCASE("fewer than three observations") {
    const std::vector<double> d{1, testing::kNaN, 2};
    try {
      default_priors(d);
      FAIL("expected an error");
    } catch (const Error &e) {
      CHECK(e.code() == ErrorCode::too_few_observations);
    }
  }
}

TEST_CASE("child priors carry the parent means forward") {
  PosteriorSummary parent;
  parent.mean = {0.5, 1.2, 0.8};
  CHECK(child_priors(parent) == AsgnPriors{0.5, 1.0, 1.2, 1.0, 2.0, 0.8});
  parent.mean.alpha = 0.0;
  CHECK(child_priors(parent).mu_a == 0.0);
}

TEST_CASE("child priors keep unit variances across generations") {
  const auto data = normal_draws(30, 1.0, 0.7, 5);
  auto priors = default_priors(data);
  for (int gen = 0; gen < 3; ++gen) {
    priors = child_priors(asgn_fit(data, priors, short_chain(gen)));
    CHECK(priors.sigma2_a == 1.0);
    CHECK(priors.sigma2_n == 1.0);
  }
}

TEST_CASE("percentile uses linear interpolation") {
  CHECK(percentile({1, 2, 3, 4}, 0.5) == doctest::Approx(2.5));
  CHECK(percentile({10, 0}, 0.25) == doctest::Approx(2.5));
  CHECK(percentile({7}, 0.975) == 7.0);
  CHECK(percentile({1, 2, 3, 4, 5}, 0.025) == doctest::Approx(1.1));
}

TEST_CASE("fit rejects bad input") {
  const std::vector<double> two{1.0, 2.0};
  CHECK_THROWS_AS(asgn_fit(two, AsgnPriors{}, short_chain()), Error);
  const std::vector<double> data{1.0, 2.0, 3.0};
  CHECK_THROWS_AS(asgn_fit(data, AsgnPriors{}, {0, 1, 1, 0}), Error);
  CHECK_THROWS_AS(asgn_fit(data, AsgnPriors{}, {0, 10, 0, 0}), Error);
  CHECK_THROWS_AS(asgn_fit(data, AsgnPriors{}, {-1, 10, 1, 0}), Error);
  CHECK_THROWS_AS(asgn_fit(data, AsgnPriors{0, -1, 0, 1, 2, 1}, short_chain()),
                  Error);
}

TEST_CASE("fit retains niter / thin draws") {
  const auto data = normal_draws(20, 0.0, 1.0, 2);
  const auto s = asgn_fit(data, default_priors(data), {100, 1000, 7, 3});
  CHECK(s.n_retained == 142);
}

// The posterior factorizes into an alpha part and a (nu, delta2) part. With
// mu_n at the sample mean, nu integrates out in closed form, which leaves one
// dimensional marginals that are integrated numerically here.
TEST_CASE("fit matches quadrature of the marginal posteriors") {
  const auto data = normal_draws(200, 2.0, 0.5, 20240611);
  const auto p = default_priors(data);
  const double n = static_cast<double>(data.size());
  double mean = 0.0, ss = 0.0;
  for (double y : data)
    mean += y / n;
  for (double y : data)
    ss += (y - mean) * (y - mean);

  double za = 0.0, ea = 0.0;
  for (double a = -8.0; a < 8.0; a += 1e-3) {
    double l = -(a - p.mu_a) * (a - p.mu_a) / (2.0 * p.sigma2_a) -
               n * std::log(std::sqrt(std::numbers::pi) * (0.5 * a * a + 1.0));
    for (double y : data)
      l += std::log((1.0 - a * y) * (1.0 - a * y) + 1.0);
    const double w = std::exp(l - 900.0);
    za += w;
    ea += w * a;
  }

  // delta2 on a log grid: x^-A exp(-(B + ss/2) / x) sqrt(x / (x + n s2n)).
  std::vector<double> grid, cdf;
  double zd = 0.0;
  for (double t = -6.0; t < 14.0; t += 1e-4) {
    const double x = std::exp(t);
    const double l = -p.a_d * t - (p.b_d + ss / 2.0) / x +
                     0.5 * (t - std::log(x + n * p.sigma2_n));
    zd += std::exp(l + 20.0);
    grid.push_back(x);
    cdf.push_back(zd);
  }
  auto quantile = [&](double q) {
    return grid[static_cast<std::size_t>(
        std::lower_bound(cdf.begin(), cdf.end(), q * zd) - cdf.begin())];
  };

  const auto s = asgn_fit(data, p, {2000, 4000, 1, 7});
  CHECK(s.mean.alpha == doctest::Approx(ea / za).epsilon(0.02));
  CHECK(s.mean.nu == doctest::Approx(mean).epsilon(0.05));
  CHECK(s.ci_lower.delta2 == doctest::Approx(quantile(0.025)).epsilon(0.1));
  CHECK(s.ci_upper.delta2 == doctest::Approx(quantile(0.975)).epsilon(0.25));
  // No 1/delta factor, so delta2 is pulled far above the generating 0.25.
  CHECK(s.mean.delta2 > 10.0);
}

TEST_SUITE("properties") {

TEST_CASE("alpha zero and unit scale reduce to the normal density") {
  for (double nu : {-2.0, 0.0, 3.0, -0.37, 11.0})
    for (int i = -100; i <= 100; ++i) {
      const double y = i / 10.0;
      CHECK(std::abs(asgn_density(y, {0.0, nu, 1.0}) - normal_pdf(y, nu, 1.0)) <
            1e-12);
    }
}

TEST_CASE("density is positive and finite for valid parameters") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> alpha(-20, 20), nu(-10, 10),
      d2(1e-3, 100), y(-30, 30);
  for (int i = 0; i < 2000; ++i) {
    const AsgnParams p{alpha(rng), nu(rng), d2(rng)};
    const double v = y(rng);
    const double f = asgn_density(v, p);
    CHECK(std::isfinite(asgn_log_density(v, p)));
    CHECK(f >= 0.0);
    CHECK(std::isfinite(f));
  }
  // Positive wherever it does not underflow.
  CHECK(asgn_density(0.1, {5.0, 0.0, 1.0}) > 0.0);
}

TEST_CASE("exp of the log density equals the density") {
  for (double alpha : {-2.5, 0.0, 0.8, 3.0})
    for (int i = -100; i <= 100; ++i) {
      const double y = i / 10.0;
      const AsgnParams p{alpha, 0.5, 1.7};
      const double f = asgn_density(y, p);
      CHECK(std::abs(std::exp(asgn_log_density(y, p)) - f) <= 1e-12 * f);
    }
}

TEST_CASE("density integrates to one at unit scale for any alpha") {
  for (double alpha : {-3.0, -2.0, -1.5, 0.0, 0.5, 2.0, 6.0}) {
    // Trapezoid rule on [-40, 40]; the tails are negligible.
    const double h = 1e-3;
    double total = 0.0;
    for (int i = -40000; i <= 40000; ++i) {
      const double w = (i == -40000 || i == 40000) ? 0.5 : 1.0;
      total += w * asgn_density(i * h, {alpha, 0.0, 1.0});
    }
    CHECK(total * h == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("fit is deterministic for a seed and varies across seeds") {
  const auto data = normal_draws(25, -1.0, 0.8, 11);
  const auto priors = default_priors(data);
  const auto a = asgn_sample(data, priors, short_chain(5));
  const auto b = asgn_sample(data, priors, short_chain(5));
  const auto c = asgn_sample(data, priors, short_chain(6));
  CHECK(a.samples == b.samples);
  CHECK(asgn_fit(data, priors, short_chain(5)) ==
        asgn_fit(data, priors, short_chain(5)));
  CHECK(a.samples != c.samples);
}

TEST_CASE("acceptance rates lie strictly inside (0, 1)") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto data = normal_draws(40, 0.5 * seed, 1.0 + seed, 100 + seed);
    const auto s = asgn_fit(data, default_priors(data), short_chain(seed));
    for (double r : s.acceptance_rates) {
      CHECK(r > 0.0);
      CHECK(r < 1.0);
    }
  }
}

TEST_CASE("credible intervals are ordered") {
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    const auto data = normal_draws(10 + 5 * seed, 0.0, 2.0, seed);
    const auto s = asgn_fit(data, default_priors(data), short_chain(seed));
    CHECK(s.ci_lower.alpha <= s.ci_upper.alpha);
    CHECK(s.ci_lower.nu <= s.ci_upper.nu);
    CHECK(s.ci_lower.delta2 <= s.ci_upper.delta2);
    CHECK(s.mean.delta2 > 0.0);
  }
}

TEST_CASE("log prior is unbounded below at the edges") {
  const AsgnPriors p{0, 1, 0, 1, 2, 1};
  double prev = log_prior({0.0, 0.0, 1e-1}, p);
  for (double d2 : {1e-2, 1e-3, 1e-4, 1e-6}) {
    const double lp = log_prior({0.0, 0.0, d2}, p);
    CHECK(lp < prev);
    prev = lp;
  }
  CHECK(prev < -1e5);
  prev = log_prior({0.0, 0.0, 1.0}, p);
  for (double a : {1.0, 10.0, 100.0, 1000.0}) {
    const double lp = log_prior({a, 0.0, 1.0}, p);
    CHECK(lp < prev);
    CHECK(log_prior({-a, 0.0, 1.0}, p) == doctest::Approx(lp));
    prev = lp;
  }
  CHECK(prev < -1e5);
}

} // TEST_SUITE
