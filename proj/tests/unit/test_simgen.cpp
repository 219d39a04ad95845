#include "error.hpp"
#include "simgen.hpp"
#include "test_support.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

using namespace mmcmc;

namespace {

MethylationMatrix baseline(std::size_t rows = 5000, std::size_t samples = 6) {
  return synthetic_baseline({{"6", rows}}, samples, 42);
}

} // namespace

TEST_CASE("default simulation injects ten disjoint regions") {
  const auto base = baseline();
  SimConfig cfg;
  cfg.seed = 1;
  const auto sim = simulate_dataset(base, cfg);
  REQUIRE(sim.truth.size() == 10);
  for (std::size_t i = 0; i < sim.truth.size(); ++i) {
    const auto &t = sim.truth[i];
    const auto len = t.size();
    CHECK((len == 10 || len == 20 || len == 50));
    CHECK((t.shift == 1.0 || t.shift == 2.0));
    if (i > 0)
      CHECK(t.start_row > sim.truth[i - 1].end_row);
  }
  CHECK(sim.cancer.cpg_ids() == base.cpg_ids());
  CHECK_NOTHROW(validate_pair(sim.cancer, sim.normal));
}

TEST_CASE("simulation is deterministic given the seed") {
  const auto base = baseline(800);
  SimConfig cfg;
  cfg.seed = 9;
  const auto a = simulate_dataset(base, cfg);
  const auto b = simulate_dataset(base, cfg);
  CHECK(a.truth == b.truth);
  CHECK(std::ranges::equal(a.cancer.values(), b.cancer.values()));
  CHECK(std::ranges::equal(a.normal.values(), b.normal.values()));
  cfg.seed = 10;
  const auto c = simulate_dataset(base, cfg);
  CHECK(!std::ranges::equal(a.cancer.values(), c.cancer.values()));
}

TEST_CASE("infeasible placement is an error") {
  const auto base = baseline(100);
  SimConfig cfg;
  cfg.lengths = {50};
  cfg.n_dmrs = 3;
  try {
    simulate_dataset(base, cfg);
    FAIL("expected an error");
  } catch (const Error &e) {
    CHECK(e.code() == ErrorCode::infeasible);
  }
}

TEST_CASE("simulation rejects bad configurations") {
  const auto base = baseline(100);
  SimConfig cfg;
  cfg.noise_sd = -1.0;
  CHECK_THROWS_AS(simulate_dataset(base, cfg), Error);
  cfg = {};
  cfg.lengths = {0};
  CHECK_THROWS_AS(simulate_dataset(base, cfg), Error);
  cfg = {};
  cfg.shifts.clear();
  CHECK_THROWS_AS(simulate_dataset(base, cfg), Error);
}

TEST_CASE("evaluate counts matches by shared rows") {
  const GroundTruth truth{{10, 19, 1.0}, {50, 69, 2.0}};
  SUBCASE("exact detections") {
    const auto m = evaluate(std::vector<RowRange>{{10, 19}, {50, 69}}, truth);
    CHECK(m.sensitivity == 1.0);
    CHECK(m.fdr == 0.0);
    CHECK(m.cpg_precision == 1.0);
    CHECK(m.cpg_recall == 1.0);
  }
  SUBCASE("no detections") {
    const auto m = evaluate(std::vector<RowRange>{}, truth);
    CHECK(m.sensitivity == 0.0);
    CHECK(m.fdr == 0.0);
  }
  SUBCASE("one hit and one spurious region") {
    const auto m = evaluate(std::vector<RowRange>{{19, 25}, {100, 110}}, truth);
    CHECK(m.n_truth_found == 1);
    CHECK(m.n_false_discoveries == 1);
    CHECK(m.sensitivity == 0.5);
    CHECK(m.fdr == 0.5);
  }
}

TEST_CASE("evaluate resolves IDs through the index") {
  const auto base = baseline(100);
  const GroundTruth truth{{10, 19, 1.0}};
  const DmrTable hit{{"6", base.cpg_ids()[15], base.cpg_ids()[30], 16, 2.0, 3}};
  CHECK(evaluate(hit, truth, base).sensitivity == 1.0);
  const DmrTable unknown{{"6", "nope", base.cpg_ids()[30], 16, 2.0, 3}};
  CHECK_THROWS_AS(evaluate(unknown, truth, base), Error);
}

TEST_CASE("truth CSV round trip") {
  const auto base = baseline(100);
  const GroundTruth truth{{3, 12, 1.0}, {40, 89, 2.0}};
  std::ostringstream out;
  write_truth(truth, base, out);
  CHECK(out.str().rfind(std::string(kTruthHeader) + "\n6,cg00000003,cg00000012,3,12,10,1\n", 0) == 0);
  std::istringstream in(out.str());
  CHECK(read_truth(in) == truth);
}

TEST_CASE("synthetic baseline layout") {
  const auto m = synthetic_baseline({{"1", 30}, {"2", 20}}, 4, 7);
  CHECK(m.n_rows() == 50);
  CHECK(m.n_samples() == 4);
  CHECK(m.cpg_ids()[0] == "cg00000000");
  CHECK(m.cpg_ids()[49] == "cg00000049");
  REQUIRE(m.chromosome_runs().size() == 2);
  CHECK(m.chromosome_runs()[1].start_row == 30);
  CHECK(m.sample_names()[0] == "M_sample_1");
}

TEST_SUITE("properties") {

TEST_CASE("noiseless difference equals the injected shift") {
  const auto base = baseline(2000, 5);
  SimConfig cfg;
  cfg.noise_sd = 0.0;
  cfg.seed = 3;
  const auto sim = simulate_dataset(base, cfg);
  std::vector<double> expected(base.n_rows(), 0.0);
  for (const auto &t : sim.truth)
    for (auto r = t.start_row; r <= t.end_row; ++r)
      expected[r] = t.shift;
  for (std::size_t r = 0; r < base.n_rows(); ++r)
    for (std::size_t j = 0; j < base.n_samples(); ++j) {
      CHECK(sim.normal.value(r, j) == base.value(r, j));
      CHECK(sim.cancer.value(r, j) - sim.normal.value(r, j) ==
            doctest::Approx(expected[r]).epsilon(1e-12));
    }
}

TEST_CASE("noisy group-mean difference tracks the shift") {
  const std::size_t ns = 40;
  const auto base = baseline(3000, ns);
  SimConfig cfg;
  cfg.seed = 4;
  const auto sim = simulate_dataset(base, cfg);
  std::vector<double> expected(base.n_rows(), 0.0);
  for (const auto &t : sim.truth)
    for (auto r = t.start_row; r <= t.end_row; ++r)
      expected[r] = t.shift;
  // Difference of two means of ns draws has sd noise_sd * sqrt(2 / ns).
  const double tol = 3.0 * cfg.noise_sd * std::sqrt(2.0 / ns);
  std::size_t outside = 0;
  for (std::size_t r = 0; r < base.n_rows(); ++r) {
    double diff = 0.0;
    for (std::size_t j = 0; j < ns; ++j)
      diff += sim.cancer.value(r, j) - sim.normal.value(r, j);
    diff /= static_cast<double>(ns);
    outside += std::abs(diff - expected[r]) > tol;
  }
  // A 3-sigma band is exceeded by about 0.27% of rows.
  CHECK(outside < base.n_rows() / 100);
}

TEST_CASE("truth intervals are disjoint and stay on one chromosome") {
  const auto base = synthetic_baseline({{"1", 300}, {"2", 200}, {"3", 250}}, 3, 8);
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    SimConfig cfg;
    cfg.seed = seed;
    const auto sim = simulate_dataset(base, cfg);
    for (std::size_t i = 0; i < sim.truth.size(); ++i) {
      const auto &t = sim.truth[i];
      CHECK(base.chromosomes()[t.start_row] == base.chromosomes()[t.end_row]);
      if (i > 0)
        CHECK(t.start_row > sim.truth[i - 1].end_row);
    }
  }
}

TEST_CASE("adding a detection on a missed truth never lowers sensitivity") {
  std::mt19937_64 rng(6);
  std::uniform_int_distribution<std::size_t> pos(0, 900), len(1, 40);
  const GroundTruth truth{{100, 119, 1}, {300, 349, 2}, {600, 609, 1},
                          {800, 819, 2}};
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<RowRange> detected;
    for (int k = 0; k < 3; ++k) {
      const auto a = pos(rng);
      detected.push_back({a, a + len(rng)});
    }
    const auto before = evaluate(detected, truth);
    for (const auto &t : truth) {
      auto more = detected;
      more.push_back({t.start_row + 1, t.end_row});
      CHECK(evaluate(more, truth).sensitivity >= before.sensitivity);
    }
  }
}

} // TEST_SUITE
