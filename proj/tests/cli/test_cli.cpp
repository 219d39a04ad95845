// Runs the mmcmc executable as a subprocess.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "test_support.hpp"

#include <cstdlib>
#include <regex>
#include <sstream>
#include <string>

#include <sys/wait.h>

namespace {

struct Run {
  int status;
  std::string out;
  std::string err;
};

Run run_cli(const testing::TempDir &dir, const std::string &args) {
  const auto out = dir / "stdout.txt";
  const auto err = dir / "stderr.txt";
  const std::string cmd = std::string("'") + MMCMC_CLI_PATH + "' " + args +
                          " >'" + out.string() + "' 2>'" + err.string() + "'";
  const int raw = std::system(cmd.c_str());
  REQUIRE(WIFEXITED(raw));
  return {WEXITSTATUS(raw), testing::slurp(out), testing::slurp(err)};
}

std::string q(const std::filesystem::path &p) { return "'" + p.string() + "'"; }

const std::string kFast = " --nburn 200 --niter 400";

std::size_t lines(const std::string &s) {
  return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n'));
}

// A 300-row pair from the simulate subcommand.
void simulate_pair(const testing::TempDir &dir, const std::string &sub = "sim") {
  const auto r = run_cli(dir, "simulate --rows 300 --samples 6 --n-dmrs 3 --seed 5 "
                            "--out-dir " + q(dir / sub));
  REQUIRE(r.status == 0);
}

} // namespace

TEST_CASE("every subcommand documents every flag with its default") {
  testing::TempDir dir;
  for (const char *sub : {"detect", "fit", "summarize", "compare", "plot",
                          "simulate", "evaluate"}) {
    CAPTURE(sub);
    const auto r = run_cli(dir, std::string(sub) + " --help");
    CHECK(r.status == 0);
    std::istringstream in(r.out);
    std::string line;
    std::size_t options = 0;
    while (std::getline(in, line)) {
      if (line.rfind("  --", 0) != 0)
        continue;
      ++options;
      CAPTURE(line);
      const bool documented = line.find('[') != std::string::npos ||
                              line.find("REQUIRED") != std::string::npos ||
                              line.find("(default:") != std::string::npos;
      CHECK(documented);
    }
    CHECK(options >= 1);
  }
}

TEST_CASE("detect defaults are the documented ones") {
  testing::TempDir dir;
  const auto r = run_cli(dir, "detect --help");
  for (const char *s : {"--max-stages INT [3]", "--num-splits UINT [50]",
                        "[0.5,0.8,1.05]", "--nburn INT [5000]",
                        "--niter INT [10000]", "--thin INT [1]"})
    CHECK(r.out.find(s) != std::string::npos);
}

TEST_CASE("missing --cancer is a usage error") {
  testing::TempDir dir;
  const auto r = run_cli(dir, "detect --normal " +
                                q(testing::data_path("normal_excerpt.csv")) +
                                " --out " + q(dir / "o.csv"));
  CHECK(r.status == 2);
  CHECK(r.err.find("--cancer") != std::string::npos);
  CHECK(lines(r.err) == 1);
}

TEST_CASE("no subcommand and bad values are usage errors") {
  testing::TempDir dir;
  CHECK(run_cli(dir, "").status == 2);
  CHECK(run_cli(dir, "frobnicate").status == 2);
  const std::string pair = " --cancer " +
                           q(testing::data_path("cancer_excerpt.csv")) +
                           " --normal " +
                           q(testing::data_path("normal_excerpt.csv")) +
                           " --out " + q(dir / "o.csv");
  CHECK(run_cli(dir, "detect" + pair + " --prior-cancer alpha=0").status == 2);
  CHECK(run_cli(dir, "detect" + pair + " --bf-thresholds 0.5,x,1").status == 2);
  CHECK(run_cli(dir, "detect" + pair + " --bf-thresholds 0.5,0.8").status == 2);
  CHECK(run_cli(dir, "detect" + pair + " --num-splits 1").status == 2);
  CHECK(run_cli(dir, "detect" + pair + " --threads 0").status == 2);
}

TEST_CASE("mismatched CpG order is a data error naming the row") {
  testing::TempDir dir;
  auto text = testing::slurp(testing::data_path("normal_excerpt.csv"));
  // Swap rows 2 and 3 of the data.
  std::istringstream in(text);
  std::vector<std::string> rows;
  for (std::string line; std::getline(in, line);)
    rows.push_back(line);
  std::swap(rows[2], rows[3]);
  std::string swapped;
  for (const auto &r : rows)
    swapped += r + "\n";
  testing::write_file(dir / "normal.csv", swapped);
  const auto r = run_cli(dir, "detect --cancer " +
                                q(testing::data_path("cancer_excerpt.csv")) +
                                " --normal " + q(dir / "normal.csv") +
                                " --out " + q(dir / "o.csv"));
  CHECK(r.status == 1);
  CHECK(r.err.find("row 2") != std::string::npos);
  CHECK(lines(r.err) == 1);
}

TEST_CASE("unparseable input is a data error") {
  testing::TempDir dir;
  testing::write_file(dir / "bad.csv", "CpG_ID,Chromosome,a\ncg1,1,abc\n");
  const auto r = run_cli(dir, "detect --cancer " + q(dir / "bad.csv") +
                                " --normal " + q(dir / "bad.csv") + " --out " +
                                q(dir / "o.csv"));
  CHECK(r.status == 1);
  CHECK(r.err.find("bad.csv:2") != std::string::npos);
}

TEST_CASE("detect writes the DMR table and reports progress on stderr") {
  testing::TempDir dir;
  const auto r = run_cli(dir, "detect --cancer " +
                                q(testing::data_path("cancer_excerpt.csv")) +
                                " --normal " +
                                q(testing::data_path("normal_excerpt.csv")) +
                                " --out " + q(dir / "o.csv") +
                                " --bf-thresholds=-inf,-inf,-inf --num-splits 3" +
                                kFast);
  REQUIRE(r.status == 0);
  CHECK(r.out.empty());
  CHECK(r.err.find("stage 1:") != std::string::npos);
  const auto table = testing::slurp(dir / "o.csv");
  CHECK(table.rfind("Chromosome,Start_CpG,End_CpG,CpG_Count,Decision_Value,Stage\n",
                    0) == 0);
  CHECK(table.find("6,cg00000721,") != std::string::npos);
}

TEST_CASE("detect is byte-identical across reruns and thread counts") {
  testing::TempDir dir;
  simulate_pair(dir);
  const std::string base = "detect --quiet --cancer " + q(dir / "sim/cancer.csv") +
                           " --normal " + q(dir / "sim/normal.csv") +
                           " --num-splits 6" + kFast;
  REQUIRE(run_cli(dir, base + " --seed 11 --out " + q(dir / "a.csv")).status == 0);
  REQUIRE(run_cli(dir, base + " --seed 11 --out " + q(dir / "b.csv")).status == 0);
  REQUIRE(run_cli(dir, base + " --seed 11 --threads 4 --out " + q(dir / "c.csv")).status == 0);
  const auto a = testing::slurp(dir / "a.csv");
  CHECK(a == testing::slurp(dir / "b.csv"));
  CHECK(a == testing::slurp(dir / "c.csv"));
  REQUIRE(run_cli(dir, base + " --seed 12 --out " + q(dir / "d.csv")).status == 0);
}

TEST_CASE("fit prints posterior summaries") {
  testing::TempDir dir;
  std::string values = "value\n";
  for (int i = 0; i < 40; ++i)
    values += std::to_string(2.0 + 0.5 * std::sin(i * 2.1)) + "\n";
  testing::write_file(dir / "v.csv", values);
  const std::string cmd = "fit --data " + q(dir / "v.csv") + kFast;
  const auto r = run_cli(dir, cmd);
  REQUIRE(r.status == 0);
  CHECK(r.out.rfind("parameter,mean,ci_lower,ci_upper,acceptance_rate\n", 0) == 0);
  CHECK(r.out.find("\nalpha,") != std::string::npos);
  CHECK(r.out.find("\nnu,") != std::string::npos);
  CHECK(r.out.find("\ndelta2,") != std::string::npos);
  CHECK(run_cli(dir, cmd).out == r.out);
  CHECK(run_cli(dir, cmd + " --prior alpha=0,mu=2,sigma2=1").status == 0);
  CHECK(run_cli(dir, cmd + " --prior mu=2").status == 2);
  REQUIRE(run_cli(dir, cmd + " --out " + q(dir / "f.csv")).status == 0);
  CHECK(testing::slurp(dir / "f.csv") == r.out);

  testing::write_file(dir / "two.csv", "1\n2\n");
  CHECK(run_cli(dir, "fit --data " + q(dir / "two.csv")).status == 1);
}

TEST_CASE("simulate, summarize, compare, plot and evaluate") {
  testing::TempDir dir;
  simulate_pair(dir, "s1");
  simulate_pair(dir, "s2");
  for (const char *f : {"cancer.csv", "normal.csv", "truth.csv"})
    CHECK(testing::slurp(dir / (std::string("s1/") + f)) ==
          testing::slurp(dir / (std::string("s2/") + f)));
  CHECK(testing::slurp(dir / "s1/truth.csv")
            .rfind("Chromosome,Start_CpG,End_CpG,Start_Row,End_Row,CpG_Count,Shift\n",
                   0) == 0);

  const std::string pair = " --cancer " + q(dir / "s1/cancer.csv") +
                           " --normal " + q(dir / "s1/normal.csv");
  REQUIRE(run_cli(dir, "detect --quiet" + pair + " --num-splits 5 --out " +
                         q(dir / "d.csv") + " --bf-thresholds=-inf,-inf,-inf" +
                         kFast)
              .status == 0);

  const auto s = run_cli(dir, "summarize --dmrs " + q(dir / "d.csv"));
  REQUIRE(s.status == 0);
  CHECK(s.out.find("Number of DMRs: 25") != std::string::npos);
  CHECK(run_cli(dir, "summarize --dmrs " + q(dir / "d.csv")).out == s.out);

  const auto c = run_cli(dir, "compare --a " + q(dir / "d.csv") + " --b " +
                                q(dir / "d.csv") + " --index " +
                                q(dir / "s1/cancer.csv"));
  REQUIRE(c.status == 0);
  CHECK(c.out.rfind("DMR_A,DMR_B,Shared_CpGs,Overlap_Percent\n1,1,", 0) == 0);
  CHECK(lines(c.out) == 26);
  CHECK(c.out.find(",100.0000\n") != std::string::npos);

  REQUIRE(run_cli(dir, "plot --dmrs " + q(dir / "d.csv") + pair +
                         " --index 2 --out " + q(dir / "p.svg"))
              .status == 0);
  REQUIRE(run_cli(dir, "plot --dmrs " + q(dir / "d.csv") + pair +
                         " --index 2 --out " + q(dir / "p2.svg"))
              .status == 0);
  const auto svg = testing::slurp(dir / "p.svg");
  CHECK(svg.find("<svg") != std::string::npos);
  CHECK(svg == testing::slurp(dir / "p2.svg"));
  CHECK(run_cli(dir, "plot --dmrs " + q(dir / "d.csv") + pair +
                       " --index 99 --out " + q(dir / "p3.svg"))
            .status == 1);

  const std::string eval = "evaluate --detected " + q(dir / "d.csv") +
                           " --truth " + q(dir / "s1/truth.csv") + " --index " +
                           q(dir / "s1/cancer.csv");
  const auto e = run_cli(dir, eval + " --runtime 1.5");
  REQUIRE(e.status == 0);
  CHECK(e.out.rfind("sensitivity,fdr,n_detected,n_false_discoveries,", 0) == 0);
  CHECK(e.out.find("1.000000,") != std::string::npos); // every truth is covered
  CHECK(e.out.find(",25,") != std::string::npos);
  CHECK(e.out.find(",1.500\n") != std::string::npos);
  CHECK(run_cli(dir, eval).out.find(",NA\n") != std::string::npos);
}

TEST_CASE("simulate reports infeasible configurations") {
  testing::TempDir dir;
  const auto r = run_cli(dir, "simulate --rows 50 --n-dmrs 5 --lengths 50 --out-dir " +
                                q(dir / "x"));
  CHECK(r.status == 1);
  CHECK(r.err.find("50") != std::string::npos);
}
