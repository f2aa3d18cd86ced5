#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include "riskowa/io.hpp"
#include "riskowa/knapsack.hpp"
#include "test_support.hpp"

using namespace riskowa;
using riskowa::testing::data_path;

namespace {

struct Run {
  int status = -1;
  std::string out;  // stdout and stderr together
};

Run cli(const std::string& args) {
  const std::string cmd = std::string(RISKOWA_CLI_PATH) + " " + args + " 2>&1";
  Run run;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  char buf[4096];
  std::size_t n;
  while ((n = std::fread(buf, 1, sizeof buf, pipe)) > 0) run.out.append(buf, n);
  const int raw = pclose(pipe);
  run.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return run;
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) out.push_back(line);
  return out;
}

class TempDir {
 public:
  TempDir() {
    path_ = std::filesystem::temp_directory_path() /
            ("riskowa_cli_" + std::to_string(::getpid()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() { std::filesystem::remove_all(path_); }
  std::string file(const std::string& name) const { return (path_ / name).string(); }

 private:
  std::filesystem::path path_;
};

const std::string kProbs = "--probs 0.15,0.20,0.30,0.25,0.10";
const std::string kImps = "--importances 0.20,0.10,0.20,0.25,0.15,0.10";

}  // namespace

TEST_CASE("eval prints the beta-averages and h") {
  const auto run = cli("eval --matrix " + data_path("alt1.csv") + " " + kProbs + " " + kImps +
                       " --beta 0.3 --r 0.17");
  CHECK(run.status == 0);
  const auto out = lines(run.out);
  REQUIRE(out.size() == 7);
  CHECK(out[0] == "g_1 0.793333");
  CHECK(out[4] == "g_5 0.930000");
  CHECK(out[6] == "h 0.926471");
}

TEST_CASE("eval on a single cell") {
  TempDir dir;
  io::write_file(dir.file("one.csv"), "2.5\n");
  const auto run = cli("eval --matrix " + dir.file("one.csv") +
                       " --probs 1 --importances 1 --beta 0.4 --r 0.9");
  CHECK(run.status == 0);
  CHECK(run.out == "g_1 2.500000\nh 2.500000\n");
}

TEST_CASE("eval rejects bad input with exit code 2") {
  const auto run = cli("eval --matrix " + data_path("alt1.csv") + " " + kProbs + " " + kImps +
                       " --beta 0 --r 0.17");
  CHECK(run.status == 2);
  CHECK(run.out.find("beta must be in (0,1]") != std::string::npos);

  const auto probs = cli("eval --matrix " + data_path("alt1.csv") +
                         " --probs 0.5,0.5 " + kImps + " --beta 0.3 --r 0.17");
  CHECK(probs.status == 2);
  CHECK(cli("eval --matrix /nonexistent.csv " + kProbs + " " + kImps + " --beta 0.3 --r 0.17")
            .status == 2);
  CHECK(cli("frobnicate").status == 2);
}

TEST_CASE("sweep") {
  const std::string alts = "--alternatives " + data_path("illustrative.json");
  const auto single = cli("sweep " + alts + " --betas 0.3 --rs 0.17");
  CHECK(single.status == 0);
  const auto out = lines(single.out);
  REQUIRE(out.size() == 2);
  CHECK(out[0] == "beta,r,winner,h");
  CHECK(out[1].rfind("0.29999999999999999,0.17000000000000001,alt1,", 0) == 0);

  const std::string grid = "0.01,0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9,1";
  const auto full = cli("sweep " + alts + " --betas " + grid + " --rs " + grid);
  CHECK(full.status == 0);
  CHECK(lines(full.out).size() == 1 + 121);

  CHECK(cli("sweep " + alts + " --betas '' --rs 0.17").status == 2);
  CHECK(cli("sweep " + alts + " --betas 0.3 --rs 0,0.5").status == 2);
  CHECK(cli("sweep --alternatives " + data_path("alt1.csv") + " --betas 0.3 --rs 0.5").status == 2);
}

TEST_CASE("rank applies the second phase") {
  const auto run = cli("rank --alternatives " + data_path("dominated.json") +
                       " --beta 0.5 --r 0.6666666666666666");
  CHECK(run.status == 0);
  const auto out = lines(run.out);
  REQUIRE(out.size() == 3);
  CHECK(out[1].rfind("alt1,", 0) == 0);
  CHECK(out[1].substr(out[1].size() - 4) == ",1,1");
  CHECK(out[2].substr(out[2].size() - 4) == ",1,0");
}

TEST_CASE("gen is deterministic and readable") {
  TempDir dir;
  const std::string args = "gen --items 10 --scenarios 5 --criteria 3 --seed 7 -o ";
  REQUIRE(cli(args + dir.file("a.json")).status == 0);
  REQUIRE(cli(args + dir.file("b.json")).status == 0);
  const auto a = io::read_file(dir.file("a.json"));
  CHECK(a == io::read_file(dir.file("b.json")));
  CHECK(io::parse_instance_json(a) == generate_instance(10, 5, 3, 7));
  CHECK(cli("gen --items 0 --scenarios 5 --criteria 3 --seed 7").status == 2);
}

TEST_CASE("solve --msp matches exhaustive enumeration") {
  TempDir dir;
  REQUIRE(cli("gen --items 12 --scenarios 6 --criteria 3 --seed 11 -o " + dir.file("i.json"))
              .status == 0);
  const auto run = cli("solve --instance " + dir.file("i.json") + " --msp --beta 0.1 --r 0.5");
  CHECK(run.status == 0);
  const auto out = lines(run.out);
  REQUIRE(out.size() == 2);
  CHECK(out[0] == "model,objective,bound,nodes,exact,x");

  const auto inst = generate_instance(12, 6, 3, 11);
  const auto oracle = exhaustive_oracle(inst, RiskParams(0.1, 0.5));
  std::istringstream row(out[1]);
  std::string model, objective;
  std::getline(row, model, ',');
  std::getline(row, objective, ',');
  CHECK(model == "msp");
  CHECK(std::abs(std::stod(objective) - oracle.objective) <= 1e-9);

  const auto both = cli("solve --instance " + dir.file("i.json") + " --both --beta 0.1 --r 0.5");
  CHECK(both.status == 0);
  const auto both_out = lines(both.out);
  REQUIRE(both_out.size() == 5);
  CHECK(both_out[3].rfind("delta_avg,", 0) == 0);
  CHECK(both_out[4].rfind("delta_tail,", 0) == 0);
}

TEST_CASE("solve exits 3 when the node budget leaves a gap") {
  TempDir dir;
  REQUIRE(cli("gen --items 30 --scenarios 10 --criteria 3 --seed 2 -o " + dir.file("i.json"))
              .status == 0);
  const auto run = cli("solve --instance " + dir.file("i.json") +
                       " --msp --beta 0.1 --r 0.5 --node-budget 2");
  CHECK(run.status == 3);
  const auto out = lines(run.out);
  REQUIRE(out.size() == 2);
  CHECK(out[1].rfind("msp,", 0) == 0);
}

TEST_CASE("export matches the golden file") {
  TempDir dir;
  const auto run = cli("export --instance " + data_path("seeded5.json") +
                       " --beta 0.3 --r 0.5 -o " + dir.file("m.lp"));
  CHECK(run.status == 0);
  CHECK(io::read_file(dir.file("m.lp")) ==
        io::read_file(std::string(RISKOWA_TEST_DATA) + "/golden/seeded5.lp"));
}

TEST_CASE("experiment writes one row per instance and pair") {
  TempDir dir;
  const auto run = cli("experiment --items 8 --scenarios 3 --criteria 2 --betas 0.1,0.5 "
                       "--rs 0.5 --seeds 1-3 -o " + dir.file("e.csv"));
  CHECK(run.status == 0);
  const auto out = lines(io::read_file(dir.file("e.csv")));
  REQUIRE(out.size() == 1 + 6);
  CHECK(out[0] == "n_items,n_scenarios,n_criteria,beta,r,seed,t_msp,t_mip,delta_time,"
                  "delta_avg,delta_tail,gap");
  CHECK(cli("experiment --seeds 3-1 -o " + dir.file("x.csv")).status == 2);
}
