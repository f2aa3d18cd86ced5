#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "riskowa/enumeration.hpp"
#include "riskowa/io.hpp"
#include "test_support.hpp"

using namespace riskowa;
using riskowa::testing::data_path;
using riskowa::testing::Gen;

namespace {

AlternativeSet load(const std::string& name) {
  return io::parse_alternatives_json(io::read_file(data_path(name)));
}

const std::vector<double> kGrid{0.01, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0};

// Frozen from tests/oracles/illustrative_oracle.py. Each cell lists every
// alternative within 1e-7 of the optimum; rows are beta, columns r.
const std::vector<std::vector<std::vector<std::size_t>>> kWinnerMap{
    {{0, 1}, {0, 1}, {0}, {0}, {0, 1}, {2}, {2}, {2}, {2}, {2}, {2}},
    {{0, 1}, {0, 1}, {0}, {0}, {0, 1}, {2}, {2}, {2}, {2}, {2}, {2}},
    {{0, 1}, {0, 1}, {0}, {1}, {1}, {1}, {2}, {2}, {2}, {2}, {2}},
    {{0, 1}, {0, 1}, {0}, {1}, {2}, {2}, {2}, {2}, {2}, {2}, {2}},
    {{0}, {0}, {0}, {0}, {0}, {0}, {1}, {1}, {2}, {2}, {2}},
    {{1}, {1}, {0}, {0}, {0}, {1}, {1}, {1}, {1}, {1}, {2}},
    {{1}, {1}, {3}, {0}, {0}, {1}, {1}, {1}, {1}, {1}, {3}},
    {{1}, {1}, {1}, {3}, {1}, {1}, {1}, {1}, {1}, {1}, {3}},
    {{1}, {1}, {1}, {1}, {1}, {1}, {1}, {1}, {1}, {1}, {3}},
    {{1}, {1}, {1}, {1}, {1}, {1}, {1}, {1}, {1}, {1}, {1}},
    {{1}, {1}, {1}, {2}, {1}, {1}, {1}, {1}, {1}, {1}, {1}},
};

// Optimal h per cell, same layout, printed to 9 decimals by the oracle.
const std::vector<std::vector<double>> kSurface{
    {0.930000000, 0.930000000, 0.922500000, 0.915000000, 0.911250000, 0.891000000, 0.864166667, 0.835000000, 0.813125000, 0.790555556, 0.772500000},
    {0.930000000, 0.930000000, 0.922500000, 0.915000000, 0.911250000, 0.891000000, 0.864166667, 0.835000000, 0.813125000, 0.790555556, 0.772500000},
    {0.930000000, 0.930000000, 0.922500000, 0.903333333, 0.882500000, 0.870000000, 0.847916667, 0.821071429, 0.800937500, 0.771944444, 0.748750000},
    {0.930000000, 0.930000000, 0.922500000, 0.897222222, 0.866458333, 0.846166667, 0.822500000, 0.796904762, 0.777708333, 0.743333333, 0.715833333},
    {0.922500000, 0.922500000, 0.890000000, 0.857500000, 0.837500000, 0.822500000, 0.799791667, 0.775714286, 0.757343750, 0.721111111, 0.692125000},
    {0.878000000, 0.878000000, 0.870500000, 0.823000000, 0.799000000, 0.774600000, 0.752083333, 0.731785714, 0.710562500, 0.694055556, 0.672600000},
    {0.845000000, 0.845000000, 0.828333333, 0.792916667, 0.765625000, 0.738166667, 0.717013889, 0.699583333, 0.675468750, 0.656712963, 0.635666667},
    {0.781428571, 0.781428571, 0.781428571, 0.752023810, 0.718571429, 0.694428571, 0.677202381, 0.663928571, 0.639330357, 0.620198413, 0.597392857},
    {0.731875000, 0.731875000, 0.731875000, 0.717708333, 0.681250000, 0.659375000, 0.641927083, 0.627008929, 0.602070313, 0.582673611, 0.559437500},
    {0.691666667, 0.691666667, 0.691666667, 0.684629630, 0.644722222, 0.620777778, 0.602824074, 0.588293651, 0.563229167, 0.543734568, 0.524805556},
    {0.659500000, 0.659500000, 0.659500000, 0.645000000, 0.605750000, 0.582100000, 0.565041667, 0.551750000, 0.527281250, 0.508250000, 0.489625000},
};

}  // namespace

TEST_CASE("alternative sets validate their shape") {
  const ScenarioSet scen({0.5, 0.5});
  const CriteriaSet crit({1.0});
  CHECK_THROWS_AS(AlternativeSet({}, {}, scen, crit), InvalidInput);
  CHECK_THROWS_AS(AlternativeSet({"a"}, {OutcomeMatrix::zeros(1, 3)}, scen, crit),
                  InvalidInput);
  CHECK_THROWS_AS(AlternativeSet({"a", "b"}, {OutcomeMatrix::zeros(1, 2)}, scen, crit),
                  InvalidInput);
}

TEST_CASE("normalize") {
  SUBCASE("values already spanning [0,1] are unchanged") {
    const AlternativeSet alts({"a", "b"},
                              {OutcomeMatrix::from_rows({{0.0, 0.3}}),
                               OutcomeMatrix::from_rows({{1.0, 0.6}})},
                              ScenarioSet({0.5, 0.5}), CriteriaSet({1.0}));
    const auto n = normalize(alts);
    CHECK(n.matrices()[0](0, 1) == doctest::Approx(0.3));
    CHECK(n.matrices()[1](0, 1) == doctest::Approx(0.6));
  }
  SUBCASE("a single criterion is rescaled") {
    const AlternativeSet alts({"a", "b", "c"},
                              {OutcomeMatrix::from_rows({{2.0}}),
                               OutcomeMatrix::from_rows({{4.0}}),
                               OutcomeMatrix::from_rows({{6.0}})},
                              ScenarioSet({1.0}), CriteriaSet({1.0}));
    const auto n = normalize(alts);
    CHECK(n.matrices()[0](0, 0) == 0.0);
    CHECK(n.matrices()[1](0, 0) == 0.5);
    CHECK(n.matrices()[2](0, 0) == 1.0);
  }
  SUBCASE("constant criteria pass through and normalizing twice changes nothing") {
    const AlternativeSet alts({"a", "b"},
                              {OutcomeMatrix::from_rows({{3.0, 3.0}, {1.0, 9.0}}),
                               OutcomeMatrix::from_rows({{3.0, 3.0}, {5.0, -1.0}})},
                              ScenarioSet({0.5, 0.5}), CriteriaSet({0.5, 0.5}));
    const auto once = normalize(alts);
    CHECK(once.matrices()[0](0, 0) == 3.0);
    const auto twice = normalize(once);
    for (std::size_t a = 0; a < 2; ++a) {
      for (std::size_t c = 0; c < 4; ++c) {
        CHECK(std::abs(once.matrices()[a].data()[c] - twice.matrices()[a].data()[c]) <= 1e-15);
      }
    }
  }
}

TEST_CASE("second phase") {
  SUBCASE("a single entry is returned") {
    const std::vector<HEvaluation> one{{{0.1, 0.2}, 0.2}};
    CHECK(second_phase(one) == 0);
  }
  SUBCASE("a dominated g-vector loses") {
    const std::vector<HEvaluation> tied{{{0.8, 0.45, 0.65}, 0.725}, {{0.8, 0.4, 0.65}, 0.725}};
    CHECK(second_phase(tied) == 1);
  }
  SUBCASE("incomparable vectors go to the smaller sum, then the lower index") {
    const std::vector<HEvaluation> tied{{{0.5, 0.2}, 0.5}, {{0.2, 0.4}, 0.5}, {{0.4, 0.2}, 0.5}};
    CHECK(second_phase(tied) == 1);
    const std::vector<HEvaluation> equal{{{0.3, 0.1}, 0.3}, {{0.1, 0.3}, 0.3}};
    CHECK(second_phase(equal) == 0);
  }
  CHECK_THROWS_AS(second_phase(std::span<const HEvaluation>{}), InvalidInput);
}

TEST_CASE("illustrative data at beta = 0.3, r = 0.17") {
  const auto alts = load("illustrative.json");
  const auto res = solve_enumeration(alts, RiskParams(0.3, 0.17));
  const std::vector<double> h{0.926470588235, 0.93, 0.942156862745, 0.993333333333};
  for (std::size_t a = 0; a < 4; ++a) CHECK(std::abs(res.evaluations[a].h - h[a]) <= 1e-11);
  CHECK(res.minimizers == std::vector<std::size_t>{0});
  CHECK(res.representative == 0);
  CHECK(std::abs(res.best_h() - 0.926470588235) <= 1e-11);

  const auto par = solve_enumeration(alts, RiskParams(0.3, 0.17), Execution::kParallel);
  for (std::size_t a = 0; a < 4; ++a) CHECK(par.evaluations[a].h == res.evaluations[a].h);
}

TEST_CASE("normalizing the illustrative data changes the winner") {
  const auto alts = normalize(load("illustrative.json"));
  const auto res = solve_enumeration(alts, RiskParams(0.3, 0.17));
  const std::vector<double> h{1.0, 0.914634146341, 0.987062866384, 0.996652319464};
  for (std::size_t a = 0; a < 4; ++a) CHECK(std::abs(res.evaluations[a].h - h[a]) <= 1e-11);
  CHECK(res.representative == 1);
}

TEST_CASE("tied h values are broken by efficiency") {
  const auto alts = load("dominated.json");
  const auto res = solve_enumeration(alts, RiskParams(0.5, 2.0 / 3));
  CHECK(std::abs(res.evaluations[0].h - 0.725) <= 1e-12);
  CHECK(std::abs(res.evaluations[1].h - 0.725) <= 1e-12);
  CHECK(res.minimizers == std::vector<std::size_t>{0, 1});
  CHECK(alts.names()[res.representative] == "alt1");
}

TEST_CASE("sweep reproduces the frozen winner map") {
  const auto alts = load("illustrative.json");
  const auto grid = sweep(alts, kGrid, kGrid);
  REQUIRE(grid.cells.size() == 121);
  for (std::size_t b = 0; b < kGrid.size(); ++b) {
    for (std::size_t r = 0; r < kGrid.size(); ++r) {
      CAPTURE(b);
      CAPTURE(r);
      const auto& cell = grid.cell(b, r);
      const auto& allowed = kWinnerMap[b][r];
      CHECK(std::find(allowed.begin(), allowed.end(), cell.winner) != allowed.end());
      CHECK(std::abs(cell.h - kSurface[b][r]) <= 1e-8);
    }
  }
  // The bottom-right corner is the plain expectation, won by alt2.
  CHECK(grid.cell(10, 10).winner == 1);
}

TEST_CASE("optimal h is monotone over the grid") {
  const auto grid = sweep(load("illustrative.json"), kGrid, kGrid);
  for (std::size_t b = 0; b < kGrid.size(); ++b) {
    for (std::size_t r = 0; r < kGrid.size(); ++r) {
      if (b > 0) CHECK(grid.cell(b, r).h <= grid.cell(b - 1, r).h + 1e-12);
      if (r > 0) CHECK(grid.cell(b, r).h <= grid.cell(b, r - 1).h + 1e-12);
    }
  }
}

TEST_CASE("serial and parallel sweeps agree exactly") {
  Gen gen(31);
  const std::size_t K = 4, J = 7;
  std::vector<std::string> names;
  std::vector<OutcomeMatrix> mats;
  for (int a = 0; a < 40; ++a) {
    names.push_back("a" + std::to_string(a));
    mats.emplace_back(K, J, gen.values(K * J, 0, 1));
  }
  const AlternativeSet alts(names, mats, ScenarioSet(gen.simplex(J)), CriteriaSet(gen.simplex(K)));
  std::vector<double> levels;
  for (int i = 1; i <= 15; ++i) levels.push_back(i / 15.0);
  const auto s = sweep(alts, levels, levels, Execution::kSerial);
  const auto p = sweep(alts, levels, levels, Execution::kParallel);
  REQUIRE(s.cells.size() == p.cells.size());
  for (std::size_t c = 0; c < s.cells.size(); ++c) {
    CHECK(s.cells[c].winner == p.cells[c].winner);
    CHECK(s.cells[c].h == p.cells[c].h);
  }
}

TEST_CASE("sweep rejects empty or invalid grids") {
  const auto alts = load("illustrative.json");
  const std::vector<double> empty, ok{0.5}, bad{0.5, 0.0};
  CHECK_THROWS_AS(sweep(alts, empty, ok), InvalidInput);
  CHECK_THROWS_AS(sweep(alts, ok, empty), InvalidInput);
  CHECK_THROWS_AS(sweep(alts, bad, ok), InvalidInput);
  CHECK_THROWS_AS(sweep(alts, ok, bad), InvalidInput);
}
