// Serial reference vs OpenMP kernels: (beta, r) sweep over many random
// alternatives, exhaustive knapsack enumeration and an experiment batch.

#include <chrono>
#include <cstdio>
#include <vector>

#include "riskowa/enumeration.hpp"
#include "riskowa/knapsack.hpp"
#include "riskowa/parallel.hpp"

namespace {

using namespace riskowa;

template <typename F>
double time_it(F&& f) {
  const auto t0 = std::chrono::steady_clock::now();
  f();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

AlternativeSet random_alternatives(std::size_t count, std::size_t K, std::size_t J) {
  UniformStream rng(2024);
  std::vector<std::string> names;
  std::vector<OutcomeMatrix> matrices;
  for (std::size_t a = 0; a < count; ++a) {
    std::vector<double> values(K * J);
    for (double& v : values) v = rng.next(0.0, 1.0);
    names.push_back("alt" + std::to_string(a + 1));
    matrices.emplace_back(K, J, std::move(values));
  }
  return AlternativeSet(std::move(names), std::move(matrices),
                        ScenarioSet::uniform(J), CriteriaSet::uniform(K));
}

void report(const char* name, double serial, double parallel) {
  std::printf("%-22s serial %9.4f s   parallel %9.4f s   speedup %5.2fx\n", name,
              serial, parallel, parallel > 0.0 ? serial / parallel : 0.0);
}

}  // namespace

int main() {
  std::printf("threads: %d\n", thread_count());

  const auto alts = random_alternatives(400, 6, 50);
  std::vector<double> grid;
  for (int i = 1; i <= 20; ++i) grid.push_back(0.05 * i);
  SweepGrid a, b;
  const double s1 = time_it([&] { a = sweep(alts, grid, grid, Execution::kSerial); });
  const double p1 = time_it([&] { b = sweep(alts, grid, grid, Execution::kParallel); });
  report("sweep 20x20, 400 alts", s1, p1);

  const auto inst = generate_instance(18, 10, 3, 7);
  const RiskParams rp(0.1, 0.5);
  const double s2 = time_it([&] { exhaustive_oracle(inst, rp, Execution::kSerial); });
  const double p2 = time_it([&] { exhaustive_oracle(inst, rp, Execution::kParallel); });
  report("exhaustive n=18", s2, p2);

  ExperimentConfig cfg;
  cfg.items = {25};
  cfg.seeds = {1, 2, 3, 4, 5, 6, 7, 8};
  cfg.betas = {0.1, 0.5};
  const double s3 = time_it([&] { run_experiment(cfg, Execution::kSerial); });
  const double p3 = time_it([&] { run_experiment(cfg, Execution::kParallel); });
  report("experiment 16 rows", s3, p3);
  return 0;
}
