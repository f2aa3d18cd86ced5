#ifndef RISKOWA_KNAPSACK_HPP
#define RISKOWA_KNAPSACK_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "riskowa/core.hpp"
#include "riskowa/parallel.hpp"

namespace riskowa {

/// Multiobjective stochastic 0/1 knapsack. Benefits are stored item-major,
/// then criterion, then scenario.
class KnapsackInstance {
 public:
  KnapsackInstance(std::vector<double> weights, double capacity,
                   std::vector<double> benefits, ScenarioSet scenarios,
                   CriteriaSet criteria, std::uint64_t seed = 0);

  std::size_t items() const noexcept { return weights_.size(); }
  std::size_t criteria() const noexcept { return criteria_.size(); }
  std::size_t scenarios() const noexcept { return scenarios_.size(); }

  const std::vector<double>& weights() const noexcept { return weights_; }
  double capacity() const noexcept { return capacity_; }
  const std::vector<double>& benefits() const noexcept { return benefits_; }
  double benefit(std::size_t i, std::size_t k, std::size_t j) const {
    return benefits_[(i * criteria() + k) * scenarios() + j];
  }
  const ScenarioSet& scenario_set() const noexcept { return scenarios_; }
  const CriteriaSet& criteria_set() const noexcept { return criteria_; }
  std::uint64_t seed() const noexcept { return seed_; }

  bool operator==(const KnapsackInstance&) const = default;

 private:
  std::vector<double> weights_;
  double capacity_;
  std::vector<double> benefits_;
  ScenarioSet scenarios_;
  CriteriaSet criteria_;
  std::uint64_t seed_;
};

/// x_i in {0,1}: 1 means item i is packed.
using Selection = std::vector<std::uint8_t>;

/// Uniform variates in [a, b) from std::mt19937_64, 53 bits per draw. The
/// mapping is written out here rather than taken from
/// std::uniform_real_distribution so streams match across standard libraries.
class UniformStream {
 public:
  explicit UniformStream(std::uint64_t seed);
  double next(double a, double b);

 private:
  std::mt19937_64 engine_;
};

/// Random instance: p ~ U(0.25, 0.75), W = 1/p, v_i ~ U(0.5W, 1.5W) and
/// b_ikj ~ U(0,1), drawn in that order (per item: its weight, then benefits
/// scenario-major). Uniform probabilities and importances. Capacity
/// defaults to the item count, so n*p items fit in expectation.
KnapsackInstance generate_instance(std::size_t items, std::size_t scenarios,
                                   std::size_t criteria, std::uint64_t seed,
                                   std::optional<double> capacity = std::nullopt);

/// Entry (k,j) is the benefit left behind: sum of b_ikj over unpacked items.
OutcomeMatrix objective_matrix(const KnapsackInstance& inst, const Selection& x);

double selection_weight(const KnapsackInstance& inst, const Selection& x);
bool is_feasible(const KnapsackInstance& inst, const Selection& x);

/// h of the benefit left behind.
double msp_objective(const KnapsackInstance& inst, const RiskParams& rp,
                     const Selection& x);
/// Weighted mean of the benefit left behind.
double naive_objective(const KnapsackInstance& inst, const Selection& x);

struct SolveOptions {
  std::uint64_t node_budget = 0;  // 0: unlimited
  double relative_gap = 0.0;      // admissible (incumbent - bound) / incumbent
};

struct KnapsackSolution {
  Selection x;
  double objective = 0.0;
  double bound = 0.0;  // proven lower bound on the optimum
  std::uint64_t nodes = 0;
  double seconds = 0.0;
  bool exact = true;

  /// Relative optimality gap; 0 when solved to optimality.
  double gap() const;
};

/// Partial assignment used by the branch-and-bound: -1 undecided,
/// 0 excluded, 1 packed.
using PartialAssignment = std::vector<std::int8_t>;

/// Lower bound on h over every feasible completion of `partial`: the larger
/// of h with all undecided items packed (capacity ignored) and a family of
/// fractional-knapsack bounds from supporting hyperplanes of h. Returns
/// +infinity when the packed items already exceed capacity.
double msp_lower_bound(const KnapsackInstance& inst, const RiskParams& rp,
                       const PartialAssignment& partial);

/// Exact minimizer of h via best-first branch-and-bound.
KnapsackSolution solve_msp(const KnapsackInstance& inst, const RiskParams& rp,
                           const SolveOptions& opts = {});

/// Exact minimizer of the weighted mean: a 0/1 knapsack on
/// c_i = sum_kj w_k pi_j b_ikj with the fractional (Dantzig) bound.
KnapsackSolution solve_naive(const KnapsackInstance& inst,
                             const SolveOptions& opts = {});

/// Enumerates all 2^n selections; n <= 20. Ties go to the smallest bitmask
/// (item i is bit i), so serial and parallel runs agree bit for bit.
KnapsackSolution exhaustive_oracle(const KnapsackInstance& inst,
                                   const RiskParams& rp,
                                   Execution exec = Execution::kParallel);
KnapsackSolution exhaustive_naive_oracle(const KnapsackInstance& inst,
                                         Execution exec = Execution::kParallel);

struct DeltaReport {
  double t_msp = 0.0;
  double t_mip = 0.0;
  double delta_time = 0.0;
  double delta_avg = 0.0;   // percent
  double delta_tail = 0.0;  // percent
  double z_msp = 0.0;       // h(x*_MSP)
  double z_mip = 0.0;       // mean(x*_MIP)
  double f_msp_of_mip = 0.0;  // h(x*_MIP)
  double f_mip_of_msp = 0.0;  // mean(x*_MSP)
  bool degenerate = false;  // a ratio had a zero denominator and nonzero numerator
};

/// Deteriorating rate 100 (mean(x_msp) - z_mip) / z_mip, improvement rate
/// 100 (h(x_mip) - z_msp) / h(x_mip), time penalty t_msp / t_mip.
DeltaReport compute_deltas(const KnapsackInstance& inst, const RiskParams& rp,
                           const KnapsackSolution& msp,
                           const KnapsackSolution& naive, double t_msp,
                           double t_mip);

struct ExperimentConfig {
  std::vector<std::size_t> items{30};
  std::vector<std::size_t> scenarios{10};
  std::vector<std::size_t> criteria{3};
  std::vector<double> betas{0.1};
  std::vector<double> rs{0.5};
  std::vector<std::uint64_t> seeds{1};
  std::optional<double> capacity;
  /// Instances with more items than this are solved under `node_budget`.
  std::size_t exact_cap = 30;
  std::uint64_t node_budget = 2'000'000;
  double relative_gap = 0.0;
};

struct ExperimentRow {
  std::size_t n_items = 0;
  std::size_t n_scenarios = 0;
  std::size_t n_criteria = 0;
  double beta = 0.0;
  double r = 0.0;
  std::uint64_t seed = 0;
  DeltaReport report;
  double gap = 0.0;
};

/// Full factorial over (items, scenarios, criteria, seed) instances and
/// (beta, r) pairs; one row per instance and pair. Row order follows the
/// config (items, scenarios, criteria, seed, beta, r; last fastest) whatever
/// the execution mode.
std::vector<ExperimentRow> run_experiment(const ExperimentConfig& cfg,
                                          Execution exec = Execution::kParallel);

}  // namespace riskowa

#endif  // RISKOWA_KNAPSACK_HPP
