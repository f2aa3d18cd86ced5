#ifndef RISKOWA_CORE_HPP
#define RISKOWA_CORE_HPP

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace riskowa {

/// Raised for any malformed input. `field()` names the offending argument
/// so front ends can report it.
class InvalidInput : public std::invalid_argument {
 public:
  InvalidInput(std::string field, const std::string& message)
      : std::invalid_argument(message), field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

/// Tolerance on |sum - 1| for probability and importance vectors.
inline constexpr double kMeasureTolerance = 1e-9;

/// Discrete probability measure over J scenarios.
class ScenarioSet {
 public:
  explicit ScenarioSet(std::vector<double> probs);

  static ScenarioSet uniform(std::size_t count);

  std::size_t size() const noexcept { return probs_.size(); }
  std::span<const double> probs() const noexcept { return probs_; }
  double operator[](std::size_t j) const { return probs_[j]; }

  bool operator==(const ScenarioSet&) const = default;

 private:
  std::vector<double> probs_;
};

/// Importance measure over K criteria.
class CriteriaSet {
 public:
  explicit CriteriaSet(std::vector<double> importances);

  static CriteriaSet uniform(std::size_t count);

  std::size_t size() const noexcept { return importances_.size(); }
  std::span<const double> importances() const noexcept { return importances_; }
  double operator[](std::size_t k) const { return importances_[k]; }

  bool operator==(const CriteriaSet&) const = default;

 private:
  std::vector<double> importances_;
};

/// Values f_k^j of one decision: K criteria (rows) by J scenarios
/// (columns), row-major. Entries are minimized.
class OutcomeMatrix {
 public:
  OutcomeMatrix(std::size_t criteria, std::size_t scenarios,
                std::vector<double> values);

  static OutcomeMatrix zeros(std::size_t criteria, std::size_t scenarios);
  static OutcomeMatrix from_rows(const std::vector<std::vector<double>>& rows);

  std::size_t criteria() const noexcept { return criteria_; }
  std::size_t scenarios() const noexcept { return scenarios_; }

  double operator()(std::size_t k, std::size_t j) const {
    return values_[k * scenarios_ + j];
  }
  double& operator()(std::size_t k, std::size_t j) {
    return values_[k * scenarios_ + j];
  }

  std::span<const double> row(std::size_t k) const {
    return std::span<const double>(values_).subspan(k * scenarios_, scenarios_);
  }
  std::span<const double> data() const noexcept { return values_; }

  bool operator==(const OutcomeMatrix&) const = default;

 private:
  std::size_t criteria_;
  std::size_t scenarios_;
  std::vector<double> values_;
};

/// Tail-aversion levels: beta over scenarios, r over criteria. Both in (0,1].
class RiskParams {
 public:
  RiskParams(double beta, double r);

  double beta() const noexcept { return beta_; }
  double r() const noexcept { return r_; }

 private:
  double beta_;
  double r_;
};

/// Rank weights of an r-OWA.
///
/// `order[k]` is the input position of the k-th largest value; `lambdas[k]`
/// is the weight attached to that rank and `cumulative[k]` the importance
/// accumulated up to and including it. Ranks past `cutoff_index` get zero
/// weight.
struct OwaWeights {
  std::vector<std::size_t> order;
  std::vector<double> lambdas;
  std::vector<double> cumulative;
  std::size_t cutoff_index = 0;
};

struct HEvaluation {
  std::vector<double> g;  // per-criterion beta-averages
  double h = 0.0;
};

/// Positions of `values` sorted descending. Ties are ordered by larger
/// `mass` first, then by position, so permuting tied (value, mass) pairs
/// yields the same arithmetic downstream.
std::vector<std::size_t> descending_order(std::span<const double> values,
                                          std::span<const double> mass);

/// Average of `row` over its worst scenarios with accumulated probability
/// `beta`. Equals the (1-beta)-CVaR when the tail mass is hit exactly.
double beta_average(std::span<const double> row, const ScenarioSet& scen,
                    double beta);

/// OWA weights from importances already arranged in value-descending order,
/// using the truncated-linear generator min(x/r, 1).
OwaWeights owa_weights(std::span<const double> sorted_importances, double r);

/// r-OWA: average of the largest values whose importances accumulate to r.
double r_owa(std::span<const double> values, const CriteriaSet& crit, double r);

/// Brute-force r-OWA: maximizes sum(l_k x_k)/r over
/// { 0 <= l_k <= w_k, sum l_k = r } by greedy filling along every
/// permutation of the criteria. Test support; K <= 10.
double r_owa_polytope_oracle(std::span<const double> values,
                             const CriteriaSet& crit, double r);

HEvaluation evaluate_h(const OutcomeMatrix& m, const ScenarioSet& scen,
                       const CriteriaSet& crit, const RiskParams& rp);

/// Weights mu (K x J, row-major) attaining h = sum mu_kj f_kj at `m`.
///
/// mu_kj = lambda_k * u_kj with lambda in the r-OWA polytope and u_k in the
/// beta-average polytope, so sum mu_kj f'_kj <= h(f') for every other
/// matrix f'. Used as a supporting hyperplane of the convex map f -> h(f).
std::vector<double> supporting_weights(const OutcomeMatrix& m,
                                       const ScenarioSet& scen,
                                       const CriteriaSet& crit,
                                       const RiskParams& rp);

/// Importance- and probability-weighted mean of all entries.
double weighted_mean(const OutcomeMatrix& m, const ScenarioSet& scen,
                     const CriteriaSet& crit);

/// a dominates b when h(a) <= h(b). Reflexive and transitive, not
/// antisymmetric.
inline bool dominates(const HEvaluation& a, const HEvaluation& b) {
  return a.h <= b.h;
}

}  // namespace riskowa

#endif  // RISKOWA_CORE_HPP
