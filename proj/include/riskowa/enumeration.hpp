#ifndef RISKOWA_ENUMERATION_HPP
#define RISKOWA_ENUMERATION_HPP

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "riskowa/core.hpp"
#include "riskowa/parallel.hpp"

namespace riskowa {

/// Absolute tolerance for membership in the set of h-minimizers.
inline constexpr double kTieTolerance = 1e-9;

/// A finite decision space: named alternatives sharing one K x J shape,
/// one scenario measure and one criteria measure.
class AlternativeSet {
 public:
  AlternativeSet(std::vector<std::string> names,
                 std::vector<OutcomeMatrix> matrices, ScenarioSet scenarios,
                 CriteriaSet criteria);

  std::size_t size() const noexcept { return matrices_.size(); }
  const std::vector<std::string>& names() const noexcept { return names_; }
  const std::vector<OutcomeMatrix>& matrices() const noexcept { return matrices_; }
  const ScenarioSet& scenarios() const noexcept { return scenarios_; }
  const CriteriaSet& criteria() const noexcept { return criteria_; }

 private:
  std::vector<std::string> names_;
  std::vector<OutcomeMatrix> matrices_;
  ScenarioSet scenarios_;
  CriteriaSet criteria_;
};

struct RankedResult {
  std::vector<HEvaluation> evaluations;
  std::vector<std::size_t> minimizers;  // ascending alternative indices
  std::size_t representative = 0;       // efficient member of `minimizers`

  double best_h() const { return evaluations[representative].h; }
};

struct SweepCell {
  std::size_t winner = 0;
  double h = 0.0;
};

/// Optimal alternative per (beta, r). Cells are stored beta-major:
/// cell(b, r) = cells[b * rs.size() + r].
struct SweepGrid {
  std::vector<double> betas;
  std::vector<double> rs;
  std::vector<SweepCell> cells;

  const SweepCell& cell(std::size_t beta_index, std::size_t r_index) const {
    return cells[beta_index * rs.size() + r_index];
  }
};

/// Per-criterion min-max rescaling into [0,1] over every alternative and
/// scenario. Criteria with a constant range are passed through.
AlternativeSet normalize(const AlternativeSet& alts);

/// Index (into `tied`) of an efficient member: entries whose g-vector is
/// Pareto-dominated by another entry are dropped, then the survivor with
/// the smallest sum of g wins, lowest index first.
std::size_t second_phase(std::span<const HEvaluation> tied);

RankedResult solve_enumeration(const AlternativeSet& alts, const RiskParams& rp,
                               Execution exec = Execution::kSerial);

SweepGrid sweep(const AlternativeSet& alts, std::span<const double> betas,
                std::span<const double> rs, Execution exec = Execution::kParallel);

}  // namespace riskowa

#endif  // RISKOWA_ENUMERATION_HPP
