#include "riskowa/enumeration.hpp"

#include <algorithm>
#include <limits>

namespace riskowa {

namespace {

// a weakly improves every criterion of b and strictly improves one.
bool pareto_dominates(const std::vector<double>& a, const std::vector<double>& b) {
  bool strict = false;
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (a[k] > b[k]) return false;
    if (a[k] < b[k]) strict = true;
  }
  return strict;
}

}  // namespace

AlternativeSet::AlternativeSet(std::vector<std::string> names,
                               std::vector<OutcomeMatrix> matrices,
                               ScenarioSet scenarios, CriteriaSet criteria)
    : names_(std::move(names)),
      matrices_(std::move(matrices)),
      scenarios_(std::move(scenarios)),
      criteria_(std::move(criteria)) {
  if (matrices_.empty()) {
    throw InvalidInput("alternatives", "at least one alternative is required");
  }
  if (names_.size() != matrices_.size()) {
    throw InvalidInput("names", "one name per alternative is required");
  }
  for (const auto& m : matrices_) {
    if (m.criteria() != criteria_.size() || m.scenarios() != scenarios_.size()) {
      throw InvalidInput("alternatives",
                         "every matrix must be criteria x scenarios (" +
                             std::to_string(criteria_.size()) + " x " +
                             std::to_string(scenarios_.size()) + ")");
    }
  }
}

AlternativeSet normalize(const AlternativeSet& alts) {
  const std::size_t K = alts.criteria().size();
  const std::size_t J = alts.scenarios().size();
  std::vector<double> lo(K, std::numeric_limits<double>::infinity());
  std::vector<double> hi(K, -std::numeric_limits<double>::infinity());
  for (const auto& m : alts.matrices()) {
    for (std::size_t k = 0; k < K; ++k) {
      for (double v : m.row(k)) {
        lo[k] = std::min(lo[k], v);
        hi[k] = std::max(hi[k], v);
      }
    }
  }
  std::vector<OutcomeMatrix> scaled = alts.matrices();
  for (auto& m : scaled) {
    for (std::size_t k = 0; k < K; ++k) {
      if (!(hi[k] > lo[k])) continue;
      const double span = hi[k] - lo[k];
      for (std::size_t j = 0; j < J; ++j) m(k, j) = (m(k, j) - lo[k]) / span;
    }
  }
  return AlternativeSet(alts.names(), std::move(scaled), alts.scenarios(),
                        alts.criteria());
}

std::size_t second_phase(std::span<const HEvaluation> tied) {
  if (tied.empty()) throw InvalidInput("tied", "tie set must not be empty");
  std::size_t best = tied.size();
  double best_sum = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < tied.size(); ++i) {
    bool dominated = false;
    for (std::size_t other = 0; other < tied.size() && !dominated; ++other) {
      dominated = other != i && pareto_dominates(tied[other].g, tied[i].g);
    }
    if (dominated) continue;
    double sum = 0.0;
    for (double g : tied[i].g) sum += g;
    if (sum < best_sum) {
      best_sum = sum;
      best = i;
    }
  }
  // Pareto dominance is a strict partial order, so the finite tie set always
  // has a nondominated member.
  return best;
}

RankedResult solve_enumeration(const AlternativeSet& alts, const RiskParams& rp,
                               Execution exec) {
  RankedResult out;
  const auto n = static_cast<std::ptrdiff_t>(alts.size());
  out.evaluations.resize(alts.size());
  if (exec == Execution::kParallel) {
#pragma omp parallel for schedule(static) num_threads(thread_count())
    for (std::ptrdiff_t i = 0; i < n; ++i) {
      out.evaluations[i] = evaluate_h(alts.matrices()[i], alts.scenarios(),
                                      alts.criteria(), rp);
    }
  } else {
    for (std::ptrdiff_t i = 0; i < n; ++i) {
      out.evaluations[i] = evaluate_h(alts.matrices()[i], alts.scenarios(),
                                      alts.criteria(), rp);
    }
  }

  double min_h = std::numeric_limits<double>::infinity();
  for (const auto& e : out.evaluations) min_h = std::min(min_h, e.h);
  std::vector<HEvaluation> tied;
  for (std::size_t i = 0; i < alts.size(); ++i) {
    if (out.evaluations[i].h <= min_h + kTieTolerance) {
      out.minimizers.push_back(i);
      tied.push_back(out.evaluations[i]);
    }
  }
  out.representative = out.minimizers[second_phase(tied)];
  return out;
}

SweepGrid sweep(const AlternativeSet& alts, std::span<const double> betas,
                std::span<const double> rs, Execution exec) {
  if (betas.empty()) throw InvalidInput("betas", "beta grid must not be empty");
  if (rs.empty()) throw InvalidInput("rs", "r grid must not be empty");
  // Reject bad levels up front, before any worker starts.
  for (double b : betas) RiskParams(b, 1.0);
  for (double r : rs) RiskParams(1.0, r);

  SweepGrid grid;
  grid.betas.assign(betas.begin(), betas.end());
  grid.rs.assign(rs.begin(), rs.end());
  grid.cells.resize(betas.size() * rs.size());
  const auto cells = static_cast<std::ptrdiff_t>(grid.cells.size());
  const auto solve_cell = [&](std::ptrdiff_t c) {
    const auto bi = static_cast<std::size_t>(c) / rs.size();
    const auto ri = static_cast<std::size_t>(c) % rs.size();
    const auto ranked = solve_enumeration(alts, RiskParams(betas[bi], rs[ri]),
                                          Execution::kSerial);
    grid.cells[c] = SweepCell{ranked.representative, ranked.best_h()};
  };
  if (exec == Execution::kParallel) {
#pragma omp parallel for schedule(dynamic) num_threads(thread_count())
    for (std::ptrdiff_t c = 0; c < cells; ++c) solve_cell(c);
  } else {
    for (std::ptrdiff_t c = 0; c < cells; ++c) solve_cell(c);
  }
  return grid;
}

}  // namespace riskowa
