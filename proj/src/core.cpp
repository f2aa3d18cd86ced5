#include "riskowa/core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace riskowa {

namespace {

void validate_measure(std::span<const double> mass, const char* field) {
  if (mass.empty()) {
    throw InvalidInput(field, std::string(field) + " must not be empty");
  }
  double total = 0.0;
  for (double m : mass) {
    if (!std::isfinite(m) || m < 0.0) {
      throw InvalidInput(field, std::string(field) +
                                    " entries must be finite and nonnegative");
    }
    total += m;
  }
  if (std::abs(total - 1.0) > kMeasureTolerance) {
    throw InvalidInput(field, std::string(field) + " must sum to 1");
  }
}

void validate_level(double level, const char* field) {
  if (!(level > 0.0 && level <= 1.0)) {
    throw InvalidInput(field, std::string(field) + " must be in (0,1]");
  }
}

// Weights of the truncated-linear generator: the j-th entry receives the
// part of [T_{j-1}, T_j] lying below `level`. Normalized by the total mass
// that actually fell below the level, which is `level` whenever the masses
// sum to at least it.
struct TailWeights {
  std::vector<double> weights;
  std::vector<double> cumulative;
  std::size_t cutoff = 0;
};

TailWeights truncated_weights(std::span<const double> sorted_mass,
                              double level) {
  const std::size_t n = sorted_mass.size();
  TailWeights out;
  out.weights.resize(n);
  out.cumulative.resize(n);
  out.cutoff = n - 1;
  bool saturated = false;
  double prev = 0.0;
  double running = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    running += sorted_mass[j];
    out.cumulative[j] = running;
    const double capped = std::min(running, level);
    out.weights[j] = capped - prev;
    prev = capped;
    if (!saturated && running >= level) {
      out.cutoff = j;
      saturated = true;
    }
  }
  const double used = prev;
  for (double& w : out.weights) w /= used;
  return out;
}

std::vector<double> gather(std::span<const double> src,
                           std::span<const std::size_t> order) {
  std::vector<double> out(order.size());
  for (std::size_t i = 0; i < order.size(); ++i) out[i] = src[order[i]];
  return out;
}

void check_length(std::size_t got, std::size_t want, const char* field) {
  if (got != want) {
    throw InvalidInput(field, std::string(field) + " has length " +
                                  std::to_string(got) + ", expected " +
                                  std::to_string(want));
  }
}

}  // namespace

ScenarioSet::ScenarioSet(std::vector<double> probs) : probs_(std::move(probs)) {
  validate_measure(probs_, "probs");
}

ScenarioSet ScenarioSet::uniform(std::size_t count) {
  if (count == 0) throw InvalidInput("probs", "probs must not be empty");
  return ScenarioSet(std::vector<double>(count, 1.0 / static_cast<double>(count)));
}

CriteriaSet::CriteriaSet(std::vector<double> importances)
    : importances_(std::move(importances)) {
  validate_measure(importances_, "importances");
}

CriteriaSet CriteriaSet::uniform(std::size_t count) {
  if (count == 0) {
    throw InvalidInput("importances", "importances must not be empty");
  }
  return CriteriaSet(std::vector<double>(count, 1.0 / static_cast<double>(count)));
}

OutcomeMatrix::OutcomeMatrix(std::size_t criteria, std::size_t scenarios,
                             std::vector<double> values)
    : criteria_(criteria), scenarios_(scenarios), values_(std::move(values)) {
  if (criteria_ == 0 || scenarios_ == 0) {
    throw InvalidInput("matrix", "matrix must have at least one row and column");
  }
  check_length(values_.size(), criteria_ * scenarios_, "matrix");
  for (double v : values_) {
    if (!std::isfinite(v)) {
      throw InvalidInput("matrix", "matrix entries must be finite");
    }
  }
}

OutcomeMatrix OutcomeMatrix::zeros(std::size_t criteria, std::size_t scenarios) {
  return OutcomeMatrix(criteria, scenarios,
                       std::vector<double>(criteria * scenarios, 0.0));
}

OutcomeMatrix OutcomeMatrix::from_rows(
    const std::vector<std::vector<double>>& rows) {
  if (rows.empty()) {
    throw InvalidInput("matrix", "matrix must have at least one row and column");
  }
  const std::size_t cols = rows.front().size();
  std::vector<double> flat;
  flat.reserve(rows.size() * cols);
  for (const auto& row : rows) {
    if (row.size() != cols) {
      throw InvalidInput("matrix", "matrix rows must have equal length");
    }
    flat.insert(flat.end(), row.begin(), row.end());
  }
  return OutcomeMatrix(rows.size(), cols, std::move(flat));
}

RiskParams::RiskParams(double beta, double r) : beta_(beta), r_(r) {
  validate_level(beta_, "beta");
  validate_level(r_, "r");
}

std::vector<std::size_t> descending_order(std::span<const double> values,
                                          std::span<const double> mass) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) {
                     if (values[a] != values[b]) return values[a] > values[b];
                     return mass[a] > mass[b];
                   });
  return order;
}

double beta_average(std::span<const double> row, const ScenarioSet& scen,
                    double beta) {
  validate_level(beta, "beta");
  check_length(row.size(), scen.size(), "row");
  const auto order = descending_order(row, scen.probs());
  const auto tail = truncated_weights(gather(scen.probs(), order), beta);
  double acc = 0.0;
  for (std::size_t j = 0; j <= tail.cutoff; ++j) {
    acc += tail.weights[j] * row[order[j]];
  }
  return acc;
}

OwaWeights owa_weights(std::span<const double> sorted_importances, double r) {
  validate_level(r, "r");
  validate_measure(sorted_importances, "importances");
  auto tail = truncated_weights(sorted_importances, r);
  OwaWeights out;
  out.order.resize(sorted_importances.size());
  std::iota(out.order.begin(), out.order.end(), std::size_t{0});
  out.lambdas = std::move(tail.weights);
  out.cumulative = std::move(tail.cumulative);
  out.cutoff_index = tail.cutoff;
  return out;
}

double r_owa(std::span<const double> values, const CriteriaSet& crit, double r) {
  validate_level(r, "r");
  check_length(values.size(), crit.size(), "values");
  const auto order = descending_order(values, crit.importances());
  const auto weights = owa_weights(gather(crit.importances(), order), r);
  double acc = 0.0;
  for (std::size_t k = 0; k <= weights.cutoff_index; ++k) {
    acc += weights.lambdas[k] * values[order[k]];
  }
  return acc;
}

double r_owa_polytope_oracle(std::span<const double> values,
                             const CriteriaSet& crit, double r) {
  validate_level(r, "r");
  check_length(values.size(), crit.size(), "values");
  if (values.size() > 10) {
    throw InvalidInput("values", "polytope oracle supports at most 10 criteria");
  }
  std::vector<std::size_t> perm(values.size());
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  double best = -std::numeric_limits<double>::infinity();
  do {
    double remaining = r;
    double filled = 0.0;
    double acc = 0.0;
    for (std::size_t idx : perm) {
      const double take = std::min(crit[idx], remaining);
      acc += take * values[idx];
      filled += take;
      remaining -= take;
    }
    best = std::max(best, acc / filled);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

HEvaluation evaluate_h(const OutcomeMatrix& m, const ScenarioSet& scen,
                       const CriteriaSet& crit, const RiskParams& rp) {
  check_length(m.scenarios(), scen.size(), "matrix columns");
  check_length(m.criteria(), crit.size(), "matrix rows");
  HEvaluation out;
  out.g.resize(m.criteria());
  for (std::size_t k = 0; k < m.criteria(); ++k) {
    out.g[k] = beta_average(m.row(k), scen, rp.beta());
  }
  out.h = r_owa(out.g, crit, rp.r());
  return out;
}

std::vector<double> supporting_weights(const OutcomeMatrix& m,
                                       const ScenarioSet& scen,
                                       const CriteriaSet& crit,
                                       const RiskParams& rp) {
  check_length(m.scenarios(), scen.size(), "matrix columns");
  check_length(m.criteria(), crit.size(), "matrix rows");
  const std::size_t K = m.criteria();
  const std::size_t J = m.scenarios();
  std::vector<double> mu(K * J, 0.0);
  std::vector<double> g(K);
  for (std::size_t k = 0; k < K; ++k) {
    const auto row = m.row(k);
    const auto order = descending_order(row, scen.probs());
    const auto tail = truncated_weights(gather(scen.probs(), order), rp.beta());
    double acc = 0.0;
    for (std::size_t j = 0; j <= tail.cutoff; ++j) {
      mu[k * J + order[j]] = tail.weights[j];
      acc += tail.weights[j] * row[order[j]];
    }
    g[k] = acc;
  }
  const auto order = descending_order(g, crit.importances());
  const auto lambdas = truncated_weights(gather(crit.importances(), order), rp.r());
  std::vector<double> rank_weight(K, 0.0);
  for (std::size_t i = 0; i <= lambdas.cutoff; ++i) {
    rank_weight[order[i]] = lambdas.weights[i];
  }
  for (std::size_t k = 0; k < K; ++k) {
    for (std::size_t j = 0; j < J; ++j) mu[k * J + j] *= rank_weight[k];
  }
  return mu;
}

double weighted_mean(const OutcomeMatrix& m, const ScenarioSet& scen,
                     const CriteriaSet& crit) {
  check_length(m.scenarios(), scen.size(), "matrix columns");
  check_length(m.criteria(), crit.size(), "matrix rows");
  double acc = 0.0;
  for (std::size_t k = 0; k < m.criteria(); ++k) {
    double row = 0.0;
    for (std::size_t j = 0; j < m.scenarios(); ++j) row += scen[j] * m(k, j);
    acc += crit[k] * row;
  }
  return acc;
}

}  // namespace riskowa
