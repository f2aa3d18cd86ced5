#ifndef RISKOWA_LP_EXPORT_HPP
#define RISKOWA_LP_EXPORT_HPP

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "riskowa/knapsack.hpp"

namespace riskowa {

enum class VarKind { kFree, kNonNegative, kBinary };
enum class RowSense { kGreaterEqual, kLessEqual, kEqual };

struct LpVariable {
  std::string name;
  VarKind kind = VarKind::kNonNegative;
};

struct LpTerm {
  std::size_t var = 0;
  double coef = 0.0;
};

struct LpRow {
  std::string name;
  std::vector<LpTerm> terms;
  RowSense sense = RowSense::kGreaterEqual;
  double rhs = 0.0;
};

/// A minimization MILP in row form.
///
/// The knapsack model built by build_lp_model carries the variables
///   z (free), v_k >= 0, zk_k (free), y_k_j >= 0, x_i binary
/// and the rows
///   owa_k:    z + v_k - zk_k - sum_j (pi_j / beta) y_kj >= 0
///   beta_k_j: zk_k + y_kj + sum_i b_ikj x_i >= sum_i b_ikj
///   cap:      sum_i v_i x_i <= V
/// under the objective z + sum_k (w_k / r) v_k. For a fixed x the continuous
/// part is the dual of the nested r-OWA / beta-average maximizations, so its
/// optimum is h of the benefit left behind.
struct LpModel {
  std::vector<LpVariable> variables;
  std::vector<LpTerm> objective;
  std::vector<LpRow> rows;

  std::optional<std::size_t> find(std::string_view name) const;
  std::size_t add_variable(std::string name, VarKind kind);
};

LpModel build_lp_model(const KnapsackInstance& inst, const RiskParams& rp);

/// CPLEX LP text: Minimize / Subject To / Bounds / Binaries / End, with
/// coefficients at 17 significant digits. Deterministic.
std::string write_lp_text(const LpModel& model);

/// Reads the subset of the LP format that write_lp_text emits. Throws
/// InvalidInput on anything else.
LpModel parse_lp_text(std::string_view text);

/// Equality up to variable numbering: variables compared by name and kind,
/// objective and rows term by term through names.
bool same_structure(const LpModel& a, const LpModel& b);

double objective_value(const LpModel& model, std::span<const double> values);

/// Every row and bound holds within `tol`.
bool satisfies(const LpModel& model, std::span<const double> values,
               double tol = 1e-9);

struct ContinuousOptimum {
  double objective = 0.0;
  std::vector<double> values;  // one per model variable
};

/// Minimizes the continuous variables of a build_lp_model model with the
/// binaries fixed to `x`, in closed form: each zk_k sits at a breakpoint of
/// zk + sum_j c_kj (f_kj - zk)^+, y_kj is the positive part, and z, v_k
/// follow the same pattern one level up. Reads coefficients from the model
/// rows only.
ContinuousOptimum continuous_optimum(const LpModel& model, const Selection& x);

}  // namespace riskowa

#endif  // RISKOWA_LP_EXPORT_HPP
