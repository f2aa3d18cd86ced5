#include "riskowa/knapsack.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>

namespace riskowa {

namespace {

constexpr double kPruneTolerance = 1e-9;
constexpr double kInf = std::numeric_limits<double>::infinity();

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

void check_selection(const KnapsackInstance& inst, const Selection& x) {
  if (x.size() != inst.items()) {
    throw InvalidInput("x", "selection has length " + std::to_string(x.size()) +
                                ", expected " + std::to_string(inst.items()));
  }
}

// c_i = sum_kj mu_kj b_ikj for every item.
std::vector<double> item_scores(const KnapsackInstance& inst,
                                std::span<const double> mu) {
  const std::size_t cells = inst.criteria() * inst.scenarios();
  std::vector<double> scores(inst.items(), 0.0);
  const double* b = inst.benefits().data();
  for (std::size_t i = 0; i < inst.items(); ++i) {
    double acc = 0.0;
    for (std::size_t c = 0; c < cells; ++c) acc += mu[c] * b[i * cells + c];
    scores[i] = acc;
  }
  return scores;
}

std::vector<double> naive_weights(const KnapsackInstance& inst) {
  const std::size_t K = inst.criteria();
  const std::size_t J = inst.scenarios();
  std::vector<double> mu(K * J);
  for (std::size_t k = 0; k < K; ++k) {
    for (std::size_t j = 0; j < J; ++j) {
      mu[k * J + j] = inst.criteria_set()[k] * inst.scenario_set()[j];
    }
  }
  return mu;
}

// Items by score/weight descending, ties by index.
std::vector<std::size_t> ratio_order(const KnapsackInstance& inst,
                                     std::span<const double> scores) {
  std::vector<std::size_t> order(inst.items());
  std::iota(order.begin(), order.end(), std::size_t{0});
  const auto& v = inst.weights();
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return scores[a] / v[a] > scores[b] / v[b];
  });
  return order;
}

struct FractionalFill {
  double value = 0.0;
  std::vector<double> fraction;  // aligned with the candidate list
};

// Fractional knapsack over `candidates` with capacity `room`.
FractionalFill fractional_fill(const KnapsackInstance& inst,
                               std::span<const std::size_t> candidates,
                               std::span<const double> scores, double room) {
  const auto& v = inst.weights();
  std::vector<std::size_t> pos(candidates.size());
  std::iota(pos.begin(), pos.end(), std::size_t{0});
  std::stable_sort(pos.begin(), pos.end(), [&](std::size_t a, std::size_t b) {
    const std::size_t ia = candidates[a];
    const std::size_t ib = candidates[b];
    return scores[ia] / v[ia] > scores[ib] / v[ib];
  });
  FractionalFill out;
  out.fraction.assign(candidates.size(), 0.0);
  for (std::size_t p : pos) {
    if (room <= 0.0) break;
    const std::size_t i = candidates[p];
    if (scores[i] <= 0.0) break;
    const double part = std::min(1.0, room / v[i]);
    out.fraction[p] = part;
    out.value += part * scores[i];
    room -= part * v[i];
  }
  return out;
}

// Lower bounds on h over completions of a partial assignment.
class MspBounder {
 public:
  MspBounder(const KnapsackInstance& inst, const RiskParams& rp)
      : inst_(inst), rp_(rp), cells_(inst.criteria() * inst.scenarios()) {}

  // `left` holds the benefit of excluded items; `undecided` the open items;
  // `room` the remaining capacity. `hint` (may be empty) is a supporting
  // weight vector to try first, with its item scores.
  double bound(std::span<const double> left,
               std::span<const std::size_t> undecided, double room,
               std::span<const double> hint,
               std::span<const double> hint_scores) const {
    double best = h_of(left);
    if (undecided.empty()) return best;

    std::vector<double> mu;
    std::vector<double> scores;
    if (!hint.empty()) {
      mu.assign(hint.begin(), hint.end());
      scores.assign(hint_scores.begin(), hint_scores.end());
    } else {
      mu = supporting(left);
      scores = item_scores(inst_, mu);
    }
    for (int round = 0; round < kRounds; ++round) {
      double base = 0.0;
      for (std::size_t c = 0; c < cells_; ++c) base += mu[c] * left[c];
      double open = 0.0;
      for (std::size_t i : undecided) open += scores[i];
      const auto fill = fractional_fill(inst_, undecided, scores, room);
      best = std::max(best, base + open - fill.value);
      if (round + 1 == kRounds) break;

      // Re-linearize at the fractional point.
      std::vector<double> f(left.begin(), left.end());
      const double* b = inst_.benefits().data();
      for (std::size_t p = 0; p < undecided.size(); ++p) {
        const double keep = 1.0 - fill.fraction[p];
        if (keep <= 0.0) continue;
        const double* bi = b + undecided[p] * cells_;
        for (std::size_t c = 0; c < cells_; ++c) f[c] += keep * bi[c];
      }
      mu = supporting(f);
      scores = item_scores(inst_, mu);
    }
    return best;
  }

  double h_of(std::span<const double> f) const {
    const OutcomeMatrix m(inst_.criteria(), inst_.scenarios(),
                          std::vector<double>(f.begin(), f.end()));
    return evaluate_h(m, inst_.scenario_set(), inst_.criteria_set(), rp_).h;
  }

  std::vector<double> supporting(std::span<const double> f) const {
    const OutcomeMatrix m(inst_.criteria(), inst_.scenarios(),
                          std::vector<double>(f.begin(), f.end()));
    return supporting_weights(m, inst_.scenario_set(), inst_.criteria_set(), rp_);
  }

 private:
  static constexpr int kRounds = 3;

  const KnapsackInstance& inst_;
  const RiskParams& rp_;
  std::size_t cells_;
};

void add_benefit(const KnapsackInstance& inst, std::size_t item,
                 std::vector<double>& left) {
  const std::size_t cells = left.size();
  const double* bi = inst.benefits().data() + item * cells;
  for (std::size_t c = 0; c < cells; ++c) left[c] += bi[c];
}

}  // namespace

KnapsackInstance::KnapsackInstance(std::vector<double> weights, double capacity,
                                   std::vector<double> benefits,
                                   ScenarioSet scenarios, CriteriaSet criteria,
                                   std::uint64_t seed)
    : weights_(std::move(weights)),
      capacity_(capacity),
      benefits_(std::move(benefits)),
      scenarios_(std::move(scenarios)),
      criteria_(std::move(criteria)),
      seed_(seed) {
  if (weights_.empty()) throw InvalidInput("weights", "at least one item is required");
  for (double v : weights_) {
    if (!std::isfinite(v) || v <= 0.0) {
      throw InvalidInput("weights", "item weights must be finite and positive");
    }
  }
  if (!std::isfinite(capacity_) || capacity_ <= 0.0) {
    throw InvalidInput("capacity", "capacity must be finite and positive");
  }
  const std::size_t want = weights_.size() * criteria_.size() * scenarios_.size();
  if (benefits_.size() != want) {
    throw InvalidInput("benefits", "benefit tensor has " +
                                       std::to_string(benefits_.size()) +
                                       " entries, expected " + std::to_string(want));
  }
  for (double b : benefits_) {
    if (!std::isfinite(b) || b < 0.0) {
      throw InvalidInput("benefits", "benefits must be finite and nonnegative");
    }
  }
}

UniformStream::UniformStream(std::uint64_t seed) : engine_(seed) {}

double UniformStream::next(double a, double b) {
  const double unit = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  return a + (b - a) * unit;
}

KnapsackInstance generate_instance(std::size_t items, std::size_t scenarios,
                                   std::size_t criteria, std::uint64_t seed,
                                   std::optional<double> capacity) {
  if (items == 0) throw InvalidInput("items", "items must be at least 1");
  if (scenarios == 0) throw InvalidInput("scenarios", "scenarios must be at least 1");
  if (criteria == 0) throw InvalidInput("criteria", "criteria must be at least 1");

  UniformStream rng(seed);
  const double p = rng.next(0.25, 0.75);
  const double mean_weight = 1.0 / p;
  std::vector<double> weights(items);
  std::vector<double> benefits(items * criteria * scenarios);
  for (std::size_t i = 0; i < items; ++i) {
    weights[i] = rng.next(0.5 * mean_weight, 1.5 * mean_weight);
    for (std::size_t j = 0; j < scenarios; ++j) {
      for (std::size_t k = 0; k < criteria; ++k) {
        benefits[(i * criteria + k) * scenarios + j] = rng.next(0.0, 1.0);
      }
    }
  }
  return KnapsackInstance(std::move(weights),
                          capacity.value_or(static_cast<double>(items)),
                          std::move(benefits), ScenarioSet::uniform(scenarios),
                          CriteriaSet::uniform(criteria), seed);
}

OutcomeMatrix objective_matrix(const KnapsackInstance& inst, const Selection& x) {
  check_selection(inst, x);
  auto m = OutcomeMatrix::zeros(inst.criteria(), inst.scenarios());
  for (std::size_t i = 0; i < inst.items(); ++i) {
    if (x[i]) continue;
    for (std::size_t k = 0; k < inst.criteria(); ++k) {
      for (std::size_t j = 0; j < inst.scenarios(); ++j) {
        m(k, j) += inst.benefit(i, k, j);
      }
    }
  }
  return m;
}

double selection_weight(const KnapsackInstance& inst, const Selection& x) {
  check_selection(inst, x);
  double total = 0.0;
  for (std::size_t i = 0; i < inst.items(); ++i) {
    if (x[i]) total += inst.weights()[i];
  }
  return total;
}

bool is_feasible(const KnapsackInstance& inst, const Selection& x) {
  return selection_weight(inst, x) <= inst.capacity();
}

double msp_objective(const KnapsackInstance& inst, const RiskParams& rp,
                     const Selection& x) {
  return evaluate_h(objective_matrix(inst, x), inst.scenario_set(),
                    inst.criteria_set(), rp)
      .h;
}

double naive_objective(const KnapsackInstance& inst, const Selection& x) {
  return weighted_mean(objective_matrix(inst, x), inst.scenario_set(),
                       inst.criteria_set());
}

double KnapsackSolution::gap() const {
  if (exact) return 0.0;
  const double denom = std::max(std::abs(objective), 1e-12);
  return std::max(0.0, (objective - bound) / denom);
}

double msp_lower_bound(const KnapsackInstance& inst, const RiskParams& rp,
                       const PartialAssignment& partial) {
  if (partial.size() != inst.items()) {
    throw InvalidInput("partial", "partial assignment length mismatch");
  }
  std::vector<double> left(inst.criteria() * inst.scenarios(), 0.0);
  std::vector<std::size_t> undecided;
  double packed = 0.0;
  for (std::size_t i = 0; i < inst.items(); ++i) {
    if (partial[i] == 0) add_benefit(inst, i, left);
    else if (partial[i] == 1) packed += inst.weights()[i];
    else undecided.push_back(i);
  }
  if (packed > inst.capacity()) return kInf;
  return MspBounder(inst, rp).bound(left, undecided, inst.capacity() - packed,
                                    {}, {});
}

KnapsackSolution solve_msp(const KnapsackInstance& inst, const RiskParams& rp,
                           const SolveOptions& opts) {
  const auto start = Clock::now();
  const std::size_t n = inst.items();
  const std::size_t cells = inst.criteria() * inst.scenarios();
  const auto& v = inst.weights();
  const MspBounder bounder(inst, rp);
  const auto order = ratio_order(inst, item_scores(inst, naive_weights(inst)));

  struct Node {
    double bound;
    std::uint64_t seq;
    std::size_t depth;  // items order[0..depth) are decided
    double packed;
    std::vector<double> left;
    std::vector<std::uint8_t> taken;  // by position in `order`
  };
  // Lowest bound first; among equal bounds the deepest, then the oldest.
  const auto worse = [](const Node& a, const Node& b) {
    if (a.bound != b.bound) return a.bound > b.bound;
    if (a.depth != b.depth) return a.depth < b.depth;
    return a.seq > b.seq;
  };
  std::priority_queue<Node, std::vector<Node>, decltype(worse)> open(worse);

  KnapsackSolution best;
  best.x.assign(n, 0);
  best.objective = kInf;
  std::vector<double> inc_mu;
  std::vector<double> inc_scores;

  const auto offer = [&](const Selection& x) {
    const auto m = objective_matrix(inst, x);
    const double h = evaluate_h(m, inst.scenario_set(), inst.criteria_set(), rp).h;
    if (h < best.objective) {
      best.objective = h;
      best.x = x;
      inc_mu = supporting_weights(m, inst.scenario_set(), inst.criteria_set(), rp);
      inc_scores = item_scores(inst, inc_mu);
    }
  };
  const auto to_selection = [&](const Node& node, bool complete) {
    Selection x(n, 0);
    double packed = node.packed;
    for (std::size_t d = 0; d < n; ++d) {
      if (d < node.depth) {
        x[order[d]] = node.taken[d];
      } else if (complete && packed + v[order[d]] <= inst.capacity()) {
        x[order[d]] = 1;
        packed += v[order[d]];
      }
    }
    return x;
  };
  const auto node_bound = [&](const Node& node) {
    std::vector<std::size_t> undecided(order.begin() + node.depth, order.end());
    return bounder.bound(node.left, undecided, inst.capacity() - node.packed,
                         inc_mu, inc_scores);
  };
  const auto cutoff = [&]() {
    return best.objective -
           std::max(kPruneTolerance, opts.relative_gap * std::abs(best.objective));
  };

  std::uint64_t seq = 0;
  Node root{0.0, seq++, 0, 0.0, std::vector<double>(cells, 0.0), {}};
  offer(to_selection(root, true));
  root.bound = node_bound(root);
  open.push(std::move(root));

  bool budget_hit = false;
  while (!open.empty()) {
    if (open.top().bound >= cutoff()) break;  // every remaining node is pruned
    if (opts.node_budget != 0 && best.nodes >= opts.node_budget) {
      budget_hit = true;
      break;
    }
    Node node = open.top();
    open.pop();
    ++best.nodes;

    if (node.depth == n) {
      offer(to_selection(node, false));
      continue;
    }
    offer(to_selection(node, true));

    const std::size_t item = order[node.depth];
    // Pack first; its sequence number is older so it wins bound ties.
    if (node.packed + v[item] <= inst.capacity()) {
      Node child{0.0, seq++, node.depth + 1, node.packed + v[item], node.left,
                 node.taken};
      child.taken.push_back(1);
      child.bound = node_bound(child);
      if (child.bound < cutoff()) open.push(std::move(child));
    }
    Node child{0.0, seq++, node.depth + 1, node.packed, std::move(node.left),
               std::move(node.taken)};
    add_benefit(inst, item, child.left);
    child.taken.push_back(0);
    child.bound = node_bound(child);
    if (child.bound < cutoff()) open.push(std::move(child));
  }

  best.exact = !budget_hit && opts.relative_gap == 0.0;
  best.bound = best.objective;
  if (!best.exact) {
    // Pruned nodes are only known to lie above the cutoff.
    if (opts.relative_gap > 0.0) best.bound = std::min(best.bound, cutoff());
    if (!open.empty()) best.bound = std::min(best.bound, open.top().bound);
  }
  best.seconds = seconds_since(start);
  return best;
}

KnapsackSolution solve_naive(const KnapsackInstance& inst,
                             const SolveOptions& opts) {
  const auto start = Clock::now();
  const std::size_t n = inst.items();
  const auto& v = inst.weights();
  const auto scores = item_scores(inst, naive_weights(inst));
  const auto order = ratio_order(inst, scores);
  const double total = std::accumulate(scores.begin(), scores.end(), 0.0);

  KnapsackSolution best;
  best.x.assign(n, 0);
  double best_value = 0.0;  // empty knapsack
  Selection current(n, 0);
  bool budget_hit = false;

  // Dantzig bound on items order[depth..] with the given room.
  const auto upper = [&](std::size_t depth, double room) {
    double value = 0.0;
    for (std::size_t d = depth; d < n && room > 0.0; ++d) {
      const std::size_t i = order[d];
      if (v[i] <= room) {
        value += scores[i];
        room -= v[i];
      } else {
        value += scores[i] * room / v[i];
        break;
      }
    }
    return value;
  };
  const double root_upper = upper(0, inst.capacity());
  const double gap_slack = opts.relative_gap * std::abs(total);

  const auto search = [&](auto&& self, std::size_t depth, double room,
                          double value) -> void {
    if (budget_hit) return;
    if (opts.node_budget != 0 && best.nodes >= opts.node_budget) {
      budget_hit = true;
      return;
    }
    ++best.nodes;
    if (value > best_value) {
      best_value = value;
      best.x = current;
    }
    if (depth == n) return;
    if (value + upper(depth, room) <= best_value + 1e-12 + gap_slack) return;
    const std::size_t item = order[depth];
    if (v[item] <= room) {
      current[item] = 1;
      self(self, depth + 1, room - v[item], value + scores[item]);
      current[item] = 0;
    }
    self(self, depth + 1, room, value);
  };
  search(search, 0, inst.capacity(), 0.0);

  best.objective = naive_objective(inst, best.x);
  best.exact = !budget_hit && opts.relative_gap == 0.0;
  best.bound = best.exact ? best.objective : total - root_upper;
  best.seconds = seconds_since(start);
  return best;
}

namespace {

template <typename Objective>
KnapsackSolution exhaustive(const KnapsackInstance& inst, Objective objective,
                            Execution exec) {
  const auto start = Clock::now();
  const std::size_t n = inst.items();
  if (n > 20) throw InvalidInput("items", "exhaustive enumeration supports at most 20 items");
  const auto count = static_cast<std::int64_t>(std::uint64_t{1} << n);

  struct Best {
    double value = kInf;
    std::int64_t mask = -1;
  };
  const auto better = [](const Best& a, const Best& b) {
    if (a.value != b.value) return a.value < b.value;
    return a.mask < b.mask;
  };
  const auto visit = [&](std::int64_t mask, Best& local) {
    Selection x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = (mask >> i) & 1;
    if (!is_feasible(inst, x)) return;
    const Best candidate{objective(x), mask};
    if (local.mask < 0 || better(candidate, local)) local = candidate;
  };

  Best best;
  if (exec == Execution::kParallel) {
#pragma omp parallel num_threads(thread_count())
    {
      Best local;
#pragma omp for schedule(static)
      for (std::int64_t mask = 0; mask < count; ++mask) visit(mask, local);
#pragma omp critical
      if (local.mask >= 0 && (best.mask < 0 || better(local, best))) best = local;
    }
  } else {
    for (std::int64_t mask = 0; mask < count; ++mask) visit(mask, best);
  }

  KnapsackSolution out;
  out.x.resize(n);
  for (std::size_t i = 0; i < n; ++i) out.x[i] = (best.mask >> i) & 1;
  out.objective = best.value;
  out.bound = best.value;
  out.nodes = static_cast<std::uint64_t>(count);
  out.seconds = seconds_since(start);
  return out;
}

}  // namespace

KnapsackSolution exhaustive_oracle(const KnapsackInstance& inst,
                                   const RiskParams& rp, Execution exec) {
  return exhaustive(
      inst, [&](const Selection& x) { return msp_objective(inst, rp, x); }, exec);
}

KnapsackSolution exhaustive_naive_oracle(const KnapsackInstance& inst,
                                         Execution exec) {
  return exhaustive(
      inst, [&](const Selection& x) { return naive_objective(inst, x); }, exec);
}

DeltaReport compute_deltas(const KnapsackInstance& inst, const RiskParams& rp,
                           const KnapsackSolution& msp,
                           const KnapsackSolution& naive, double t_msp,
                           double t_mip) {
  DeltaReport out;
  out.t_msp = t_msp;
  out.t_mip = t_mip;
  out.delta_time = t_mip > 0.0 ? t_msp / t_mip : 0.0;
  out.z_msp = msp_objective(inst, rp, msp.x);
  out.z_mip = naive_objective(inst, naive.x);
  out.f_msp_of_mip = msp_objective(inst, rp, naive.x);
  out.f_mip_of_msp = naive_objective(inst, msp.x);

  const auto rate = [&](double numerator, double denominator) {
    if (std::abs(denominator) > 1e-12) return 100.0 * numerator / denominator;
    if (std::abs(numerator) > 1e-12) out.degenerate = true;
    return 0.0;
  };
  out.delta_avg = rate(out.f_mip_of_msp - out.z_mip, out.z_mip);
  out.delta_tail = rate(out.f_msp_of_mip - out.z_msp, out.f_msp_of_mip);
  return out;
}

std::vector<ExperimentRow> run_experiment(const ExperimentConfig& cfg,
                                          Execution exec) {
  if (cfg.items.empty() || cfg.scenarios.empty() || cfg.criteria.empty() ||
      cfg.betas.empty() || cfg.rs.empty() || cfg.seeds.empty()) {
    throw InvalidInput("config", "every factor list must be nonempty");
  }
  for (double b : cfg.betas) RiskParams(b, 1.0);
  for (double r : cfg.rs) RiskParams(1.0, r);

  struct InstanceSlot {
    KnapsackInstance instance;
    SolveOptions options;
    KnapsackSolution naive;
  };
  std::vector<InstanceSlot> slots;
  for (std::size_t items : cfg.items) {
    for (std::size_t scen : cfg.scenarios) {
      for (std::size_t crit : cfg.criteria) {
        for (std::uint64_t seed : cfg.seeds) {
          SolveOptions options;
          options.relative_gap = cfg.relative_gap;
          if (items > cfg.exact_cap) options.node_budget = cfg.node_budget;
          slots.push_back({generate_instance(items, scen, crit, seed, cfg.capacity),
                           options, {}});
        }
      }
    }
  }

  const std::size_t pairs = cfg.betas.size() * cfg.rs.size();
  std::vector<ExperimentRow> rows(slots.size() * pairs);
  const auto n_slots = static_cast<std::ptrdiff_t>(slots.size());
  const auto n_rows = static_cast<std::ptrdiff_t>(rows.size());

  const auto solve_slot = [&](std::ptrdiff_t s) {
    slots[s].naive = solve_naive(slots[s].instance, slots[s].options);
  };
  const auto solve_row = [&](std::ptrdiff_t idx) {
    const auto& slot = slots[static_cast<std::size_t>(idx) / pairs];
    const std::size_t pair = static_cast<std::size_t>(idx) % pairs;
    const RiskParams rp(cfg.betas[pair / cfg.rs.size()],
                        cfg.rs[pair % cfg.rs.size()]);
    const auto msp = solve_msp(slot.instance, rp, slot.options);
    ExperimentRow& row = rows[idx];
    row.n_items = slot.instance.items();
    row.n_scenarios = slot.instance.scenarios();
    row.n_criteria = slot.instance.criteria();
    row.beta = rp.beta();
    row.r = rp.r();
    row.seed = slot.instance.seed();
    row.report = compute_deltas(slot.instance, rp, msp, slot.naive, msp.seconds,
                                slot.naive.seconds);
    row.gap = std::max(msp.gap(), slot.naive.gap());
  };

  if (exec == Execution::kParallel) {
    const int threads = thread_count();
#pragma omp parallel for schedule(dynamic) num_threads(threads)
    for (std::ptrdiff_t s = 0; s < n_slots; ++s) solve_slot(s);
#pragma omp parallel for schedule(dynamic) num_threads(threads)
    for (std::ptrdiff_t idx = 0; idx < n_rows; ++idx) solve_row(idx);
  } else {
    for (std::ptrdiff_t s = 0; s < n_slots; ++s) solve_slot(s);
    for (std::ptrdiff_t idx = 0; idx < n_rows; ++idx) solve_row(idx);
  }
  return rows;
}

}  // namespace riskowa
