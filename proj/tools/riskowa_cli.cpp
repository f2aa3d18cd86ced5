// riskowa: command-line front end for the risk-averse scalarization library.
//
// Exit codes: 0 success, 1 unexpected failure, 2 usage or input error,
// 3 a solve stopped on its node budget with a nonzero gap (output still
// written).

#include <cstdio>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "riskowa/core.hpp"
#include "riskowa/enumeration.hpp"
#include "riskowa/io.hpp"
#include "riskowa/knapsack.hpp"
#include "riskowa/lp_export.hpp"

namespace {

using namespace riskowa;

constexpr int kExitUsage = 2;
constexpr int kExitBudget = 3;

std::string fixed6(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", value);
  return buf;
}

void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") std::cout << text;
  else io::write_file(path, text);
}

std::vector<std::size_t> parse_counts(const std::string& text, const char* field) {
  std::vector<std::size_t> out;
  for (double v : io::parse_number_list(text, field)) {
    if (v < 1 || v != static_cast<double>(static_cast<std::size_t>(v))) {
      throw InvalidInput(field, std::string(field) + " must be positive integers");
    }
    out.push_back(static_cast<std::size_t>(v));
  }
  return out;
}

// "1,2,5" or "1-30" or a mix of both.
std::vector<std::uint64_t> parse_seeds(const std::string& text) {
  std::vector<std::uint64_t> out;
  std::stringstream in(text);
  std::string part;
  try {
    while (std::getline(in, part, ',')) {
      const auto dash = part.find('-');
      if (dash == std::string::npos) {
        out.push_back(std::stoull(part));
      } else {
        const auto lo = std::stoull(part.substr(0, dash));
        const auto hi = std::stoull(part.substr(dash + 1));
        if (hi < lo) throw InvalidInput("seeds", "seed range must be ascending");
        for (auto s = lo; s <= hi; ++s) out.push_back(s);
      }
    }
  } catch (const InvalidInput&) {
    throw;
  } catch (const std::logic_error&) {
    throw InvalidInput("seeds", "cannot parse seed list '" + text + "'");
  }
  if (out.empty()) throw InvalidInput("seeds", "seed list must not be empty");
  return out;
}

AlternativeSet load_alternatives(const std::string& path, bool normalized) {
  auto alts = io::parse_alternatives_json(io::read_file(path));
  return normalized ? normalize(alts) : alts;
}

std::string selection_text(const Selection& x) {
  std::string out;
  for (auto bit : x) out.push_back(bit ? '1' : '0');
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Risk-averse scalarization of multiobjective stochastic programs"};
  app.require_subcommand(1);

  // eval
  std::string matrix_path, probs_text, imps_text;
  double beta = 0.0, r = 0.0;
  auto* eval = app.add_subcommand("eval", "Beta-averages and h of one outcome matrix");
  eval->add_option("--matrix", matrix_path, "CSV, criteria rows by scenario columns")
      ->required();
  eval->add_option("--probs", probs_text, "Scenario probabilities (default uniform)");
  eval->add_option("--importances", imps_text, "Criteria importances (default uniform)");
  eval->add_option("--beta", beta, "Scenario tail level in (0,1]")->required();
  eval->add_option("--r", r, "Criteria tail level in (0,1]")->required();

  // rank / sweep
  std::string alts_path, betas_text, rs_text, out_path;
  bool normalize_flag = false;
  auto* rank = app.add_subcommand("rank", "Evaluate every alternative at one (beta, r)");
  rank->add_option("--alternatives", alts_path, "Alternatives JSON")->required();
  rank->add_option("--beta", beta, "Scenario tail level in (0,1]")->required();
  rank->add_option("--r", r, "Criteria tail level in (0,1]")->required();
  rank->add_flag("--normalize", normalize_flag, "Min-max rescale each criterion first");
  rank->add_option("-o,--output", out_path, "Output CSV (default stdout)");

  auto* sweep_cmd = app.add_subcommand("sweep", "Optimal alternative over a (beta, r) grid");
  sweep_cmd->add_option("--alternatives", alts_path, "Alternatives JSON")->required();
  sweep_cmd->add_option("--betas", betas_text, "Comma-separated beta values")->required();
  sweep_cmd->add_option("--rs", rs_text, "Comma-separated r values")->required();
  sweep_cmd->add_flag("--normalize", normalize_flag, "Min-max rescale each criterion first");
  sweep_cmd->add_option("-o,--output", out_path, "Output CSV (default stdout)");

  // gen
  std::size_t n_items = 0, n_scen = 0, n_crit = 0;
  std::uint64_t seed = 0;
  std::optional<double> capacity;
  auto* gen = app.add_subcommand("gen", "Generate a random knapsack instance");
  gen->add_option("--items", n_items)->required();
  gen->add_option("--scenarios", n_scen)->required();
  gen->add_option("--criteria", n_crit)->required();
  gen->add_option("--seed", seed)->required();
  gen->add_option("--capacity", capacity, "Override the default capacity (item count)");
  gen->add_option("-o,--output", out_path, "Output JSON (default stdout)");

  // solve
  std::string instance_path;
  bool want_msp = false, want_naive = false, want_both = false;
  std::uint64_t node_budget = 0;
  double rel_gap = 0.0;
  auto* solve = app.add_subcommand("solve", "Solve a knapsack instance exactly");
  solve->add_option("--instance", instance_path, "Instance JSON")->required();
  auto* msp_flag = solve->add_flag("--msp", want_msp, "Minimize h of the benefit left behind");
  auto* naive_flag = solve->add_flag("--naive", want_naive, "Minimize the weighted mean");
  auto* both_flag = solve->add_flag("--both", want_both, "Solve both models and report deltas");
  msp_flag->excludes(naive_flag)->excludes(both_flag);
  naive_flag->excludes(both_flag);
  solve->add_option("--beta", beta, "Scenario tail level in (0,1]");
  solve->add_option("--r", r, "Criteria tail level in (0,1]");
  solve->add_option("--node-budget", node_budget, "Node limit (0: unlimited)");
  solve->add_option("--gap", rel_gap, "Admissible relative gap");
  solve->add_option("-o,--output", out_path, "Output CSV (default stdout)");

  // experiment
  std::string items_text = "30", scen_text = "10", crit_text = "3", seeds_text = "1";
  betas_text.clear();
  rs_text.clear();
  std::size_t exact_cap = 30;
  std::uint64_t exp_budget = 2'000'000;
  bool serial = false;
  auto* experiment = app.add_subcommand("experiment", "Factorial MSP vs naive comparison");
  experiment->add_option("--items", items_text, "Comma-separated item counts");
  experiment->add_option("--scenarios", scen_text, "Comma-separated scenario counts");
  experiment->add_option("--criteria", crit_text, "Comma-separated criteria counts");
  experiment->add_option("--betas", betas_text, "Comma-separated beta values (default 0.1)");
  experiment->add_option("--rs", rs_text, "Comma-separated r values (default 0.5)");
  experiment->add_option("--seeds", seeds_text, "Seeds, e.g. 1-30 or 3,7,9");
  experiment->add_option("--capacity", capacity, "Override the default capacity");
  experiment->add_option("--exact-cap", exact_cap, "Largest item count solved without a budget");
  experiment->add_option("--node-budget", exp_budget, "Node limit above the exact cap");
  experiment->add_option("--gap", rel_gap, "Admissible relative gap");
  experiment->add_flag("--serial", serial, "Run instances one after another");
  experiment->add_option("-o,--output", out_path, "Output CSV (default stdout)");

  // export
  auto* export_cmd = app.add_subcommand("export", "Write the MSP model as a CPLEX LP file");
  export_cmd->add_option("--instance", instance_path, "Instance JSON")->required();
  export_cmd->add_option("--beta", beta, "Scenario tail level in (0,1]")->required();
  export_cmd->add_option("--r", r, "Criteria tail level in (0,1]")->required();
  export_cmd->add_option("-o,--output", out_path, "Output .lp (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*eval) {
      const auto m = io::parse_matrix_csv(io::read_file(matrix_path));
      const ScenarioSet scen = probs_text.empty()
                                   ? ScenarioSet::uniform(m.scenarios())
                                   : ScenarioSet(io::parse_number_list(probs_text, "probs"));
      const CriteriaSet crit =
          imps_text.empty() ? CriteriaSet::uniform(m.criteria())
                            : CriteriaSet(io::parse_number_list(imps_text, "importances"));
      const auto result = evaluate_h(m, scen, crit, RiskParams(beta, r));
      for (std::size_t k = 0; k < result.g.size(); ++k) {
        std::cout << "g_" << k + 1 << ' ' << fixed6(result.g[k]) << '\n';
      }
      std::cout << "h " << fixed6(result.h) << '\n';
      return 0;
    }

    if (*rank) {
      const auto alts = load_alternatives(alts_path, normalize_flag);
      const auto ranked = solve_enumeration(alts, RiskParams(beta, r));
      std::ostringstream out;
      out << "name,h,minimizer,selected\n";
      for (std::size_t i = 0; i < alts.size(); ++i) {
        const bool tied = std::find(ranked.minimizers.begin(), ranked.minimizers.end(),
                                    i) != ranked.minimizers.end();
        out << alts.names()[i] << ',' << io::full_precision(ranked.evaluations[i].h)
            << ',' << (tied ? 1 : 0) << ',' << (i == ranked.representative ? 1 : 0)
            << '\n';
      }
      emit(out_path, out.str());
      return 0;
    }

    if (*sweep_cmd) {
      const auto alts = load_alternatives(alts_path, normalize_flag);
      const auto betas = io::parse_number_list(betas_text, "betas");
      const auto rs = io::parse_number_list(rs_text, "rs");
      const auto grid = sweep(alts, betas, rs, Execution::kSerial);
      emit(out_path, io::sweep_csv(grid, alts.names()));
      return 0;
    }

    if (*gen) {
      const auto inst = generate_instance(n_items, n_scen, n_crit, seed, capacity);
      emit(out_path, io::instance_to_json(inst));
      return 0;
    }

    if (*solve) {
      if (!want_msp && !want_naive && !want_both) want_both = true;
      const auto inst = io::parse_instance_json(io::read_file(instance_path));
      const SolveOptions opts{node_budget, rel_gap};
      std::ostringstream out;
      out << "model,objective,bound,nodes,exact,x\n";
      bool budget_hit = false;
      const auto report = [&](const char* name, const KnapsackSolution& s) {
        out << name << ',' << io::full_precision(s.objective) << ','
            << io::full_precision(s.bound) << ',' << s.nodes << ','
            << (s.exact ? 1 : 0) << ',' << selection_text(s.x) << '\n';
        budget_hit = budget_hit || s.gap() > 0.0;
      };
      std::optional<KnapsackSolution> msp, naive;
      if (want_msp || want_both) {
        msp = solve_msp(inst, RiskParams(beta, r), opts);
        report("msp", *msp);
      }
      if (want_naive || want_both) {
        naive = solve_naive(inst, opts);
        report("naive", *naive);
      }
      if (msp && naive) {
        const auto d = compute_deltas(inst, RiskParams(beta, r), *msp, *naive, 0, 0);
        out << "delta_avg," << io::full_precision(d.delta_avg) << '\n'
            << "delta_tail," << io::full_precision(d.delta_tail) << '\n';
      }
      emit(out_path, out.str());
      return budget_hit ? kExitBudget : 0;
    }

    if (*experiment) {
      ExperimentConfig cfg;
      cfg.items = parse_counts(items_text, "items");
      cfg.scenarios = parse_counts(scen_text, "scenarios");
      cfg.criteria = parse_counts(crit_text, "criteria");
      if (!betas_text.empty()) cfg.betas = io::parse_number_list(betas_text, "betas");
      if (!rs_text.empty()) cfg.rs = io::parse_number_list(rs_text, "rs");
      cfg.seeds = parse_seeds(seeds_text);
      cfg.capacity = capacity;
      cfg.exact_cap = exact_cap;
      cfg.node_budget = exp_budget;
      cfg.relative_gap = rel_gap;
      const auto rows =
          run_experiment(cfg, serial ? Execution::kSerial : Execution::kParallel);
      emit(out_path, io::experiment_csv(rows));
      for (const auto& row : rows) {
        if (row.gap > 0.0) return kExitBudget;
      }
      return 0;
    }

    if (*export_cmd) {
      const auto inst = io::parse_instance_json(io::read_file(instance_path));
      emit(out_path, write_lp_text(build_lp_model(inst, RiskParams(beta, r))));
      return 0;
    }
  } catch (const InvalidInput& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
