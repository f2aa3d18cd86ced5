#ifndef RISKOWA_IO_HPP
#define RISKOWA_IO_HPP

#include <string>
#include <string_view>
#include <vector>

#include "riskowa/core.hpp"
#include "riskowa/enumeration.hpp"
#include "riskowa/knapsack.hpp"

namespace riskowa::io {

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view contents);

/// "%.17g": shortest text guaranteed to read back to the same double.
std::string full_precision(double value);

/// Comma-separated reals, e.g. "0.2,0.1,0.7".
std::vector<double> parse_number_list(std::string_view text, const char* field);

/// K lines of J comma-separated values (criteria by scenarios). Blank lines
/// and lines starting with '#' are skipped.
OutcomeMatrix parse_matrix_csv(std::string_view text);

/// {"probs": [...], "importances": [...],
///  "alternatives": [{"name": "...", "values": [[...], ...]}, ...]}
/// with each "values" a K x J array (rows are criteria).
AlternativeSet parse_alternatives_json(std::string_view text);

/// {"weights": [...], "capacity": V, "benefits": [[[...]]], "probs": [...],
///  "importances": [...], "seed": s}; benefits are item, criterion, scenario.
std::string instance_to_json(const KnapsackInstance& inst);
KnapsackInstance parse_instance_json(std::string_view text);

/// Header "beta,r,winner,h"; one row per cell, beta-major.
std::string sweep_csv(const SweepGrid& grid, const std::vector<std::string>& names);

/// Header "n_items,n_scenarios,n_criteria,beta,r,seed,t_msp,t_mip,
/// delta_time,delta_avg,delta_tail,gap".
std::string experiment_csv(const std::vector<ExperimentRow>& rows);

}  // namespace riskowa::io

#endif  // RISKOWA_IO_HPP
