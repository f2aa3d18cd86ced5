#include "riskowa/io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace riskowa::io {

namespace {

using nlohmann::json;

json parse_json(std::string_view text, const char* field) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw InvalidInput(field, std::string(field) + ": " + e.what());
  }
}

const json& require(const json& obj, const char* key) {
  if (!obj.is_object() || !obj.contains(key)) {
    throw InvalidInput(key, std::string("missing field '") + key + "'");
  }
  return obj.at(key);
}

std::vector<double> number_array(const json& node, const char* field) {
  if (!node.is_array()) {
    throw InvalidInput(field, std::string(field) + " must be an array of numbers");
  }
  std::vector<double> out;
  out.reserve(node.size());
  for (const auto& v : node) {
    if (!v.is_number()) {
      throw InvalidInput(field, std::string(field) + " must be an array of numbers");
    }
    out.push_back(v.get<double>());
  }
  return out;
}

std::vector<std::vector<double>> number_rows(const json& node, const char* field) {
  if (!node.is_array()) {
    throw InvalidInput(field, std::string(field) + " must be an array of arrays");
  }
  std::vector<std::vector<double>> rows;
  for (const auto& row : node) rows.push_back(number_array(row, field));
  return rows;
}

double parse_real(std::string_view token, const char* field) {
  const std::string text(token);
  char* end = nullptr;
  const double value = std::strtod(text.c_str(), &end);
  if (text.empty() || end != text.c_str() + text.size()) {
    throw InvalidInput(field, std::string(field) + ": cannot parse '" + text +
                                  "' as a number");
  }
  return value;
}

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

}  // namespace

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInput("path", "cannot open '" + path + "' for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidInput("path", "cannot open '" + path + "' for writing");
  out << contents;
}

std::string full_precision(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

std::vector<double> parse_number_list(std::string_view text, const char* field) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto comma = text.find(',', pos);
    const auto end = comma == std::string_view::npos ? text.size() : comma;
    out.push_back(parse_real(trim(text.substr(pos, end - pos)), field));
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return out;
}

OutcomeMatrix parse_matrix_csv(std::string_view text) {
  std::vector<std::vector<double>> rows;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    const std::string body = trim(line);
    if (body.empty() || body.front() == '#') continue;
    rows.push_back(parse_number_list(body, "matrix"));
  }
  return OutcomeMatrix::from_rows(rows);
}

AlternativeSet parse_alternatives_json(std::string_view text) {
  const json doc = parse_json(text, "alternatives");
  ScenarioSet scen(number_array(require(doc, "probs"), "probs"));
  CriteriaSet crit(number_array(require(doc, "importances"), "importances"));
  const json& list = require(doc, "alternatives");
  if (!list.is_array()) {
    throw InvalidInput("alternatives", "alternatives must be an array");
  }
  std::vector<std::string> names;
  std::vector<OutcomeMatrix> matrices;
  for (const auto& alt : list) {
    const json& name = require(alt, "name");
    if (!name.is_string()) throw InvalidInput("name", "name must be a string");
    names.push_back(name.get<std::string>());
    matrices.push_back(OutcomeMatrix::from_rows(number_rows(require(alt, "values"), "values")));
  }
  return AlternativeSet(std::move(names), std::move(matrices), std::move(scen),
                        std::move(crit));
}

std::string instance_to_json(const KnapsackInstance& inst) {
  json benefits = json::array();
  for (std::size_t i = 0; i < inst.items(); ++i) {
    json item = json::array();
    for (std::size_t k = 0; k < inst.criteria(); ++k) {
      json row = json::array();
      for (std::size_t j = 0; j < inst.scenarios(); ++j) {
        row.push_back(inst.benefit(i, k, j));
      }
      item.push_back(std::move(row));
    }
    benefits.push_back(std::move(item));
  }
  json doc;
  doc["weights"] = inst.weights();
  doc["capacity"] = inst.capacity();
  doc["benefits"] = std::move(benefits);
  const auto probs = inst.scenario_set().probs();
  const auto imps = inst.criteria_set().importances();
  doc["probs"] = std::vector<double>(probs.begin(), probs.end());
  doc["importances"] = std::vector<double>(imps.begin(), imps.end());
  doc["seed"] = inst.seed();
  return doc.dump(1) + "\n";
}

KnapsackInstance parse_instance_json(std::string_view text) {
  const json doc = parse_json(text, "instance");
  auto weights = number_array(require(doc, "weights"), "weights");
  const json& cap = require(doc, "capacity");
  if (!cap.is_number()) throw InvalidInput("capacity", "capacity must be a number");
  ScenarioSet scen(number_array(require(doc, "probs"), "probs"));
  CriteriaSet crit(number_array(require(doc, "importances"), "importances"));

  const json& tensor = require(doc, "benefits");
  if (!tensor.is_array() || tensor.size() != weights.size()) {
    throw InvalidInput("benefits", "benefits must hold one entry per item");
  }
  std::vector<double> flat;
  flat.reserve(weights.size() * crit.size() * scen.size());
  for (const auto& item : tensor) {
    const auto rows = number_rows(item, "benefits");
    if (rows.size() != crit.size()) {
      throw InvalidInput("benefits", "each item needs one row per criterion");
    }
    for (const auto& row : rows) {
      if (row.size() != scen.size()) {
        throw InvalidInput("benefits", "each criterion row needs one value per scenario");
      }
      flat.insert(flat.end(), row.begin(), row.end());
    }
  }
  std::uint64_t seed = 0;
  if (doc.contains("seed")) {
    if (!doc["seed"].is_number_unsigned()) {
      throw InvalidInput("seed", "seed must be a nonnegative integer");
    }
    seed = doc["seed"].get<std::uint64_t>();
  }
  return KnapsackInstance(std::move(weights), cap.get<double>(), std::move(flat),
                          std::move(scen), std::move(crit), seed);
}

std::string sweep_csv(const SweepGrid& grid, const std::vector<std::string>& names) {
  std::ostringstream out;
  out << "beta,r,winner,h\n";
  for (std::size_t b = 0; b < grid.betas.size(); ++b) {
    for (std::size_t r = 0; r < grid.rs.size(); ++r) {
      const auto& cell = grid.cell(b, r);
      out << full_precision(grid.betas[b]) << ',' << full_precision(grid.rs[r])
          << ',' << names.at(cell.winner) << ',' << full_precision(cell.h) << '\n';
    }
  }
  return out.str();
}

std::string experiment_csv(const std::vector<ExperimentRow>& rows) {
  std::ostringstream out;
  out << "n_items,n_scenarios,n_criteria,beta,r,seed,t_msp,t_mip,delta_time,"
         "delta_avg,delta_tail,gap\n";
  for (const auto& row : rows) {
    const auto& d = row.report;
    out << row.n_items << ',' << row.n_scenarios << ',' << row.n_criteria << ','
        << full_precision(row.beta) << ',' << full_precision(row.r) << ','
        << row.seed << ',' << full_precision(d.t_msp) << ','
        << full_precision(d.t_mip) << ',' << full_precision(d.delta_time) << ','
        << full_precision(d.delta_avg) << ',' << full_precision(d.delta_tail)
        << ',' << full_precision(row.gap) << '\n';
  }
  return out.str();
}

}  // namespace riskowa::io
