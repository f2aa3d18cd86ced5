#include "riskowa/lp_export.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <map>
#include <sstream>

namespace riskowa {

namespace {

constexpr std::size_t kTermsPerLine = 6;

std::string format_number(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

void add_term(std::vector<LpTerm>& terms, std::size_t var, double coef) {
  if (coef != 0.0) terms.push_back({var, coef});
}

void write_expression(std::ostringstream& out, const LpModel& model,
                      const std::vector<LpTerm>& terms) {
  for (std::size_t t = 0; t < terms.size(); ++t) {
    if (t > 0 && t % kTermsPerLine == 0) out << "\n  ";
    const double c = terms[t].coef;
    const std::string& name = model.variables[terms[t].var].name;
    if (t == 0) {
      if (c == 1.0) out << ' ' << name;
      else if (c == -1.0) out << " - " << name;
      else out << ' ' << format_number(c) << ' ' << name;
    } else {
      out << (c < 0.0 ? " - " : " + ");
      const double a = std::abs(c);
      if (a != 1.0) out << format_number(a) << ' ';
      out << name;
    }
  }
}

const char* sense_text(RowSense sense) {
  switch (sense) {
    case RowSense::kGreaterEqual: return ">=";
    case RowSense::kLessEqual: return "<=";
    case RowSense::kEqual: return "=";
  }
  return "=";
}

std::optional<double> parse_number(const std::string& token) {
  if (token.empty()) return std::nullopt;
  const char first = token.front();
  if (!(std::isdigit(static_cast<unsigned char>(first)) || first == '-' ||
        first == '+' || first == '.')) {
    return std::nullopt;
  }
  char* end = nullptr;
  const double value = std::strtod(token.c_str(), &end);
  if (end != token.c_str() + token.size()) return std::nullopt;
  return value;
}

std::vector<std::string> split_tokens(std::string_view line) {
  std::vector<std::string> out;
  std::istringstream in{std::string(line)};
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

// Parses "[name:] expr [sense rhs]" token lists.
class StatementParser {
 public:
  explicit StatementParser(LpModel& model) : model_(model) {}

  std::vector<LpTerm> terms(const std::vector<std::string>& tokens,
                            std::size_t begin, std::size_t end) {
    std::vector<LpTerm> out;
    double sign = 1.0;
    bool signed_ = false;
    std::optional<double> coef;
    for (std::size_t t = begin; t < end; ++t) {
      const std::string& tok = tokens[t];
      if (tok == "+" || tok == "-") {
        if (signed_ || coef) throw InvalidInput("lp", "misplaced sign in expression");
        sign = tok == "+" ? 1.0 : -1.0;
        signed_ = true;
      } else if (auto number = parse_number(tok)) {
        coef = *number;
      } else {
        const auto known = model_.find(tok);
        const std::size_t var =
            known ? *known : model_.add_variable(tok, VarKind::kNonNegative);
        out.push_back({var, sign * coef.value_or(1.0)});
        sign = 1.0;
        signed_ = false;
        coef.reset();
      }
    }
    if (coef || signed_) throw InvalidInput("lp", "dangling term in expression");
    return out;
  }

 private:
  LpModel& model_;
};

}  // namespace

std::optional<std::size_t> LpModel::find(std::string_view name) const {
  for (std::size_t i = 0; i < variables.size(); ++i) {
    if (variables[i].name == name) return i;
  }
  return std::nullopt;
}

std::size_t LpModel::add_variable(std::string name, VarKind kind) {
  variables.push_back({std::move(name), kind});
  return variables.size() - 1;
}

LpModel build_lp_model(const KnapsackInstance& inst, const RiskParams& rp) {
  const std::size_t K = inst.criteria();
  const std::size_t J = inst.scenarios();
  const std::size_t n = inst.items();
  const auto& w = inst.criteria_set();
  const auto& pi = inst.scenario_set();

  LpModel model;
  const std::size_t z = model.add_variable("z", VarKind::kFree);
  std::vector<std::size_t> v(K), zk(K), x(n);
  std::vector<std::size_t> y(K * J);
  for (std::size_t k = 0; k < K; ++k) {
    v[k] = model.add_variable("v_k" + std::to_string(k + 1), VarKind::kNonNegative);
  }
  for (std::size_t k = 0; k < K; ++k) {
    zk[k] = model.add_variable("zk_k" + std::to_string(k + 1), VarKind::kFree);
  }
  for (std::size_t k = 0; k < K; ++k) {
    for (std::size_t j = 0; j < J; ++j) {
      y[k * J + j] = model.add_variable(
          "y_k" + std::to_string(k + 1) + "_j" + std::to_string(j + 1),
          VarKind::kNonNegative);
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = model.add_variable("x_i" + std::to_string(i + 1), VarKind::kBinary);
  }

  add_term(model.objective, z, 1.0);
  for (std::size_t k = 0; k < K; ++k) add_term(model.objective, v[k], w[k] / rp.r());

  for (std::size_t k = 0; k < K; ++k) {
    LpRow row{"owa_k" + std::to_string(k + 1), {}, RowSense::kGreaterEqual, 0.0};
    add_term(row.terms, z, 1.0);
    add_term(row.terms, v[k], 1.0);
    add_term(row.terms, zk[k], -1.0);
    for (std::size_t j = 0; j < J; ++j) {
      add_term(row.terms, y[k * J + j], -pi[j] / rp.beta());
    }
    model.rows.push_back(std::move(row));
  }
  for (std::size_t k = 0; k < K; ++k) {
    for (std::size_t j = 0; j < J; ++j) {
      LpRow row{"beta_k" + std::to_string(k + 1) + "_j" + std::to_string(j + 1),
                {}, RowSense::kGreaterEqual, 0.0};
      add_term(row.terms, zk[k], 1.0);
      add_term(row.terms, y[k * J + j], 1.0);
      double rhs = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        add_term(row.terms, x[i], inst.benefit(i, k, j));
        rhs += inst.benefit(i, k, j);
      }
      row.rhs = rhs;
      model.rows.push_back(std::move(row));
    }
  }
  LpRow cap{"cap", {}, RowSense::kLessEqual, inst.capacity()};
  for (std::size_t i = 0; i < n; ++i) add_term(cap.terms, x[i], inst.weights()[i]);
  model.rows.push_back(std::move(cap));
  return model;
}

std::string write_lp_text(const LpModel& model) {
  std::ostringstream out;
  out << "Minimize\n obj:";
  write_expression(out, model, model.objective);
  out << "\nSubject To\n";
  for (const auto& row : model.rows) {
    out << ' ' << row.name << ':';
    write_expression(out, model, row.terms);
    out << ' ' << sense_text(row.sense) << ' ' << format_number(row.rhs) << '\n';
  }
  out << "Bounds\n";
  for (const auto& var : model.variables) {
    if (var.kind == VarKind::kFree) out << ' ' << var.name << " free\n";
  }
  out << "Binaries\n";
  for (const auto& var : model.variables) {
    if (var.kind == VarKind::kBinary) out << ' ' << var.name << '\n';
  }
  out << "End\n";
  return out.str();
}

LpModel parse_lp_text(std::string_view text) {
  enum class Section { kNone, kObjective, kRows, kBounds, kBinaries, kEnd };
  LpModel model;
  StatementParser parser(model);
  Section section = Section::kNone;
  std::vector<std::string> pending;  // tokens of the statement being read

  const auto flush_objective = [&]() {
    if (pending.empty()) return;
    std::size_t begin = 0;
    if (pending.front().back() == ':') begin = 1;
    model.objective = parser.terms(pending, begin, pending.size());
    pending.clear();
  };
  // A row is complete once a sense token and its right-hand side are read.
  const auto try_flush_row = [&]() {
    if (pending.size() < 3) return;
    const std::string& sense = pending[pending.size() - 2];
    if (sense != ">=" && sense != "<=" && sense != "=") return;
    const auto rhs = parse_number(pending.back());
    if (!rhs) throw InvalidInput("lp", "bad right-hand side '" + pending.back() + "'");
    if (pending.front().back() != ':') throw InvalidInput("lp", "unnamed row");
    LpRow row;
    row.name = pending.front().substr(0, pending.front().size() - 1);
    row.sense = sense == ">=" ? RowSense::kGreaterEqual
                : sense == "<=" ? RowSense::kLessEqual
                                : RowSense::kEqual;
    row.rhs = *rhs;
    row.terms = parser.terms(pending, 1, pending.size() - 2);
    model.rows.push_back(std::move(row));
    pending.clear();
  };

  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    const auto tokens = split_tokens(line);
    if (tokens.empty() || tokens.front().front() == '\\') continue;
    const std::string head = lower(line.substr(line.find_first_not_of(" \t")));
    Section next = section;
    if (head.rfind("minimize", 0) == 0) next = Section::kObjective;
    else if (head.rfind("subject to", 0) == 0) next = Section::kRows;
    else if (head.rfind("bounds", 0) == 0) next = Section::kBounds;
    else if (head.rfind("binaries", 0) == 0) next = Section::kBinaries;
    else if (head.rfind("end", 0) == 0 && tokens.size() == 1) next = Section::kEnd;
    if (next != section) {
      if (section == Section::kObjective) flush_objective();
      if (section == Section::kRows && !pending.empty()) {
        throw InvalidInput("lp", "incomplete row before section change");
      }
      section = next;
      continue;
    }
    switch (section) {
      case Section::kObjective:
        pending.insert(pending.end(), tokens.begin(), tokens.end());
        break;
      case Section::kRows:
        for (const auto& tok : tokens) {
          pending.push_back(tok);
          try_flush_row();
        }
        break;
      case Section::kBounds: {
        if (tokens.size() != 2 || lower(tokens[1]) != "free") {
          throw InvalidInput("lp", "unsupported bound line '" + line + "'");
        }
        const auto idx = model.find(tokens[0]);
        if (idx) model.variables[*idx].kind = VarKind::kFree;
        else model.add_variable(tokens[0], VarKind::kFree);
        break;
      }
      case Section::kBinaries:
        for (const auto& tok : tokens) {
          const auto idx = model.find(tok);
          if (idx) model.variables[*idx].kind = VarKind::kBinary;
          else model.add_variable(tok, VarKind::kBinary);
        }
        break;
      case Section::kNone:
      case Section::kEnd:
        throw InvalidInput("lp", "text outside any section: '" + line + "'");
    }
  }
  if (section != Section::kEnd) throw InvalidInput("lp", "missing End");
  return model;
}

bool same_structure(const LpModel& a, const LpModel& b) {
  if (a.variables.size() != b.variables.size() || a.rows.size() != b.rows.size()) {
    return false;
  }
  std::map<std::string, VarKind> kinds;
  for (const auto& var : a.variables) kinds[var.name] = var.kind;
  for (const auto& var : b.variables) {
    const auto it = kinds.find(var.name);
    if (it == kinds.end() || it->second != var.kind) return false;
  }
  const auto same_terms = [&](const std::vector<LpTerm>& ta,
                              const std::vector<LpTerm>& tb) {
    if (ta.size() != tb.size()) return false;
    for (std::size_t t = 0; t < ta.size(); ++t) {
      if (ta[t].coef != tb[t].coef ||
          a.variables[ta[t].var].name != b.variables[tb[t].var].name) {
        return false;
      }
    }
    return true;
  };
  if (!same_terms(a.objective, b.objective)) return false;
  for (std::size_t r = 0; r < a.rows.size(); ++r) {
    const auto& ra = a.rows[r];
    const auto& rb = b.rows[r];
    if (ra.name != rb.name || ra.sense != rb.sense || ra.rhs != rb.rhs ||
        !same_terms(ra.terms, rb.terms)) {
      return false;
    }
  }
  return true;
}

double objective_value(const LpModel& model, std::span<const double> values) {
  double acc = 0.0;
  for (const auto& t : model.objective) acc += t.coef * values[t.var];
  return acc;
}

bool satisfies(const LpModel& model, std::span<const double> values, double tol) {
  if (values.size() != model.variables.size()) return false;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double v = values[i];
    switch (model.variables[i].kind) {
      case VarKind::kFree: break;
      case VarKind::kNonNegative:
        if (v < -tol) return false;
        break;
      case VarKind::kBinary:
        if (v != 0.0 && v != 1.0) return false;
        break;
    }
  }
  for (const auto& row : model.rows) {
    double lhs = 0.0;
    for (const auto& t : row.terms) lhs += t.coef * values[t.var];
    switch (row.sense) {
      case RowSense::kGreaterEqual:
        if (lhs < row.rhs - tol) return false;
        break;
      case RowSense::kLessEqual:
        if (lhs > row.rhs + tol) return false;
        break;
      case RowSense::kEqual:
        if (std::abs(lhs - row.rhs) > tol) return false;
        break;
    }
  }
  return true;
}

namespace {

// argmin over t in `points` of t + sum_i c_i (f_i - t)^+.
double breakpoint_minimizer(const std::vector<double>& points,
                            const std::vector<double>& slopes) {
  double best_t = points.front();
  double best_value = std::numeric_limits<double>::infinity();
  for (double t : points) {
    double value = t;
    for (std::size_t i = 0; i < points.size(); ++i) {
      value += slopes[i] * std::max(points[i] - t, 0.0);
    }
    if (value < best_value) {
      best_value = value;
      best_t = t;
    }
  }
  return best_t;
}

}  // namespace

ContinuousOptimum continuous_optimum(const LpModel& model, const Selection& x) {
  const auto kind = [&](std::size_t var) { return model.variables[var].kind; };

  ContinuousOptimum out;
  out.values.assign(model.variables.size(), 0.0);
  std::size_t binaries = 0;
  for (std::size_t i = 0; i < model.variables.size(); ++i) {
    if (kind(i) != VarKind::kBinary) continue;
    const std::string& name = model.variables[i].name;
    const std::size_t item = std::stoul(name.substr(3)) - 1;  // "x_i<n>"
    if (item >= x.size()) throw InvalidInput("x", "selection shorter than model");
    out.values[i] = x[item];
    ++binaries;
  }
  if (binaries != x.size()) throw InvalidInput("x", "selection length mismatch");

  // Scenario rows: zk + y + b.x >= rhs, i.e. zk + y >= f.
  struct Scenario {
    std::size_t y;
    double f;
  };
  std::map<std::size_t, std::vector<Scenario>> by_zk;
  // Criteria rows: z + v - zk - sum c y >= 0.
  struct Criterion {
    std::size_t v;
    std::size_t zk;
  };
  std::vector<Criterion> criteria;
  std::map<std::size_t, double> y_slope;
  std::optional<std::size_t> z;

  for (const auto& row : model.rows) {
    if (row.name.rfind("beta_", 0) == 0) {
      std::optional<std::size_t> zk, y;
      double f = row.rhs;
      for (const auto& t : row.terms) {
        if (kind(t.var) == VarKind::kBinary) f -= t.coef * out.values[t.var];
        else if (kind(t.var) == VarKind::kFree) zk = t.var;
        else y = t.var;
      }
      if (!zk || !y) throw InvalidInput("lp", "malformed scenario row " + row.name);
      by_zk[*zk].push_back({*y, f});
    } else if (row.name.rfind("owa_", 0) == 0) {
      Criterion c{0, 0};
      for (const auto& t : row.terms) {
        if (kind(t.var) == VarKind::kFree) {
          if (t.coef > 0.0) z = t.var;
          else c.zk = t.var;
        } else if (t.coef > 0.0) {
          c.v = t.var;
        } else {
          y_slope[t.var] = -t.coef;
        }
      }
      criteria.push_back(c);
    }
  }
  if (!z || criteria.empty()) throw InvalidInput("lp", "model has no criteria rows");

  std::vector<double> level(criteria.size());
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    const auto& scen = by_zk.at(criteria[k].zk);
    std::vector<double> f, c;
    for (const auto& s : scen) {
      f.push_back(s.f);
      const auto it = y_slope.find(s.y);
      c.push_back(it == y_slope.end() ? 0.0 : it->second);
    }
    const double t = breakpoint_minimizer(f, c);
    out.values[criteria[k].zk] = t;
    double g = t;
    for (std::size_t j = 0; j < scen.size(); ++j) {
      out.values[scen[j].y] = std::max(f[j] - t, 0.0);
      g += c[j] * out.values[scen[j].y];
    }
    level[k] = g;
  }

  std::vector<double> a(criteria.size(), 0.0);
  for (const auto& t : model.objective) {
    for (std::size_t k = 0; k < criteria.size(); ++k) {
      if (t.var == criteria[k].v) a[k] = t.coef;
    }
  }
  const double top = breakpoint_minimizer(level, a);
  out.values[*z] = top;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    out.values[criteria[k].v] = std::max(level[k] - top, 0.0);
  }
  out.objective = objective_value(model, out.values);
  return out;
}

}  // namespace riskowa
