#pragma once

// Command-line front end. `dispatch` parses arguments, runs one subcommand
// and renders its report; exit codes are 0 (success), 1 (usage) and 2
// (unreadable or unusable data).

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "catassoc/catassoc.hpp"

namespace catassoc::cli {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Reports

using Cell = std::variant<std::string, double, long long>;

struct Table {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

struct Report {
  std::string command;
  std::vector<std::pair<std::string, Cell>> fields;
  std::vector<Table> tables;

  void field(std::string key, Cell value) { fields.emplace_back(std::move(key), std::move(value)); }
};

enum class Format { human, delimited, structured };

struct OutputOptions {
  Format format = Format::human;
  int precision = 4;
  char delimiter = ',';
};

inline std::string format_cell(const Cell& c, int precision) {
  if (const auto* s = std::get_if<std::string>(&c)) return *s;
  if (const auto* i = std::get_if<long long>(&c)) return std::to_string(*i);
  std::ostringstream os;
  os << std::fixed << std::setprecision(precision) << std::get<double>(c);
  return os.str();
}

inline std::string quote_field(const std::string& s, char delim) {
  if (s.find_first_of(std::string{delim, '"', '\n'}) == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

inline void render_human(const Report& r, const OutputOptions& o, std::ostream& out) {
  std::size_t key_width = 0;
  for (const auto& [k, v] : r.fields) key_width = std::max(key_width, k.size());
  for (const auto& [k, v] : r.fields)
    out << std::left << std::setw(static_cast<int>(key_width)) << k << "  " << format_cell(v, o.precision) << '\n';
  for (const auto& t : r.tables) {
    out << '\n' << t.name << '\n';
    std::vector<std::size_t> width(t.columns.size(), 0);
    std::vector<std::vector<std::string>> text;
    for (std::size_t c = 0; c < t.columns.size(); ++c) width[c] = t.columns[c].size();
    for (const auto& row : t.rows) {
      auto& line = text.emplace_back();
      for (std::size_t c = 0; c < row.size(); ++c) {
        line.push_back(format_cell(row[c], o.precision));
        width[c] = std::max(width[c], line.back().size());
      }
    }
    // Text columns are left-aligned, numbers right-aligned; headers follow the first row.
    auto emit = [&](const std::vector<std::string>& cells, const std::vector<Cell>* kinds) {
      std::string line;
      for (std::size_t c = 0; c < cells.size(); ++c) {
        const bool text_cell = !kinds || std::holds_alternative<std::string>((*kinds)[c]);
        const std::string pad(width[c] - cells[c].size(), ' ');
        line += (c ? "  " : "") + (text_cell ? cells[c] + pad : pad + cells[c]);
      }
      while (!line.empty() && line.back() == ' ') line.pop_back();
      out << line << '\n';
    };
    emit(t.columns, t.rows.empty() ? nullptr : &t.rows.front());
    for (std::size_t i = 0; i < text.size(); ++i) emit(text[i], &t.rows[i]);
  }
}

inline void render_delimited(const Report& r, const OutputOptions& o, std::ostream& out) {
  const char d = o.delimiter;
  out << "field" << d << "value\n";
  for (const auto& [k, v] : r.fields) out << quote_field(k, d) << d << quote_field(format_cell(v, o.precision), d) << '\n';
  for (const auto& t : r.tables) {
    out << '\n';
    for (std::size_t c = 0; c < t.columns.size(); ++c) out << (c ? std::string(1, d) : "") << quote_field(t.columns[c], d);
    out << '\n';
    for (const auto& row : t.rows) {
      for (std::size_t c = 0; c < row.size(); ++c)
        out << (c ? std::string(1, d) : "") << quote_field(format_cell(row[c], o.precision), d);
      out << '\n';
    }
  }
}

inline nlohmann::ordered_json to_json(const Cell& c) {
  if (const auto* s = std::get_if<std::string>(&c)) return *s;
  if (const auto* i = std::get_if<long long>(&c)) return *i;
  return std::get<double>(c);
}

inline void render_structured(const Report& r, std::ostream& out) {
  nlohmann::ordered_json j;
  j["command"] = r.command;
  auto& fields = j["fields"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : r.fields) fields[k] = to_json(v);
  auto& tables = j["tables"] = nlohmann::ordered_json::array();
  for (const auto& t : r.tables) {
    nlohmann::ordered_json jt;
    jt["name"] = t.name;
    jt["columns"] = t.columns;
    auto& rows = jt["rows"] = nlohmann::ordered_json::array();
    for (const auto& row : t.rows) {
      auto& jr = rows.emplace_back(nlohmann::ordered_json::array());
      for (const auto& c : row) jr.push_back(to_json(c));
    }
    tables.push_back(std::move(jt));
  }
  out << j.dump() << '\n';
}

inline void render(const Report& r, const OutputOptions& o, std::ostream& out) {
  switch (o.format) {
    case Format::human: render_human(r, o, out); break;
    case Format::delimited: render_delimited(r, o, out); break;
    case Format::structured: render_structured(r, out); break;
  }
}

// ---------------------------------------------------------------------------
// Argument helpers

inline std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : s) {
    if (ch == ',') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

inline std::size_t resolve_one(const CategoricalDataset& data, const std::string& name, const std::string& flag) {
  if (auto v = data.find(name)) return *v;
  throw UsageError(flag + ": unknown variable '" + name + "' (available: " + data.names() + ")");
}

inline VarSet resolve_list(const CategoricalDataset& data, const std::string& list, const std::string& flag) {
  VarSet out;
  for (const auto& name : split_list(list)) out.push_back(resolve_one(data, name, flag));
  if (out.empty()) throw UsageError(flag + ": no variables given");
  return out;
}

inline std::string join_names(const CategoricalDataset& data, const VarSet& vars) {
  std::string out;
  for (auto v : vars) out += (out.empty() ? "" : ",") + data.variable(v).name;
  return out.empty() ? "-" : out;
}

// Runs `f`, prefixing library errors with the flags they concern.
template <typename F>
auto guarded(const std::string& where, F&& f) {
  try {
    return f();
  } catch (const UsageError&) {
    throw;
  } catch (const DataError& e) {
    throw DataError(where + ": " + e.what());
  } catch (const std::invalid_argument& e) {
    throw UsageError(where + ": " + e.what());
  }
}

struct InputOptions {
  std::string delimiter = ",";
  std::string missing_token = "__NA__";
  std::string missing_policy = "category";
  std::string mass_column;
};

inline LoadOptions load_options(const InputOptions& in) {
  LoadOptions o;
  if (in.delimiter == "\\t" || in.delimiter == "tab")
    o.delimiter = '\t';
  else if (in.delimiter.size() == 1)
    o.delimiter = in.delimiter.front();
  else
    throw UsageError("--delimiter: expected a single character (or 'tab'), got '" + in.delimiter + "'");
  o.missing_token = in.missing_token;
  o.missing_policy = in.missing_policy == "drop" ? MissingPolicy::drop_row : MissingPolicy::own_category;
  if (!in.mass_column.empty()) o.mass_column = in.mass_column;
  return o;
}

inline CategoricalDataset load(const std::string& path, const InputOptions& in, const std::string& flag) {
  try {
    return load_delimited(path, load_options(in));
  } catch (const ParseError& e) {
    throw ParseError(flag + " '" + path + "': " + e.what());
  } catch (const DataError& e) {
    throw DataError(flag + " '" + path + "': " + e.what());
  }
}

struct ParsedWeights {
  WeightSpec spec = WeightScheme::gk;
  std::string label = "gk";
  bool from_file = false;
  bool rescaled = false;
};

inline ParsedWeights parse_weights(const std::string& text) {
  ParsedWeights w;
  w.label = text;
  if (text == "gk") return w;
  if (text == "equal") {
    w.spec = WeightScheme::equal;
    return w;
  }
  if (text == "invprob") {
    w.spec = WeightScheme::invprob;
    return w;
  }
  if (text.rfind("file:", 0) == 0) {
    const std::string path = text.substr(5);
    std::ifstream f(path);
    if (!f) throw UsageError("--weights: cannot open weight file '" + path + "'");
    std::vector<double> raw;
    std::string token;
    while (f >> token) {
      for (const auto& part : split_list(token)) {
        try {
          std::size_t used = 0;
          raw.push_back(std::stod(part, &used));
          if (used != part.size()) throw std::invalid_argument(part);
        } catch (const std::exception&) {
          throw UsageError("--weights: '" + part + "' in '" + path + "' is not a number");
        }
      }
    }
    double sum = 0.0;
    for (double x : raw) sum += x;
    try {
      w.spec = WeightVector::normalized(raw);
    } catch (const std::invalid_argument& e) {
      throw UsageError(std::string("--weights: ") + e.what());
    }
    w.from_file = true;
    w.rescaled = std::abs(sum - 1.0) > 1e-12;
    return w;
  }
  throw UsageError("--weights: expected gk, equal, invprob or file:<path>, got '" + text + "'");
}

inline std::vector<std::string> level_names(const CategoricalDataset& data, std::size_t v) {
  return data.variable(v).levels;
}

// ---------------------------------------------------------------------------
// Commands

struct Context {
  InputOptions input;
  OutputOptions output;
  unsigned threads = 1;
};

inline Report cmd_inspect(const Context& ctx, const std::string& file) {
  const auto data = load(file, ctx.input, "<file>");
  Report r{"inspect", {}, {}};
  r.field("rows", static_cast<long long>(data.num_rows()));
  r.field("total_mass", data.total_mass());
  r.field("unit_mass", data.unit_mass() ? "yes" : "no");
  r.field("variables", static_cast<long long>(data.num_variables()));
  Table vars{"variables", {"variable", "levels", "observed", "gini_variation"}, {}};
  Table levels{"levels", {"variable", "level", "mass", "proportion"}, {}};
  for (std::size_t v = 0; v < data.num_variables(); ++v) {
    const auto stats = MarginalStats::of(data, v);
    std::vector<double> mass(data.variable(v).cardinality(), 0.0);
    for (std::size_t row = 0; row < data.num_rows(); ++row) mass[data.column(v)[row]] += data.mass()[row];
    long long observed = 0;
    for (double m : mass) observed += m > 0.0;
    vars.rows.push_back({data.variable(v).name, static_cast<long long>(data.variable(v).cardinality()), observed,
                         stats.gini_variation});
    for (std::size_t k = 0; k < mass.size(); ++k)
      levels.rows.push_back({data.variable(v).name, data.variable(v).levels[k], mass[k], stats.p[k]});
  }
  r.tables = {std::move(vars), std::move(levels)};
  return r;
}

struct PairArgs {
  std::string file, response, given;
};

inline Report cmd_matrix(const Context& ctx, const PairArgs& a) {
  const auto data = load(a.file, ctx.input, "<file>");
  const auto y = resolve_one(data, a.response, "--response");
  const auto x = resolve_list(data, a.given, "--given");
  const auto where = "--response " + a.response + " --given " + a.given;
  const auto gamma = guarded(where, [&] { return gamma_matrix(contingency(data, x, y)); });
  const auto names = level_names(data, y);

  Report r{"matrix", {}, {}};
  r.field("response", a.response);
  r.field("given", join_names(data, x));
  std::string dropped;
  for (auto s : gamma.dropped) dropped += (dropped.empty() ? "" : ",") + names[s];
  r.field("dropped_levels", dropped.empty() ? "-" : dropped);
  Table t{"gamma (rows: true level, columns: predicted level)", {a.response}, {}};
  for (std::size_t k = 0; k < gamma.size; ++k) t.columns.push_back(names[gamma.levels[k]]);
  for (std::size_t s = 0; s < gamma.size; ++s) {
    std::vector<Cell> row{names[gamma.levels[s]]};
    for (std::size_t u = 0; u < gamma.size; ++u) row.emplace_back(gamma(s, u));
    t.rows.push_back(std::move(row));
  }
  r.tables.push_back(std::move(t));
  return r;
}

inline Report cmd_vector(const Context& ctx, const PairArgs& a) {
  const auto data = load(a.file, ctx.input, "<file>");
  const auto y = resolve_one(data, a.response, "--response");
  const auto x = resolve_list(data, a.given, "--given");
  const auto where = "--response " + a.response + " --given " + a.given;
  const auto table = guarded(where, [&] { return contingency(data, x, y); });
  const auto theta = guarded(where, [&] { return theta_vector(table); });
  const auto names = level_names(data, y);

  Report r{"vector", {}, {}};
  r.field("response", a.response);
  r.field("given", join_names(data, x));
  if (MarginalStats::of(table).gini_variation > 0.0) r.field("gk_tau", gk_tau(table));
  Table t{"theta", {"level", "p", "theta", "defined"}, {}};
  for (std::size_t s = 0; s < theta.size(); ++s)
    t.rows.push_back({names[s], theta.y_marginal[s], theta[s], theta.defined[s] ? "yes" : "no"});
  r.tables.push_back(std::move(t));
  return r;
}

inline Report cmd_tau(const Context& ctx, const PairArgs& a, const std::string& weights_text) {
  const auto data = load(a.file, ctx.input, "<file>");
  const auto y = resolve_one(data, a.response, "--response");
  const auto x = resolve_list(data, a.given, "--given");
  const auto weights = parse_weights(weights_text);
  const auto where = "--response " + a.response + " --given " + a.given;
  const auto table = guarded(where, [&] { return contingency(data, x, y); });
  const auto theta = guarded(where, [&] { return theta_vector(table); });
  const auto alpha = guarded("--weights " + weights_text, [&] { return resolve_weights(weights.spec, MarginalStats::of(table)); });
  const double value = guarded(where, [&] { return tau_alpha(theta, alpha); });
  const auto names = level_names(data, y);

  Report r{"tau", {}, {}};
  r.field("response", a.response);
  r.field("given", join_names(data, x));
  r.field("weights", weights.label);
  if (weights.from_file) r.field("weights_rescaled", weights.rescaled ? "yes" : "no");
  r.field("regular", alpha.regular() ? "yes" : "no");
  r.field("tau", value);
  Table t{"components", {"level", "p", "alpha", "theta"}, {}};
  for (std::size_t s = 0; s < theta.size(); ++s) t.rows.push_back({names[s], theta.y_marginal[s], alpha[s], theta[s]});
  r.tables.push_back(std::move(t));
  return r;
}

struct SelectArgs {
  std::string file, response, candidates, weights = "gk";
  double epsilon = 1e-9;
  std::optional<std::size_t> max_cells = 10000;
  std::optional<std::size_t> max_vars;
};

inline Report cmd_select(const Context& ctx, const SelectArgs& a, bool supervised) {
  const auto data = load(a.file, ctx.input, "<file>");
  std::optional<std::size_t> y;
  if (supervised) {
    if (a.response.empty()) throw UsageError("--response: required for supervised selection");
    y = resolve_one(data, a.response, "--response");
  }
  VarSet candidates;
  if (!a.candidates.empty()) {
    candidates = resolve_list(data, a.candidates, "--candidates");
  } else {
    for (std::size_t v = 0; v < data.num_variables(); ++v)
      if (!y || v != *y) candidates.push_back(v);
  }
  SelectionConfig config;
  config.weights = parse_weights(a.weights).spec;
  config.epsilon = a.epsilon;
  config.max_cells = a.max_cells;
  config.max_vars = a.max_vars;
  config.threads = ctx.threads;
  const std::string where = supervised ? "--response " + a.response : "select structural";
  const auto result = guarded(where, [&] {
    return supervised ? select_supervised(data, *y, candidates, config) : select_structural(data, candidates, config);
  });

  Report r{supervised ? "select supervised" : "select structural", {}, {}};
  const char* measure = supervised ? "tau" : "Ep";
  if (supervised) {
    r.field("response", a.response);
    r.field("weights", a.weights);
  }
  r.field("candidates", join_names(data, candidates));
  r.field("basis", join_names(data, result.basis));
  r.field(std::string("forward_") + measure, result.forward_value);
  r.field(std::string("final_") + measure, result.final_value);
  if (result.full_value) r.field(std::string("full_") + measure, *result.full_value);
  r.field("terminated_by", to_string(result.terminated_by));
  Table trace{"forward trace", {"step", "variable", measure, "cells"}, {}};
  for (std::size_t k = 0; k < result.trace.size(); ++k)
    trace.rows.push_back({static_cast<long long>(k + 1), data.variable(result.trace[k].variable).name,
                          result.trace[k].value, static_cast<long long>(result.trace[k].cells)});
  r.tables.push_back(std::move(trace));
  if (!result.removed.empty()) {
    Table removed{"removed in backward pass", {"variable"}, {}};
    for (auto v : result.removed) removed.rows.push_back({data.variable(v).name});
    r.tables.push_back(std::move(removed));
  }
  if (!result.skipped.empty()) {
    Table skipped{"skipped (over --max-cells)", {"variable", "cells"}, {}};
    for (const auto& s : result.skipped)
      skipped.rows.push_back({data.variable(s.variable).name, static_cast<long long>(s.cells)});
    r.tables.push_back(std::move(skipped));
  }
  return r;
}

inline EquivalenceKind parse_level(std::string text) {
  if (!text.empty() && (text.front() == 'E' || text.front() == 'e')) text.erase(0, 1);
  if (text == "1") return EquivalenceKind::E1;
  if (text == "2") return EquivalenceKind::E2;
  if (text == "2'" || text == "2p" || text == "2prime") return EquivalenceKind::E2prime;
  if (text == "3") return EquivalenceKind::E3;
  if (text == "4") return EquivalenceKind::E4;
  if (text == "5") return EquivalenceKind::E5;
  throw UsageError("--level: expected one of 1, 2, 2', 3, 4, 5 (got '" + text + "')");
}

struct EquivArgs {
  std::string file, x1, x2, response, level, weights = "gk";
  double tol = kDefaultEquivalenceTolerance;
};

inline Report cmd_equiv(const Context& ctx, const EquivArgs& a) {
  const auto data = load(a.file, ctx.input, "<file>");
  const auto x1 = resolve_list(data, a.x1, "--x1");
  const auto x2 = resolve_list(data, a.x2, "--x2");
  const auto y = resolve_list(data, a.response, "--response");
  const auto alpha = parse_weights(a.weights).spec;
  const auto where = "--x1 " + a.x1 + " --x2 " + a.x2 + " --response " + a.response;

  Report r{"equiv", {}, {}};
  r.field("x1", join_names(data, x1));
  r.field("x2", join_names(data, x2));
  r.field("response", join_names(data, y));
  {
    std::ostringstream tol;
    tol << a.tol;
    r.field("tolerance", tol.str());
  }
  if (!a.level.empty()) {
    const auto kind = parse_level(a.level);
    const auto report = guarded(where, [&] { return check(data, x1, x2, y, EquivalenceLevel{kind, a.tol, alpha}); });
    r.field("level", to_string(kind));
    r.field("holds", report.holds ? "yes" : "no");
    if (report.witness) {
      const auto& w = *report.witness;
      const bool single_y = y.size() == 1;
      auto label = [&](std::size_t code) {
        return single_y ? data.variable(y.front()).levels.at(code) : std::to_string(code);
      };
      r.field("witness", w.quantity);
      if (w.row) r.field("witness_row", label(*w.row));
      if (w.col) r.field("witness_col", label(*w.col));
      r.field("witness_lhs", w.lhs);
      r.field("witness_rhs", w.rhs);
    }
    for (const auto& warning : report.warnings) r.field("warning", warning);
    return r;
  }
  const auto scan = guarded(where, [&] { return hierarchy_scan(data, x1, x2, y, alpha, a.tol); });
  Table t{"levels", {"level", "holds"}, {}};
  for (const auto& [kind, holds] : scan.levels) t.rows.push_back({to_string(kind), holds ? "yes" : "no"});
  r.field("consistent", scan.consistent ? "yes" : "no");
  for (const auto& msg : scan.inconsistencies) r.field("inconsistency", msg);
  r.tables.push_back(std::move(t));
  return r;
}

struct PredictArgs {
  std::string train, test, response, given;
  std::uint64_t seed = 0;
};

inline Report cmd_predict(const Context& ctx, const PredictArgs& a) {
  const auto train = load(a.train, ctx.input, "--train");
  const auto y = resolve_one(train, a.response, "--response");
  const auto x = resolve_list(train, a.given, "--given");
  const auto test_raw = load(a.test, ctx.input, "--test");
  for (const auto& name : split_list(a.given)) resolve_one(test_raw, name, "--given");
  resolve_one(test_raw, a.response, "--response");
  const auto test = guarded("--test", [&] { return test_raw.recode_like(train); });
  if (!test.unit_mass()) throw DataError("--test '" + a.test + "': weighted rows are not supported for scoring");
  const auto where = "--response " + a.response + " --given " + a.given;
  const auto predictor = guarded(where, [&] { return fit(train, x, y); });
  const auto confusion = guarded(where, [&] { return predict_and_score(predictor, test, a.seed); });
  const auto expected = guarded(where, [&] { return expected_confusion(contingency(train, x, y)); });
  const auto names = level_names(test, test.index_of(a.response));
  const auto normalized = confusion.row_normalized();

  Report r{"predict", {}, {}};
  r.field("response", a.response);
  r.field("given", join_names(train, x));
  r.field("seed", static_cast<long long>(a.seed));
  r.field("test_rows", static_cast<long long>(confusion.total()));
  std::uint64_t correct = 0;
  for (std::size_t s = 0; s < confusion.size; ++s) correct += confusion(s, s);
  r.field("accuracy", static_cast<double>(correct) / static_cast<double>(std::max<std::uint64_t>(1, confusion.total())));

  const std::size_t n = confusion.size;
  auto header = [&](const std::string& corner) {
    std::vector<std::string> cols{corner};
    for (std::size_t t = 0; t < n; ++t) cols.push_back(names[t]);
    return cols;
  };
  Table counts{"confusion counts (rows: true, columns: predicted)", header(a.response), {}};
  Table rates{"confusion rates (row-normalized)", header(a.response), {}};
  Table gamma{"expected confusion from training", header(a.response), {}};
  for (std::size_t s = 0; s < n; ++s) {
    std::vector<Cell> c{names[s]}, q{names[s]}, g{names[s]};
    const auto gs = std::find(expected.levels.begin(), expected.levels.end(), s);
    for (std::size_t t = 0; t < n; ++t) {
      c.emplace_back(static_cast<long long>(confusion(s, t)));
      q.emplace_back(normalized[s * n + t]);
      const auto gt = std::find(expected.levels.begin(), expected.levels.end(), t);
      double value = 0.0;
      if (gs != expected.levels.end() && gt != expected.levels.end())
        value = expected(static_cast<std::size_t>(gs - expected.levels.begin()),
                         static_cast<std::size_t>(gt - expected.levels.begin()));
      g.emplace_back(value);
    }
    counts.rows.push_back(std::move(c));
    rates.rows.push_back(std::move(q));
    gamma.rows.push_back(std::move(g));
  }
  r.tables = {std::move(counts), std::move(rates), std::move(gamma)};
  return r;
}

struct BootstrapArgs {
  std::string file, stat = "reduction", response, subset, full, stratify, weights = "gk";
  std::size_t iterations = 1000, sample_size = 0;
  std::uint64_t seed = 0;
  double confidence = 0.95;
};

inline Report cmd_bootstrap(const Context& ctx, const BootstrapArgs& a) {
  if (a.stat != "reduction") throw UsageError("--stat: only 'reduction' is available (got '" + a.stat + "')");
  const auto data = load(a.file, ctx.input, "<file>");
  const auto y = resolve_one(data, a.response, "--response");
  const auto subset = resolve_list(data, a.subset, "--subset");
  VarSet full;
  if (!a.full.empty()) {
    full = resolve_list(data, a.full, "--full");
  } else {
    for (std::size_t v = 0; v < data.num_variables(); ++v)
      if (v != y) full.push_back(v);
  }
  for (auto v : subset)
    if (std::find(full.begin(), full.end(), v) == full.end())
      throw UsageError("--subset: '" + data.variable(v).name + "' is not in --full");
  BootstrapConfig config;
  config.iterations = a.iterations;
  config.sample_size = a.sample_size;
  config.seed = a.seed;
  config.stratify_by = a.stratify.empty() ? y : resolve_one(data, a.stratify, "--stratify");
  config.confidence = a.confidence;
  config.threads = ctx.threads;
  const auto alpha = parse_weights(a.weights).spec;
  const auto summary = guarded("--stat reduction --subset " + a.subset, [&] {
    return bootstrap(
        data, [&](const CategoricalDataset& d) { return reduction_statistic(d, y, subset, full, alpha); }, config);
  });

  Report r{"bootstrap", {}, {}};
  r.field("statistic", "reduction");
  r.field("response", a.response);
  r.field("subset", join_names(data, subset));
  r.field("full", join_names(data, full));
  r.field("weights", a.weights);
  r.field("stratify", data.variable(*config.stratify_by).name);
  r.field("iterations", static_cast<long long>(summary.iterations));
  r.field("failed", static_cast<long long>(summary.failed));
  r.field("sample_size", static_cast<long long>(summary.sample_size));
  r.field("seed", static_cast<long long>(summary.seed));
  r.field("confidence", summary.confidence);
  r.field("point_estimate", summary.point_estimate);
  r.field("mean", summary.mean);
  r.field("ci_low", summary.ci_low);
  r.field("ci_high", summary.ci_high);
  return r;
}

struct SimulateArgs {
  FluScenarioConfig config;
  std::string output = "-";
  bool symmetric = false;
  bool conditional_labels = false;
};

inline std::optional<Report> cmd_simulate(const Context& ctx, SimulateArgs a, std::ostream& out) {
  a.config.one_sided_noise = !a.symmetric;
  a.config.result_labels = !a.conditional_labels;
  a.config.threads = ctx.threads;
  const auto data = guarded("simulate flu", [&] { return generate_flu(a.config); });
  if (a.output == "-") {
    write_delimited(data, out, ctx.output.delimiter);
    return std::nullopt;
  }
  std::ofstream f(a.output);
  if (!f) throw UsageError("-o: cannot write '" + a.output + "'");
  write_delimited(data, f, ctx.output.delimiter);
  Report r{"simulate flu", {}, {}};
  r.field("rows", static_cast<long long>(data.num_rows()));
  r.field("seed", static_cast<long long>(a.config.seed));
  r.field("noise", a.symmetric ? "symmetric" : "one-sided");
  r.field("output", a.output);
  return r;
}

// ---------------------------------------------------------------------------

inline unsigned threads_from_env() {
  if (const char* env = std::getenv("CATASSOC_THREADS")) {
    try {
      const long v = std::stol(env);
      if (v >= 1) return static_cast<unsigned>(v);
    } catch (const std::exception&) {
    }
  }
  return 1;
}

inline int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Proportional association analysis for categorical data", "catassoc"};
  app.require_subcommand(1);

  Context ctx;
  ctx.threads = threads_from_env();
  std::string format = "human";
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--format", format, "human, delimited or structured")
        ->check(CLI::IsMember({"human", "delimited", "structured"}));
    sub->add_option("--precision", ctx.output.precision, "decimal places")->check(CLI::Range(1, 17));
    sub->add_option("--threads", ctx.threads, "worker threads (default: $CATASSOC_THREADS or 1)")
        ->check(CLI::Range(1u, 1024u));
    sub->add_option("--delimiter", ctx.input.delimiter, "field delimiter (single character or 'tab')");
    sub->add_option("--missing-token", ctx.input.missing_token, "label used for empty fields");
    sub->add_option("--missing-policy", ctx.input.missing_policy, "category or drop")
        ->check(CLI::IsMember({"category", "drop"}));
    sub->add_option("--mass-column", ctx.input.mass_column, "column holding row weights");
  };

  std::string file;
  auto* inspect = app.add_subcommand("inspect", "summarize a data file");
  inspect->add_option("file", file, "input file")->required();
  add_common(inspect);

  PairArgs pair;
  std::string weights = "gk";
  auto add_pair = [&](CLI::App* sub) {
    sub->add_option("file", pair.file, "input file")->required();
    sub->add_option("--response,-y", pair.response, "response variable")->required();
    sub->add_option("--given,-x", pair.given, "explanatory variable(s), comma separated")->required();
    add_common(sub);
  };
  auto* matrix = app.add_subcommand("matrix", "association matrix gamma(Y|X)");
  add_pair(matrix);
  auto* vector = app.add_subcommand("vector", "association vector theta(Y|X)");
  add_pair(vector);
  auto* tau_cmd = app.add_subcommand("tau", "weighted global association tau_alpha(Y|X)");
  add_pair(tau_cmd);
  tau_cmd->add_option("--weights,-w", weights, "gk, equal, invprob or file:<path>");

  SelectArgs sel;
  auto* select = app.add_subcommand("select", "basis selection");
  select->require_subcommand(1);
  auto add_select = [&](CLI::App* sub, bool supervised) {
    sub->add_option("file", sel.file, "input file")->required();
    if (supervised) {
      sub->add_option("--response,-y", sel.response, "response variable")->required();
      sub->add_option("--weights,-w", sel.weights, "gk, equal, invprob or file:<path>");
    }
    sub->add_option("--candidates", sel.candidates, "candidate variables (default: all others)");
    sub->add_option("--epsilon", sel.epsilon, "minimum gain")->check(CLI::NonNegativeNumber);
    sub->add_option("--max-cells", sel.max_cells, "largest composite domain considered");
    sub->add_option("--max-vars", sel.max_vars, "largest basis size");
    add_common(sub);
  };
  auto* supervised = select->add_subcommand("supervised", "alpha-association basis for a response");
  add_select(supervised, true);
  auto* structural = select->add_subcommand("structural", "basis determining every variable");
  add_select(structural, false);

  EquivArgs eq;
  auto* equiv = app.add_subcommand("equiv", "equivalence of two explanatory variables");
  equiv->add_option("file", eq.file, "input file")->required();
  equiv->add_option("--x1", eq.x1, "first explanatory variable(s)")->required();
  equiv->add_option("--x2", eq.x2, "second explanatory variable(s)")->required();
  equiv->add_option("--response,-y", eq.response, "response variable(s)")->required();
  equiv->add_option("--level", eq.level, "1, 2, 2', 3, 4 or 5 (default: scan all)");
  equiv->add_option("--tol", eq.tol, "equality tolerance")->check(CLI::PositiveNumber);
  equiv->add_option("--weights,-w", eq.weights, "weights for level 5");
  add_common(equiv);

  PredictArgs pr;
  auto* predict = app.add_subcommand("predict", "proportional prediction and its confusion matrix");
  predict->add_option("--train", pr.train, "training file")->required();
  predict->add_option("--test", pr.test, "test file")->required();
  predict->add_option("--response,-y", pr.response, "response variable")->required();
  predict->add_option("--given,-x", pr.given, "explanatory variable(s)")->required();
  predict->add_option("--seed", pr.seed, "random seed");
  add_common(predict);

  BootstrapArgs bs;
  auto* boot = app.add_subcommand("bootstrap", "stratified bootstrap of a statistic");
  boot->add_option("file", bs.file, "input file")->required();
  boot->add_option("--stat", bs.stat, "statistic (reduction)");
  boot->add_option("--response,-y", bs.response, "response variable")->required();
  boot->add_option("--subset", bs.subset, "variables of the reduced set")->required();
  boot->add_option("--full", bs.full, "variables of the full set (default: all others)");
  boot->add_option("-B,--iterations", bs.iterations, "bootstrap iterations")->check(CLI::PositiveNumber);
  boot->add_option("-n,--sample-size", bs.sample_size, "rows per resample (default: all)");
  boot->add_option("--seed", bs.seed, "random seed");
  boot->add_option("--stratify", bs.stratify, "stratification variable (default: the response)");
  boot->add_option("--confidence", bs.confidence, "interval level")->check(CLI::Range(0.0, 1.0));
  boot->add_option("--weights,-w", bs.weights, "gk, equal, invprob or file:<path>");
  add_common(boot);

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "generate synthetic data");
  simulate->require_subcommand(1);
  auto* flu_cmd = simulate->add_subcommand("flu", "flu-test scenario");
  flu_cmd->add_option("-n", sim.config.n, "rows")->check(CLI::PositiveNumber);
  flu_cmd->add_option("--seed", sim.config.seed, "random seed");
  flu_cmd->add_option("-o,--output", sim.output, "output file ('-' for standard output)");
  flu_cmd->add_option("--flip-prob", sim.config.flip_prob, "noise probability of R3/R4")->check(CLI::Range(0.0, 1.0));
  flu_cmd->add_option("--s5-prob", sim.config.s5_prob, "probability of S5 given both tests")->check(CLI::Range(0.0, 1.0));
  flu_cmd->add_flag("--symmetric-noise", sim.symmetric, "also flip negative tests");
  flu_cmd->add_flag("--conditional-labels", sim.conditional_labels,
                    "name the tests as in the conditional table rather than the result table");
  add_common(flu_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return 0;
    }
    err << "error: " << e.what() << '\n';
    return 1;
  }

  try {
    ctx.output.format = format == "structured" ? Format::structured
                        : format == "delimited" ? Format::delimited
                                                : Format::human;
    ctx.output.delimiter = load_options(ctx.input).delimiter;
    std::optional<Report> report;
    if (*inspect) report = cmd_inspect(ctx, file);
    else if (*matrix) report = cmd_matrix(ctx, pair);
    else if (*vector) report = cmd_vector(ctx, pair);
    else if (*tau_cmd) report = cmd_tau(ctx, pair, weights);
    else if (*supervised) report = cmd_select(ctx, sel, true);
    else if (*structural) report = cmd_select(ctx, sel, false);
    else if (*equiv) report = cmd_equiv(ctx, eq);
    else if (*predict) report = cmd_predict(ctx, pr);
    else if (*boot) report = cmd_bootstrap(ctx, bs);
    else if (*flu_cmd) report = cmd_simulate(ctx, sim, out);
    if (report) render(*report, ctx.output, out);
    return 0;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const DataError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
}

}  // namespace catassoc::cli
