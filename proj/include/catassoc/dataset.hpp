#pragma once

// Column-encoded categorical tables, composite (joint) variables and
// contingency tables.
//
// Every variable is stored as dense codes 0..cardinality-1 together with its
// ordered level labels. Rows carry a non-negative mass so that exact
// probability tables and plain unit-weight records are the same kind of
// object; all downstream statistics normalize by total mass.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <istream>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "catassoc/error.hpp"
#include "catassoc/random.hpp"

namespace catassoc {

using Code = std::uint32_t;
using VarSet = std::vector<std::size_t>;

struct VariableMeta {
  std::string name;
  std::vector<std::string> levels;

  std::size_t cardinality() const noexcept { return levels.size(); }

  std::optional<Code> code_of(std::string_view label) const {
    for (std::size_t i = 0; i < levels.size(); ++i)
      if (levels[i] == label) return static_cast<Code>(i);
    return std::nullopt;
  }
};

class CategoricalDataset {
public:
  CategoricalDataset() = default;

  // Validates every invariant; throws DataError on violation.
  CategoricalDataset(std::vector<VariableMeta> variables,
                     std::vector<std::vector<Code>> columns,
                     std::vector<double> mass)
      : variables_(std::move(variables)), columns_(std::move(columns)), mass_(std::move(mass)) {
    if (variables_.empty()) throw DataError("dataset has no variables");
    if (columns_.size() != variables_.size())
      throw DataError("dataset: column count does not match variable count");
    const std::size_t rows = mass_.size();
    std::unordered_set<std::string> names;
    for (std::size_t v = 0; v < variables_.size(); ++v) {
      const auto& meta = variables_[v];
      if (!names.insert(meta.name).second) throw DataError("duplicate variable name '" + meta.name + "'");
      if (meta.levels.empty()) throw DataError("variable '" + meta.name + "' has no levels");
      std::unordered_set<std::string_view> seen;
      for (const auto& l : meta.levels)
        if (!seen.insert(l).second)
          throw DataError("variable '" + meta.name + "' has duplicate level '" + l + "'");
      if (columns_[v].size() != rows) throw DataError("column '" + meta.name + "' has wrong length");
      for (Code c : columns_[v])
        if (c >= meta.cardinality()) throw DataError("code out of range in column '" + meta.name + "'");
    }
    unit_mass_ = true;
    total_mass_ = 0.0;
    for (double m : mass_) {
      if (!std::isfinite(m) || m < 0.0) throw DataError("row mass must be finite and non-negative");
      if (m != 1.0) unit_mass_ = false;
      total_mass_ += m;
    }
    if (!(total_mass_ > 0.0)) throw DataError("dataset total mass must be positive");
  }

  std::size_t num_variables() const noexcept { return variables_.size(); }
  std::size_t num_rows() const noexcept { return mass_.size(); }
  const std::vector<VariableMeta>& variables() const noexcept { return variables_; }
  const VariableMeta& variable(std::size_t v) const { return variables_.at(v); }
  std::span<const Code> column(std::size_t v) const { return columns_.at(v); }
  std::span<const double> mass() const noexcept { return mass_; }
  double total_mass() const noexcept { return total_mass_; }
  bool unit_mass() const noexcept { return unit_mass_; }

  std::optional<std::size_t> find(std::string_view name) const {
    for (std::size_t v = 0; v < variables_.size(); ++v)
      if (variables_[v].name == name) return v;
    return std::nullopt;
  }

  // Comma-separated list of variable names, for error messages.
  std::string names() const {
    std::string out;
    for (const auto& v : variables_) {
      if (!out.empty()) out += ", ";
      out += v.name;
    }
    return out;
  }

  std::size_t index_of(std::string_view name) const {
    if (auto v = find(name)) return *v;
    throw std::invalid_argument("unknown variable '" + std::string(name) + "' (available: " + names() + ")");
  }

  // Rows in the given order (indices may repeat); level dictionaries are kept.
  CategoricalDataset subset_rows(std::span<const std::size_t> rows) const {
    std::vector<std::vector<Code>> cols(columns_.size());
    for (std::size_t v = 0; v < columns_.size(); ++v) {
      cols[v].reserve(rows.size());
      for (std::size_t r : rows) cols[v].push_back(columns_[v].at(r));
    }
    std::vector<double> m;
    m.reserve(rows.size());
    for (std::size_t r : rows) m.push_back(mass_.at(r));
    return CategoricalDataset(variables_, std::move(cols), std::move(m));
  }

  // Re-encodes this dataset against `reference`'s level dictionaries.
  // Variables are matched by name; labels unknown to the reference are
  // appended after the reference levels.
  CategoricalDataset recode_like(const CategoricalDataset& reference) const {
    std::vector<VariableMeta> vars;
    std::vector<std::vector<Code>> cols;
    for (std::size_t v = 0; v < variables_.size(); ++v) {
      const auto& mine = variables_[v];
      auto ref_index = reference.find(mine.name);
      VariableMeta meta{mine.name, ref_index ? reference.variable(*ref_index).levels : std::vector<std::string>{}};
      std::vector<Code> remap(mine.cardinality());
      for (std::size_t l = 0; l < mine.cardinality(); ++l) {
        auto c = meta.code_of(mine.levels[l]);
        if (!c) {
          meta.levels.push_back(mine.levels[l]);
          c = static_cast<Code>(meta.levels.size() - 1);
        }
        remap[l] = *c;
      }
      std::vector<Code> col(columns_[v].size());
      for (std::size_t r = 0; r < col.size(); ++r) col[r] = remap[columns_[v][r]];
      vars.push_back(std::move(meta));
      cols.push_back(std::move(col));
    }
    return CategoricalDataset(std::move(vars), std::move(cols), mass_);
  }

private:
  std::vector<VariableMeta> variables_;
  std::vector<std::vector<Code>> columns_;
  std::vector<double> mass_;
  double total_mass_ = 0.0;
  bool unit_mass_ = true;
};

// Incrementally assigns dense codes in first-appearance order.
class DatasetBuilder {
public:
  explicit DatasetBuilder(std::vector<std::string> names) : dict_(names.size()), columns_(names.size()) {
    if (names.empty()) throw ParseError("no variable names given");
    std::unordered_set<std::string> seen;
    for (auto& n : names) {
      if (!seen.insert(n).second) throw ParseError("duplicate variable name '" + n + "'");
      vars_.push_back(VariableMeta{std::move(n), {}});
    }
  }

  std::size_t arity() const noexcept { return vars_.size(); }

  // Fixes the leading level order for a variable before any rows are added.
  void declare_levels(std::size_t var, std::span<const std::string> levels) {
    for (const auto& l : levels) code_for(var, l);
  }

  // Labels equal to `token` are held back and appended as the last level.
  void defer_label(std::string token) { deferred_ = std::move(token); }

  void add_row(std::span<const std::string_view> labels, double mass = 1.0) {
    if (labels.size() != vars_.size())
      throw ParseError("record has " + std::to_string(labels.size()) + " fields, expected " +
                       std::to_string(vars_.size()));
    for (std::size_t v = 0; v < labels.size(); ++v) {
      if (deferred_ && labels[v] == *deferred_)
        columns_[v].push_back(kDeferred);
      else
        columns_[v].push_back(code_for(v, labels[v]));
    }
    mass_.push_back(mass);
  }

  void add_row(std::span<const std::string> labels, double mass = 1.0) {
    std::vector<std::string_view> views(labels.begin(), labels.end());
    add_row(std::span<const std::string_view>(views), mass);
  }

  // Merges identical label tuples by summing their masses (first occurrence
  // keeps its position).
  void merge_duplicates() {
    std::map<std::vector<Code>, std::size_t> first;
    std::vector<std::size_t> keep;
    std::vector<double> merged;
    std::vector<Code> key(vars_.size());
    for (std::size_t r = 0; r < mass_.size(); ++r) {
      for (std::size_t v = 0; v < vars_.size(); ++v) key[v] = columns_[v][r];
      auto [it, inserted] = first.try_emplace(key, keep.size());
      if (inserted) {
        keep.push_back(r);
        merged.push_back(mass_[r]);
      } else {
        merged[it->second] += mass_[r];
      }
    }
    for (auto& col : columns_) {
      std::vector<Code> next;
      next.reserve(keep.size());
      for (std::size_t r : keep) next.push_back(col[r]);
      col = std::move(next);
    }
    mass_ = std::move(merged);
  }

  CategoricalDataset build() && {
    for (std::size_t v = 0; v < vars_.size(); ++v) {
      const bool has_deferred =
          std::find(columns_[v].begin(), columns_[v].end(), kDeferred) != columns_[v].end();
      if (!has_deferred) continue;
      const Code c = code_for(v, *deferred_);
      for (auto& x : columns_[v])
        if (x == kDeferred) x = c;
    }
    return CategoricalDataset(std::move(vars_), std::move(columns_), std::move(mass_));
  }

private:
  static constexpr Code kDeferred = std::numeric_limits<Code>::max();

  Code code_for(std::size_t v, std::string_view label) {
    auto& d = dict_[v];
    if (auto it = d.find(std::string(label)); it != d.end()) return it->second;
    const auto c = static_cast<Code>(vars_[v].levels.size());
    vars_[v].levels.emplace_back(label);
    d.emplace(std::string(label), c);
    return c;
  }

  std::vector<VariableMeta> vars_;
  std::vector<std::unordered_map<std::string, Code>> dict_;
  std::vector<std::vector<Code>> columns_;
  std::vector<double> mass_;
  std::optional<std::string> deferred_;
};

// ---------------------------------------------------------------------------
// Delimited text input/output

enum class MissingPolicy { own_category, drop_row };

struct LoadOptions {
  char delimiter = ',';
  std::string missing_token = "__NA__";
  MissingPolicy missing_policy = MissingPolicy::own_category;
  std::optional<std::string> mass_column;
};

namespace detail {

// Splits one record. Double-quoted fields may contain the delimiter; a
// doubled quote inside a quoted field is a literal quote.
inline std::vector<std::string> split_record(std::string_view line, char delim, std::size_t line_no) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (quoted) {
      if (ch == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur += ch;
      }
    } else if (ch == '"' && cur.empty()) {
      quoted = true;
    } else if (ch == delim) {
      fields.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += ch;
    }
  }
  if (quoted) throw ParseError("line " + std::to_string(line_no) + ": unterminated quoted field");
  fields.push_back(std::move(cur));
  return fields;
}

inline bool getline_stripped(std::istream& in, std::string& line) {
  if (!std::getline(in, line)) return false;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return true;
}

inline double parse_mass(std::string_view text, std::size_t line_no) {
  double value = 0.0;
  const auto* first = text.data();
  const auto* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last)
    throw ParseError("line " + std::to_string(line_no) + ": mass '" + std::string(text) + "' is not a number");
  if (!std::isfinite(value) || value < 0.0)
    throw ParseError("line " + std::to_string(line_no) + ": mass must be finite and non-negative");
  return value;
}

}  // namespace detail

inline CategoricalDataset read_delimited(std::istream& in, const LoadOptions& options = {}) {
  std::string line;
  std::size_t line_no = 0;
  while (detail::getline_stripped(in, line)) {
    ++line_no;
    if (!line.empty()) break;
  }
  if (line.empty()) throw ParseError("empty input: a header record is required");
  if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);

  auto header = detail::split_record(line, options.delimiter, line_no);
  std::optional<std::size_t> mass_col;
  if (options.mass_column) {
    auto it = std::find(header.begin(), header.end(), *options.mass_column);
    if (it == header.end()) throw ParseError("mass column '" + *options.mass_column + "' not found in header");
    mass_col = static_cast<std::size_t>(it - header.begin());
  }
  std::vector<std::string> names;
  for (std::size_t i = 0; i < header.size(); ++i)
    if (i != mass_col) names.push_back(header[i]);
  if (names.empty()) throw ParseError("header has no variable columns");

  DatasetBuilder builder(names);
  if (options.missing_policy == MissingPolicy::own_category) builder.defer_label(options.missing_token);

  std::vector<std::string_view> labels(names.size());
  std::size_t records = 0;
  while (detail::getline_stripped(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    auto fields = detail::split_record(line, options.delimiter, line_no);
    if (fields.size() != header.size())
      throw ParseError("line " + std::to_string(line_no) + ": expected " + std::to_string(header.size()) +
                       " fields, found " + std::to_string(fields.size()));
    ++records;
    double mass = 1.0;
    if (mass_col) mass = detail::parse_mass(fields[*mass_col], line_no);
    bool missing = false;
    for (std::size_t i = 0, v = 0; i < fields.size(); ++i) {
      if (i == mass_col) continue;
      if (fields[i] == options.missing_token) missing = true;
      labels[v++] = fields[i];
    }
    if (missing && options.missing_policy == MissingPolicy::drop_row) continue;
    if (mass == 0.0) continue;
    builder.add_row(std::span<const std::string_view>(labels), mass);
  }
  if (records == 0) throw ParseError("input has a header but no records");
  if (mass_col) builder.merge_duplicates();
  try {
    return std::move(builder).build();
  } catch (const DataError& e) {
    throw ParseError(std::string("no usable records: ") + e.what());
  }
}

inline CategoricalDataset load_delimited(const std::string& path, const LoadOptions& options = {}) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  return read_delimited(in, options);
}

inline void write_delimited(const CategoricalDataset& data, std::ostream& out, char delimiter = ',',
                            std::string_view mass_column = "mass") {
  const bool with_mass = !data.unit_mass();
  auto emit = [&](std::string_view field) {
    if (field.find(delimiter) != std::string_view::npos || field.find('"') != std::string_view::npos) {
      out << '"';
      for (char ch : field) {
        if (ch == '"') out << '"';
        out << ch;
      }
      out << '"';
    } else {
      out << field;
    }
  };
  for (std::size_t v = 0; v < data.num_variables(); ++v) {
    if (v) out << delimiter;
    emit(data.variable(v).name);
  }
  if (with_mass) out << delimiter << mass_column;
  out << '\n';
  std::ostringstream num;
  num.precision(17);
  for (std::size_t r = 0; r < data.num_rows(); ++r) {
    for (std::size_t v = 0; v < data.num_variables(); ++v) {
      if (v) out << delimiter;
      emit(data.variable(v).levels[data.column(v)[r]]);
    }
    if (with_mass) {
      num.str({});
      num << data.mass()[r];
      out << delimiter << num.str();
    }
    out << '\n';
  }
}

// ---------------------------------------------------------------------------
// Scenario tables

struct Scenario {
  std::vector<std::string> labels;
  double mass;
};

// Builds a weighted dataset whose empirical distribution is exactly the
// given scenario masses. Identical tuples are merged by summing mass.
inline CategoricalDataset from_scenarios(std::vector<std::string> names, std::span<const Scenario> scenarios) {
  if (scenarios.empty()) throw DataError("no scenarios given");
  DatasetBuilder builder(std::move(names));
  for (const auto& s : scenarios) {
    if (s.labels.size() != builder.arity())
      throw DataError("scenario arity " + std::to_string(s.labels.size()) + " does not match " +
                      std::to_string(builder.arity()) + " variables");
    if (!std::isfinite(s.mass) || !(s.mass > 0.0)) throw DataError("scenario masses must be positive");
    builder.add_row(std::span<const std::string>(s.labels), s.mass);
  }
  builder.merge_duplicates();
  return std::move(builder).build();
}

inline CategoricalDataset from_scenarios(std::span<const Scenario> scenarios) {
  if (scenarios.empty()) throw DataError("no scenarios given");
  std::vector<std::string> names;
  for (std::size_t i = 0; i < scenarios.front().labels.size(); ++i) names.push_back("V" + std::to_string(i + 1));
  return from_scenarios(std::move(names), scenarios);
}

// Expands an integer-mass dataset into unit-mass rows (scenario order kept).
inline CategoricalDataset expand_to_units(const CategoricalDataset& data) {
  std::vector<std::size_t> rows;
  for (std::size_t r = 0; r < data.num_rows(); ++r) {
    const double m = data.mass()[r];
    if (m != std::floor(m)) throw DataError("expand_to_units requires integer masses");
    rows.insert(rows.end(), static_cast<std::size_t>(m), r);
  }
  auto out = data.subset_rows(rows);
  std::vector<std::vector<Code>> cols;
  for (std::size_t v = 0; v < out.num_variables(); ++v) cols.emplace_back(out.column(v).begin(), out.column(v).end());
  return CategoricalDataset(out.variables(), std::move(cols), std::vector<double>(rows.size(), 1.0));
}

// ---------------------------------------------------------------------------
// Composite variables

// The joint of several variables viewed as one categorical variable whose
// levels are the observed tuples of member codes.
struct CompositeVariable {
  VarSet members;                 // strictly increasing
  std::vector<Code> codes;        // per dataset row
  std::vector<Code> tuples;       // observed_cardinality x members.size(), row-major
  std::size_t observed_cardinality = 0;

  std::span<const Code> tuple(std::size_t scenario) const {
    return std::span<const Code>(tuples).subspan(scenario * members.size(), members.size());
  }

  bool contains(std::size_t v) const { return std::binary_search(members.begin(), members.end(), v); }
};

namespace detail {

// Re-densifies 64-bit keys preserving their numeric order.
inline std::size_t densify(std::vector<std::uint64_t>& keys, std::uint64_t key_range, std::vector<Code>& out) {
  out.resize(keys.size());
  const std::uint64_t dense_limit = std::max<std::uint64_t>(std::uint64_t{1} << 20, 4 * keys.size());
  if (key_range <= dense_limit) {
    std::vector<Code> map(static_cast<std::size_t>(key_range), std::numeric_limits<Code>::max());
    for (auto k : keys) map[k] = 0;
    Code next = 0;
    for (auto& m : map)
      if (m == 0) m = next++;
    for (std::size_t r = 0; r < keys.size(); ++r) out[r] = map[keys[r]];
    return next;
  }
  std::vector<std::uint64_t> sorted = keys;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  for (std::size_t r = 0; r < keys.size(); ++r)
    out[r] = static_cast<Code>(std::lower_bound(sorted.begin(), sorted.end(), keys[r]) - sorted.begin());
  return sorted.size();
}

}  // namespace detail

// Scenario codes enumerate only observed tuples, in lexicographic order of
// member codes. Throws std::invalid_argument on an empty, out-of-range or
// repeated index set.
inline CompositeVariable compose(const CategoricalDataset& data, VarSet indices) {
  if (indices.empty()) throw std::invalid_argument("compose: empty variable set");
  std::sort(indices.begin(), indices.end());
  if (std::adjacent_find(indices.begin(), indices.end()) != indices.end())
    throw std::invalid_argument("compose: repeated variable index");
  if (indices.back() >= data.num_variables()) throw std::invalid_argument("compose: variable index out of range");

  const std::size_t rows = data.num_rows();
  CompositeVariable out;
  out.members = indices;
  auto first = data.column(indices.front());
  out.codes.assign(first.begin(), first.end());
  std::size_t card = data.variable(indices.front()).cardinality();

  std::vector<std::uint64_t> keys(rows);
  for (std::size_t k = 1; k < indices.size(); ++k) {
    auto col = data.column(indices[k]);
    const std::uint64_t radix = data.variable(indices[k]).cardinality();
    for (std::size_t r = 0; r < rows; ++r) keys[r] = std::uint64_t{out.codes[r]} * radix + col[r];
    card = detail::densify(keys, card * radix, out.codes);
  }
  if (indices.size() == 1) {
    // Singletons keep the variable's codes but drop unobserved levels.
    keys.assign(out.codes.begin(), out.codes.end());
    card = detail::densify(keys, card, out.codes);
  }
  out.observed_cardinality = card;

  const std::size_t width = indices.size();
  out.tuples.assign(card * width, 0);
  std::vector<char> filled(card, 0);
  for (std::size_t r = 0; r < rows; ++r) {
    const Code c = out.codes[r];
    if (filled[c]) continue;
    filled[c] = 1;
    for (std::size_t k = 0; k < width; ++k) out.tuples[c * width + k] = data.column(indices[k])[r];
  }
  return out;
}

inline std::string scenario_label(const CategoricalDataset& data, const CompositeVariable& x, std::size_t scenario) {
  std::string out;
  auto t = x.tuple(scenario);
  for (std::size_t k = 0; k < t.size(); ++k) {
    if (k) out += '|';
    out += data.variable(x.members[k]).levels[t[k]];
  }
  return out;
}

// Total mass of each observed scenario of `x`.
inline std::vector<double> scenario_mass(const CategoricalDataset& data, const CompositeVariable& x) {
  std::vector<double> m(x.observed_cardinality, 0.0);
  auto mass = data.mass();
  for (std::size_t r = 0; r < data.num_rows(); ++r) m[x.codes[r]] += mass[r];
  return m;
}

// ---------------------------------------------------------------------------
// Contingency tables

class ContingencyTable {
public:
  ContingencyTable(std::size_t x_levels, std::size_t y_levels, std::vector<double> mass)
      : x_levels_(x_levels), y_levels_(y_levels), mass_(std::move(mass)),
        x_marginal_(x_levels, 0.0), y_marginal_(y_levels, 0.0) {
    if (x_levels == 0 || y_levels == 0) throw DataError("contingency table must have at least one row and column");
    if (mass_.size() != x_levels * y_levels) throw DataError("contingency table: mass has wrong size");
    for (std::size_t i = 0; i < x_levels; ++i)
      for (std::size_t s = 0; s < y_levels; ++s) {
        const double m = mass_[i * y_levels + s];
        if (!std::isfinite(m) || m < 0.0) throw DataError("contingency table entries must be finite and >= 0");
        x_marginal_[i] += m;
        y_marginal_[s] += m;
      }
    total_ = std::accumulate(x_marginal_.begin(), x_marginal_.end(), 0.0);
    if (!(total_ > 0.0)) throw DataError("degenerate contingency table: total mass is zero");
  }

  // Rows are X levels, columns are Y levels.
  static ContingencyTable from_rows(const std::vector<std::vector<double>>& rows) {
    if (rows.empty() || rows.front().empty()) throw DataError("empty contingency table");
    std::vector<double> m;
    for (const auto& r : rows) {
      if (r.size() != rows.front().size()) throw DataError("ragged contingency table");
      m.insert(m.end(), r.begin(), r.end());
    }
    return ContingencyTable(rows.size(), rows.front().size(), std::move(m));
  }

  std::size_t x_levels() const noexcept { return x_levels_; }
  std::size_t y_levels() const noexcept { return y_levels_; }
  double at(std::size_t i, std::size_t s) const { return mass_.at(i * y_levels_ + s); }
  std::span<const double> row(std::size_t i) const { return std::span<const double>(mass_).subspan(i * y_levels_, y_levels_); }
  const std::vector<double>& x_marginal() const noexcept { return x_marginal_; }
  const std::vector<double>& y_marginal() const noexcept { return y_marginal_; }
  double total() const noexcept { return total_; }

  ContingencyTable transposed() const {
    std::vector<double> m(mass_.size());
    for (std::size_t i = 0; i < x_levels_; ++i)
      for (std::size_t s = 0; s < y_levels_; ++s) m[s * x_levels_ + i] = mass_[i * y_levels_ + s];
    return ContingencyTable(y_levels_, x_levels_, std::move(m));
  }

private:
  std::size_t x_levels_, y_levels_;
  std::vector<double> mass_;
  std::vector<double> x_marginal_, y_marginal_;
  double total_ = 0.0;
};

// Cross-tabulation of two composites (members may overlap). Columns follow
// the scenario codes of `y`.
inline ContingencyTable cross_table(const CategoricalDataset& data, const CompositeVariable& x,
                                    const CompositeVariable& y) {
  const std::size_t nx = x.observed_cardinality, ny = y.observed_cardinality;
  std::vector<double> m(nx * ny, 0.0);
  auto mass = data.mass();
  for (std::size_t r = 0; r < data.num_rows(); ++r) m[std::size_t{x.codes[r]} * ny + y.codes[r]] += mass[r];
  return ContingencyTable(nx, ny, std::move(m));
}

// Joint mass of composite `x` against variable `y`. Columns follow the full
// level dictionary of `y`, so levels absent from this dataset show up as
// zero-mass columns.
inline ContingencyTable contingency(const CategoricalDataset& data, const CompositeVariable& x, std::size_t y) {
  if (y >= data.num_variables()) throw std::invalid_argument("contingency: response index out of range");
  if (x.contains(y))
    throw std::invalid_argument("contingency: response '" + data.variable(y).name +
                                "' is also a member of the explanatory set");
  const std::size_t nx = x.observed_cardinality, ny = data.variable(y).cardinality();
  std::vector<double> m(nx * ny, 0.0);
  auto mass = data.mass();
  auto ycol = data.column(y);
  for (std::size_t r = 0; r < data.num_rows(); ++r) m[std::size_t{x.codes[r]} * ny + ycol[r]] += mass[r];
  return ContingencyTable(nx, ny, std::move(m));
}

inline ContingencyTable contingency(const CategoricalDataset& data, const VarSet& x, std::size_t y) {
  return contingency(data, compose(data, x), y);
}

// ---------------------------------------------------------------------------
// Train/test partition

// Disjoint row partition with round(fraction * n) rows in the first part.
// Only unit-mass datasets can be split; expand weighted tables first.
inline std::pair<CategoricalDataset, CategoricalDataset> split(const CategoricalDataset& data, double fraction,
                                                               std::uint64_t seed) {
  if (!(fraction > 0.0 && fraction < 1.0)) throw std::invalid_argument("split: fraction must lie in (0, 1)");
  if (!data.unit_mass())
    throw DataError("split: dataset has weighted rows; expand it to unit rows (expand_to_units) first");
  const std::size_t n = data.num_rows();
  const auto first_size = static_cast<std::size_t>(std::llround(fraction * static_cast<double>(n)));
  if (first_size == 0 || first_size == n) throw DataError("split: one side of the partition would be empty");

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  CounterRng rng(seed, 0);
  for (std::size_t i = n - 1; i > 0; --i) std::swap(order[i], order[rng.below(i + 1)]);

  std::vector<std::size_t> a(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(first_size));
  std::vector<std::size_t> b(order.begin() + static_cast<std::ptrdiff_t>(first_size), order.end());
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  return {data.subset_rows(a), data.subset_rows(b)};
}

}  // namespace catassoc
