#pragma once

// Pairwise equivalence of two explanatory variables with respect to a
// response, from strongest to weakest:
//
//   E1   tau(X1|X2) = tau(X2|X1) = tau(Y|X1) = 1
//   E2   tau(Y|X1) = tau(Y|X2) = 1
//   E2'  tau(X1|X2) = tau(X2|X1) = 1
//   E3   gamma(Y|X1) = gamma(Y|X2)
//   E4   Theta(Y|X1) = Theta(Y|X2)
//   E5   tau_alpha(Y|X1) = tau_alpha(Y|X2)
//
// with E1 => E2 => E3 => E4 => E5 and E1 => E2' => E3.

#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "catassoc/association.hpp"
#include "catassoc/dataset.hpp"

namespace catassoc {

enum class EquivalenceKind { E1, E2, E2prime, E3, E4, E5 };

inline const char* to_string(EquivalenceKind k) {
  switch (k) {
    case EquivalenceKind::E1: return "E1";
    case EquivalenceKind::E2: return "E2";
    case EquivalenceKind::E2prime: return "E2'";
    case EquivalenceKind::E3: return "E3";
    case EquivalenceKind::E4: return "E4";
    case EquivalenceKind::E5: return "E5";
  }
  return "?";
}

inline constexpr double kDefaultEquivalenceTolerance = 1e-9;

struct EquivalenceLevel {
  EquivalenceKind kind = EquivalenceKind::E3;
  double tolerance = kDefaultEquivalenceTolerance;
  // Weights for E5, and the measure used for the "tau = 1" tests of
  // E1/E2/E2' (a scheme is resolved per response; GK by default).
  WeightSpec alpha = WeightScheme::gk;
};

struct EquivalenceWitness {
  std::string quantity;                  // e.g. "gamma(Y|X)", "tau(Y|X1)"
  std::optional<std::size_t> row, col;   // response codes, when entry-wise
  double lhs = 0.0, rhs = 0.0;
};

struct EquivalenceReport {
  bool holds = true;
  std::optional<EquivalenceWitness> witness;  // set iff !holds
  std::vector<std::string> warnings;
};

namespace detail {

// tau of `response` given `given` under the level's weight choice; a
// constant response counts as determined.
inline double tau_between(const CategoricalDataset& data, const CompositeVariable& given,
                          const CompositeVariable& response, const WeightSpec& alpha, bool response_is_y) {
  const auto table = cross_table(data, given, response);
  if (table.y_levels() == 1) return 1.0;
  // A fixed weight vector is only meaningful for the actual response Y.
  const WeightSpec spec = (response_is_y || std::holds_alternative<WeightScheme>(alpha)) ? alpha : WeightSpec{WeightScheme::gk};
  return tau(table, spec);
}

// Re-indexes a table of `x` vs composite `y` so that columns follow the
// full level dictionary of the single response variable.
inline ContingencyTable response_table(const CategoricalDataset& data, const CompositeVariable& x,
                                       const CompositeVariable& y) {
  if (y.members.size() == 1) return contingency(data, x, y.members.front());
  return cross_table(data, x, y);
}

class EquivalenceContext {
public:
  EquivalenceContext(const CategoricalDataset& data, const VarSet& x1, const VarSet& x2, const VarSet& y)
      : data_(data), x1_(compose(data, x1)), x2_(compose(data, x2)), y_(compose(data, y)) {
    for (auto v : y_.members)
      if (x1_.contains(v) || x2_.contains(v))
        throw std::invalid_argument("equivalence: response '" + data.variable(v).name +
                                    "' overlaps an explanatory variable");
  }

  double tau_x1_given_x2(const WeightSpec& a) const { return tau_between(data_, x2_, x1_, a, false); }
  double tau_x2_given_x1(const WeightSpec& a) const { return tau_between(data_, x1_, x2_, a, false); }
  double tau_y_given(int which, const WeightSpec& a) const {
    return tau_between(data_, which == 1 ? x1_ : x2_, y_, a, true);
  }

  ContingencyTable table(int which) const { return response_table(data_, which == 1 ? x1_ : x2_, y_); }

private:
  const CategoricalDataset& data_;
  CompositeVariable x1_, x2_, y_;
};

inline bool near(double a, double b, double tol) { return std::abs(a - b) <= tol; }

inline EquivalenceReport fail(std::string quantity, double lhs, double rhs,
                              std::optional<std::size_t> row = {}, std::optional<std::size_t> col = {}) {
  EquivalenceReport r;
  r.holds = false;
  r.witness = EquivalenceWitness{std::move(quantity), row, col, lhs, rhs};
  return r;
}

inline EquivalenceReport check_ones(std::initializer_list<std::pair<const char*, double>> values, double tol) {
  for (const auto& [name, v] : values)
    if (!near(v, 1.0, tol)) return fail(name, v, 1.0);
  return {};
}

}  // namespace detail

inline EquivalenceReport check(const CategoricalDataset& data, const VarSet& x1, const VarSet& x2, const VarSet& y,
                               const EquivalenceLevel& level) {
  if (!(level.tolerance > 0.0)) throw std::invalid_argument("equivalence tolerance must be positive");
  detail::EquivalenceContext ctx(data, x1, x2, y);
  const double tol = level.tolerance;
  const auto& a = level.alpha;

  EquivalenceReport report;
  switch (level.kind) {
    case EquivalenceKind::E1:
      report = detail::check_ones({{"tau(X1|X2)", ctx.tau_x1_given_x2(a)},
                                   {"tau(X2|X1)", ctx.tau_x2_given_x1(a)},
                                   {"tau(Y|X1)", ctx.tau_y_given(1, a)}},
                                  tol);
      break;
    case EquivalenceKind::E2:
      report = detail::check_ones({{"tau(Y|X1)", ctx.tau_y_given(1, a)}, {"tau(Y|X2)", ctx.tau_y_given(2, a)}}, tol);
      break;
    case EquivalenceKind::E2prime:
      report = detail::check_ones({{"tau(X1|X2)", ctx.tau_x1_given_x2(a)}, {"tau(X2|X1)", ctx.tau_x2_given_x1(a)}}, tol);
      break;
    case EquivalenceKind::E3: {
      const auto g1 = gamma_matrix(ctx.table(1));
      const auto g2 = gamma_matrix(ctx.table(2));
      for (std::size_t s = 0; s < g1.size && report.holds; ++s)
        for (std::size_t t = 0; t < g1.size; ++t)
          if (!detail::near(g1(s, t), g2(s, t), tol)) {
            report = detail::fail("gamma(Y|X)", g1(s, t), g2(s, t), g1.levels[s], g1.levels[t]);
            break;
          }
      break;
    }
    case EquivalenceKind::E4: {
      const auto t1 = theta_vector(ctx.table(1));
      const auto t2 = theta_vector(ctx.table(2));
      for (std::size_t s = 0; s < t1.size(); ++s)
        if (!detail::near(t1[s], t2[s], tol)) {
          report = detail::fail("theta(Y|X)", t1[s], t2[s], s);
          break;
        }
      break;
    }
    case EquivalenceKind::E5: {
      const auto tab1 = ctx.table(1);
      const auto w = resolve_weights(a, MarginalStats::of(tab1));
      const double v1 = tau_alpha(theta_vector(tab1), w);
      const double v2 = tau_alpha(theta_vector(ctx.table(2)), w);
      if (!detail::near(v1, v2, tol)) report = detail::fail("tau_alpha(Y|X)", v1, v2);
      if (!w.regular()) report.warnings.push_back("weight vector is not regular");
      break;
    }
  }
  return report;
}

struct HierarchyScan {
  std::vector<std::pair<EquivalenceKind, bool>> levels;  // E1, E2, E2', E3, E4, E5
  bool consistent = true;
  std::vector<std::string> inconsistencies;

  bool holds(EquivalenceKind k) const {
    for (const auto& [kind, h] : levels)
      if (kind == k) return h;
    return false;
  }
};

// Evaluates every level and checks the implication chains
// E1 => E2 => E3 => E4 => E5 and E1 => E2' => E3. A broken implication
// means the tolerance is misconfigured and is reported, not hidden.
inline HierarchyScan hierarchy_scan(const CategoricalDataset& data, const VarSet& x1, const VarSet& x2,
                                    const VarSet& y, const WeightSpec& alpha = WeightScheme::gk,
                                    double tolerance = kDefaultEquivalenceTolerance) {
  HierarchyScan scan;
  using K = EquivalenceKind;
  for (K k : {K::E1, K::E2, K::E2prime, K::E3, K::E4, K::E5})
    scan.levels.emplace_back(k, check(data, x1, x2, y, EquivalenceLevel{k, tolerance, alpha}).holds);
  const std::pair<K, K> chain[] = {{K::E1, K::E2}, {K::E2, K::E3}, {K::E3, K::E4}, {K::E4, K::E5},
                                   {K::E1, K::E2prime}, {K::E2prime, K::E3}};
  for (const auto& [from, to] : chain)
    if (scan.holds(from) && !scan.holds(to)) {
      scan.consistent = false;
      scan.inconsistencies.push_back(std::string(to_string(from)) + " holds but " + to_string(to) + " does not");
    }
  return scan;
}

}  // namespace catassoc
