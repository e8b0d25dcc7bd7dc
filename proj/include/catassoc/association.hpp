#pragma once

// Proportional association between a response Y and an explanatory
// (possibly composite) variable X:
//
//   gamma(Y|X)[s][t] = sum_i p(X=i,Y=s) p(X=i,Y=t) / (p(X=i) p(Y=s))
//   theta_s          = (gamma[s][s] - p_s) / (1 - p_s)
//   tau_alpha        = sum_s alpha_s theta_s
//
// gamma is the expected confusion matrix of proportional prediction; theta
// is the per-category accuracy lift over the marginal; tau_alpha is a
// weighted global degree that reduces to Goodman-Kruskal tau for
// alpha_s proportional to p_s (1 - p_s).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "catassoc/dataset.hpp"
#include "catassoc/error.hpp"

namespace catassoc {

// Values this far outside [0, 1] are floating-point drift and get clamped;
// anything larger is reported as an error.
inline constexpr double kClampSlack = 1e-12;

namespace detail {

inline double clamp_unit(double v, const char* what) {
  if (v < -kClampSlack || v > 1.0 + kClampSlack)
    throw DataError(std::string(what) + " outside [0, 1]: " + std::to_string(v));
  return std::clamp(v, 0.0, 1.0);
}

}  // namespace detail

struct MarginalStats {
  std::vector<double> p;
  double gini_variation = 0.0;  // 1 - sum p_s^2

  static MarginalStats from_masses(std::span<const double> masses) {
    const double total = std::accumulate(masses.begin(), masses.end(), 0.0);
    if (!(total > 0.0)) throw DataError("marginal has zero total mass");
    MarginalStats out;
    double sq = 0.0;
    for (double m : masses) {
      out.p.push_back(m / total);
      sq += out.p.back() * out.p.back();
    }
    out.gini_variation = std::max(0.0, 1.0 - sq);
    return out;
  }

  static MarginalStats of(const ContingencyTable& table) { return from_masses(table.y_marginal()); }

  // Marginal of one dataset variable over its full level dictionary.
  static MarginalStats of(const CategoricalDataset& data, std::size_t v) {
    std::vector<double> m(data.variable(v).cardinality(), 0.0);
    auto col = data.column(v);
    auto mass = data.mass();
    for (std::size_t r = 0; r < data.num_rows(); ++r) m[col[r]] += mass[r];
    return from_masses(m);
  }
};

// Non-negative weights on the probability simplex.
class WeightVector {
public:
  WeightVector() = default;

  // Requires the simplex constraint within 1e-12.
  explicit WeightVector(std::vector<double> weights) : w_(std::move(weights)) {
    validate_entries();
    const double sum = std::accumulate(w_.begin(), w_.end(), 0.0);
    if (std::abs(sum - 1.0) > 1e-12) throw std::invalid_argument("weights must sum to 1 (got " + std::to_string(sum) + ")");
  }

  // Rescales arbitrary non-negative weights onto the simplex.
  static WeightVector normalized(std::vector<double> raw) {
    WeightVector out;
    out.w_ = std::move(raw);
    out.validate_entries();
    const double sum = std::accumulate(out.w_.begin(), out.w_.end(), 0.0);
    if (!(sum > 0.0)) throw std::invalid_argument("weights must have a positive sum");
    for (auto& x : out.w_) x /= sum;
    return out;
  }

  std::size_t size() const noexcept { return w_.size(); }
  double operator[](std::size_t s) const { return w_.at(s); }
  const std::vector<double>& values() const noexcept { return w_; }
  bool regular() const noexcept {
    return !w_.empty() && std::all_of(w_.begin(), w_.end(), [](double x) { return x > 0.0; });
  }

private:
  void validate_entries() const {
    if (w_.empty()) throw std::invalid_argument("weight vector is empty");
    for (double x : w_)
      if (!std::isfinite(x) || x < 0.0) throw std::invalid_argument("weights must be finite and non-negative");
  }

  std::vector<double> w_;
};

inline WeightVector weights_gk(const MarginalStats& stats) {
  if (!(stats.gini_variation > 0.0)) throw DataError("GK weights undefined: response has a point-mass marginal");
  std::vector<double> w;
  for (double p : stats.p) w.push_back(p * (1.0 - p) / stats.gini_variation);
  return WeightVector::normalized(std::move(w));
}

inline WeightVector weights_equal(std::size_t n_levels) {
  if (n_levels == 0) throw std::invalid_argument("weights_equal: zero levels");
  return WeightVector::normalized(std::vector<double>(n_levels, 1.0));
}

inline WeightVector weights_invprob(const MarginalStats& stats) {
  std::vector<double> w;
  for (double p : stats.p) {
    if (!(p > 0.0))
      throw DataError("inverse-probability weights undefined: a response level has zero probability (re-code it)");
    w.push_back(1.0 / p);
  }
  return WeightVector::normalized(std::move(w));
}

enum class WeightScheme { gk, equal, invprob };

inline const char* to_string(WeightScheme s) {
  switch (s) {
    case WeightScheme::gk: return "gk";
    case WeightScheme::equal: return "equal";
    case WeightScheme::invprob: return "invprob";
  }
  return "?";
}

// Either a named scheme (resolved against the response marginal at hand)
// or a fixed vector.
using WeightSpec = std::variant<WeightScheme, WeightVector>;

inline WeightVector resolve_weights(const WeightSpec& spec, const MarginalStats& stats) {
  if (const auto* fixed = std::get_if<WeightVector>(&spec)) {
    if (fixed->size() != stats.p.size())
      throw std::invalid_argument("weight vector has " + std::to_string(fixed->size()) + " entries but the response has " +
                                  std::to_string(stats.p.size()) + " levels");
    return *fixed;
  }
  switch (std::get<WeightScheme>(spec)) {
    case WeightScheme::gk: return weights_gk(stats);
    case WeightScheme::equal: return weights_equal(stats.p.size());
    case WeightScheme::invprob: return weights_invprob(stats);
  }
  throw std::logic_error("unreachable weight scheme");
}

// Row-stochastic matrix over the retained response levels (those with
// positive mass). `levels[k]` is the original response code of row/column k.
struct AssociationMatrix {
  std::size_t size = 0;
  std::vector<double> entries;        // size x size, row-major
  std::vector<double> y_marginal;     // p(Y) over retained levels
  std::vector<std::size_t> levels;
  std::vector<std::size_t> dropped;   // response codes with zero mass

  double operator()(std::size_t s, std::size_t t) const { return entries.at(s * size + t); }

  // Expected accuracy of proportional prediction for class s.
  double accuracy(std::size_t s) const { return (*this)(s, s); }

  // Off-diagonal entries of row s: expected rates of predicting t != s when
  // the truth is s (first-type errors of class s), indexed by t.
  std::vector<double> row_errors(std::size_t s) const {
    std::vector<double> out(size, 0.0);
    for (std::size_t t = 0; t < size; ++t)
      if (t != s) out[t] = (*this)(s, t);
    return out;
  }

  // Off-diagonal entries of column t: expected rates of falsely predicting
  // t when the truth is s (second-type errors into class t), indexed by s.
  std::vector<double> column_errors(std::size_t t) const {
    std::vector<double> out(size, 0.0);
    for (std::size_t s = 0; s < size; ++s)
      if (s != t) out[s] = (*this)(s, t);
    return out;
  }
};

inline AssociationMatrix gamma_matrix(const ContingencyTable& table) {
  AssociationMatrix out;
  const auto& ym = table.y_marginal();
  for (std::size_t s = 0; s < table.y_levels(); ++s) {
    if (ym[s] > 0.0)
      out.levels.push_back(s);
    else
      out.dropped.push_back(s);
  }
  const std::size_t n = out.levels.size();
  out.size = n;
  out.entries.assign(n * n, 0.0);
  for (std::size_t k = 0; k < n; ++k) out.y_marginal.push_back(ym[out.levels[k]] / table.total());

  // Ascending scenario order; zero-mass scenarios contribute nothing.
  std::vector<double> row(n);
  for (std::size_t i = 0; i < table.x_levels(); ++i) {
    const double mi = table.x_marginal()[i];
    if (!(mi > 0.0)) continue;
    for (std::size_t k = 0; k < n; ++k) row[k] = table.at(i, out.levels[k]);
    for (std::size_t s = 0; s < n; ++s) {
      if (row[s] == 0.0) continue;
      const double a = row[s] / mi;
      for (std::size_t t = 0; t < n; ++t) out.entries[s * n + t] += a * row[t];
    }
  }
  for (std::size_t s = 0; s < n; ++s) {
    const double ms = ym[out.levels[s]];
    for (std::size_t t = 0; t < n; ++t) {
      auto& e = out.entries[s * n + t];
      e = detail::clamp_unit(e / ms, "association matrix entry");
    }
  }
  return out;
}

// Components are indexed by the original response codes. A component is
// undefined when p_s is 0 or 1; undefined components hold 0 and are skipped
// (with weight renormalization) by tau_alpha.
struct AssociationVector {
  std::vector<double> components;
  std::vector<double> y_marginal;
  std::vector<char> defined;

  std::size_t size() const noexcept { return components.size(); }
  double operator[](std::size_t s) const { return components.at(s); }
  bool all_defined() const {
    return std::all_of(defined.begin(), defined.end(), [](char d) { return d != 0; });
  }
};

inline AssociationVector theta_vector(const ContingencyTable& table) {
  const auto gamma = gamma_matrix(table);
  AssociationVector out;
  const std::size_t n = table.y_levels();
  out.components.assign(n, 0.0);
  out.defined.assign(n, 0);
  for (std::size_t s = 0; s < n; ++s) out.y_marginal.push_back(table.y_marginal()[s] / table.total());
  for (std::size_t k = 0; k < gamma.size; ++k) {
    const std::size_t s = gamma.levels[k];
    const double p = gamma.y_marginal[k];
    if (!(p < 1.0)) continue;
    out.components[s] = detail::clamp_unit((gamma(k, k) - p) / (1.0 - p), "association vector component");
    out.defined[s] = 1;
  }
  return out;
}

// Weighted global degree. Weight on undefined components is dropped and the
// rest renormalized; an error is raised if nothing remains.
inline double tau_alpha(const AssociationVector& theta, const WeightVector& alpha) {
  if (theta.size() != alpha.size())
    throw std::invalid_argument("tau_alpha: association vector has " + std::to_string(theta.size()) +
                                " components but weights have " + std::to_string(alpha.size()));
  double num = 0.0, den = 0.0;
  for (std::size_t s = 0; s < theta.size(); ++s) {
    if (!theta.defined[s]) continue;
    num += alpha[s] * theta.components[s];
    den += alpha[s];
  }
  if (!(den > 0.0)) throw DataError("tau_alpha: all weight falls on undefined components");
  return detail::clamp_unit(num / den, "tau_alpha");
}

// Goodman-Kruskal tau from its concentration form (independent of the
// association vector route).
inline double gk_tau(const ContingencyTable& table) {
  const double total = table.total();
  double sum_p2 = 0.0;
  for (double m : table.y_marginal()) sum_p2 += (m / total) * (m / total);
  const double vg = 1.0 - sum_p2;
  if (!(vg > 0.0)) throw DataError("GK tau undefined: response has a point-mass marginal");
  double cond = 0.0;
  for (std::size_t i = 0; i < table.x_levels(); ++i) {
    const double mi = table.x_marginal()[i];
    if (!(mi > 0.0)) continue;
    double acc = 0.0;
    for (double m : table.row(i)) acc += m * m;
    cond += acc / mi;
  }
  cond /= total;
  return detail::clamp_unit((cond - sum_p2) / vg, "GK tau");
}

inline double tau(const ContingencyTable& table, const WeightSpec& weights) {
  return tau_alpha(theta_vector(table), resolve_weights(weights, MarginalStats::of(table)));
}

inline double tau(const CategoricalDataset& data, std::size_t y, const VarSet& x, const WeightSpec& weights) {
  return tau(contingency(data, x, y), weights);
}

// Expected concentration Ep = sum over observed scenarios of p(scenario)^2.
inline double expected_concentration(const CategoricalDataset& data, const CompositeVariable& x) {
  const auto m = scenario_mass(data, x);
  const double total = data.total_mass();
  double ep = 0.0;
  for (double v : m) ep += (v / total) * (v / total);
  return ep;
}

inline double expected_concentration(const CategoricalDataset& data, const VarSet& indices) {
  return expected_concentration(data, compose(data, indices));
}

// True when every X scenario with positive mass has exactly one response
// column with positive mass (Y is a function of X).
inline bool determines(const ContingencyTable& table) {
  for (std::size_t i = 0; i < table.x_levels(); ++i) {
    int positive = 0;
    for (double m : table.row(i))
      if (m > 0.0) ++positive;
    if (positive > 1) return false;
  }
  return true;
}

}  // namespace catassoc
