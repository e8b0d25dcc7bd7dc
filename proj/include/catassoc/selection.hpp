#pragma once

// Basis selection.
//
// Supervised: forward greedy on tau_alpha(Y | chosen + X), then backward
// removal of members whose deletion leaves tau unchanged (within epsilon).
// The result reaches the tau of the full candidate set (TB1) and no member
// can be dropped without losing association (TB2).
//
// Unsupervised (structural): forward greedy minimizing the expected
// concentration Ep(chosen + X), which is non-increasing under joins and
// stays constant exactly when the added variable is a function of the
// chosen ones; then the same backward removal on Ep. Every variable is
// determined by the result.

#include <algorithm>
#include <cstddef>
#include <future>
#include <limits>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "catassoc/association.hpp"
#include "catassoc/dataset.hpp"

namespace catassoc {

enum class Termination { no_gain, max_vars, max_cells, exhausted };

inline const char* to_string(Termination t) {
  switch (t) {
    case Termination::no_gain: return "no-gain";
    case Termination::max_vars: return "max-vars";
    case Termination::max_cells: return "max-cells";
    case Termination::exhausted: return "exhausted";
  }
  return "?";
}

struct SelectionConfig {
  WeightSpec weights = WeightScheme::gk;
  double epsilon = 1e-9;
  std::optional<std::size_t> max_vars;
  std::optional<std::size_t> max_cells = 10000;
  unsigned threads = 1;
};

struct SelectionStep {
  std::size_t variable;
  double value;       // tau (supervised) or Ep (structural) after adding it
  std::size_t cells;  // observed cardinality of the chosen composite
};

struct SkippedCandidate {
  std::size_t variable;
  std::size_t cells;
};

struct SelectionResult {
  VarSet basis;                          // in selection order
  std::vector<SelectionStep> trace;      // forward phase
  VarSet removed;                        // backward phase, in removal order
  std::vector<SkippedCandidate> skipped; // exceeded max_cells
  double forward_value = 0.0;            // value at the end of the forward phase
  double final_value = 0.0;
  std::optional<double> full_value;      // value over every candidate, when within max_cells
  Termination terminated_by = Termination::exhausted;
};

namespace detail {

struct Evaluation {
  double value = 0.0;
  std::size_t cells = 0;
  bool skipped = false;
};

template <typename Eval>
std::vector<Evaluation> evaluate_all(const std::vector<std::size_t>& pool, unsigned threads, Eval&& eval) {
  std::vector<Evaluation> out(pool.size());
  if (threads <= 1 || pool.size() < 2) {
    for (std::size_t k = 0; k < pool.size(); ++k) out[k] = eval(pool[k]);
    return out;
  }
  const std::size_t workers = std::min<std::size_t>(threads, pool.size());
  std::vector<std::future<void>> jobs;
  for (std::size_t w = 0; w < workers; ++w)
    jobs.push_back(std::async(std::launch::async, [&, w] {
      for (std::size_t k = w; k < pool.size(); k += workers) out[k] = eval(pool[k]);
    }));
  for (auto& j : jobs) j.get();
  return out;
}

inline VarSet with(VarSet set, std::size_t v) {
  set.push_back(v);
  return set;
}

inline VarSet without(const VarSet& set, std::size_t v) {
  VarSet out;
  for (auto x : set)
    if (x != v) out.push_back(x);
  return out;
}

inline void check_candidates(const CategoricalDataset& data, const VarSet& candidates) {
  if (candidates.empty()) throw std::invalid_argument("selection: empty candidate set");
  VarSet sorted = candidates;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw std::invalid_argument("selection: repeated candidate");
  if (sorted.back() >= data.num_variables()) throw std::invalid_argument("selection: candidate index out of range");
}

// Greedy forward/backward skeleton shared by both selectors. `better(a, b)`
// says evaluation a beats b on value alone; `gain(prev, next)` measures
// improvement. Ties on value (within 1e-12) go to the smaller composite,
// then the smaller variable index.
template <typename Eval, typename Better, typename Gain>
SelectionResult greedy(const VarSet& candidates, const SelectionConfig& config, double empty_value,
                       bool always_take_first, Eval&& eval, Better&& better, Gain&& gain) {
  if (config.epsilon < 0.0) throw std::invalid_argument("selection: epsilon must be non-negative");
  SelectionResult result;
  std::vector<std::size_t> pool = candidates;
  std::sort(pool.begin(), pool.end());
  double current = empty_value;
  result.terminated_by = Termination::exhausted;

  while (!pool.empty()) {
    if (config.max_vars && result.basis.size() >= *config.max_vars) {
      result.terminated_by = Termination::max_vars;
      break;
    }
    auto evals = evaluate_all(pool, config.threads, [&](std::size_t v) { return eval(with(result.basis, v)); });

    std::optional<std::size_t> best;
    std::vector<std::size_t> keep;
    for (std::size_t k = 0; k < pool.size(); ++k) {
      if (evals[k].skipped) {
        result.skipped.push_back({pool[k], evals[k].cells});
        continue;
      }
      keep.push_back(k);
      if (!best) {
        best = k;
        continue;
      }
      const auto& a = evals[k];
      const auto& b = evals[*best];
      if (std::abs(a.value - b.value) <= 1e-12) {
        if (a.cells < b.cells) best = k;  // pool is sorted, so index order is already preferred
      } else if (better(a.value, b.value)) {
        best = k;
      }
    }
    if (!best) {
      result.terminated_by = Termination::max_cells;
      break;
    }
    const auto& chosen = evals[*best];
    const bool first = result.basis.empty();
    if (!(first && always_take_first) && gain(current, chosen.value) <= config.epsilon) {
      result.terminated_by = Termination::no_gain;
      break;
    }
    const std::size_t v = pool[*best];
    result.basis.push_back(v);
    result.trace.push_back({v, chosen.value, chosen.cells});
    current = chosen.value;
    std::vector<std::size_t> next;
    for (auto k : keep)
      if (k != *best) next.push_back(pool[k]);
    pool = std::move(next);
  }
  result.forward_value = current;

  // Backward: scan in selection order, restart after every removal. The
  // reference is the forward-phase value so the total loss stays within
  // epsilon.
  bool removed_any = true;
  while (removed_any && !result.basis.empty()) {
    removed_any = false;
    for (std::size_t v : result.basis) {
      const VarSet rest = without(result.basis, v);
      const double value = rest.empty() ? empty_value : eval(rest).value;
      if (gain(value, result.forward_value) <= config.epsilon) {
        result.basis = rest;
        result.removed.push_back(v);
        current = value;
        removed_any = true;
        break;
      }
    }
  }
  result.final_value = current;
  return result;
}

}  // namespace detail

inline SelectionResult select_supervised(const CategoricalDataset& data, std::size_t y, const VarSet& candidates,
                                         const SelectionConfig& config = {}) {
  detail::check_candidates(data, candidates);
  if (y >= data.num_variables()) throw std::invalid_argument("selection: response index out of range");
  if (std::find(candidates.begin(), candidates.end(), y) != candidates.end())
    throw std::invalid_argument("selection: response '" + data.variable(y).name + "' is among the candidates");

  // Weights are fixed once from the response marginal of the whole dataset.
  const auto stats = MarginalStats::of(data, y);
  const auto weights = resolve_weights(config.weights, stats);
  for (std::size_t s = 0; s < stats.p.size(); ++s)
    if (stats.p[s] > 0.0 && !(weights[s] > 0.0))
      throw std::invalid_argument("selection: supervised selection needs a regular weight vector");

  auto eval = [&](const VarSet& set) {
    detail::Evaluation e;
    const auto x = compose(data, set);
    e.cells = x.observed_cardinality;
    if (config.max_cells && e.cells > *config.max_cells) {
      e.skipped = true;
      return e;
    }
    e.value = tau_alpha(theta_vector(contingency(data, x, y)), weights);
    return e;
  };
  auto result = detail::greedy(
      candidates, config, 0.0, /*always_take_first=*/true, eval,
      [](double a, double b) { return a > b; }, [](double prev, double next) { return next - prev; });
  const auto full = eval(candidates);
  if (!full.skipped) result.full_value = full.value;
  return result;
}

inline SelectionResult select_structural(const CategoricalDataset& data, const VarSet& candidates,
                                         const SelectionConfig& config = {}) {
  detail::check_candidates(data, candidates);
  auto eval = [&](const VarSet& set) {
    detail::Evaluation e;
    const auto x = compose(data, set);
    e.cells = x.observed_cardinality;
    if (config.max_cells && e.cells > *config.max_cells) {
      e.skipped = true;
      return e;
    }
    e.value = expected_concentration(data, x);
    return e;
  };
  auto result = detail::greedy(
      candidates, config, 1.0, /*always_take_first=*/false, eval,
      [](double a, double b) { return a < b; }, [](double prev, double next) { return prev - next; });
  const auto full = eval(candidates);
  if (!full.skipped) result.full_value = full.value;
  return result;
}

// ---------------------------------------------------------------------------
// Verification

struct BasisReport {
  bool condition1 = false;  // TB1 (tau reaches the full set) or aB1 (all variables determined)
  bool condition2 = false;  // TB2 / aB2 (no member can be dropped)
  double basis_value = 0.0;
  double full_value = 0.0;
  std::vector<double> drop_values;        // value with each member removed, in basis order
  std::vector<double> determination;      // structural: tau(V | basis) per candidate
};

// Supervised when `y` is set (TB1/TB2 on tau_alpha), structural otherwise
// (aB1/aB2 on determinism of every candidate). Both conditions are
// evaluated with the config's epsilon as equality tolerance.
inline BasisReport verify_basis(const CategoricalDataset& data, const VarSet& basis, const VarSet& candidates,
                                std::optional<std::size_t> y, const SelectionConfig& config = {}) {
  if (basis.empty()) throw std::invalid_argument("verify_basis: empty basis");
  const double eps = config.epsilon;
  BasisReport report;
  if (y) {
    const auto weights = resolve_weights(config.weights, MarginalStats::of(data, *y));
    auto value = [&](const VarSet& set) {
      return set.empty() ? 0.0 : tau_alpha(theta_vector(contingency(data, set, *y)), weights);
    };
    report.basis_value = value(basis);
    report.full_value = value(candidates);
    report.condition1 = std::abs(report.basis_value - report.full_value) <= eps;
    report.condition2 = true;
    for (auto v : basis) {
      report.drop_values.push_back(value(detail::without(basis, v)));
      if (!(report.drop_values.back() < report.full_value - eps)) report.condition2 = false;
    }
    return report;
  }

  const auto b = compose(data, basis);
  auto determined_value = [&](const CompositeVariable& given, std::size_t v) {
    const auto table = contingency(data, given, v);
    if (MarginalStats::of(table).gini_variation <= 0.0) return 1.0;
    return gk_tau(table);
  };
  report.condition1 = true;
  for (auto v : candidates) {
    const double d = b.contains(v) ? 1.0 : determined_value(b, v);
    report.determination.push_back(d);
    if (std::abs(d - 1.0) > std::max(eps, 1e-12)) report.condition1 = false;
  }
  report.basis_value = expected_concentration(data, b);
  report.full_value = expected_concentration(data, candidates);
  report.condition2 = true;
  for (auto v : basis) {
    const auto rest = detail::without(basis, v);
    if (rest.empty()) {
      // A single-member basis is irredundant unless the variable is constant.
      const bool constant = data.variable(v).cardinality() <= 1 || compose(data, {v}).observed_cardinality <= 1;
      report.drop_values.push_back(1.0);
      if (constant) report.condition2 = false;
      continue;
    }
    const auto r = compose(data, rest);
    const double d = determined_value(r, v);
    report.drop_values.push_back(d);
    if (!(d < 1.0 - std::max(eps, 1e-12))) report.condition2 = false;
  }
  return report;
}

// Observed joint domain sizes of two structural bases; equal for any two
// verified bases of the same dataset.
inline std::pair<std::size_t, std::size_t> basis_domain_sizes(const CategoricalDataset& data, const VarSet& a,
                                                              const VarSet& b) {
  return {compose(data, a).observed_cardinality, compose(data, b).observed_cardinality};
}

}  // namespace catassoc
