#pragma once

// Stratified bootstrap with percentile confidence intervals.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <future>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "catassoc/association.hpp"
#include "catassoc/dataset.hpp"
#include "catassoc/error.hpp"
#include "catassoc/random.hpp"

namespace catassoc {

using Statistic = std::function<double(const CategoricalDataset&)>;

struct BootstrapConfig {
  std::size_t iterations = 1000;
  std::size_t sample_size = 0;         // 0: same as the dataset
  std::uint64_t seed = 0;
  std::optional<std::size_t> stratify_by;
  double confidence = 0.95;
  unsigned threads = 1;
};

struct BootstrapSummary {
  double point_estimate = 0.0;
  double mean = 0.0;
  double ci_low = 0.0, ci_high = 0.0;
  std::size_t iterations = 0;
  std::size_t failed = 0;
  std::size_t sample_size = 0;
  std::uint64_t seed = 0;
  double confidence = 0.0;
  std::vector<double> replicates;      // successful replicates, in iteration order
};

// Largest-remainder allocation of `n` draws over strata of the given sizes.
inline std::vector<std::size_t> stratum_allocation(const std::vector<std::size_t>& sizes, std::size_t n) {
  const double total = static_cast<double>(std::accumulate(sizes.begin(), sizes.end(), std::size_t{0}));
  std::vector<std::size_t> alloc(sizes.size(), 0);
  std::vector<std::pair<double, std::size_t>> remainders;
  std::size_t assigned = 0;
  for (std::size_t k = 0; k < sizes.size(); ++k) {
    const double exact = static_cast<double>(n) * static_cast<double>(sizes[k]) / total;
    alloc[k] = static_cast<std::size_t>(std::floor(exact));
    assigned += alloc[k];
    remainders.emplace_back(exact - std::floor(exact), k);
  }
  // Larger remainder first; ties to the lower stratum index.
  std::stable_sort(remainders.begin(), remainders.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
  for (std::size_t j = 0; assigned < n && j < remainders.size(); ++j, ++assigned) ++alloc[remainders[j].second];
  return alloc;
}

// Linear-interpolation quantile of sorted data (q in [0, 1]).
inline double quantile_sorted(const std::vector<double>& sorted, double q) {
  if (sorted.empty()) throw std::invalid_argument("quantile of empty sample");
  const double h = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

namespace detail {

class Resampler {
public:
  Resampler(const CategoricalDataset& data, const BootstrapConfig& config) : n_(config.sample_size) {
    if (n_ == 0) n_ = data.num_rows();
    if (config.stratify_by) {
      const std::size_t v = *config.stratify_by;
      if (v >= data.num_variables()) throw std::invalid_argument("bootstrap: stratification variable out of range");
      strata_.resize(data.variable(v).cardinality());
      auto col = data.column(v);
      for (std::size_t r = 0; r < data.num_rows(); ++r) strata_[col[r]].push_back(r);
      strata_.erase(std::remove_if(strata_.begin(), strata_.end(), [](const auto& s) { return s.empty(); }),
                    strata_.end());
    } else {
      strata_.emplace_back(data.num_rows());
      std::iota(strata_.front().begin(), strata_.front().end(), std::size_t{0});
    }
    std::vector<std::size_t> sizes;
    for (const auto& s : strata_) sizes.push_back(s.size());
    alloc_ = stratum_allocation(sizes, n_);
  }

  std::vector<std::size_t> draw(std::uint64_t seed, std::uint64_t counter) const {
    CounterRng rng(seed, counter);
    std::vector<std::size_t> rows;
    rows.reserve(n_);
    for (std::size_t k = 0; k < strata_.size(); ++k)
      for (std::size_t j = 0; j < alloc_[k]; ++j) rows.push_back(strata_[k][rng.below(strata_[k].size())]);
    return rows;
  }

  std::size_t sample_size() const noexcept { return n_; }
  const std::vector<std::size_t>& allocation() const noexcept { return alloc_; }

private:
  std::size_t n_;
  std::vector<std::vector<std::size_t>> strata_;
  std::vector<std::size_t> alloc_;
};

}  // namespace detail

// Each iteration draws `sample_size` rows with replacement, keeping stratum
// proportions (largest-remainder rounding). An iteration whose statistic is
// undefined (DataError) is redrawn once and then counted as failed; more
// than 5% failures is an error.
inline BootstrapSummary bootstrap(const CategoricalDataset& data, const Statistic& statistic,
                                  const BootstrapConfig& config) {
  if (!data.unit_mass()) throw DataError("bootstrap: dataset has weighted rows; expand it to unit rows first");
  if (config.iterations == 0) throw std::invalid_argument("bootstrap: iterations must be positive");
  if (!(config.confidence > 0.0 && config.confidence < 1.0))
    throw std::invalid_argument("bootstrap: confidence must lie in (0, 1)");

  const detail::Resampler resampler(data, config);
  BootstrapSummary out;
  out.iterations = config.iterations;
  out.sample_size = resampler.sample_size();
  out.seed = config.seed;
  out.confidence = config.confidence;
  out.point_estimate = statistic(data);

  std::vector<std::optional<double>> values(config.iterations);
  auto run = [&](std::size_t b) {
    for (std::uint64_t attempt = 0; attempt < 2; ++attempt) {
      const auto rows = resampler.draw(config.seed, b + attempt * config.iterations);
      try {
        values[b] = statistic(data.subset_rows(rows));
        return;
      } catch (const DataError&) {
      }
    }
  };
  const unsigned workers = std::max(1u, std::min<unsigned>(config.threads, static_cast<unsigned>(config.iterations)));
  if (workers == 1) {
    for (std::size_t b = 0; b < config.iterations; ++b) run(b);
  } else {
    std::vector<std::future<void>> jobs;
    for (unsigned w = 0; w < workers; ++w)
      jobs.push_back(std::async(std::launch::async, [&, w] {
        for (std::size_t b = w; b < config.iterations; b += workers) run(b);
      }));
    for (auto& j : jobs) j.get();
  }

  for (const auto& v : values) {
    if (v)
      out.replicates.push_back(*v);
    else
      ++out.failed;
  }
  if (static_cast<double>(out.failed) > 0.05 * static_cast<double>(config.iterations))
    throw DataError("bootstrap: statistic undefined on " + std::to_string(out.failed) + " of " +
                    std::to_string(config.iterations) + " resamples");

  double sum = 0.0;
  for (double v : out.replicates) sum += v;
  out.mean = sum / static_cast<double>(out.replicates.size());
  auto sorted = out.replicates;
  std::sort(sorted.begin(), sorted.end());
  const double tail = (1.0 - config.confidence) / 2.0;
  out.ci_low = quantile_sorted(sorted, tail);
  out.ci_high = quantile_sorted(sorted, 1.0 - tail);
  return out;
}

// Percentage of the association over `full_set` retained by `subset`:
// 100 * tau_alpha(Y|subset) / tau_alpha(Y|full_set). Named schemes are
// resolved on the marginal of the data passed in, so inside a bootstrap
// they follow each resample.
inline double reduction_statistic(const CategoricalDataset& data, std::size_t y, const VarSet& subset,
                                  const VarSet& full_set, const WeightSpec& weights) {
  for (auto v : subset)
    if (std::find(full_set.begin(), full_set.end(), v) == full_set.end())
      throw std::invalid_argument("reduction_statistic: subset is not contained in the full set");
  const auto w = resolve_weights(weights, MarginalStats::of(data, y));
  const double full = tau_alpha(theta_vector(contingency(data, full_set, y)), w);
  if (!(full > 0.0)) throw DataError("reduction_statistic: association over the full set is zero");
  const double part = tau_alpha(theta_vector(contingency(data, subset, y)), w);
  return 100.0 * part / full;
}

}  // namespace catassoc
