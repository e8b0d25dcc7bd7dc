#pragma once

// Seeded generator for the flu-test scenario: two binary tests (X1, X2),
// a three-level diagnosis Y drawn from a fixed conditional table, two noisy
// copies of the tests (R3, R4) and a rare conjunction indicator (S5).

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <future>
#include <stdexcept>
#include <string>
#include <vector>

#include "catassoc/dataset.hpp"
#include "catassoc/random.hpp"

namespace catassoc {

struct FluScenarioConfig {
  std::size_t n = 100000;
  std::uint64_t seed = 0;
  double flip_prob = 0.10;    // P(R = 0 | X = 1)
  double s5_prob = 0.8;       // P(S5 = 1 | X1 = X2 = 1)
  bool one_sided_noise = true;  // when false, also P(R = 1 | X = 0) = flip_prob
  // The reference result table names the tests the other way round from the
  // conditional table: its X1 is the conditional table's second test. With
  // this set (default) the output columns follow the result table, and R3/R4
  // are derived from the renamed X1/X2.
  bool result_labels = true;
  unsigned threads = 1;
};

namespace flu {

inline constexpr double kTestPositive = 0.25;

// P(Y = y | A = a, B = b), with (a, b) the coordinates of the conditional table.
inline constexpr std::array<std::array<double, 3>, 4> kConditional{{
    {0.95, 0.05, 0.00},  // (0,0)
    {0.30, 0.70, 0.00},  // (0,1)
    {0.50, 0.50, 0.00},  // (1,0)
    {0.00, 0.05, 0.95},  // (1,1)
}};

inline const std::array<double, 3>& conditional(int a, int b) { return kConditional[static_cast<std::size_t>(2 * a + b)]; }

inline std::vector<VariableMeta> variables() {
  const std::vector<std::string> bin{"0", "1"};
  return {{"Y", {"0", "1", "2"}}, {"X1", bin}, {"X2", bin}, {"R3", bin}, {"R4", bin}, {"S5", bin}};
}

inline void validate(const FluScenarioConfig& c) {
  auto prob = [](double p, const char* name) {
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument(std::string(name) + " must lie in [0, 1]");
  };
  prob(c.flip_prob, "flip_prob");
  prob(c.s5_prob, "s5_prob");
}

}  // namespace flu

// One row per draw; row r uses stream (seed, r) only, so the output does not
// depend on the thread count.
inline CategoricalDataset generate_flu(const FluScenarioConfig& config) {
  flu::validate(config);
  if (config.n == 0) throw std::invalid_argument("generate_flu: n must be at least 1");
  const std::size_t n = config.n;
  std::vector<std::vector<Code>> cols(6, std::vector<Code>(n));

  auto fill = [&](std::size_t begin, std::size_t end) {
    for (std::size_t r = begin; r < end; ++r) {
      CounterRng rng(config.seed, r);
      const int a = rng.uniform() < flu::kTestPositive;
      const int b = rng.uniform() < flu::kTestPositive;
      const auto& dist = flu::conditional(a, b);
      const double u = rng.uniform();
      const int y = u < dist[0] ? 0 : (u < dist[0] + dist[1] ? 1 : 2);
      const int x1 = config.result_labels ? b : a;
      const int x2 = config.result_labels ? a : b;
      auto noisy = [&](int x) {
        const bool flip = rng.uniform() < config.flip_prob;
        if (x == 1) return flip ? 0 : 1;
        return (!config.one_sided_noise && flip) ? 1 : 0;
      };
      const int r3 = noisy(x1);
      const int r4 = noisy(x2);
      const bool z = rng.uniform() < config.s5_prob;
      const int s5 = (x1 == 1 && x2 == 1 && z) ? 1 : 0;
      const int row[6] = {y, x1, x2, r3, r4, s5};
      for (std::size_t v = 0; v < 6; ++v) cols[v][r] = static_cast<Code>(row[v]);
    }
  };

  const std::size_t workers = std::max<std::size_t>(1, std::min<std::size_t>(config.threads, n / 4096 + 1));
  if (workers == 1) {
    fill(0, n);
  } else {
    std::vector<std::future<void>> jobs;
    const std::size_t chunk = (n + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w)
      jobs.push_back(std::async(std::launch::async, fill, w * chunk, std::min(n, (w + 1) * chunk)));
    for (auto& j : jobs) j.get();
  }
  return CategoricalDataset(flu::variables(), std::move(cols), std::vector<double>(n, 1.0));
}

// Exact joint distribution of (Y, X1, X2, R3, R4, S5) as a weighted dataset
// (one row per positive-probability scenario). `n` and `seed` are ignored.
inline CategoricalDataset flu_population(const FluScenarioConfig& config = {}) {
  flu::validate(config);
  std::vector<std::vector<Code>> cols(6);
  std::vector<double> mass;
  auto bernoulli = [](int value, double p1) { return value ? p1 : 1.0 - p1; };
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) {
      const double pab = bernoulli(a, flu::kTestPositive) * bernoulli(b, flu::kTestPositive);
      const int x1 = config.result_labels ? b : a;
      const int x2 = config.result_labels ? a : b;
      auto p_r = [&](int x, int r) {
        const double p_one = x == 1 ? 1.0 - config.flip_prob : (config.one_sided_noise ? 0.0 : config.flip_prob);
        return bernoulli(r, p_one);
      };
      for (int y = 0; y < 3; ++y)
        for (int r3 = 0; r3 < 2; ++r3)
          for (int r4 = 0; r4 < 2; ++r4)
            for (int s5 = 0; s5 < 2; ++s5) {
              const double p_s5 = bernoulli(s5, (x1 == 1 && x2 == 1) ? config.s5_prob : 0.0);
              const double m = pab * flu::conditional(a, b)[static_cast<std::size_t>(y)] * p_r(x1, r3) * p_r(x2, r4) * p_s5;
              if (!(m > 0.0)) continue;
              const int row[6] = {y, x1, x2, r3, r4, s5};
              for (std::size_t v = 0; v < 6; ++v) cols[v].push_back(static_cast<Code>(row[v]));
              mass.push_back(m);
            }
    }
  return CategoricalDataset(flu::variables(), std::move(cols), std::move(mass));
}

struct FluPopulationTables {
  ContingencyTable y_x1;
  ContingencyTable y_x2;
  ContingencyTable y_x1x2;
};

inline FluPopulationTables flu_population_tables(const FluScenarioConfig& config = {}) {
  const auto pop = flu_population(config);
  return {contingency(pop, VarSet{1}, 0), contingency(pop, VarSet{2}, 0), contingency(pop, VarSet{1, 2}, 0)};
}

}  // namespace catassoc
