#pragma once

// Proportional (conditional Monte-Carlo) prediction: Y-hat is drawn from the
// training conditional p(Y | X = x) instead of taking its mode. The expected
// confusion matrix of this predictor is gamma(Y|X).

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "catassoc/association.hpp"
#include "catassoc/dataset.hpp"
#include "catassoc/random.hpp"

namespace catassoc {

class ProportionalPredictor {
public:
  ProportionalPredictor(std::vector<std::string> members, std::string response,
                        std::map<std::vector<Code>, std::vector<double>> conditionals, std::vector<double> fallback)
      : members_(std::move(members)), response_(std::move(response)), conditionals_(std::move(conditionals)),
        fallback_(std::move(fallback)) {}

  // Variables are referenced by name so that test data loaded separately
  // (and recoded with recode_like) can be scored.
  const std::vector<std::string>& members() const noexcept { return members_; }
  const std::string& response() const noexcept { return response_; }
  std::size_t levels() const noexcept { return fallback_.size(); }
  const std::vector<double>& fallback() const noexcept { return fallback_; }

  // Conditional distribution for a tuple of member codes; the training
  // marginal when the tuple was never seen in training.
  const std::vector<double>& conditional(const std::vector<Code>& tuple) const {
    auto it = conditionals_.find(tuple);
    return it == conditionals_.end() ? fallback_ : it->second;
  }

  bool seen(const std::vector<Code>& tuple) const { return conditionals_.count(tuple) != 0; }

  // Inverse-CDF draw from `dist` using stream `counter` of `seed`.
  static std::size_t draw(const std::vector<double>& dist, std::uint64_t seed, std::uint64_t counter) {
    CounterRng rng(seed, counter);
    const double u = rng.uniform();
    double acc = 0.0;
    std::size_t last_positive = 0;
    for (std::size_t t = 0; t < dist.size(); ++t) {
      if (dist[t] <= 0.0) continue;
      acc += dist[t];
      last_positive = t;
      if (u < acc) return t;
    }
    return last_positive;
  }

private:
  std::vector<std::string> members_;
  std::string response_;
  std::map<std::vector<Code>, std::vector<double>> conditionals_;
  std::vector<double> fallback_;
};

inline ProportionalPredictor fit(const CategoricalDataset& train, const VarSet& x, std::size_t y) {
  const auto composite = compose(train, x);
  const auto table = contingency(train, composite, y);
  const auto stats = MarginalStats::of(table);
  if (!(stats.gini_variation > 0.0))
    throw DataError("fit: response '" + train.variable(y).name + "' is constant in the training data");

  std::map<std::vector<Code>, std::vector<double>> conditionals;
  for (std::size_t i = 0; i < table.x_levels(); ++i) {
    const double mi = table.x_marginal()[i];
    if (!(mi > 0.0)) continue;
    std::vector<double> dist;
    for (double m : table.row(i)) dist.push_back(m / mi);
    auto t = composite.tuple(i);
    conditionals.emplace(std::vector<Code>(t.begin(), t.end()), std::move(dist));
  }
  std::vector<std::string> names;
  for (auto v : composite.members) names.push_back(train.variable(v).name);
  return ProportionalPredictor(std::move(names), train.variable(y).name, std::move(conditionals), stats.p);
}

struct ConfusionMatrix {
  std::size_t size = 0;
  std::vector<std::uint64_t> counts;  // [true][predicted], row-major

  std::uint64_t operator()(std::size_t s, std::size_t t) const { return counts.at(s * size + t); }

  std::uint64_t total() const {
    std::uint64_t n = 0;
    for (auto c : counts) n += c;
    return n;
  }

  // Rows with no observations stay all-zero.
  std::vector<double> row_normalized() const {
    std::vector<double> out(counts.size(), 0.0);
    for (std::size_t s = 0; s < size; ++s) {
      std::uint64_t n = 0;
      for (std::size_t t = 0; t < size; ++t) n += (*this)(s, t);
      if (n == 0) continue;
      for (std::size_t t = 0; t < size; ++t) out[s * size + t] = static_cast<double>((*this)(s, t)) / static_cast<double>(n);
    }
    return out;
  }
};

// Draws one proportional prediction per test row and tallies (true,
// predicted). The random stream of a row is keyed by its content and by how
// many identical rows precede it, so counts are invariant under any
// reordering of the test rows. `test` must share the training level
// dictionaries (see CategoricalDataset::recode_like); variables are matched
// by name. Rows carry unit weight.
inline ConfusionMatrix predict_and_score(const ProportionalPredictor& predictor, const CategoricalDataset& test,
                                         std::uint64_t seed) {
  const std::size_t n = predictor.levels();
  const std::size_t y = test.index_of(predictor.response());
  if (test.variable(y).cardinality() > n)
    throw DataError("predict: test response '" + predictor.response() + "' has levels unknown to the training data");
  ConfusionMatrix cm{n, std::vector<std::uint64_t>(n * n, 0)};
  VarSet members;
  for (const auto& name : predictor.members()) members.push_back(test.index_of(name));
  std::vector<Code> tuple(members.size());
  std::map<std::pair<std::vector<Code>, Code>, std::uint64_t> occurrences;
  auto ycol = test.column(y);
  for (std::size_t r = 0; r < test.num_rows(); ++r) {
    std::uint64_t key = mix64(ycol[r]);
    for (std::size_t k = 0; k < members.size(); ++k) {
      tuple[k] = test.column(members[k])[r];
      key = mix64(key ^ (std::uint64_t{tuple[k]} + 0x9e3779b97f4a7c15ULL * (k + 1)));
    }
    const std::uint64_t occurrence = occurrences[{tuple, ycol[r]}]++;
    const auto t = ProportionalPredictor::draw(predictor.conditional(tuple), derive_seed(seed, key), occurrence);
    ++cm.counts[std::size_t{ycol[r]} * n + t];
  }
  return cm;
}

// gamma(Y|X) read as the expected confusion matrix: diagonal entries are
// expected per-class accuracies, row off-diagonals first-type error rates
// and column off-diagonals second-type error rates.
inline AssociationMatrix expected_confusion(const ContingencyTable& table) { return gamma_matrix(table); }

}  // namespace catassoc
