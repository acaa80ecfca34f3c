#include "poirec/linear.hpp"

#include <cmath>
#include <numeric>

#include "poirec/domain.hpp"
#include "poirec/rng.hpp"

namespace poirec {

LinearModel train_hinge(const std::vector<SparseVec>& xs, const std::vector<int>& ys,
                        int dim, const HingeParams& params) {
  if (xs.size() != ys.size()) throw DataError("train_hinge: sample/label count mismatch");
  if (xs.empty()) throw DataError("train_hinge: empty training set");
  if (!(params.lambda > 0.0)) throw DataError("train_hinge: lambda must be > 0");

  const std::size_t d = static_cast<std::size_t>(dim) + 1;  // + bias
  std::vector<double> w(d, 0.0);

  Rng rng(params.seed);
  std::vector<std::size_t> order(xs.size());
  std::iota(order.begin(), order.end(), 0);

  // eta_t = eta0 / (1 + lambda eta0 t): bounded first steps, 1/t tail
  constexpr double kEta0 = 1.0;
  long t = 0;
  for (int epoch = 0; epoch < params.epochs; ++epoch) {
    rng.shuffle(order);
    for (std::size_t idx : order) {
      const double eta = kEta0 / (1.0 + params.lambda * kEta0 * static_cast<double>(t++));
      const SparseVec& x = xs[idx];
      const double y = static_cast<double>(ys[idx]);

      double margin = w.back();
      for (const auto& [i, v] : x) margin += w[static_cast<std::size_t>(i)] * v;
      margin *= y;

      const double decay = 1.0 - eta * params.lambda;
      for (auto& wi : w) wi *= decay;
      if (margin < 1.0) {
        for (const auto& [i, v] : x) w[static_cast<std::size_t>(i)] += eta * y * v;
        w.back() += eta * y;
      }
    }
  }
  return LinearModel{std::move(w)};
}

}  // namespace poirec
