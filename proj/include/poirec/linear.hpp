#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace poirec {

// Sparse feature vector, entries sorted by feature index.
using SparseVec = std::vector<std::pair<int, double>>;

struct HingeParams {
  double lambda = 1e-4;  // L2 regularization strength
  int epochs = 20;
  std::uint64_t seed = 1;
};

// Linear decision model with the bias stored as the last weight.
struct LinearModel {
  std::vector<double> weights;  // size = feature dim + 1

  double decision(const SparseVec& x) const {
    double s = weights.empty() ? 0.0 : weights.back();
    for (const auto& [idx, v] : x)
      if (idx >= 0 && idx + 1 < static_cast<int>(weights.size()))
        s += weights[static_cast<std::size_t>(idx)] * v;
    return s;
  }
};

// Binary hinge-loss training by Pegasos-style stochastic subgradient.
// Labels are +1/-1; the shuffle order is driven by the seed, so training
// is reproducible.
LinearModel train_hinge(const std::vector<SparseVec>& xs, const std::vector<int>& ys,
                        int dim, const HingeParams& params);

}  // namespace poirec
