#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "poirec/domain.hpp"

namespace poirec {

// One candidate row inside a user's list: the active score columns, the
// non-negative target gain (graded judgments arrive shifted by +2) and the
// binary relevance used by P@k-style metrics.
struct LtrRow {
  std::string venue_id;
  std::vector<double> features;
  double gain = 0.0;
  bool relevant = false;
};

using LtrGroup = std::vector<LtrRow>;  // one user's candidate list

enum class LtrKind { ListNet, RankNet, CoordAscent, LinearCatRev };

LtrKind ltr_kind_from_name(const std::string& name);
std::string ltr_kind_name(LtrKind kind);

struct RankingModel {
  LtrKind kind = LtrKind::ListNet;
  std::vector<std::string> columns;
  std::vector<double> weights;  // one per column
  double bias = 0.0;            // neural kinds only
  // per-column standardization fitted on the training rows; empty = identity
  std::vector<double> feature_shift;
  std::vector<double> feature_scale;
  std::uint64_t seed = 0;
  int epochs = 0;
  double learning_rate = 0.0;

  double score(const std::vector<double>& features) const;
};

// Both losses operate on a single list. The parameter vector packs the
// column weights followed by the bias.

// Cross entropy between the top-one probabilities of the gains and the
// model scores; gradient is exact.
std::pair<double, std::vector<double>> listnet_loss_and_gradient(
    const std::vector<double>& params, const LtrGroup& rows);

// Pairwise logistic loss over pairs with unequal gains,
// P(i beats j) = sigmoid(s_i - s_j).
std::pair<double, std::vector<double>> ranknet_loss_and_gradient(
    const std::vector<double>& params, const LtrGroup& rows);

struct LtrTrainOptions {
  double learning_rate = 0.05;
  int epochs = 200;
  std::uint64_t seed = 1;
  int restarts = 3;  // coordinate ascent only
};

RankingModel train_listnet(const std::vector<LtrGroup>& groups,
                           const std::vector<std::string>& columns,
                           const LtrTrainOptions& opts);
RankingModel train_ranknet(const std::vector<LtrGroup>& groups,
                           const std::vector<std::string>& columns,
                           const LtrTrainOptions& opts);

enum class AscentMetric { PrecisionAt5, NdcgAt5 };

// Cyclic one-dimensional search over weights, maximizing the metric
// directly; returned weights are L1-normalized. No strict improvement, no
// move, so an all-equal-labels plateau returns the initial weights.
RankingModel coordinate_ascent_train(const std::vector<LtrGroup>& groups,
                                     const std::vector<std::string>& columns,
                                     AscentMetric metric, const LtrTrainOptions& opts);

double linearcatrev_score(double s_cat, double s_rev, double alpha);

struct RankedItem {
  std::string venue_id;
  double score = 0.0;
};

using RankedList = std::vector<RankedItem>;  // non-increasing score, id-ascending ties

RankedList rank_candidates(const RankingModel& model, const LtrGroup& rows);

// final = score + lambda * s_cxt, re-sorted with the same tie rule
RankedList rerank_with_context(const RankedList& list,
                               const std::map<std::string, double>& s_cxt, double lambda);

// Training-metric helpers shared with coordinate ascent; a ranked order is
// the row permutation by score desc / venue id asc.
double group_precision_at_k(const LtrGroup& rows, const std::vector<double>& scores, int k);
double group_ndcg_at_k(const LtrGroup& rows, const std::vector<double>& scores, int k);

}  // namespace poirec
