#include "poirec/ranking.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <numeric>

#include "poirec/rng.hpp"

namespace poirec {

LtrKind ltr_kind_from_name(const std::string& name) {
  if (name == "listnet") return LtrKind::ListNet;
  if (name == "ranknet") return LtrKind::RankNet;
  if (name == "coord-ascent") return LtrKind::CoordAscent;
  if (name == "linearcatrev") return LtrKind::LinearCatRev;
  throw DataError("unknown learning-to-rank kind '" + name + "'");
}

std::string ltr_kind_name(LtrKind kind) {
  switch (kind) {
    case LtrKind::ListNet: return "listnet";
    case LtrKind::RankNet: return "ranknet";
    case LtrKind::CoordAscent: return "coord-ascent";
    case LtrKind::LinearCatRev: return "linearcatrev";
  }
  throw DataError("unknown learning-to-rank kind");
}

double RankingModel::score(const std::vector<double>& features) const {
  double s = bias;
  const std::size_t n = std::min(features.size(), weights.size());
  for (std::size_t i = 0; i < n; ++i) {
    double x = features[i];
    if (i < feature_shift.size()) x = (x - feature_shift[i]) / feature_scale[i];
    s += weights[i] * x;
  }
  return s;
}

namespace {

// Column means and standard deviations over every training row; flat
// columns keep scale 1 so standardization stays invertible.
void fit_standardization(const std::vector<LtrGroup>& groups, std::size_t dim,
                         std::vector<double>& shift, std::vector<double>& scale) {
  shift.assign(dim, 0.0);
  scale.assign(dim, 1.0);
  std::size_t n = 0;
  for (const auto& g : groups) n += g.size();
  if (n == 0) return;
  for (const auto& g : groups)
    for (const auto& row : g)
      for (std::size_t f = 0; f < dim; ++f) shift[f] += row.features[f];
  for (auto& s : shift) s /= static_cast<double>(n);
  std::vector<double> ss(dim, 0.0);
  for (const auto& g : groups)
    for (const auto& row : g)
      for (std::size_t f = 0; f < dim; ++f) {
        const double d = row.features[f] - shift[f];
        ss[f] += d * d;
      }
  for (std::size_t f = 0; f < dim; ++f) {
    const double sd = std::sqrt(ss[f] / static_cast<double>(n));
    if (sd > 1e-12) scale[f] = sd;
  }
}

std::vector<LtrGroup> standardized(const std::vector<LtrGroup>& groups,
                                   const std::vector<double>& shift,
                                   const std::vector<double>& scale) {
  std::vector<LtrGroup> out = groups;
  for (auto& g : out)
    for (auto& row : g)
      for (std::size_t f = 0; f < shift.size() && f < row.features.size(); ++f)
        row.features[f] = (row.features[f] - shift[f]) / scale[f];
  return out;
}

std::vector<double> model_scores(const std::vector<double>& params, const LtrGroup& rows) {
  const std::size_t d = params.size() - 1;  // bias last
  std::vector<double> s(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    double v = params[d];
    for (std::size_t f = 0; f < d; ++f) v += params[f] * rows[i].features[f];
    s[i] = v;
  }
  return s;
}

std::vector<double> softmax(const std::vector<double>& v) {
  const double mx = *std::max_element(v.begin(), v.end());
  std::vector<double> out(v.size());
  double z = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    out[i] = std::exp(v[i] - mx);
    z += out[i];
  }
  for (auto& x : out) x /= z;
  return out;
}

}  // namespace

std::pair<double, std::vector<double>> listnet_loss_and_gradient(
    const std::vector<double>& params, const LtrGroup& rows) {
  if (rows.size() < 2) throw DataError("listnet loss needs at least 2 rows");
  const std::size_t d = params.size() - 1;

  const std::vector<double> scores = model_scores(params, rows);
  std::vector<double> gains(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) gains[i] = rows[i].gain;

  const std::vector<double> p_model = softmax(scores);
  const std::vector<double> p_target = softmax(gains);

  double loss = 0.0;
  std::vector<double> grad(params.size(), 0.0);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    loss -= p_target[i] * std::log(p_model[i]);
    const double delta = p_model[i] - p_target[i];
    for (std::size_t f = 0; f < d; ++f) grad[f] += delta * rows[i].features[f];
    grad[d] += delta;
  }
  return {loss, grad};
}

std::pair<double, std::vector<double>> ranknet_loss_and_gradient(
    const std::vector<double>& params, const LtrGroup& rows) {
  const std::size_t d = params.size() - 1;
  const std::vector<double> scores = model_scores(params, rows);

  double loss = 0.0;
  std::vector<double> grad(params.size(), 0.0);
  long pairs = 0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < rows.size(); ++j) {
      if (!(rows[i].gain > rows[j].gain)) continue;
      ++pairs;
      const double diff = scores[i] - scores[j];
      // softplus(-diff), stable on both sides
      loss += diff > 0.0 ? std::log1p(std::exp(-diff)) : -diff + std::log1p(std::exp(diff));
      const double sigma = 1.0 / (1.0 + std::exp(diff));  // sigmoid(-diff)
      for (std::size_t f = 0; f < d; ++f)
        grad[f] -= sigma * (rows[i].features[f] - rows[j].features[f]);
      // bias cancels in pairwise differences; grad[d] stays 0
    }
  }
  if (pairs == 0) throw DataError("ranknet loss needs at least one discordant-capable pair");
  // mean over pairs keeps the gradient scale independent of the list size
  loss /= static_cast<double>(pairs);
  for (auto& gr : grad) gr /= static_cast<double>(pairs);
  return {loss, grad};
}

namespace {

RankingModel sgd_train(const std::vector<LtrGroup>& raw_groups,
                       const std::vector<std::string>& columns, LtrKind kind,
                       const LtrTrainOptions& opts) {
  if (raw_groups.empty()) throw DataError("learning-to-rank training needs at least one group");
  const std::size_t d = columns.size();
  std::vector<double> shift, scale;
  fit_standardization(raw_groups, d, shift, scale);
  const std::vector<LtrGroup> groups = standardized(raw_groups, shift, scale);
  std::vector<double> params(d + 1, 0.0);

  auto usable = [&](const LtrGroup& g) {
    if (kind == LtrKind::ListNet) return g.size() >= 2;
    for (std::size_t i = 0; i < g.size(); ++i)
      for (std::size_t j = i + 1; j < g.size(); ++j)
        if (g[i].gain != g[j].gain) return true;
    return false;
  };

  std::vector<std::size_t> order;
  for (std::size_t i = 0; i < groups.size(); ++i)
    if (usable(groups[i])) order.push_back(i);

  Rng rng(opts.seed);
  for (int epoch = 0; epoch < opts.epochs && !order.empty(); ++epoch) {
    rng.shuffle(order);
    for (std::size_t gi : order) {
      const auto [loss, grad] = kind == LtrKind::ListNet
                                    ? listnet_loss_and_gradient(params, groups[gi])
                                    : ranknet_loss_and_gradient(params, groups[gi]);
      (void)loss;
      for (std::size_t f = 0; f < params.size(); ++f)
        params[f] -= opts.learning_rate * grad[f];
    }
  }

  RankingModel model;
  model.kind = kind;
  model.columns = columns;
  model.weights.assign(params.begin(), params.begin() + static_cast<long>(d));
  model.bias = params[d];
  model.feature_shift = std::move(shift);
  model.feature_scale = std::move(scale);
  model.seed = opts.seed;
  model.epochs = opts.epochs;
  model.learning_rate = opts.learning_rate;
  return model;
}

}  // namespace

RankingModel train_listnet(const std::vector<LtrGroup>& groups,
                           const std::vector<std::string>& columns,
                           const LtrTrainOptions& opts) {
  return sgd_train(groups, columns, LtrKind::ListNet, opts);
}

RankingModel train_ranknet(const std::vector<LtrGroup>& groups,
                           const std::vector<std::string>& columns,
                           const LtrTrainOptions& opts) {
  return sgd_train(groups, columns, LtrKind::RankNet, opts);
}

namespace {

std::vector<std::size_t> ranked_order(const LtrGroup& rows, const std::vector<double>& scores) {
  std::vector<std::size_t> idx(rows.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    if (scores[a] != scores[b]) return scores[a] > scores[b];
    return rows[a].venue_id < rows[b].venue_id;
  });
  return idx;
}

}  // namespace

double group_precision_at_k(const LtrGroup& rows, const std::vector<double>& scores, int k) {
  const auto idx = ranked_order(rows, scores);
  int hits = 0;
  for (std::size_t i = 0; i < idx.size() && i < static_cast<std::size_t>(k); ++i)
    if (rows[idx[i]].relevant) ++hits;
  return static_cast<double>(hits) / static_cast<double>(k);
}

double group_ndcg_at_k(const LtrGroup& rows, const std::vector<double>& scores, int k) {
  const auto idx = ranked_order(rows, scores);
  double dcg = 0.0;
  for (std::size_t i = 0; i < idx.size() && i < static_cast<std::size_t>(k); ++i)
    dcg += (std::pow(2.0, rows[idx[i]].gain) - 1.0) / std::log2(2.0 + static_cast<double>(i));

  std::vector<double> gains(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) gains[i] = rows[i].gain;
  std::sort(gains.begin(), gains.end(), std::greater<>());
  double idcg = 0.0;
  for (std::size_t i = 0; i < gains.size() && i < static_cast<std::size_t>(k); ++i)
    idcg += (std::pow(2.0, gains[i]) - 1.0) / std::log2(2.0 + static_cast<double>(i));
  return idcg > 0.0 ? dcg / idcg : 0.0;
}

namespace {

double ascent_objective(const std::vector<LtrGroup>& groups, const std::vector<double>& w,
                        AscentMetric metric) {
  double sum = 0.0;
  std::vector<double> scores;
  for (const auto& g : groups) {
    scores.assign(g.size(), 0.0);
    for (std::size_t i = 0; i < g.size(); ++i)
      for (std::size_t f = 0; f < w.size(); ++f) scores[i] += w[f] * g[i].features[f];
    sum += metric == AscentMetric::PrecisionAt5 ? group_precision_at_k(g, scores, 5)
                                                : group_ndcg_at_k(g, scores, 5);
  }
  return sum / static_cast<double>(groups.size());
}

void l1_normalize(std::vector<double>& w) {
  double norm = 0.0;
  for (double x : w) norm += std::abs(x);
  if (norm > 0.0)
    for (auto& x : w) x /= norm;
}

}  // namespace

RankingModel coordinate_ascent_train(const std::vector<LtrGroup>& raw_groups,
                                     const std::vector<std::string>& columns,
                                     AscentMetric metric, const LtrTrainOptions& opts) {
  if (raw_groups.empty()) throw DataError("coordinate ascent needs at least one group");
  const std::size_t d = columns.size();
  std::vector<double> shift, scale;
  fit_standardization(raw_groups, d, shift, scale);
  const std::vector<LtrGroup> groups = standardized(raw_groups, shift, scale);
  constexpr double kImprovementEps = 1e-12;
  const std::array<double, 13> kCandidates = {-2.0, -1.0, -0.5, -0.2, -0.1, -0.05, 0.0,
                                              0.05, 0.1,  0.2,  0.5,  1.0,  2.0};

  Rng rng(opts.seed);
  std::vector<double> best_w(d, 1.0 / static_cast<double>(d));
  double best_obj = -1.0;

  for (int restart = 0; restart < std::max(1, opts.restarts); ++restart) {
    std::vector<double> w(d);
    if (restart == 0) {
      std::fill(w.begin(), w.end(), 1.0 / static_cast<double>(d));
    } else {
      for (auto& x : w) x = rng.uniform(-1.0, 1.0);
      l1_normalize(w);
    }

    double obj = ascent_objective(groups, w, metric);
    for (int pass = 0; pass < 25; ++pass) {
      bool improved = false;
      for (std::size_t f = 0; f < d; ++f) {
        const double saved = w[f];
        double local_best = saved;
        double local_obj = obj;
        for (double candidate : kCandidates) {
          if (candidate == saved) continue;
          w[f] = candidate;
          const double o = ascent_objective(groups, w, metric);
          if (o > local_obj + kImprovementEps) {
            local_obj = o;
            local_best = candidate;
          }
        }
        w[f] = local_best;
        if (local_obj > obj + kImprovementEps) {
          obj = local_obj;
          improved = true;
        }
      }
      if (!improved) break;
    }

    if (obj > best_obj + kImprovementEps) {
      best_obj = obj;
      best_w = w;
    }
  }

  l1_normalize(best_w);
  RankingModel model;
  model.kind = LtrKind::CoordAscent;
  model.columns = columns;
  model.weights = std::move(best_w);
  model.bias = 0.0;
  model.feature_shift = std::move(shift);
  model.feature_scale = std::move(scale);
  model.seed = opts.seed;
  model.epochs = 0;
  model.learning_rate = 0.0;
  return model;
}

double linearcatrev_score(double s_cat, double s_rev, double alpha) {
  if (alpha < 0.0 || alpha > 1.0) throw DataError("linearcatrev alpha must be in [0, 1]");
  return alpha * s_cat + (1.0 - alpha) * s_rev;
}

RankedList rank_candidates(const RankingModel& model, const LtrGroup& rows) {
  RankedList list;
  list.reserve(rows.size());
  for (const auto& row : rows) list.push_back({row.venue_id, model.score(row.features)});
  std::sort(list.begin(), list.end(), [](const RankedItem& a, const RankedItem& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.venue_id < b.venue_id;
  });
  return list;
}

RankedList rerank_with_context(const RankedList& list,
                               const std::map<std::string, double>& s_cxt, double lambda) {
  if (lambda < 0.0) throw DataError("rerank lambda must be >= 0");
  RankedList out = list;
  for (auto& item : out) {
    auto it = s_cxt.find(item.venue_id);
    item.score += lambda * (it == s_cxt.end() ? 0.0 : it->second);
  }
  std::sort(out.begin(), out.end(), [](const RankedItem& a, const RankedItem& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.venue_id < b.venue_id;
  });
  return out;
}

}  // namespace poirec
