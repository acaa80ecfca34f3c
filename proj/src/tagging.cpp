#include "poirec/tagging.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "poirec/linear.hpp"

namespace poirec {

std::vector<double> TaggerModel::scores(const std::string& token) const {
  const int dim = static_cast<int>(vocabulary.size());
  auto it = vocabulary.find(token);
  const int idx = it == vocabulary.end() ? -1 : it->second;
  std::vector<double> out(labels.size(), 0.0);
  for (std::size_t l = 0; l < labels.size(); ++l) {
    const auto& w = weights[l];
    out[l] = w[static_cast<std::size_t>(dim)];  // bias
    if (idx >= 0) out[l] += w[static_cast<std::size_t>(idx)];
  }
  return out;
}

std::vector<double> TaggerModel::posteriors(const std::string& token) const {
  std::vector<double> s = scores(token);
  const double mx = *std::max_element(s.begin(), s.end());
  double z = 0.0;
  for (auto& v : s) {
    v = std::exp(v - mx);
    z += v;
  }
  for (auto& v : s) v /= z;
  return s;
}

const std::string& TaggerModel::predict_label(const std::string& token) const {
  const std::vector<double> s = scores(token);
  std::size_t best = 0;
  for (std::size_t l = 1; l < s.size(); ++l)
    if (s[l] > s[best]) best = l;
  return labels[best];
}

std::vector<LabeledSequence> derive_labeled_sequences(const UserRecord& user,
                                                      const AlignmentModel& model,
                                                      const VenueStore& venues) {
  std::vector<LabeledSequence> out;
  for (const CheckIn& ci : user.history) {
    if (ci.tags.empty()) continue;
    const VenueRecord& v = venues.at(ci.venue_id);
    if (v.keywords.empty()) continue;
    AlignmentPair pair{v.keywords, ci.tags, user.id};
    const Mapping m = best_mapping(model, pair);
    LabeledSequence seq;
    seq.tokens = v.keywords;
    seq.labels.reserve(m.assignments.size());
    for (int a : m.assignments)
      seq.labels.push_back(a == 0 ? kNullLabel : ci.tags[static_cast<std::size_t>(a - 1)]);
    out.push_back(std::move(seq));
  }
  return out;
}

namespace {

struct Corpus {
  std::vector<std::string> labels;        // sorted
  std::map<std::string, int> label_index;
  std::map<std::string, int> vocabulary;
  std::vector<int> token_ids;  // flattened positions
  std::vector<int> label_ids;
};

Corpus build_corpus(const std::vector<LabeledSequence>& sequences) {
  Corpus c;
  std::set<std::string> label_set, token_set;
  for (const auto& s : sequences) {
    if (s.tokens.size() != s.labels.size())
      throw DataError("labeled sequence with token/label length mismatch");
    for (const auto& t : s.tokens) token_set.insert(t);
    for (const auto& l : s.labels) label_set.insert(l);
  }
  c.labels.assign(label_set.begin(), label_set.end());
  for (std::size_t i = 0; i < c.labels.size(); ++i)
    c.label_index[c.labels[i]] = static_cast<int>(i);
  int idx = 0;
  for (const auto& t : token_set) c.vocabulary[t] = idx++;
  for (const auto& s : sequences)
    for (std::size_t j = 0; j < s.tokens.size(); ++j) {
      c.token_ids.push_back(c.vocabulary[s.tokens[j]]);
      c.label_ids.push_back(c.label_index[s.labels[j]]);
    }
  return c;
}

// Multinomial logistic regression, full-batch gradient descent on the
// regularized cross-entropy. With one-hot emissions the loss factorizes per
// token, so the gradient is preconditioned by per-feature occurrence counts
// (each token weight sees the mean error over its own positions); the
// stationary points of the regularized objective are unchanged.
std::vector<std::vector<double>> train_maxent(const Corpus& c, double regularization,
                                              int epochs) {
  const std::size_t n_labels = c.labels.size();
  const std::size_t dim = c.vocabulary.size() + 1;
  const std::size_t bias = dim - 1;
  const std::size_t n = c.token_ids.size();
  const double lr = 0.5;

  std::vector<double> count(dim, 0.0);
  for (std::size_t p = 0; p < n; ++p) count[static_cast<std::size_t>(c.token_ids[p])] += 1.0;
  count[bias] = static_cast<double>(n);

  std::vector<std::vector<double>> w(n_labels, std::vector<double>(dim, 0.0));
  std::vector<std::vector<double>> grad(n_labels, std::vector<double>(dim, 0.0));
  std::vector<double> logits(n_labels);

  for (int epoch = 0; epoch < epochs; ++epoch) {
    for (auto& g : grad) std::fill(g.begin(), g.end(), 0.0);
    for (std::size_t p = 0; p < n; ++p) {
      const std::size_t tok = static_cast<std::size_t>(c.token_ids[p]);
      double mx = -1e300;
      for (std::size_t l = 0; l < n_labels; ++l) {
        logits[l] = w[l][tok] + w[l][bias];
        mx = std::max(mx, logits[l]);
      }
      double z = 0.0;
      for (std::size_t l = 0; l < n_labels; ++l) {
        logits[l] = std::exp(logits[l] - mx);
        z += logits[l];
      }
      for (std::size_t l = 0; l < n_labels; ++l) {
        const double err = logits[l] / z -
                           (static_cast<int>(l) == c.label_ids[p] ? 1.0 : 0.0);
        grad[l][tok] += err;
        grad[l][bias] += err;
      }
    }
    for (std::size_t l = 0; l < n_labels; ++l)
      for (std::size_t k = 0; k < dim; ++k)
        if (count[k] > 0.0)
          w[l][k] -= lr * (grad[l][k] / count[k] + regularization * w[l][k]);
  }
  return w;
}

std::vector<std::vector<double>> train_svm_ovr(const Corpus& c, double regularization,
                                               int epochs, std::uint64_t seed) {
  const std::size_t n = c.token_ids.size();
  std::vector<SparseVec> xs(n);
  for (std::size_t p = 0; p < n; ++p) xs[p] = SparseVec{{c.token_ids[p], 1.0}};

  std::vector<std::vector<double>> w;
  w.reserve(c.labels.size());
  HingeParams params{regularization, epochs, seed};
  std::vector<int> ys(n);
  for (std::size_t l = 0; l < c.labels.size(); ++l) {
    for (std::size_t p = 0; p < n; ++p)
      ys[p] = c.label_ids[p] == static_cast<int>(l) ? 1 : -1;
    // distinct stream per binary problem, still seed-reproducible
    params.seed = seed + 0x51ed2701u * static_cast<std::uint64_t>(l + 1);
    w.push_back(train_hinge(xs, ys, static_cast<int>(c.vocabulary.size()), params).weights);
  }
  return w;
}

}  // namespace

TaggerModel train_tagger(const std::vector<LabeledSequence>& sequences, TaggerKind kind,
                         double regularization, int epochs, std::uint64_t seed) {
  if (sequences.empty()) throw DataError("train_tagger: no training sequences");
  if (!(regularization > 0.0)) throw DataError("train_tagger: regularization must be > 0");

  Corpus corpus = build_corpus(sequences);
  TaggerModel model;
  model.kind = kind;
  model.labels = corpus.labels;
  model.vocabulary = corpus.vocabulary;
  model.weights = kind == TaggerKind::Maxent
                      ? train_maxent(corpus, regularization, epochs)
                      : train_svm_ovr(corpus, regularization, epochs, seed);
  return model;
}

TagPrediction predict_tags(const TaggerModel& model,
                           const std::vector<std::string>& keywords) {
  TagPrediction pred;
  std::set<std::string> distinct;
  for (const auto& kw : keywords) {
    const std::string& label = model.predict_label(kw);
    pred.labels.push_back(label);
    if (label != kNullLabel) distinct.insert(label);
  }
  pred.distinct_tags.assign(distinct.begin(), distinct.end());
  return pred;
}

TaggerMetrics tagger_metrics(const std::vector<LabeledSequence>& predicted,
                             const std::vector<LabeledSequence>& gold) {
  if (predicted.size() != gold.size())
    throw DataError("tagger_metrics: corpora not aligned");
  long tp = 0, fp = 0, fn = 0;
  for (std::size_t s = 0; s < predicted.size(); ++s) {
    const auto& p = predicted[s].labels;
    const auto& g = gold[s].labels;
    if (p.size() != g.size()) throw DataError("tagger_metrics: sequence lengths differ");
    for (std::size_t j = 0; j < p.size(); ++j) {
      const bool pred_tag = p[j] != kNullLabel;
      const bool gold_tag = g[j] != kNullLabel;
      if (pred_tag && p[j] == g[j])
        ++tp;
      else {
        if (pred_tag) ++fp;
        if (gold_tag) ++fn;
      }
    }
  }
  TaggerMetrics m;
  m.precision = tp + fp > 0 ? static_cast<double>(tp) / static_cast<double>(tp + fp) : 0.0;
  m.recall = tp + fn > 0 ? static_cast<double>(tp) / static_cast<double>(tp + fn) : 0.0;
  m.f_measure = m.precision + m.recall > 0.0
                    ? 2.0 * m.precision * m.recall / (m.precision + m.recall)
                    : 0.0;
  return m;
}

}  // namespace poirec
