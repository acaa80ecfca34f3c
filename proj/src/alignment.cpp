#include "poirec/alignment.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>

#include "poirec/domain.hpp"

namespace poirec {

double AlignmentModel::translation(const std::string& tag, const std::string& keyword) const {
  auto t = translation_.find(tag);
  if (t == translation_.end()) return kDecodeEpsilon;
  auto f = t->second.find(keyword);
  return f == t->second.end() ? kDecodeEpsilon : f->second;
}

double AlignmentModel::position_prior(int i, int length) const {
  auto it = position_.find(length);
  if (it == position_.end()) return 1.0 / static_cast<double>(length + 1);
  return it->second[static_cast<std::size_t>(i)];
}

double AlignmentModel::tag_prior(const std::string& tag) const {
  auto it = tag_priors_.find(tag);
  return it == tag_priors_.end() ? 0.0 : it->second;
}

void AlignmentModel::set_translation(std::map<std::string, std::map<std::string, double>> t) {
  translation_ = std::move(t);
  tag_vocab_.clear();
  for (const auto& [tag, row] : translation_)
    if (tag != kNullTag) tag_vocab_.insert(tag);
}

namespace {

void validate_pair(const AlignmentPair& pair) {
  if (pair.keywords.empty() || pair.tags.empty())
    throw DataError("alignment pair with empty keyword or tag sequence");
  for (const auto& f : pair.keywords)
    if (f.empty()) throw DataError("alignment pair contains an empty keyword");
  for (const auto& t : pair.tags)
    if (t.empty()) throw DataError("alignment pair contains an empty tag");
}

}  // namespace

AlignmentModel init_model(const std::vector<AlignmentPair>& pairs) {
  if (pairs.empty()) throw DataError("cannot initialize alignment model from zero pairs");

  std::map<std::string, std::set<std::string>> cooc;  // tag -> keywords seen with it
  std::map<std::string, double> tag_counts;
  std::map<int, double> len_tags, len_keywords;
  double tag_total = 0.0;

  for (const AlignmentPair& p : pairs) {
    validate_pair(p);
    for (const auto& f : p.keywords) cooc[kNullTag].insert(f);
    for (const auto& t : p.tags) {
      for (const auto& f : p.keywords) cooc[t].insert(f);
      tag_counts[t] += 1.0;
      tag_total += 1.0;
    }
    len_tags[static_cast<int>(p.tags.size())] += 1.0;
    len_keywords[static_cast<int>(p.keywords.size())] += 1.0;
  }

  std::map<std::string, std::map<std::string, double>> translation;
  for (const auto& [tag, fs] : cooc) {
    const double u = 1.0 / static_cast<double>(fs.size());
    auto& row = translation[tag];
    for (const auto& f : fs) row[f] = u;
  }

  std::map<int, std::vector<double>> position;
  for (const auto& [len, _] : len_tags)
    position[len].assign(static_cast<std::size_t>(len) + 1,
                         1.0 / static_cast<double>(len + 1));

  const double n_pairs = static_cast<double>(pairs.size());
  for (auto& [_, c] : tag_counts) c /= tag_total;
  for (auto& [_, c] : len_tags) c /= n_pairs;
  for (auto& [_, c] : len_keywords) c /= n_pairs;

  AlignmentModel model;
  model.set_translation(std::move(translation));
  model.set_position(std::move(position));
  model.set_tag_priors(std::move(tag_counts));
  model.set_length_priors(std::move(len_tags), std::move(len_keywords));
  return model;
}

std::vector<std::vector<double>> e_step_posteriors(const AlignmentModel& model,
                                                   const AlignmentPair& pair) {
  const int I = static_cast<int>(pair.tags.size());
  const int J = static_cast<int>(pair.keywords.size());
  std::vector<std::vector<double>> gamma(static_cast<std::size_t>(J));
  for (int j = 0; j < J; ++j) {
    auto& col = gamma[static_cast<std::size_t>(j)];
    col.assign(static_cast<std::size_t>(I) + 1, 0.0);
    double denom = 0.0;
    for (int i = 0; i <= I; ++i) {
      const std::string& tag = i == 0 ? kNullTag : pair.tags[static_cast<std::size_t>(i - 1)];
      const double v = model.position_prior(i, I) *
                       model.translation(tag, pair.keywords[static_cast<std::size_t>(j)]);
      col[static_cast<std::size_t>(i)] = v;
      denom += v;
    }
    assert(denom > 0.0);  // epsilon floor keeps every term positive
    for (auto& v : col) v /= denom;
  }
  return gamma;
}

double log_likelihood(const AlignmentModel& model, const std::vector<AlignmentPair>& pairs) {
  double total = 0.0;
  for (const AlignmentPair& p : pairs) {
    const int I = static_cast<int>(p.tags.size());
    for (const auto& f : p.keywords) {
      double inner = 0.0;
      for (int i = 0; i <= I; ++i) {
        const std::string& tag = i == 0 ? kNullTag : p.tags[static_cast<std::size_t>(i - 1)];
        inner += model.position_prior(i, I) * model.translation(tag, f);
      }
      total += std::log(inner);
    }
  }
  return total;
}

EmResult em_train(const std::vector<AlignmentPair>& pairs, int max_iters, double tol) {
  if (max_iters < 1) throw DataError("em_train requires max_iters >= 1");
  if (!(tol > 0.0)) throw DataError("em_train requires tol > 0");

  EmResult result;
  result.model = init_model(pairs);
  result.loglik_trace.push_back(log_likelihood(result.model, pairs));

  for (int iter = 0; iter < max_iters; ++iter) {
    std::map<std::string, std::map<std::string, double>> trans_counts;
    std::map<int, std::vector<double>> pos_counts;

    for (const AlignmentPair& p : pairs) {
      const int I = static_cast<int>(p.tags.size());
      auto gamma = e_step_posteriors(result.model, p);
      auto& pc = pos_counts[I];
      if (pc.empty()) pc.assign(static_cast<std::size_t>(I) + 1, 0.0);
      for (std::size_t j = 0; j < p.keywords.size(); ++j) {
        for (int i = 0; i <= I; ++i) {
          const double g = gamma[j][static_cast<std::size_t>(i)];
          const std::string& tag = i == 0 ? kNullTag : p.tags[static_cast<std::size_t>(i - 1)];
          trans_counts[tag][p.keywords[j]] += g;
          pc[static_cast<std::size_t>(i)] += g;
        }
      }
    }

    // M-step: renormalize expected counts
    for (auto& [tag, row] : trans_counts) {
      double z = 0.0;
      for (const auto& [_, c] : row) z += c;
      if (z > 0.0)
        for (auto& [_, c] : row) c /= z;
    }
    for (auto& [len, counts] : pos_counts) {
      double z = 0.0;
      for (double c : counts) z += c;
      if (z > 0.0)
        for (auto& c : counts) c /= z;
    }

    result.model.set_translation(std::move(trans_counts));
    result.model.set_position(std::move(pos_counts));

    const double f = log_likelihood(result.model, pairs);
    const double delta = f - result.loglik_trace.back();
    result.loglik_trace.push_back(f);
    if (std::abs(delta) < tol) break;
  }
  return result;
}

Mapping best_mapping(const AlignmentModel& model, const AlignmentPair& pair) {
  const int I = static_cast<int>(pair.tags.size());
  Mapping m;
  m.assignments.reserve(pair.keywords.size());
  for (const auto& f : pair.keywords) {
    int best_i = 0;
    double best = -1.0;
    for (int i = 0; i <= I; ++i) {
      const std::string& tag = i == 0 ? kNullTag : pair.tags[static_cast<std::size_t>(i - 1)];
      const double v = model.position_prior(i, I) * model.translation(tag, f);
      if (v > best) {
        best = v;
        best_i = i;
      }
    }
    m.assignments.push_back(best_i);
  }
  return m;
}

std::vector<std::string> ml_decode_tags(const AlignmentModel& model,
                                        const std::vector<std::string>& keywords,
                                        double theta_ml, int i_max) {
  if (!(theta_ml > 0.0 && theta_ml <= 1.0))
    throw DataError("ml_decode_tags requires theta_ml in (0, 1]");
  if (keywords.empty()) return {};

  std::vector<std::pair<double, std::string>> scored;
  for (const auto& tag : model.tag_vocabulary()) {
    double best_f = 0.0;
    for (const auto& f : keywords) best_f = std::max(best_f, model.translation(tag, f));
    if (best_f <= kDecodeEpsilon) continue;  // every keyword unseen for this tag
    scored.emplace_back(model.tag_prior(tag) * best_f, tag);
  }
  if (scored.empty()) return {};

  std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second < b.second;
  });

  const double cutoff = theta_ml * scored.front().first;
  std::vector<std::string> out;
  for (const auto& [s, tag] : scored) {
    if (s < cutoff || static_cast<int>(out.size()) >= i_max) break;
    out.push_back(tag);
  }
  return out;
}

}  // namespace poirec
