#include "poirec/scoring.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <set>

namespace poirec {

double frequency_score(const FrequencyMap& pos, const FrequencyMap& neg,
                       const std::vector<std::string>& items) {
  double score = 0.0;
  for (const auto& item : items) {
    auto p = pos.find(item);
    if (p != pos.end()) score += p->second;
    auto n = neg.find(item);
    if (n != neg.end()) score -= n->second;
  }
  return score;
}

std::vector<std::string> tokenize(const std::string& text) {
  std::vector<std::string> tokens;
  std::string current;
  for (unsigned char c : text) {
    if (std::isalnum(c)) {
      current.push_back(static_cast<char>(std::tolower(c)));
    } else if (!current.empty()) {
      if (current.size() >= 2) tokens.push_back(current);
      current.clear();
    }
  }
  if (current.size() >= 2) tokens.push_back(current);
  return tokens;
}

void TfidfVectorizer::fit(const std::vector<std::string>& corpus) {
  if (corpus.empty()) throw DataError("TfidfVectorizer: empty corpus");
  std::map<std::string, int> df;
  for (const auto& doc : corpus) {
    std::set<std::string> seen;
    for (const auto& tok : tokenize(doc)) seen.insert(tok);
    for (const auto& tok : seen) df[tok] += 1;
  }
  vocabulary_.clear();
  idf_.clear();
  const double n = static_cast<double>(corpus.size());
  int idx = 0;
  for (const auto& [tok, d] : df) {
    vocabulary_[tok] = idx++;
    idf_.push_back(std::log((1.0 + n) / (1.0 + static_cast<double>(d))) + 1.0);
  }
}

SparseVec TfidfVectorizer::transform(const std::string& text) const {
  const std::vector<std::string> tokens = tokenize(text);
  if (tokens.empty()) return {};

  std::map<int, double> counts;
  for (const auto& tok : tokens) {
    auto it = vocabulary_.find(tok);
    if (it != vocabulary_.end()) counts[it->second] += 1.0;
  }

  SparseVec x;
  x.reserve(counts.size());
  const double len = static_cast<double>(tokens.size());
  double norm2 = 0.0;
  for (const auto& [idx, c] : counts) {
    const double w = (c / len) * idf_[static_cast<std::size_t>(idx)];
    x.emplace_back(idx, w);
    norm2 += w * w;
  }
  if (norm2 > 0.0) {
    const double inv = 1.0 / std::sqrt(norm2);
    for (auto& [_, w] : x) w *= inv;
  }
  return x;
}

ReviewClassifier train_review_classifier(const UserRecord& user, const VenueStore& venues,
                                         RatingScale scale, const HingeParams& params) {
  std::vector<std::string> texts;
  std::vector<int> labels;
  for (const CheckIn& ci : user.history) {
    const Polarity user_pol = rating_polarity(ci.rating, scale);
    if (user_pol == Polarity::Neutral) continue;
    const VenueRecord& v = venues.at(ci.venue_id);
    for (const Review& r : v.reviews) {
      const Polarity review_pol = rating_polarity(r.rating, RatingScale::FiveStar);
      // keep only agreeing polarity: positive reviews of liked venues,
      // negative reviews of disliked venues
      if (review_pol != user_pol || review_pol == Polarity::Neutral) continue;
      texts.push_back(r.text);
      labels.push_back(review_pol == Polarity::Positive ? 1 : -1);
    }
  }

  ReviewClassifier classifier;
  const bool has_pos = std::find(labels.begin(), labels.end(), 1) != labels.end();
  const bool has_neg = std::find(labels.begin(), labels.end(), -1) != labels.end();
  if (!has_pos || !has_neg) return classifier;  // unavailable

  classifier.vectorizer.fit(texts);
  std::vector<SparseVec> xs;
  xs.reserve(texts.size());
  for (const auto& t : texts) xs.push_back(classifier.vectorizer.transform(t));
  classifier.model = train_hinge(xs, labels, classifier.vectorizer.dimension(), params);
  classifier.available = true;
  return classifier;
}

std::optional<double> review_score(const ReviewClassifier& classifier,
                                   const VenueRecord& venue, int max_reviews) {
  if (!classifier.available || venue.reviews.empty()) return std::nullopt;
  std::size_t limit = venue.reviews.size();
  if (max_reviews > 0) limit = std::min(limit, static_cast<std::size_t>(max_reviews));
  double sum = 0.0;
  for (std::size_t i = 0; i < limit; ++i)
    sum += classifier.model.decision(classifier.vectorizer.transform(venue.reviews[i].text));
  return sum / static_cast<double>(limit);
}

ModelRow model_row_from_name(const std::string& name) {
  if (name == "PK-Boosting") return ModelRow::PKBoosting;
  if (name == "UT-ML") return ModelRow::UTML;
  if (name == "UT-CRF") return ModelRow::UTCRF;
  if (name == "UT-SVM") return ModelRow::UTSVM;
  if (name == "PK-PCA") return ModelRow::PKPCA;
  if (name == "LinearCatRev") return ModelRow::LinearCatRev;
  throw DataError("unknown model row '" + name + "'");
}

std::string model_row_name(ModelRow row) {
  switch (row) {
    case ModelRow::PKBoosting: return "PK-Boosting";
    case ModelRow::UTML: return "UT-ML";
    case ModelRow::UTCRF: return "UT-CRF";
    case ModelRow::UTSVM: return "UT-SVM";
    case ModelRow::PKPCA: return "PK-PCA";
    case ModelRow::LinearCatRev: return "LinearCatRev";
  }
  throw DataError("unknown model row");
}

std::string fourth_score_name(ModelRow row) {
  switch (row) {
    case ModelRow::PKBoosting: return "s_boost";
    case ModelRow::UTML: return "s_ml";
    case ModelRow::UTCRF: return "s_crf";
    case ModelRow::UTSVM: return "s_svm";
    case ModelRow::PKPCA: return "s_pca";
    case ModelRow::LinearCatRev: return "";
  }
  throw DataError("unknown model row");
}

ScoreVector CandidateScorer::score(const VenueRecord& venue) const {
  ScoreVector sv;
  if (profiles) {
    sv.s_cat = frequency_score(profiles->pos_cat, profiles->neg_cat, venue.categories);
    sv.has_cat = true;
    sv.s_key = frequency_score(profiles->pos_key, profiles->neg_key, venue.keywords);
    sv.has_key = true;
  }

  if (review) {
    if (auto s = review_score(*review, venue, max_reviews)) {
      sv.s_rev = *s;
      sv.has_rev = true;
    }
  }

  switch (row) {
    case ModelRow::PKBoosting:
    case ModelRow::PKPCA:
      if (boosted && !boosted->empty()) {
        sv.s_fourth = frequency_score(boosted->pos, boosted->neg, venue.keywords);
        sv.has_fourth = true;
      } else {
        sv.s_fourth = sv.s_key;  // documented fallback
      }
      break;
    case ModelRow::UTML:
      if (alignment && profiles) {
        const auto tags = ml_decode_tags(*alignment, venue.keywords, theta_ml, i_max);
        sv.s_fourth = frequency_score(profiles->pos_tag, profiles->neg_tag, tags);
        sv.has_fourth = true;
      }
      break;
    case ModelRow::UTCRF:
    case ModelRow::UTSVM:
      if (tagger && profiles) {
        const auto pred = predict_tags(*tagger, venue.keywords);
        sv.s_fourth =
            frequency_score(profiles->pos_tag, profiles->neg_tag, pred.distinct_tags);
        sv.has_fourth = true;
      }
      break;
    case ModelRow::LinearCatRev:
      break;  // no fourth column
  }

  if (context_model && context_table && context) {
    sv.s_cxt = context_score(*context_model, *context_table, venue.categories, *context);
    sv.has_cxt = true;
  }
  return sv;
}

}  // namespace poirec
