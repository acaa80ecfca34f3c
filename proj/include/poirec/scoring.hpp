#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "poirec/alignment.hpp"
#include "poirec/boosting.hpp"
#include "poirec/context.hpp"
#include "poirec/domain.hpp"
#include "poirec/linear.hpp"
#include "poirec/tagging.hpp"

namespace poirec {

// sum over items of pos(x) - neg(x); items absent from both maps add 0
double frequency_score(const FrequencyMap& pos, const FrequencyMap& neg,
                       const std::vector<std::string>& items);

// lowercase, split on non-alphanumerics, drop tokens shorter than 2
std::vector<std::string> tokenize(const std::string& text);

// tf = count / doc length, idf = ln((1+N)/(1+df)) + 1, vectors L2-normalized
class TfidfVectorizer {
 public:
  void fit(const std::vector<std::string>& corpus);
  SparseVec transform(const std::string& text) const;
  int dimension() const { return static_cast<int>(vocabulary_.size()); }
  const std::map<std::string, int>& vocabulary() const { return vocabulary_; }
  const std::vector<double>& idf() const { return idf_; }

  void set_state(std::map<std::string, int> vocab, std::vector<double> idf) {
    vocabulary_ = std::move(vocab);
    idf_ = std::move(idf);
  }

 private:
  std::map<std::string, int> vocabulary_;
  std::vector<double> idf_;
};

// Per-user opinion model over review text. Positives are positive reviews
// of liked venues, negatives are negative reviews of disliked venues;
// other review/venue polarity combinations are ignored. One-sided data
// leaves the classifier unavailable.
struct ReviewClassifier {
  bool available = false;
  TfidfVectorizer vectorizer;
  LinearModel model;
};

ReviewClassifier train_review_classifier(const UserRecord& user, const VenueStore& venues,
                                         RatingScale scale, const HingeParams& params);

// Mean decision value over the venue's reviews (first max_reviews of them,
// 0 meaning all). nullopt when the model is unavailable or no reviews exist.
std::optional<double> review_score(const ReviewClassifier& classifier,
                                   const VenueRecord& venue, int max_reviews = 0);

enum class ModelRow { PKBoosting, UTML, UTCRF, UTSVM, PKPCA, LinearCatRev };

ModelRow model_row_from_name(const std::string& name);
std::string model_row_name(ModelRow row);
// Fourth-column name for the row ("s_boost", "s_ml", ...), empty for LinearCatRev.
std::string fourth_score_name(ModelRow row);

struct ScoreVector {
  double s_cat = 0.0, s_rev = 0.0, s_key = 0.0, s_fourth = 0.0, s_cxt = 0.0;
  bool has_cat = false, has_rev = false, has_key = false, has_fourth = false,
       has_cxt = false;
};

// Everything needed to score one user's candidates. Null members mean the
// corresponding score is not computable and stays flagged at 0 (the fourth
// score of PK-Boosting/PK-PCA falls back to the s_key value when the
// reduced profile is empty).
struct CandidateScorer {
  ModelRow row = ModelRow::PKBoosting;
  const UserProfiles* profiles = nullptr;
  const BoostedProfile* boosted = nullptr;        // PK-Boosting / PK-PCA rows
  const AlignmentModel* alignment = nullptr;      // UT-ML row
  const TaggerModel* tagger = nullptr;            // UT-CRF / UT-SVM rows
  const ReviewClassifier* review = nullptr;
  const AppropriatenessModel* context_model = nullptr;
  const ContextFeatureTable* context_table = nullptr;
  const ContextSpec* context = nullptr;
  double theta_ml = 0.5;
  int i_max = 5;
  int max_reviews = 0;

  ScoreVector score(const VenueRecord& venue) const;
};

}  // namespace poirec
