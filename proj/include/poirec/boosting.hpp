#pragma once

#include <set>
#include <string>
#include <vector>

#include "poirec/alignment.hpp"
#include "poirec/domain.hpp"

namespace poirec {

// Keywords kept by personalized boosting: the best-aligned keyword for each
// non-NULL tag of each tagged check-in, with pos/neg normalized frequencies
// over the full history restricted to that keyword set.
struct BoostedProfile {
  std::string user_id;
  std::set<std::string> keywords;  // f-hat
  FrequencyMap pos, neg;

  bool empty() const { return keywords.empty(); }
};

BoostedProfile boost_keywords(const UserRecord& user, const AlignmentModel& model,
                              const VenueStore& venues, RatingScale scale);

enum class PcaStatus { Ok, DegenerateZeroVariance };

struct PcaResult {
  PcaStatus status = PcaStatus::Ok;
  std::vector<std::vector<double>> components;  // k rows of length dim, orthonormal
  std::vector<double> explained_variance;       // non-increasing, size k
  std::vector<std::vector<double>> projected;   // centered rows times components
  std::vector<double> mean;                     // column means
};

// Covariance PCA via cyclic Jacobi eigendecomposition (tolerance 1e-10).
// Requires at least 2 rows and k <= min(rows, dim). All-identical rows give
// zero components with a degenerate status instead of an error.
PcaResult pca_reduce(const std::vector<std::vector<double>>& rows, int k);

// PCA counterpart of keyword boosting: per-venue keyword indicator rows,
// components kept up to >= 90% explained variance, keywords ranked by their
// weight in the truncated-covariance diagonal, and the top-k of them turned
// into a restricted frequency profile. Empty profile when the history is
// too small or carries no variance (callers fall back to the keyword score).
BoostedProfile pca_keyword_profile(const UserRecord& user, const VenueStore& venues,
                                   RatingScale scale);

}  // namespace poirec
