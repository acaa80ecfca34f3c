#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "poirec/alignment.hpp"
#include "poirec/domain.hpp"

namespace poirec {

inline constexpr const char* kNullLabel = "null";

// Keyword sequence with one label per position ("null" for unmapped).
struct LabeledSequence {
  std::vector<std::string> tokens;
  std::vector<std::string> labels;
};

enum class TaggerKind { Maxent, LinearSvmOvr };

// Zero-order tagger: per-position scores from the token identity alone.
// Maxent stores multinomial logistic weights, the SVM variant one-vs-rest
// hinge margins; both share the layout [label][token feature ... bias].
class TaggerModel {
 public:
  TaggerKind kind = TaggerKind::Maxent;
  std::vector<std::string> labels;            // sorted, includes "null"
  std::map<std::string, int> vocabulary;      // token -> feature index
  std::vector<std::vector<double>> weights;   // per label, dim = |vocab| + 1

  // Per-label scores for one token; unseen tokens see only the bias.
  std::vector<double> scores(const std::string& token) const;
  // Softmax over scores (meaningful for maxent; defined for both kinds).
  std::vector<double> posteriors(const std::string& token) const;
  const std::string& predict_label(const std::string& token) const;
};

// Annotate each tagged check-in's keywords with the best-mapping tag
// (or "null"), producing tagger training data.
std::vector<LabeledSequence> derive_labeled_sequences(const UserRecord& user,
                                                      const AlignmentModel& model,
                                                      const VenueStore& venues);

TaggerModel train_tagger(const std::vector<LabeledSequence>& sequences, TaggerKind kind,
                         double regularization, int epochs, std::uint64_t seed);

struct TagPrediction {
  std::vector<std::string> labels;          // per position
  std::vector<std::string> distinct_tags;   // non-null, sorted, deduplicated
};

TagPrediction predict_tags(const TaggerModel& model,
                           const std::vector<std::string>& keywords);

struct TaggerMetrics {
  double precision = 0.0;
  double recall = 0.0;
  double f_measure = 0.0;
};

// Token-level precision/recall/F over non-null predictions.
TaggerMetrics tagger_metrics(const std::vector<LabeledSequence>& predicted,
                             const std::vector<LabeledSequence>& gold);

}  // namespace poirec
