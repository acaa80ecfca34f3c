#pragma once

#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace poirec {

// One training sample: a venue's keyword sequence paired with the tag
// sequence the user attached to that venue. Position 0 of the tag side is
// the implicit NULL tag; it is not stored here.
struct AlignmentPair {
  std::vector<std::string> keywords;  // f^J, J >= 1
  std::vector<std::string> tags;      // t^I, I >= 1
  std::string user_id;
};

// Latent assignment m^J of each keyword position to a tag position,
// 0 meaning NULL (unmapped).
struct Mapping {
  std::vector<int> assignments;
};

inline constexpr const char* kNullTag = "<null>";
inline constexpr double kDecodeEpsilon = 1e-6;  // smoothing for unseen keywords

// Keyword-to-tag translation model: p(f|t) tables (NULL included),
// position priors p(i|I), plus empirical tag and length priors carried
// for decoding. Learned per user by EM.
class AlignmentModel {
 public:
  // p(f|t); unseen (t,f) combinations fall back to the epsilon floor
  double translation(const std::string& tag, const std::string& keyword) const;
  // p(i|I) for i in 0..I; uniform fallback for lengths never seen in training
  double position_prior(int i, int length) const;
  double tag_prior(const std::string& tag) const;  // empirical p(t), 0 if unseen

  const std::set<std::string>& tag_vocabulary() const { return tag_vocab_; }
  const std::map<std::string, std::map<std::string, double>>& translation_table() const {
    return translation_;
  }
  const std::map<int, std::vector<double>>& position_table() const { return position_; }
  const std::map<std::string, double>& tag_prior_table() const { return tag_priors_; }
  const std::map<int, double>& tag_length_prior() const { return p_len_tags_; }
  const std::map<int, double>& keyword_length_prior() const { return p_len_keywords_; }

  void set_translation(std::map<std::string, std::map<std::string, double>> t);
  void set_position(std::map<int, std::vector<double>> p) { position_ = std::move(p); }
  void set_tag_priors(std::map<std::string, double> p) { tag_priors_ = std::move(p); }
  void set_length_priors(std::map<int, double> p_i, std::map<int, double> p_j) {
    p_len_tags_ = std::move(p_i);
    p_len_keywords_ = std::move(p_j);
  }

 private:
  std::map<std::string, std::map<std::string, double>> translation_;  // tag -> f -> p
  std::map<int, std::vector<double>> position_;                       // I -> p(0..I)
  std::map<std::string, double> tag_priors_;
  std::map<int, double> p_len_tags_, p_len_keywords_;
  std::set<std::string> tag_vocab_;  // without NULL
};

// Uniform starting point: p(f|t) uniform over the keywords co-occurring
// with t (NULL co-occurs with everything), p(i|I) uniform over 0..I,
// priors from empirical counts. Throws DataError on an empty pair list.
AlignmentModel init_model(const std::vector<AlignmentPair>& pairs);

// gamma[j][i] = p(i|I) p(f_j|t_i) / sum_i' p(i'|I) p(f_j|t_i'), i in 0..I.
// Each gamma[j] sums to 1.
std::vector<std::vector<double>> e_step_posteriors(const AlignmentModel& model,
                                                   const AlignmentPair& pair);

// Objective without the constant p(I), p(J) factors:
// sum_n sum_j log sum_{i=0..I} p(i|I) p(f_j|t_i).
double log_likelihood(const AlignmentModel& model,
                      const std::vector<AlignmentPair>& pairs);

struct EmResult {
  AlignmentModel model;
  std::vector<double> loglik_trace;  // value after init, then after each M-step
};

EmResult em_train(const std::vector<AlignmentPair>& pairs, int max_iters, double tol);

// Per-position argmax of p(i|I) p(f_j|t_i); ties break toward smaller i.
Mapping best_mapping(const AlignmentModel& model, const AlignmentPair& pair);

// Maximum-likelihood tag set for a new keyword sequence. Each non-NULL tag
// scores s(t) = p(t) max_j p(f_j|t); tags whose best translation sits at
// the smoothing floor are dropped, the rest must reach theta_ml times the
// top score, and at most i_max survive (score desc, then tag asc).
std::vector<std::string> ml_decode_tags(const AlignmentModel& model,
                                        const std::vector<std::string>& keywords,
                                        double theta_ml, int i_max);

}  // namespace poirec
