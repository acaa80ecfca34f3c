#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "poirec/ranking.hpp"

namespace poirec {

enum class JudgmentScale { Binary, Graded };  // 0/1 vs -2..+2

// Per-user relevance judgments with one scale per dataset. Unjudged pairs
// read as not relevant.
class Judgments {
 public:
  explicit Judgments(JudgmentScale scale = JudgmentScale::Binary) : scale_(scale) {}

  void add(const std::string& user_id, const std::string& venue_id, int relevance);
  int relevance(const std::string& user_id, const std::string& venue_id) const;
  bool is_relevant(const std::string& user_id, const std::string& venue_id) const;
  // gain used by nDCG: binary as-is, graded shifted by +2
  double gain(const std::string& user_id, const std::string& venue_id) const;
  double gain_from_relevance(int relevance) const;

  JudgmentScale scale() const { return scale_; }
  const std::map<std::string, std::map<std::string, int>>& by_user() const { return by_user_; }
  const std::map<std::string, int>* for_user(const std::string& user_id) const;

 private:
  JudgmentScale scale_;
  std::map<std::string, std::map<std::string, int>> by_user_;
};

// #hits in the top k over k; lists shorter than k count the gap as misses
double precision_at_k(const RankedList& ranked, const Judgments& judgments,
                      const std::string& user_id, int k);

// DCG with gains (2^r - 1)/log2(1+i), normalized by the ideal ordering of
// all the user's judged venues; 0 when no positive gain exists
double ndcg_at_k(const RankedList& ranked, const Judgments& judgments,
                 const std::string& user_id, int k);

// mean over users of 1/rank of the first relevant item; no hit counts 0
double mrr(const std::map<std::string, RankedList>& runs, const Judgments& judgments);

// users partitioned into k seed-deterministic folds, sizes differing by <= 1
std::vector<std::vector<std::string>> kfold_split(std::vector<std::string> user_ids, int k,
                                                  std::uint64_t seed);

struct TTestResult {
  double t = 0.0;
  double p_two_tailed = 1.0;
};

TTestResult paired_ttest(const std::vector<double>& a, const std::vector<double>& b);

// Regularized incomplete beta I_x(a, b), continued-fraction evaluation.
// Exposed for tests; paired_ttest builds its p-value on it.
double regularized_incomplete_beta(double a, double b, double x);

}  // namespace poirec
