#include "poirec/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "poirec/rng.hpp"

namespace poirec {

void Judgments::add(const std::string& user_id, const std::string& venue_id, int relevance) {
  switch (scale_) {
    case JudgmentScale::Binary:
      if (relevance != 0 && relevance != 1)
        throw DataError("binary judgment must be 0 or 1, got " + std::to_string(relevance));
      break;
    case JudgmentScale::Graded:
      if (relevance < -2 || relevance > 2)
        throw DataError("graded judgment must be in -2..+2, got " + std::to_string(relevance));
      break;
  }
  by_user_[user_id][venue_id] = relevance;
}

int Judgments::relevance(const std::string& user_id, const std::string& venue_id) const {
  auto u = by_user_.find(user_id);
  if (u == by_user_.end()) return scale_ == JudgmentScale::Binary ? 0 : -2;
  auto v = u->second.find(venue_id);
  return v == u->second.end() ? (scale_ == JudgmentScale::Binary ? 0 : -2) : v->second;
}

bool Judgments::is_relevant(const std::string& user_id, const std::string& venue_id) const {
  return relevance(user_id, venue_id) >= 1;
}

double Judgments::gain_from_relevance(int relevance) const {
  const double r = scale_ == JudgmentScale::Graded ? static_cast<double>(relevance + 2)
                                                   : static_cast<double>(relevance);
  return r;
}

double Judgments::gain(const std::string& user_id, const std::string& venue_id) const {
  return gain_from_relevance(relevance(user_id, venue_id));
}

const std::map<std::string, int>* Judgments::for_user(const std::string& user_id) const {
  auto u = by_user_.find(user_id);
  return u == by_user_.end() ? nullptr : &u->second;
}

double precision_at_k(const RankedList& ranked, const Judgments& judgments,
                      const std::string& user_id, int k) {
  if (k < 1) throw DataError("precision_at_k requires k >= 1");
  int hits = 0;
  for (std::size_t i = 0; i < ranked.size() && i < static_cast<std::size_t>(k); ++i)
    if (judgments.is_relevant(user_id, ranked[i].venue_id)) ++hits;
  return static_cast<double>(hits) / static_cast<double>(k);
}

double ndcg_at_k(const RankedList& ranked, const Judgments& judgments,
                 const std::string& user_id, int k) {
  if (k < 1) throw DataError("ndcg_at_k requires k >= 1");

  double dcg = 0.0;
  for (std::size_t i = 0; i < ranked.size() && i < static_cast<std::size_t>(k); ++i) {
    const double r = judgments.gain(user_id, ranked[i].venue_id);
    dcg += (std::pow(2.0, r) - 1.0) / std::log2(2.0 + static_cast<double>(i));
  }

  const auto* rels = judgments.for_user(user_id);
  if (!rels) return 0.0;
  std::vector<double> ideal;
  ideal.reserve(rels->size());
  for (const auto& [_, rel] : *rels) ideal.push_back(judgments.gain_from_relevance(rel));
  std::sort(ideal.begin(), ideal.end(), std::greater<>());

  double idcg = 0.0;
  for (std::size_t i = 0; i < ideal.size() && i < static_cast<std::size_t>(k); ++i)
    idcg += (std::pow(2.0, ideal[i]) - 1.0) / std::log2(2.0 + static_cast<double>(i));
  return idcg > 0.0 ? dcg / idcg : 0.0;
}

double mrr(const std::map<std::string, RankedList>& runs, const Judgments& judgments) {
  if (runs.empty()) throw DataError("mrr requires at least one user");
  double sum = 0.0;
  for (const auto& [user_id, ranked] : runs) {
    for (std::size_t i = 0; i < ranked.size(); ++i) {
      if (judgments.is_relevant(user_id, ranked[i].venue_id)) {
        sum += 1.0 / static_cast<double>(i + 1);
        break;
      }
    }
  }
  return sum / static_cast<double>(runs.size());
}

std::vector<std::vector<std::string>> kfold_split(std::vector<std::string> user_ids, int k,
                                                  std::uint64_t seed) {
  if (k < 1 || static_cast<std::size_t>(k) > user_ids.size())
    throw DataError("kfold_split requires 1 <= k <= |users|");
  std::sort(user_ids.begin(), user_ids.end());
  Rng rng(seed);
  rng.shuffle(user_ids);
  std::vector<std::vector<std::string>> folds(static_cast<std::size_t>(k));
  for (std::size_t i = 0; i < user_ids.size(); ++i)
    folds[i % static_cast<std::size_t>(k)].push_back(std::move(user_ids[i]));
  return folds;
}

namespace {

// Continued fraction for the incomplete beta function (Lentz's method).
double betacf(double a, double b, double x) {
  constexpr int kMaxIter = 300;
  constexpr double kEps = 1e-14;
  constexpr double kTiny = 1e-300;

  const double qab = a + b, qap = a + 1.0, qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    const int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kEps) break;
  }
  return h;
}

}  // namespace

double regularized_incomplete_beta(double a, double b, double x) {
  if (x < 0.0 || x > 1.0) throw DataError("incomplete beta requires x in [0, 1]");
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;
  const double ln_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                          a * std::log(x) + b * std::log(1.0 - x);
  const double front = std::exp(ln_front);
  if (x < (a + 1.0) / (a + b + 2.0)) return front * betacf(a, b, x) / a;
  return 1.0 - front * betacf(b, a, 1.0 - x) / b;
}

TTestResult paired_ttest(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) throw DataError("paired_ttest: sample sizes differ");
  if (a.size() < 2) throw DataError("paired_ttest: need at least 2 pairs");

  const std::size_t n = a.size();
  double mean = 0.0;
  for (std::size_t i = 0; i < n; ++i) mean += a[i] - b[i];
  mean /= static_cast<double>(n);

  double ss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = a[i] - b[i] - mean;
    ss += d * d;
  }
  const double var = ss / static_cast<double>(n - 1);

  TTestResult result;
  if (var <= 0.0) {
    if (mean == 0.0) return {0.0, 1.0};  // all differences zero
    result.t = mean > 0.0 ? std::numeric_limits<double>::infinity()
                          : -std::numeric_limits<double>::infinity();
    result.p_two_tailed = 0.0;
    return result;
  }

  const double df = static_cast<double>(n - 1);
  result.t = mean / std::sqrt(var / static_cast<double>(n));
  result.p_two_tailed =
      regularized_incomplete_beta(df / 2.0, 0.5, df / (df + result.t * result.t));
  return result;
}

}  // namespace poirec
