#include "poirec/boosting.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace poirec {

namespace {

// Restrict Definition-3 counting to a fixed keyword set: occurrences of kept
// keywords in positive/negative venues over occurrences across the whole
// history.
void restricted_profile(const UserRecord& user, const VenueStore& venues,
                        RatingScale scale, const std::set<std::string>& kept,
                        FrequencyMap& pos, FrequencyMap& neg) {
  std::map<std::string, double> pos_counts, neg_counts;
  double total = 0.0;
  for (const CheckIn& ci : user.history) {
    const VenueRecord& v = venues.at(ci.venue_id);
    const Polarity pol = rating_polarity(ci.rating, scale);
    for (const auto& kw : v.keywords) {
      if (!kept.count(kw)) continue;
      total += 1.0;
      if (pol == Polarity::Positive)
        pos_counts[kw] += 1.0;
      else if (pol == Polarity::Negative)
        neg_counts[kw] += 1.0;
    }
  }
  if (total <= 0.0) return;
  for (const auto& [k, n] : pos_counts) pos[k] = n / total;
  for (const auto& [k, n] : neg_counts) neg[k] = n / total;
}

}  // namespace

BoostedProfile boost_keywords(const UserRecord& user, const AlignmentModel& model,
                              const VenueStore& venues, RatingScale scale) {
  BoostedProfile profile;
  profile.user_id = user.id;

  for (const CheckIn& ci : user.history) {
    if (ci.tags.empty()) continue;
    const VenueRecord& v = venues.at(ci.venue_id);
    if (v.keywords.empty()) continue;

    AlignmentPair pair{v.keywords, ci.tags, user.id};
    const Mapping m = best_mapping(model, pair);

    // One keyword per tag position: among positions assigned to tag i, keep
    // the one with the highest translation probability (ties -> smaller j).
    const int n_tags = static_cast<int>(ci.tags.size());
    for (int i = 1; i <= n_tags; ++i) {
      int best_j = -1;
      double best_p = -1.0;
      for (std::size_t j = 0; j < m.assignments.size(); ++j) {
        if (m.assignments[j] != i) continue;
        const double p =
            model.translation(ci.tags[static_cast<std::size_t>(i - 1)], v.keywords[j]);
        if (p > best_p) {
          best_p = p;
          best_j = static_cast<int>(j);
        }
      }
      if (best_j >= 0) profile.keywords.insert(v.keywords[static_cast<std::size_t>(best_j)]);
    }
  }

  if (!profile.keywords.empty())
    restricted_profile(user, venues, scale, profile.keywords, profile.pos, profile.neg);
  return profile;
}

namespace {

constexpr double kJacobiTol = 1e-10;
constexpr int kJacobiSweeps = 100;

// Cyclic Jacobi eigendecomposition of a symmetric matrix. Eigenvalues land
// on the diagonal of a, eigenvectors in the columns of v.
void jacobi_eigen(std::vector<std::vector<double>>& a, std::vector<std::vector<double>>& v) {
  const std::size_t n = a.size();
  v.assign(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) v[i][i] = 1.0;
  if (n < 2) return;

  double scale = 0.0;
  for (std::size_t i = 0; i < n; ++i) scale = std::max(scale, std::abs(a[i][i]));
  scale = std::max(scale, 1.0);

  for (int sweep = 0; sweep < kJacobiSweeps; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p + 1 < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += a[p][q] * a[p][q];
    if (std::sqrt(off) < kJacobiTol * scale) break;

    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        if (std::abs(a[p][q]) < kJacobiTol * kJacobiTol * scale) continue;
        const double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;

        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a[k][p], akq = a[k][q];
          a[k][p] = c * akp - s * akq;
          a[k][q] = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a[p][k], aqk = a[q][k];
          a[p][k] = c * apk - s * aqk;
          a[q][k] = s * apk + c * aqk;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v[k][p], vkq = v[k][q];
          v[k][p] = c * vkp - s * vkq;
          v[k][q] = s * vkp + c * vkq;
        }
      }
    }
  }
}

}  // namespace

PcaResult pca_reduce(const std::vector<std::vector<double>>& rows, int k) {
  if (rows.size() < 2) throw DataError("pca_reduce: need at least 2 rows");
  const std::size_t n = rows.size();
  const std::size_t dim = rows.front().size();
  for (const auto& r : rows)
    if (r.size() != dim) throw DataError("pca_reduce: ragged input rows");
  if (k < 0 || static_cast<std::size_t>(k) > std::min(n, dim))
    throw DataError("pca_reduce: k out of range");

  PcaResult result;
  result.mean.assign(dim, 0.0);
  for (const auto& r : rows)
    for (std::size_t c = 0; c < dim; ++c) result.mean[c] += r[c];
  for (auto& m : result.mean) m /= static_cast<double>(n);

  std::vector<std::vector<double>> centered(n, std::vector<double>(dim));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t c = 0; c < dim; ++c) centered[i][c] = rows[i][c] - result.mean[c];

  std::vector<std::vector<double>> cov(dim, std::vector<double>(dim, 0.0));
  for (const auto& r : centered)
    for (std::size_t c1 = 0; c1 < dim; ++c1)
      for (std::size_t c2 = c1; c2 < dim; ++c2) cov[c1][c2] += r[c1] * r[c2];
  const double denom = static_cast<double>(n - 1);
  for (std::size_t c1 = 0; c1 < dim; ++c1)
    for (std::size_t c2 = c1; c2 < dim; ++c2) {
      cov[c1][c2] /= denom;
      cov[c2][c1] = cov[c1][c2];
    }

  double total_var = 0.0;
  for (std::size_t c = 0; c < dim; ++c) total_var += cov[c][c];
  if (total_var <= 1e-15) {
    result.status = PcaStatus::DegenerateZeroVariance;
    result.projected.assign(n, {});
    return result;
  }

  std::vector<std::vector<double>> vecs;
  jacobi_eigen(cov, vecs);

  std::vector<std::pair<double, std::size_t>> eig(dim);
  for (std::size_t c = 0; c < dim; ++c) eig[c] = {cov[c][c], c};
  std::sort(eig.begin(), eig.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second < b.second;
  });

  for (int c = 0; c < k; ++c) {
    const std::size_t col = eig[static_cast<std::size_t>(c)].second;
    std::vector<double> comp(dim);
    for (std::size_t r = 0; r < dim; ++r) comp[r] = vecs[r][col];
    // fix sign: make the largest-magnitude entry positive
    std::size_t mx = 0;
    for (std::size_t r = 1; r < dim; ++r)
      if (std::abs(comp[r]) > std::abs(comp[mx])) mx = r;
    if (comp[mx] < 0.0)
      for (auto& x : comp) x = -x;
    result.components.push_back(std::move(comp));
    result.explained_variance.push_back(std::max(0.0, eig[static_cast<std::size_t>(c)].first));
  }

  result.projected.assign(n, std::vector<double>(static_cast<std::size_t>(k), 0.0));
  for (std::size_t i = 0; i < n; ++i)
    for (int c = 0; c < k; ++c) {
      double dot = 0.0;
      for (std::size_t r = 0; r < dim; ++r)
        dot += centered[i][r] * result.components[static_cast<std::size_t>(c)][r];
      result.projected[i][static_cast<std::size_t>(c)] = dot;
    }
  return result;
}

BoostedProfile pca_keyword_profile(const UserRecord& user, const VenueStore& venues,
                                   RatingScale scale) {
  BoostedProfile profile;
  profile.user_id = user.id;

  std::set<std::string> vocab;
  for (const CheckIn& ci : user.history)
    for (const auto& kw : venues.at(ci.venue_id).keywords) vocab.insert(kw);
  if (user.history.size() < 2 || vocab.empty()) return profile;

  std::vector<std::string> keywords(vocab.begin(), vocab.end());
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < keywords.size(); ++i) index[keywords[i]] = i;

  std::vector<std::vector<double>> rows(user.history.size(),
                                        std::vector<double>(keywords.size(), 0.0));
  for (std::size_t i = 0; i < user.history.size(); ++i)
    for (const auto& kw : venues.at(user.history[i].venue_id).keywords)
      rows[i][index.at(kw)] = 1.0;

  const int k_max = static_cast<int>(std::min(rows.size(), keywords.size()));
  PcaResult pca = pca_reduce(rows, k_max);
  if (pca.status == PcaStatus::DegenerateZeroVariance) return profile;

  double total = 0.0;
  for (double v : pca.explained_variance) total += v;
  int k = 0;
  double seen = 0.0;
  while (k < k_max && seen < 0.90 * total) {
    seen += pca.explained_variance[static_cast<std::size_t>(k)];
    ++k;
  }
  if (k == 0) return profile;

  // keyword weight in the rank-k covariance reconstruction diagonal
  std::vector<std::pair<double, std::string>> weighted;
  weighted.reserve(keywords.size());
  for (std::size_t f = 0; f < keywords.size(); ++f) {
    double w = 0.0;
    for (int c = 0; c < k; ++c) {
      const double loading = pca.components[static_cast<std::size_t>(c)][f];
      w += pca.explained_variance[static_cast<std::size_t>(c)] * loading * loading;
    }
    weighted.emplace_back(w, keywords[f]);
  }
  std::sort(weighted.begin(), weighted.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second < b.second;
  });
  for (int i = 0; i < k && i < static_cast<int>(weighted.size()); ++i)
    profile.keywords.insert(weighted[static_cast<std::size_t>(i)].second);

  if (!profile.keywords.empty())
    restricted_profile(user, venues, scale, profile.keywords, profile.pos, profile.neg);
  return profile;
}

}  // namespace poirec
