#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "poirec/boosting.hpp"
#include "poirec/rng.hpp"
#include "test_oracles.hpp"

using namespace poirec;

namespace {

// forces k2 -> tag1, k3 -> tag2, everything else to NULL
AlignmentModel planted_two_tag_model() {
  AlignmentModel model;
  model.set_translation({{"t1", {{"k1", 0.01}, {"k2", 0.9}, {"k3", 0.01}, {"k4", 0.01}}},
                         {"t2", {{"k1", 0.01}, {"k2", 0.01}, {"k3", 0.9}, {"k4", 0.01}}},
                         {kNullTag, {{"k1", 0.5}, {"k2", 0.05}, {"k3", 0.05}, {"k4", 0.5}}}});
  model.set_position({{2, {1.0 / 3, 1.0 / 3, 1.0 / 3}}});
  return model;
}

}  // namespace

TEST_CASE("non-null mapped keywords form the boosted set") {
  VenueStore venues;
  venues.add({"v1", "", "", {}, {"k1", "k2", "k3", "k4"}, {}});
  UserRecord user{"u", {{"v1", 5, {"t1", "t2"}}}, std::nullopt};
  BoostedProfile p = boost_keywords(user, planted_two_tag_model(), venues,
                                    RatingScale::FiveStar);
  CHECK(p.keywords == std::set<std::string>{"k2", "k3"});
  CHECK(p.pos.at("k2") == doctest::Approx(0.5));
  CHECK(p.pos.at("k3") == doctest::Approx(0.5));
}

TEST_CASE("users without tags get an empty boosted profile") {
  VenueStore venues;
  venues.add({"v1", "", "", {}, {"k1"}, {}});
  UserRecord user{"u", {{"v1", 5, {}}}, std::nullopt};
  BoostedProfile p = boost_keywords(user, planted_two_tag_model(), venues,
                                    RatingScale::FiveStar);
  CHECK(p.empty());
  CHECK(p.pos.empty());
}

TEST_CASE("boosted frequencies count occurrences over the whole history") {
  VenueStore venues;
  venues.add({"v1", "", "", {}, {"k1", "k2", "k3", "k4"}, {}});
  venues.add({"v2", "", "", {}, {"k2", "k9"}, {}});
  UserRecord user{"u", {{"v1", 5, {"t1", "t2"}}, {"v2", 1, {}}}, std::nullopt};
  BoostedProfile p = boost_keywords(user, planted_two_tag_model(), venues,
                                    RatingScale::FiveStar);
  // k2 occurs once positively (v1) and once negatively (v2); k3 once
  // positively; three slots total
  CHECK(p.keywords == std::set<std::string>{"k2", "k3"});
  CHECK(p.pos.at("k2") == doctest::Approx(1.0 / 3.0));
  CHECK(p.neg.at("k2") == doctest::Approx(1.0 / 3.0));
  CHECK(p.pos.at("k3") == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("boosted set never exceeds the summed tag count") {
  Rng rng(41);
  static const std::vector<std::string> kws = {"k0", "k1", "k2", "k3", "k4", "k5", "k6", "k7"};
  static const std::vector<std::string> tags = {"t0", "t1", "t2"};
  for (int trial = 0; trial < 20; ++trial) {
    VenueStore venues;
    UserRecord user;
    user.id = "u";
    std::vector<AlignmentPair> pairs;
    std::size_t total_tags = 0;
    const int n = 2 + static_cast<int>(rng.uniform_int(4));
    for (int v = 0; v < n; ++v) {
      VenueRecord rec;
      rec.id = "v" + std::to_string(v);
      const int J = 2 + static_cast<int>(rng.uniform_int(5));
      std::set<std::string> seen;
      for (int j = 0; j < J; ++j) seen.insert(rng.pick(kws));
      rec.keywords.assign(seen.begin(), seen.end());
      venues.add(rec);

      CheckIn ci;
      ci.venue_id = rec.id;
      ci.rating = 1 + static_cast<int>(rng.uniform_int(5));
      const int I = 1 + static_cast<int>(rng.uniform_int(3));
      for (int i = 0; i < I; ++i) ci.tags.push_back(tags[static_cast<std::size_t>(i)]);
      total_tags += ci.tags.size();
      pairs.push_back({rec.keywords, ci.tags, user.id});
      user.history.push_back(std::move(ci));
    }
    const AlignmentModel model = em_train(pairs, 15, 1e-9).model;
    BoostedProfile p = boost_keywords(user, model, venues, RatingScale::FiveStar);
    CHECK(p.keywords.size() <= total_tags);

    BoostedProfile q = boost_keywords(user, model, venues, RatingScale::FiveStar);
    CHECK(p.keywords == q.keywords);  // deterministic
    CHECK(p.pos == q.pos);
  }
}

TEST_CASE("collinear data yields a single diagonal component") {
  std::vector<std::vector<double>> rows = {{0, 0}, {1, 1}, {2, 2}, {3, 3}};
  PcaResult pca = pca_reduce(rows, 2);
  REQUIRE(pca.status == PcaStatus::Ok);
  const double s = 1.0 / std::sqrt(2.0);
  CHECK(pca.components[0][0] == doctest::Approx(s).epsilon(1e-8));
  CHECK(pca.components[0][1] == doctest::Approx(s).epsilon(1e-8));
  const double total = pca.explained_variance[0] + pca.explained_variance[1];
  CHECK(pca.explained_variance[0] / total == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("explained variances match the closed-form 2x2 eigenvalues") {
  Rng rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<std::vector<double>> rows;
    const int n = 5 + static_cast<int>(rng.uniform_int(20));
    for (int i = 0; i < n; ++i)
      rows.push_back({rng.normal(), 0.5 * rng.normal() + 0.3 * rng.normal()});

    // covariance by direct computation
    double m0 = 0, m1 = 0;
    for (const auto& r : rows) {
      m0 += r[0];
      m1 += r[1];
    }
    m0 /= n;
    m1 /= n;
    double a = 0, b = 0, c = 0;
    for (const auto& r : rows) {
      a += (r[0] - m0) * (r[0] - m0);
      b += (r[0] - m0) * (r[1] - m1);
      c += (r[1] - m1) * (r[1] - m1);
    }
    a /= n - 1;
    b /= n - 1;
    c /= n - 1;
    const auto [hi, lo] = poirec::testing::eigen2x2(a, b, c);

    PcaResult pca = pca_reduce(rows, 2);
    REQUIRE(pca.status == PcaStatus::Ok);
    CHECK(pca.explained_variance[0] == doctest::Approx(hi).epsilon(1e-9));
    CHECK(pca.explained_variance[1] == doctest::Approx(lo).epsilon(1e-9));
  }
}

TEST_CASE("full-rank projection reconstructs the data") {
  Rng rng(6);
  std::vector<std::vector<double>> rows;
  for (int i = 0; i < 12; ++i)
    rows.push_back({rng.normal(), rng.normal(), rng.normal()});
  PcaResult pca = pca_reduce(rows, 3);
  REQUIRE(pca.status == PcaStatus::Ok);
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t d = 0; d < 3; ++d) {
      double x = pca.mean[d];
      for (std::size_t c = 0; c < 3; ++c) x += pca.projected[i][c] * pca.components[c][d];
      CHECK(std::abs(x - rows[i][d]) <= 1e-8);
    }
}

TEST_CASE("components are orthonormal and variances non-increasing") {
  Rng rng(8);
  std::vector<std::vector<double>> rows;
  for (int i = 0; i < 30; ++i) {
    std::vector<double> r;
    for (int d = 0; d < 5; ++d) r.push_back(rng.normal() * (d + 1));
    rows.push_back(std::move(r));
  }
  PcaResult pca = pca_reduce(rows, 5);
  REQUIRE(pca.status == PcaStatus::Ok);
  for (std::size_t c1 = 0; c1 < pca.components.size(); ++c1) {
    for (std::size_t c2 = c1; c2 < pca.components.size(); ++c2) {
      double dot = 0.0;
      for (std::size_t d = 0; d < 5; ++d) dot += pca.components[c1][d] * pca.components[c2][d];
      if (c1 == c2) CHECK(dot == doctest::Approx(1.0).epsilon(1e-8));
      else CHECK(std::abs(dot) <= 1e-8);
    }
  }
  for (std::size_t c = 1; c < pca.explained_variance.size(); ++c)
    CHECK(pca.explained_variance[c] <= pca.explained_variance[c - 1] + 1e-12);

  // total variance preserved by the full decomposition
  double total = 0.0;
  for (std::size_t d = 0; d < 5; ++d) {
    double mean = 0.0;
    for (const auto& r : rows) mean += r[d];
    mean /= rows.size();
    double ss = 0.0;
    for (const auto& r : rows) ss += (r[d] - mean) * (r[d] - mean);
    total += ss / (rows.size() - 1);
  }
  double sum = 0.0;
  for (double v : pca.explained_variance) sum += v;
  CHECK(sum == doctest::Approx(total).epsilon(1e-8));
}

TEST_CASE("identical rows are reported as degenerate") {
  std::vector<std::vector<double>> rows = {{1, 2, 3}, {1, 2, 3}, {1, 2, 3}};
  PcaResult pca = pca_reduce(rows, 2);
  CHECK(pca.status == PcaStatus::DegenerateZeroVariance);
  CHECK(pca.components.empty());
}

TEST_CASE("pca_reduce validates its preconditions") {
  CHECK_THROWS_AS(pca_reduce({{1.0, 2.0}}, 1), DataError);
  CHECK_THROWS_AS(pca_reduce({{1.0}, {2.0}}, 2), DataError);
  CHECK_THROWS_AS(pca_reduce({{1.0, 2.0}, {2.0}}, 1), DataError);
}

TEST_CASE("pca keyword profile reduces the dimensionality") {
  Rng rng(77);
  VenueStore venues;
  static const std::vector<std::string> kws = {"k0", "k1", "k2", "k3", "k4",
                                               "k5", "k6", "k7", "k8", "k9"};
  UserRecord user;
  user.id = "u";
  for (int v = 0; v < 8; ++v) {
    VenueRecord rec;
    rec.id = "v" + std::to_string(v);
    std::set<std::string> seen;
    for (int j = 0; j < 4; ++j) seen.insert(rng.pick(kws));
    rec.keywords.assign(seen.begin(), seen.end());
    venues.add(rec);
    user.history.push_back({rec.id, 1 + static_cast<int>(rng.uniform_int(5)), {}});
  }
  BoostedProfile p = pca_keyword_profile(user, venues, RatingScale::FiveStar);
  std::set<std::string> vocabulary;
  for (const auto& ci : user.history)
    for (const auto& kw : venues.at(ci.venue_id).keywords) vocabulary.insert(kw);
  CHECK(!p.keywords.empty());
  CHECK(p.keywords.size() < vocabulary.size());
}
