#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>

#include "poirec/evaluation.hpp"

using namespace poirec;

namespace {

Judgments binary_judgments() {
  Judgments j(JudgmentScale::Binary);
  j.add("u", "v1", 1);
  j.add("u", "v2", 0);
  j.add("u", "v3", 1);
  j.add("u", "v4", 0);
  j.add("u", "v5", 0);
  return j;
}

RankedList ids(const std::vector<std::string>& venue_ids) {
  RankedList list;
  double score = static_cast<double>(venue_ids.size());
  for (const auto& id : venue_ids) list.push_back({id, score--});
  return list;
}

}  // namespace

TEST_CASE("precision counts hits over k") {
  Judgments j = binary_judgments();
  CHECK(precision_at_k(ids({"v1", "v2", "v3", "v4", "v5"}), j, "u", 5) ==
        doctest::Approx(0.4));
  Judgments all(JudgmentScale::Binary);
  for (const auto* v : {"v1", "v2", "v3", "v4", "v5"}) all.add("u", v, 1);
  CHECK(precision_at_k(ids({"v1", "v2", "v3", "v4", "v5"}), all, "u", 5) ==
        doctest::Approx(1.0));
}

TEST_CASE("short lists are padded as misses") {
  Judgments j = binary_judgments();
  CHECK(precision_at_k(ids({"v1", "v2", "v4"}), j, "u", 5) == doctest::Approx(0.2));
}

TEST_CASE("ndcg reproduces the worked graded example") {
  // graded relevances 0, -2, -1 shift to gains 2, 0, 1; ideal is 2, 1, 0
  Judgments j(JudgmentScale::Graded);
  j.add("u", "v1", 0);
  j.add("u", "v2", -2);
  j.add("u", "v3", -1);

  const double dcg = 3.0 / std::log2(2.0) + 0.0 / std::log2(3.0) + 1.0 / std::log2(4.0);
  const double idcg = 3.0 / std::log2(2.0) + 1.0 / std::log2(3.0) + 0.0 / std::log2(4.0);
  const double expected = dcg / idcg;
  CHECK(expected == doctest::Approx(0.9639404333166532).epsilon(1e-10));

  CHECK(ndcg_at_k(ids({"v1", "v2", "v3"}), j, "u", 5) ==
        doctest::Approx(expected).epsilon(1e-9));

  // ideal ordering scores exactly one
  CHECK(ndcg_at_k(ids({"v1", "v3", "v2"}), j, "u", 5) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("ndcg of a user with no positive gain is zero") {
  Judgments j(JudgmentScale::Graded);
  j.add("u", "v1", -2);
  j.add("u", "v2", -2);
  CHECK(ndcg_at_k(ids({"v1", "v2"}), j, "u", 5) == 0.0);

  Judgments none(JudgmentScale::Binary);
  none.add("u", "v1", 0);
  CHECK(ndcg_at_k(ids({"v1"}), none, "u", 5) == 0.0);
}

TEST_CASE("metrics ignore items beyond rank k") {
  Judgments j = binary_judgments();
  const RankedList base = ids({"v1", "v2", "v3", "v4", "v5"});
  RankedList extended = base;
  extended.push_back({"v9", -1.0});
  extended.push_back({"v10", -2.0});
  CHECK(precision_at_k(base, j, "u", 5) == precision_at_k(extended, j, "u", 5));
  CHECK(ndcg_at_k(base, j, "u", 5) == ndcg_at_k(extended, j, "u", 5));
}

TEST_CASE("metrics stay in the unit interval") {
  Judgments j = binary_judgments();
  for (int k = 1; k <= 8; ++k) {
    const double p = precision_at_k(ids({"v3", "v2", "v1"}), j, "u", k);
    const double n = ndcg_at_k(ids({"v3", "v2", "v1"}), j, "u", k);
    CHECK(p >= 0.0);
    CHECK(p <= 1.0);
    CHECK(n >= 0.0);
    CHECK(n <= 1.0);
  }
}

TEST_CASE("mrr follows the first relevant rank") {
  Judgments j = binary_judgments();
  std::map<std::string, RankedList> runs;
  runs["u"] = ids({"v2", "v4", "v1"});  // first hit at rank 3
  CHECK(mrr(runs, j) == doctest::Approx(1.0 / 3.0));

  runs["u"] = ids({"v1", "v2"});
  CHECK(mrr(runs, j) == doctest::Approx(1.0));

  runs["u"] = ids({"v2", "v4", "v5"});
  CHECK(mrr(runs, j) == 0.0);  // no hit contributes zero
}

TEST_CASE("kfold splits partition the users evenly") {
  std::vector<std::string> users;
  for (int i = 0; i < 10; ++i) users.push_back("u" + std::to_string(i));

  const auto folds = kfold_split(users, 5, 7);
  REQUIRE(folds.size() == 5);
  std::set<std::string> seen;
  for (const auto& fold : folds) {
    CHECK(fold.size() == 2);
    for (const auto& u : fold) CHECK(seen.insert(u).second);
  }
  CHECK(seen.size() == users.size());

  CHECK(kfold_split(users, 5, 7) == folds);  // seed-deterministic

  const auto loo = kfold_split(users, 10, 3);
  for (const auto& fold : loo) CHECK(fold.size() == 1);

  // sizes differ by at most one when k does not divide |users|
  const auto uneven = kfold_split(users, 3, 1);
  std::size_t lo = users.size(), hi = 0;
  for (const auto& fold : uneven) {
    lo = std::min(lo, fold.size());
    hi = std::max(hi, fold.size());
  }
  CHECK(hi - lo <= 1);

  CHECK_THROWS_AS(kfold_split(users, 11, 1), DataError);
  CHECK_THROWS_AS(kfold_split(users, 0, 1), DataError);
}

TEST_CASE("incomplete beta agrees with the closed form at b = 1") {
  // I_x(a, 1) = x^a
  for (double x : {0.1, 0.3, 0.7, 0.95}) {
    for (double a : {0.5, 1.0, 2.0, 5.0}) {
      CHECK(regularized_incomplete_beta(a, 1.0, x) ==
            doctest::Approx(std::pow(x, a)).epsilon(1e-10));
    }
  }
  // symmetry I_x(a, b) = 1 - I_{1-x}(b, a)
  CHECK(regularized_incomplete_beta(2.5, 0.5, 0.3) ==
        doctest::Approx(1.0 - regularized_incomplete_beta(0.5, 2.5, 0.7)).epsilon(1e-10));
  CHECK(regularized_incomplete_beta(1.0, 0.5, 0.0) == 0.0);
  CHECK(regularized_incomplete_beta(1.0, 0.5, 1.0) == 1.0);
}

TEST_CASE("paired t-test on identical samples") {
  const TTestResult r = paired_ttest({0.5, 0.6, 0.7}, {0.5, 0.6, 0.7});
  CHECK(r.t == 0.0);
  CHECK(r.p_two_tailed == doctest::Approx(1.0));
}

TEST_CASE("constant nonzero difference degenerates to zero p") {
  std::vector<double> a(30, 0.8), b(30, 0.7);
  const TTestResult r = paired_ttest(a, b);
  CHECK(std::isinf(r.t));
  CHECK(r.t > 0.0);
  CHECK(r.p_two_tailed < 1e-12);
}

TEST_CASE("paired t statistic matches the hand-evaluated formula") {
  // d = (0.1, 0.2, 0.3): mean 0.2, sample sd 0.1, t = 0.2 / (0.1/sqrt(3))
  const TTestResult r = paired_ttest({0.6, 0.7, 0.8}, {0.5, 0.5, 0.5});
  CHECK(r.t == doctest::Approx(2.0 * std::sqrt(3.0)).epsilon(1e-9));
  // two-tailed p with df = 2: I_{2/(2+t^2)}(1, 1/2) = 1 - sqrt(6/7)
  CHECK(r.p_two_tailed == doctest::Approx(1.0 - std::sqrt(6.0 / 7.0)).epsilon(1e-9));
  CHECK(r.p_two_tailed == doctest::Approx(0.0741799).epsilon(1e-5));
}

TEST_CASE("paired t-test input validation") {
  CHECK_THROWS_AS(paired_ttest({1.0}, {1.0}), DataError);
  CHECK_THROWS_AS(paired_ttest({1.0, 2.0}, {1.0}), DataError);
}
