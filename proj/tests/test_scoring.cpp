#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>

#include "poirec/io.hpp"
#include "poirec/scoring.hpp"

using namespace poirec;

TEST_CASE("frequency score balances positive and negative mass") {
  FrequencyMap pos{{"c1", 1.0 / 3}, {"c2", 1.0 / 3}};
  FrequencyMap neg{{"c1", 1.0 / 3}};
  CHECK(frequency_score(pos, neg, {"c1"}) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(frequency_score(pos, neg, {"c2"}) == doctest::Approx(1.0 / 3));
  CHECK(frequency_score(pos, neg, {}) == 0.0);
  CHECK(frequency_score(pos, neg, {"zzz", "yyy"}) == 0.0);
}

TEST_CASE("frequency score is additive and bounded") {
  FrequencyMap pos{{"a", 0.4}, {"b", 0.2}};
  FrequencyMap neg{{"c", 0.3}};
  const double ab = frequency_score(pos, neg, {"a", "b"});
  const double c = frequency_score(pos, neg, {"c"});
  CHECK(frequency_score(pos, neg, {"a", "b", "c"}) == doctest::Approx(ab + c));
  CHECK(std::abs(frequency_score(pos, neg, {"a", "b", "c"})) <= 3.0);
}

TEST_CASE("tokenizer lowercases, splits and drops short tokens") {
  CHECK(tokenize("It's GREAT-value!! a") == std::vector<std::string>{"it", "great", "value"});
  CHECK(tokenize("") == std::vector<std::string>{});
  CHECK(tokenize("x y z") == std::vector<std::string>{});
  CHECK(tokenize("don't stop 99") == std::vector<std::string>{"don", "stop", "99"});
}

TEST_CASE("tf-idf weights follow the declared formulas") {
  TfidfVectorizer vec;
  vec.fit({"alpha beta gamma delta"});
  // single document: every idf is ln(2/2) + 1 = 1
  for (double idf : vec.idf()) CHECK(idf == doctest::Approx(1.0));
  // tf = 1/4 per term, then L2-normalized: each weight = 1/2
  const SparseVec x = vec.transform("alpha beta gamma delta");
  REQUIRE(x.size() == 4);
  for (const auto& [_, w] : x) CHECK(w == doctest::Approx(0.5));

  TfidfVectorizer vec2;
  vec2.fit({"alpha beta", "alpha gamma", "alpha delta"});
  const auto& vocab = vec2.vocabulary();
  // alpha appears in every document: idf at the floor value 1
  CHECK(vec2.idf()[static_cast<std::size_t>(vocab.at("alpha"))] == doctest::Approx(1.0));
  // beta appears once: idf = ln(4/2) + 1
  CHECK(vec2.idf()[static_cast<std::size_t>(vocab.at("beta"))] ==
        doctest::Approx(std::log(2.0) + 1.0));
  CHECK(vec2.transform("zz xx").empty());
  CHECK(vec2.transform("").empty());
}

namespace {

VenueStore review_toy_store() {
  VenueRecord liked{"v-pos", "", "", {}, {}, {}};
  liked.reviews = {{5, "great wonderful staff"}, {5, "amazing lovely time"}, {1, "noise"}};
  VenueRecord disliked{"v-neg", "", "", {}, {}, {}};
  disliked.reviews = {{1, "awful terrible staff"}, {2, "rude boring time"}, {5, "fine"}};
  VenueStore s;
  s.add(std::move(liked));
  s.add(std::move(disliked));
  return s;
}

}  // namespace

TEST_CASE("review classifier learns a separable toy") {
  VenueStore store = review_toy_store();
  UserRecord user{"u", {{"v-pos", 5, {}}, {"v-neg", 1, {}}}, std::nullopt};
  ReviewClassifier c = train_review_classifier(user, store, RatingScale::FiveStar,
                                               HingeParams{1e-4, 40, 3});
  REQUIRE(c.available);
  CHECK(c.model.decision(c.vectorizer.transform("great wonderful staff")) > 0.0);
  CHECK(c.model.decision(c.vectorizer.transform("awful terrible staff")) < 0.0);

  // agreeing-polarity filter: the liked venue's negative review and the
  // disliked venue's positive review are excluded from training
  CHECK(c.vectorizer.vocabulary().count("noise") == 0);
  CHECK(c.vectorizer.vocabulary().count("fine") == 0);
}

TEST_CASE("one-sided review data leaves the classifier unavailable") {
  VenueStore store = review_toy_store();
  UserRecord user{"u", {{"v-pos", 5, {}}}, std::nullopt};
  ReviewClassifier c = train_review_classifier(user, store, RatingScale::FiveStar,
                                               HingeParams{1e-4, 40, 3});
  CHECK_FALSE(c.available);
  VenueRecord venue{"cand", "", "", {}, {}, {{5, "great"}}};
  CHECK_FALSE(review_score(c, venue).has_value());
}

TEST_CASE("duplicated training data keeps the separator direction") {
  VenueStore store = review_toy_store();
  UserRecord user{"u", {{"v-pos", 5, {}}, {"v-neg", 1, {}}}, std::nullopt};
  UserRecord doubled{"u",
                     {{"v-pos", 5, {}}, {"v-neg", 1, {}}, {"v-pos", 5, {}}, {"v-neg", 1, {}}},
                     std::nullopt};
  ReviewClassifier a = train_review_classifier(user, store, RatingScale::FiveStar,
                                               HingeParams{1e-4, 40, 3});
  ReviewClassifier b = train_review_classifier(doubled, store, RatingScale::FiveStar,
                                               HingeParams{1e-4, 40, 3});
  for (const char* probe : {"great wonderful staff", "awful terrible staff",
                            "amazing lovely time", "rude boring time"}) {
    const double da = a.model.decision(a.vectorizer.transform(probe));
    const double db = b.model.decision(b.vectorizer.transform(probe));
    CHECK(da * db > 0.0);  // same side of the boundary
  }
}

TEST_CASE("review score averages decision values, order invariant") {
  VenueStore store = review_toy_store();
  UserRecord user{"u", {{"v-pos", 5, {}}, {"v-neg", 1, {}}}, std::nullopt};
  ReviewClassifier c = train_review_classifier(user, store, RatingScale::FiveStar,
                                               HingeParams{1e-4, 40, 3});
  REQUIRE(c.available);

  VenueRecord venue{"cand", "", "", {}, {}, {{5, "great wonderful"}, {4, "lovely amazing"}}};
  const auto s = review_score(c, venue);
  REQUIRE(s.has_value());
  CHECK(*s > 0.0);

  VenueRecord reversed = venue;
  std::swap(reversed.reviews[0], reversed.reviews[1]);
  CHECK(*review_score(c, reversed) == doctest::Approx(*s).epsilon(1e-12));

  VenueRecord empty{"cand2", "", "", {}, {}, {}};
  CHECK_FALSE(review_score(c, empty).has_value());

  // duplicate of a training positive scores strictly positive
  VenueRecord dup{"cand3", "", "", {}, {}, {{5, "great wonderful staff"}}};
  CHECK(*review_score(c, dup) > 0.0);

  // max_reviews caps the aggregation
  const auto first_only = review_score(c, venue, 1);
  REQUIRE(first_only.has_value());
  CHECK(*first_only ==
        doctest::Approx(c.model.decision(c.vectorizer.transform("great wonderful"))));
}

TEST_CASE("review models serialize and round-trip decisions exactly") {
  VenueStore store = review_toy_store();
  UserRecord user{"u", {{"v-pos", 5, {}}, {"v-neg", 1, {}}}, std::nullopt};
  std::map<std::string, ReviewClassifier> models;
  models.emplace("u", train_review_classifier(user, store, RatingScale::FiveStar,
                                              HingeParams{1e-4, 40, 3}));
  models.emplace("empty", ReviewClassifier{});

  const std::string path =
      (std::filesystem::temp_directory_path() / "poirec_review_roundtrip.json").string();
  save_review_models(models, path);
  const auto loaded = load_review_models(path);
  REQUIRE(loaded.size() == 2);
  CHECK_FALSE(loaded.at("empty").available);
  const ReviewClassifier& a = models.at("u");
  const ReviewClassifier& b = loaded.at("u");
  REQUIRE(b.available);
  for (const char* probe : {"great wonderful staff", "awful terrible staff"})
    CHECK(a.model.decision(a.vectorizer.transform(probe)) ==
          b.model.decision(b.vectorizer.transform(probe)));
  std::filesystem::remove(path);
}

TEST_CASE("model rows map to their fourth score column") {
  CHECK(fourth_score_name(model_row_from_name("PK-Boosting")) == "s_boost");
  CHECK(fourth_score_name(model_row_from_name("UT-ML")) == "s_ml");
  CHECK(fourth_score_name(model_row_from_name("UT-CRF")) == "s_crf");
  CHECK(fourth_score_name(model_row_from_name("UT-SVM")) == "s_svm");
  CHECK(fourth_score_name(model_row_from_name("PK-PCA")) == "s_pca");
  CHECK(fourth_score_name(model_row_from_name("LinearCatRev")).empty());
  CHECK_THROWS_AS(model_row_from_name("PK-Nope"), DataError);
}

TEST_CASE("score vector fields and flags per configuration") {
  VenueStore store;
  store.add({"hist", "", "", {"c1"}, {"k1", "k2"}, {}});
  UserRecord user{"u", {{"hist", 5, {"t1"}}}, std::nullopt};
  UserProfiles profiles = build_profiles(user, store, RatingScale::FiveStar);

  BoostedProfile boosted;
  boosted.user_id = "u";
  boosted.keywords = {"k1"};
  boosted.pos = {{"k1", 0.5}};

  CandidateScorer scorer;
  scorer.row = ModelRow::PKBoosting;
  scorer.profiles = &profiles;
  scorer.boosted = &boosted;

  VenueRecord same{"cand", "", "", {"c1"}, {"k1"}, {}};
  ScoreVector sv = scorer.score(same);
  CHECK(sv.has_cat);
  CHECK(sv.has_key);
  CHECK(sv.has_fourth);
  CHECK_FALSE(sv.has_rev);   // no review model attached
  CHECK_FALSE(sv.has_cxt);   // no context attached
  CHECK(sv.s_cat == doctest::Approx(1.0));  // |C(v)| = 1, cf+ = 1
  CHECK(sv.s_fourth == doctest::Approx(0.5));
  CHECK(sv.s_rev == 0.0);

  VenueRecord disjoint{"cand2", "", "", {"c9"}, {"k9"}, {}};
  ScoreVector zero = scorer.score(disjoint);
  CHECK(zero.s_cat == 0.0);
  CHECK(zero.s_key == 0.0);
  CHECK(zero.s_fourth == 0.0);

  // empty boosted profile falls back to the keyword score
  BoostedProfile empty_boost;
  scorer.boosted = &empty_boost;
  ScoreVector fallback = scorer.score(same);
  CHECK_FALSE(fallback.has_fourth);
  CHECK(fallback.s_fourth == doctest::Approx(fallback.s_key));
}

TEST_CASE("UT-ML scores predicted tags against the tag profile") {
  VenueStore store;
  store.add({"hist", "", "", {}, {"burgers"}, {}});
  UserRecord user{"u", {{"hist", 5, {"food"}}}, std::nullopt};
  UserProfiles profiles = build_profiles(user, store, RatingScale::FiveStar);
  REQUIRE(profiles.pos_tag.at("food") == doctest::Approx(1.0));

  AlignmentModel model;
  model.set_translation({{"food", {{"burgers", 0.9}}}, {kNullTag, {{"burgers", 0.1}}}});
  model.set_position({{1, {0.5, 0.5}}});
  model.set_tag_priors({{"food", 1.0}});

  CandidateScorer scorer;
  scorer.row = ModelRow::UTML;
  scorer.profiles = &profiles;
  scorer.alignment = &model;

  VenueRecord candidate{"cand", "", "", {}, {"burgers"}, {}};
  ScoreVector sv = scorer.score(candidate);
  CHECK(sv.has_fourth);
  // decoded tags = {food}; pos_tag(food) = 1
  CHECK(sv.s_fourth == doctest::Approx(1.0));

  VenueRecord unknown{"cand2", "", "", {}, {"sushi"}, {}};
  ScoreVector none = scorer.score(unknown);
  CHECK(none.s_fourth == 0.0);  // decode yields no tags above the floor
}

TEST_CASE("single liked venue and identical candidate categories") {
  VenueStore store;
  store.add({"hist", "", "", {"c1", "c2", "c3"}, {}, {}});
  UserRecord user{"u", {{"hist", 5, {}}}, std::nullopt};
  UserProfiles profiles = build_profiles(user, store, RatingScale::FiveStar);
  // each category has cf+ = 1/3; a candidate with the same three
  // categories scores 3 * 1/3 = |C(v)| * cf = 1
  CHECK(frequency_score(profiles.pos_cat, profiles.neg_cat, {"c1", "c2", "c3"}) ==
        doctest::Approx(1.0));
}
