#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>

#include "poirec/alignment.hpp"
#include "poirec/domain.hpp"
#include "poirec/io.hpp"
#include "test_oracles.hpp"

using namespace poirec;
using poirec::testing::enumerate_posteriors;
using poirec::testing::random_instance;

namespace {

// model with p(a|x) = 0.9, p(a|NULL) = 0.1 and uniform position prior
AlignmentModel biased_single_keyword_model() {
  AlignmentModel model;
  model.set_translation({{"x", {{"a", 0.9}, {"b", 0.1}}},
                         {kNullTag, {{"a", 0.1}, {"b", 0.9}}}});
  model.set_position({{1, {0.5, 0.5}}});
  model.set_tag_priors({{"x", 1.0}});
  return model;
}

}  // namespace

TEST_CASE("uniform initialization over co-occurring vocabulary") {
  std::vector<AlignmentPair> pairs = {{{"a", "b"}, {"x"}, "u"}};
  AlignmentModel model = init_model(pairs);
  CHECK(model.translation("x", "a") == doctest::Approx(0.5));
  CHECK(model.translation("x", "b") == doctest::Approx(0.5));
  CHECK(model.translation(kNullTag, "a") == doctest::Approx(0.5));
  CHECK(model.position_prior(0, 1) == doctest::Approx(0.5));
  CHECK(model.position_prior(1, 1) == doctest::Approx(0.5));
}

TEST_CASE("single-keyword pair initializes to a point mass") {
  std::vector<AlignmentPair> pairs = {{{"a"}, {"x"}, "u"}};
  AlignmentModel model = init_model(pairs);
  CHECK(model.translation("x", "a") == doctest::Approx(1.0));
}

TEST_CASE("initialization spans the union vocabulary per tag") {
  std::vector<AlignmentPair> pairs = {{{"a", "b"}, {"x"}, "u"}, {{"c"}, {"x"}, "u"}};
  AlignmentModel model = init_model(pairs);
  CHECK(model.translation("x", "a") == doctest::Approx(1.0 / 3.0));
  CHECK(model.translation("x", "b") == doctest::Approx(1.0 / 3.0));
  CHECK(model.translation("x", "c") == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("initialization rejects empty input") {
  CHECK_THROWS_AS(init_model({}), DataError);
  CHECK_THROWS_AS(init_model({{{}, {"x"}, "u"}}), DataError);
  CHECK_THROWS_AS(init_model({{{"a"}, {}, "u"}}), DataError);
}

TEST_CASE("posteriors are symmetric under symmetric parameters") {
  AlignmentModel model = init_model({{{"a"}, {"x"}, "u"}});
  const auto gamma = e_step_posteriors(model, {{"a"}, {"x"}, "u"});
  CHECK(gamma[0][0] == doctest::Approx(0.5));
  CHECK(gamma[0][1] == doctest::Approx(0.5));
}

TEST_CASE("posterior follows the translation odds") {
  AlignmentModel model = biased_single_keyword_model();
  const auto gamma = e_step_posteriors(model, {{"a"}, {"x"}, "u"});
  CHECK(gamma[0][1] == doctest::Approx(0.9).epsilon(1e-12));
}

TEST_CASE("posterior columns always sum to one") {
  Rng rng(4);
  for (int trial = 0; trial < 25; ++trial) {
    auto inst = random_instance(rng);
    const auto gamma = e_step_posteriors(inst.model, inst.pair);
    for (const auto& column : gamma) {
      double sum = 0.0;
      for (double v : column) sum += v;
      CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("posteriors equal brute-force enumeration over all mappings") {
  Rng rng(17);
  for (int trial = 0; trial < 25; ++trial) {
    auto inst = random_instance(rng);
    const auto fast = e_step_posteriors(inst.model, inst.pair);
    const auto slow = enumerate_posteriors(inst.model, inst.pair);
    REQUIRE(fast.size() == slow.size());
    for (std::size_t j = 0; j < fast.size(); ++j)
      for (std::size_t i = 0; i < fast[j].size(); ++i)
        CHECK(fast[j][i] == doctest::Approx(slow[j][i]).epsilon(1e-9));
  }
}

TEST_CASE("log-likelihood of the uniform one-pair model is zero") {
  std::vector<AlignmentPair> pairs = {{{"a"}, {"x"}, "u"}};
  AlignmentModel model = init_model(pairs);
  // log(0.5 * 1 + 0.5 * 1) = 0
  CHECK(log_likelihood(model, pairs) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("log-likelihood is additive over duplicated pairs") {
  std::vector<AlignmentPair> one = {{{"a", "b"}, {"x", "y"}, "u"}};
  std::vector<AlignmentPair> two = {one[0], one[0]};
  AlignmentModel model = init_model(two);
  CHECK(log_likelihood(model, two) ==
        doctest::Approx(2.0 * log_likelihood(model, one)).epsilon(1e-12));
}

TEST_CASE("singleton corpus is forced to probability one") {
  std::vector<AlignmentPair> pairs = {{{"burgers"}, {"food"}, "u"}};
  EmResult r = em_train(pairs, 20, 1e-9);
  CHECK(r.model.translation("food", "burgers") == doctest::Approx(1.0));
  CHECK(r.model.translation(kNullTag, "burgers") == doctest::Approx(1.0));
  CHECK(r.loglik_trace.back() == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("shared keyword concentrates onto the shared tag") {
  // the brute-force oracle: EM with enumeration-based posteriors
  std::vector<AlignmentPair> pairs = {{{"a", "b"}, {"x", "y"}, "u"}, {{"a"}, {"x"}, "u"}};

  AlignmentModel oracle = init_model(pairs);
  for (int iter = 0; iter < 40; ++iter) {
    std::map<std::string, std::map<std::string, double>> counts;
    std::map<int, std::vector<double>> pos_counts;
    for (const auto& pair : pairs) {
      const int I = static_cast<int>(pair.tags.size());
      const auto gamma = enumerate_posteriors(oracle, pair);
      auto& pc = pos_counts[I];
      if (pc.empty()) pc.assign(static_cast<std::size_t>(I) + 1, 0.0);
      for (std::size_t j = 0; j < pair.keywords.size(); ++j)
        for (int i = 0; i <= I; ++i) {
          const std::string& tag = i == 0 ? kNullTag : pair.tags[static_cast<std::size_t>(i - 1)];
          counts[tag][pair.keywords[j]] += gamma[j][static_cast<std::size_t>(i)];
          pc[static_cast<std::size_t>(i)] += gamma[j][static_cast<std::size_t>(i)];
        }
    }
    for (auto& [_, row] : counts) {
      double z = 0.0;
      for (const auto& [__, c] : row) z += c;
      for (auto& [__, c] : row) c /= z;
    }
    for (auto& [_, probs] : pos_counts) {
      double z = 0.0;
      for (double c : probs) z += c;
      for (auto& c : probs) c /= z;
    }
    oracle.set_translation(std::move(counts));
    oracle.set_position(std::move(pos_counts));
  }

  EmResult r = em_train(pairs, 40, 1e-12);
  CHECK(r.model.translation("x", "a") ==
        doctest::Approx(oracle.translation("x", "a")).epsilon(1e-9));
  CHECK(r.model.translation("x", "a") > r.model.translation("x", "b"));

  // p(a|x) strictly increases from its uniform start
  EmResult early = em_train(pairs, 1, 1e-12);
  CHECK(early.model.translation("x", "a") > 0.5);
  CHECK(r.model.translation("x", "a") > early.model.translation("x", "a"));
}

TEST_CASE("log-likelihood trace is monotone non-decreasing") {
  Rng rng(23);
  static const std::vector<std::string> kws = {"k0", "k1", "k2", "k3", "k4"};
  static const std::vector<std::string> tags = {"t0", "t1", "t2"};
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<AlignmentPair> pairs;
    const int n = 2 + static_cast<int>(rng.uniform_int(6));
    for (int p = 0; p < n; ++p) {
      AlignmentPair pair;
      const int J = 1 + static_cast<int>(rng.uniform_int(4));
      const int I = 1 + static_cast<int>(rng.uniform_int(3));
      for (int j = 0; j < J; ++j) pair.keywords.push_back(rng.pick(kws));
      for (int i = 0; i < I; ++i) pair.tags.push_back(tags[static_cast<std::size_t>(i)]);
      pairs.push_back(std::move(pair));
    }
    EmResult r = em_train(pairs, 30, 1e-12);
    for (std::size_t k = 1; k < r.loglik_trace.size(); ++k)
      CHECK(r.loglik_trace[k] >= r.loglik_trace[k - 1] - 1e-9);
  }
}

TEST_CASE("distributions stay normalized after every M-step") {
  Rng rng(31);
  std::vector<AlignmentPair> pairs = {{{"a", "b", "c"}, {"x", "y"}, "u"},
                                      {{"a", "c"}, {"y"}, "u"},
                                      {{"b"}, {"x"}, "u"}};
  for (int iters = 1; iters <= 6; ++iters) {
    EmResult r = em_train(pairs, iters, 1e-15);
    for (const auto& [tag, row] : r.model.translation_table()) {
      double sum = 0.0;
      for (const auto& [_, p] : row) sum += p;
      CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
    }
    for (const auto& [len, probs] : r.model.position_table()) {
      double sum = 0.0;
      for (double p : probs) sum += p;
      CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
    }
  }
}

TEST_CASE("best mapping follows the argmax and breaks ties low") {
  AlignmentModel model = biased_single_keyword_model();
  Mapping m = best_mapping(model, {{"a"}, {"x"}, "u"});
  CHECK(m.assignments == std::vector<int>{1});

  // exactly tied: uniform translation and position prior -> NULL wins
  AlignmentModel tied = init_model({{{"a"}, {"x"}, "u"}});
  Mapping t = best_mapping(tied, {{"a"}, {"x"}, "u"});
  CHECK(t.assignments == std::vector<int>{0});
}

TEST_CASE("mapping stays in range on a J=4, I=2 instance") {
  Rng rng(7);
  auto inst = random_instance(rng, 4, 2);
  inst.pair.keywords = {"k0", "k1", "k2", "k3"};
  inst.pair.tags = {"t0", "t1"};
  Mapping m = best_mapping(inst.model, inst.pair);
  REQUIRE(m.assignments.size() == 4);
  for (int a : m.assignments) {
    CHECK(a >= 0);
    CHECK(a <= 2);
  }
}

TEST_CASE("permuting keywords permutes posteriors and mapping") {
  Rng rng(13);
  auto inst = random_instance(rng, 4, 3);
  inst.pair.keywords = {"k0", "k1", "k2", "k3"};
  const auto gamma = e_step_posteriors(inst.model, inst.pair);
  const Mapping m = best_mapping(inst.model, inst.pair);

  AlignmentPair permuted = inst.pair;
  std::swap(permuted.keywords[0], permuted.keywords[3]);
  const auto gamma_p = e_step_posteriors(inst.model, permuted);
  const Mapping m_p = best_mapping(inst.model, permuted);

  CHECK(gamma_p[0] == gamma[3]);
  CHECK(gamma_p[3] == gamma[0]);
  CHECK(m_p.assignments[0] == m.assignments[3]);
  CHECK(m_p.assignments[3] == m.assignments[0]);
}

TEST_CASE("best mapping is invariant under rescaling a keyword's scores") {
  AlignmentModel model;
  model.set_translation({{"x", {{"a", 0.7}, {"b", 0.3}}},
                         {"y", {{"a", 0.2}, {"b", 0.8}}},
                         {kNullTag, {{"a", 0.1}, {"b", 0.9}}}});
  model.set_position({{2, {0.2, 0.4, 0.4}}});
  AlignmentPair pair{{"a", "b"}, {"x", "y"}, "u"};
  const Mapping before = best_mapping(model, pair);

  // multiply every tag's probability for keyword "a" by the same factor
  auto table = model.translation_table();
  for (auto& [tag, row] : table) row["a"] *= 3.0;
  AlignmentModel scaled;
  scaled.set_translation(std::move(table));
  scaled.set_position({{2, {0.2, 0.4, 0.4}}});
  CHECK(best_mapping(scaled, pair).assignments == before.assignments);
}

TEST_CASE("ml decoding returns the dominant tag") {
  AlignmentModel model = biased_single_keyword_model();
  const auto tags = ml_decode_tags(model, {"a"}, 0.5, 5);
  REQUIRE(tags.size() == 1);
  CHECK(tags[0] == "x");
}

TEST_CASE("ml decoding of unseen keywords is empty") {
  AlignmentModel model = biased_single_keyword_model();
  CHECK(ml_decode_tags(model, {"zzz"}, 0.5, 5).empty());
  CHECK(ml_decode_tags(model, {}, 0.5, 5).empty());
}

TEST_CASE("ml decoding with threshold one keeps only the argmax") {
  AlignmentModel model;
  model.set_translation({{"x", {{"a", 0.9}, {"b", 0.1}}},
                         {"y", {{"a", 0.5}, {"b", 0.5}}},
                         {kNullTag, {{"a", 0.5}, {"b", 0.5}}}});
  model.set_position({{2, {1.0 / 3, 1.0 / 3, 1.0 / 3}}});
  model.set_tag_priors({{"x", 0.5}, {"y", 0.5}});
  const auto tags = ml_decode_tags(model, {"a", "b"}, 1.0, 5);
  REQUIRE(tags.size() == 1);
  CHECK(tags[0] == "x");
}

TEST_CASE("ml decoding respects the i_max cap") {
  AlignmentModel model;
  model.set_translation({{"x", {{"a", 0.9}}},
                         {"y", {{"a", 0.8}}},
                         {"z", {{"a", 0.7}}},
                         {kNullTag, {{"a", 0.1}}}});
  model.set_position({{3, {0.25, 0.25, 0.25, 0.25}}});
  model.set_tag_priors({{"x", 1.0 / 3}, {"y", 1.0 / 3}, {"z", 1.0 / 3}});
  const auto tags = ml_decode_tags(model, {"a"}, 0.1, 2);
  CHECK(tags == std::vector<std::string>{"x", "y"});
}

TEST_CASE("model serialization round-trips at full precision") {
  std::vector<AlignmentPair> pairs = {{{"a", "b", "c"}, {"x", "y"}, "u"},
                                      {{"a", "c"}, {"y"}, "u"},
                                      {{"b", "a"}, {"x"}, "u"}};
  EmResult r = em_train(pairs, 25, 1e-12);
  const std::string path =
      (std::filesystem::temp_directory_path() / "poirec_alignment_roundtrip.json").string();
  save_alignment_models({{"u", r.model}}, path);
  const auto loaded = load_alignment_models(path);
  REQUIRE(loaded.count("u") == 1);
  const AlignmentModel& m = loaded.at("u");
  CHECK(m.translation_table() == r.model.translation_table());
  CHECK(m.position_table() == r.model.position_table());
  CHECK(m.tag_prior_table() == r.model.tag_prior_table());
  CHECK(m.tag_length_prior() == r.model.tag_length_prior());
  CHECK(m.keyword_length_prior() == r.model.keyword_length_prior());
  CHECK(log_likelihood(m, pairs) == log_likelihood(r.model, pairs));
  std::filesystem::remove(path);
}
