#include "poirec/synth.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <vector>

#include <json.hpp>

#include "poirec/context.hpp"
#include "poirec/domain.hpp"
#include "poirec/rng.hpp"

namespace poirec {

using nlohmann::json;

namespace {

const std::array<const char*, 24> kCategories = {
    "museum",      "beach",         "nightlife spot", "restaurant",
    "park",        "shopping mall", "theater",        "stadium",
    "art gallery", "zoo",           "library",        "spa",
    "cafe",        "aquarium",      "winery",         "bookstore",
    "arcade",      "food truck",    "botanical garden", "concert hall",
    "casino",      "pier",          "market",         "historic site"};

const std::array<const char*, 6> kStyles = {"cozy",   "flashy",  "quirky",
                                            "rustic", "minimal", "classic"};

const std::array<const char*, 8> kPositiveWords = {
    "great", "amazing", "lovely", "wonderful", "fantastic", "delightful", "superb", "charming"};
const std::array<const char*, 8> kNegativeWords = {
    "terrible", "awful", "dirty", "rude", "boring", "disappointing", "noisy", "bland"};
const std::array<const char*, 6> kNeutralWords = {"okay",     "average", "decent",
                                                  "ordinary", "passable", "fair"};
const std::array<const char*, 8> kFillerWords = {"place", "visit",      "staff", "time",
                                                 "spot",  "experience", "service", "crowd"};

const std::array<const char*, 11> kContextValues = {
    "day-trip",  "night-trip",   "weekend-trip", "longer-trip",
    "alone",     "with-friends", "with-family",  "with-others",
    "business-trip", "holiday-trip", "other-trip"};

struct Venue {
  std::string id;
  int city = 0;
  std::vector<int> categories;
  std::vector<int> keywords;
  double quality = 0.0;
  int style = 0;
  std::vector<std::pair<int, std::string>> reviews;  // (rating, text)
};

struct User {
  std::string id;
  std::array<int, 2> home_cities{};
  int trip_city = 0;
  std::set<int> pref_categories;
  std::set<int> pref_tags;
  std::set<int> pref_keywords;
  std::set<int> pref_styles;
  ContextSpec context;
};

std::string pad_id(const char* prefix, int n, int width) {
  std::string s = std::to_string(n);
  while (static_cast<int>(s.size()) < width) s.insert(s.begin(), '0');
  return std::string(prefix) + s;
}

std::set<int> sample_distinct(Rng& rng, int n, int k) {
  std::set<int> out;
  while (static_cast<int>(out.size()) < std::min(n, k))
    out.insert(static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(n))));
  return out;
}

int rating_from_affinity(double a) {
  if (a >= 0.82) return 5;
  if (a >= 0.74) return 4;
  if (a >= 0.50) return 3;
  if (a >= 0.35) return 2;
  return 1;
}

}  // namespace

SynthResult synth_generate(const SynthSpec& spec, const std::string& out_dir) {
  if (spec.n_users < 10) throw DataError("synth_generate: need at least 10 users");
  if (spec.n_venues < 50) throw DataError("synth_generate: need at least 50 venues");
  if (spec.n_cities < 3) throw DataError("synth_generate: need at least 3 cities");
  if (spec.n_categories < 4 || spec.n_categories > static_cast<int>(kCategories.size()))
    throw DataError("synth_generate: n_categories must be in 4.." +
                    std::to_string(kCategories.size()));
  if (spec.n_tags < 2 || spec.n_keywords < spec.n_tags || spec.n_keywords > 999)
    throw DataError("synth_generate: need 2 <= n_tags <= n_keywords <= 999");

  std::filesystem::create_directories(out_dir);
  Rng rng(spec.seed);

  // planted keyword -> tag table: round-robin over tags
  std::vector<std::string> keyword_names(static_cast<std::size_t>(spec.n_keywords));
  std::vector<std::string> tag_names(static_cast<std::size_t>(spec.n_tags));
  for (int t = 0; t < spec.n_tags; ++t) tag_names[static_cast<std::size_t>(t)] = pad_id("tag-", t, 2);
  std::map<std::string, std::string> planted;
  for (int f = 0; f < spec.n_keywords; ++f) {
    keyword_names[static_cast<std::size_t>(f)] = pad_id("keyword-", f, 3);
    planted[keyword_names[static_cast<std::size_t>(f)]] =
        tag_names[static_cast<std::size_t>(f % spec.n_tags)];
  }

  // context feature table: strong positives/negatives and a subjective band
  ContextFeatureTable table;
  {
    static const std::array<double, 8> levels = {-1.0, -0.66, -0.33, 0.0,
                                                 0.0,  0.33,  0.66,  1.0};
    for (int c = 0; c < spec.n_categories; ++c)
      for (const char* ctx : kContextValues)
        table.set(kCategories[static_cast<std::size_t>(c)], ctx,
                  levels[static_cast<std::size_t>(rng.uniform_int(levels.size()))]);
  }

  // venues
  std::vector<Venue> venues(static_cast<std::size_t>(spec.n_venues));
  for (int v = 0; v < spec.n_venues; ++v) {
    Venue& venue = venues[static_cast<std::size_t>(v)];
    venue.id = pad_id("venue-", v, 4);
    venue.city = static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(spec.n_cities)));
    const int n_cats = rng.bernoulli(0.6) ? 2 : 1;  // mean 1.6
    for (int c : sample_distinct(rng, spec.n_categories, n_cats)) venue.categories.push_back(c);
    const int n_keys = 6 + static_cast<int>(rng.uniform_int(6));  // 6..11, mean 8.5
    for (int f : sample_distinct(rng, spec.n_keywords, n_keys)) venue.keywords.push_back(f);
    venue.quality = rng.uniform();
    venue.style = static_cast<int>(rng.uniform_int(kStyles.size()));

    const int n_reviews = 4 + static_cast<int>(rng.uniform_int(5));
    for (int r = 0; r < n_reviews; ++r) {
      const double raw = venue.quality + 0.25 * rng.normal();
      const int rating =
          std::clamp(1 + static_cast<int>(std::floor(5.0 * std::clamp(raw, 0.0, 0.999))), 1, 5);
      std::string text = kStyles[static_cast<std::size_t>(venue.style)];
      const int n_words = 3 + static_cast<int>(rng.uniform_int(3));
      for (int w = 0; w < n_words; ++w) {
        text += ' ';
        if (rating >= 4)
          text += kPositiveWords[static_cast<std::size_t>(rng.uniform_int(kPositiveWords.size()))];
        else if (rating <= 2)
          text += kNegativeWords[static_cast<std::size_t>(rng.uniform_int(kNegativeWords.size()))];
        else
          text += kNeutralWords[static_cast<std::size_t>(rng.uniform_int(kNeutralWords.size()))];
      }
      for (int w = 0; w < 2; ++w) {
        text += ' ';
        text += kFillerWords[static_cast<std::size_t>(rng.uniform_int(kFillerWords.size()))];
      }
      venue.reviews.emplace_back(rating, std::move(text));
    }
  }

  std::vector<std::vector<int>> by_city(static_cast<std::size_t>(spec.n_cities));
  for (int v = 0; v < spec.n_venues; ++v)
    by_city[static_cast<std::size_t>(venues[static_cast<std::size_t>(v)].city)].push_back(v);

  auto affinity = [&](const User& u, const Venue& v, double noise) {
    bool cat_match = false;
    for (int c : v.categories) cat_match = cat_match || u.pref_categories.count(c);
    int key_overlap = 0;
    for (int f : v.keywords) key_overlap += u.pref_keywords.count(f) ? 1 : 0;
    const double key_match = std::min(1.0, static_cast<double>(key_overlap) / 2.0);
    const bool style_match = u.pref_styles.count(v.style) > 0;
    double a = spec.w_cat * (cat_match ? 1.0 : 0.0) + spec.w_key * key_match +
               spec.w_qual * v.quality + spec.w_style * (style_match ? 1.0 : 0.0);
    if (noise > 0.0) a += noise * rng.normal();
    return a;
  };

  auto mean_f_app = [&](const Venue& v, const ContextSpec& ctx) {
    const std::array<const std::string*, 3> dims = {&ctx.duration, &ctx.group, &ctx.trip_type};
    double sum = 0.0;
    for (const auto* dim : dims)
      for (int c : v.categories)
        sum += table.value(kCategories[static_cast<std::size_t>(c)], *dim);
    return sum / (3.0 * static_cast<double>(v.categories.size()));
  };

  // users, histories, candidates, judgments
  SynthResult result;
  result.keyword_to_tag = planted;
  const std::string venues_path = out_dir + "/venues.jsonl";
  const std::string users_path = out_dir + "/users.jsonl";
  const std::string candidates_path = out_dir + "/candidates.jsonl";
  const std::string qrels_path = out_dir + "/qrels.txt";

  std::ofstream users_out(users_path);
  std::ofstream candidates_out(candidates_path);
  std::ofstream qrels_out(qrels_path);
  if (!users_out || !candidates_out || !qrels_out)
    throw DataError("synth_generate: cannot write into '" + out_dir + "'");

  for (int ui = 0; ui < spec.n_users; ++ui) {
    User u;
    u.id = pad_id("user-", ui, 3);
    const auto cities = sample_distinct(rng, spec.n_cities, 3);
    std::vector<int> city_list(cities.begin(), cities.end());
    rng.shuffle(city_list);
    u.home_cities = {city_list[0], city_list[1]};
    u.trip_city = city_list[2];
    u.pref_categories = sample_distinct(rng, spec.n_categories, 3);
    u.pref_tags = sample_distinct(rng, spec.n_tags, 3);
    for (int f = 0; f < spec.n_keywords; ++f)
      if (u.pref_tags.count(f % spec.n_tags)) u.pref_keywords.insert(f);
    for (int c : u.pref_categories)
      result.user_pref_categories[u.id].insert(kCategories[static_cast<std::size_t>(c)]);
    u.pref_styles = sample_distinct(rng, static_cast<int>(kStyles.size()), 2);
    u.context.duration = kContextValues[rng.uniform_int(4)];
    u.context.group = kContextValues[4 + rng.uniform_int(4)];
    u.context.trip_type = kContextValues[8 + rng.uniform_int(3)];

    // history: a block per home city (sequential layout)
    json history = json::array();
    for (int home : u.home_cities) {
      auto pool = by_city[static_cast<std::size_t>(home)];
      rng.shuffle(pool);
      const int take = std::min(spec.history_per_city, static_cast<int>(pool.size()));
      for (int i = 0; i < take; ++i) {
        const Venue& v = venues[static_cast<std::size_t>(pool[static_cast<std::size_t>(i)])];
        const int rating = rating_from_affinity(affinity(u, v, spec.noise));

        json tags = json::array();
        if (rating >= 4 && rng.bernoulli(0.9)) {
          std::vector<int> noticed;
          for (int f : v.keywords)
            if (u.pref_keywords.count(f)) noticed.push_back(f);
          rng.shuffle(noticed);
          if (noticed.size() > 4) noticed.resize(4);
          std::set<std::string> tag_set;
          for (int f : noticed) tag_set.insert(planted.at(keyword_names[static_cast<std::size_t>(f)]));
          for (const auto& t : tag_set) tags.push_back(t);
        }
        history.push_back(json{{"venue_id", v.id}, {"rating", rating}, {"tags", std::move(tags)}});
      }
    }

    users_out << json{{"id", u.id},
                      {"history", std::move(history)},
                      {"context",
                       json{{"duration", u.context.duration},
                            {"group", u.context.group},
                            {"type", u.context.trip_type}}}}
                     .dump()
              << "\n";

    // candidates from the unseen trip city, judged on the same affinity;
    // a slice of the pool is pre-filtered to category-matching venues, the
    // way real candidate lists skew toward plausible suggestions
    auto pool = by_city[static_cast<std::size_t>(u.trip_city)];
    rng.shuffle(pool);
    {
      const int want_matched =
          static_cast<int>(spec.candidate_category_bias * static_cast<double>(spec.n_candidates));
      std::vector<int> matched, rest;
      for (int vi : pool) {
        const Venue& v = venues[static_cast<std::size_t>(vi)];
        bool match = false;
        for (int c : v.categories) match = match || u.pref_categories.count(c);
        (match && static_cast<int>(matched.size()) < want_matched ? matched : rest).push_back(vi);
      }
      matched.insert(matched.end(), rest.begin(), rest.end());
      if (static_cast<int>(matched.size()) > spec.n_candidates)
        matched.resize(static_cast<std::size_t>(spec.n_candidates));
      pool = std::move(matched);
      rng.shuffle(pool);
    }
    const int take = std::min(spec.n_candidates, static_cast<int>(pool.size()));
    json venue_ids = json::array();
    for (int i = 0; i < take; ++i) {
      const Venue& v = venues[static_cast<std::size_t>(pool[static_cast<std::size_t>(i)])];
      venue_ids.push_back(v.id);
      int graded = rating_from_affinity(affinity(u, v, spec.noise)) - 3;
      if (mean_f_app(v, u.context) < spec.inappropriate_threshold)
        graded = std::max(-2, graded - 2);
      qrels_out << u.id << " 0 " << v.id << " " << graded << "\n";
    }
    candidates_out << json{{"user_id", u.id}, {"venue_ids", std::move(venue_ids)}}.dump()
                   << "\n";
  }

  // venues.jsonl
  {
    std::ofstream out(venues_path);
    if (!out) throw DataError("synth_generate: cannot write venues");
    for (const Venue& v : venues) {
      json cats = json::array(), keys = json::array(), reviews = json::array();
      for (int c : v.categories) cats.push_back(kCategories[static_cast<std::size_t>(c)]);
      for (int f : v.keywords) keys.push_back(keyword_names[static_cast<std::size_t>(f)]);
      for (const auto& [rating, text] : v.reviews)
        reviews.push_back(json{{"rating", rating}, {"text", text}});
      out << json{{"id", v.id},
                  {"city", "city-" + std::to_string(v.city)},
                  {"name", "Venue " + v.id.substr(6)},
                  {"categories", std::move(cats)},
                  {"keywords", std::move(keys)},
                  {"reviews", std::move(reviews)}}
                 .dump()
          << "\n";
    }
  }

  // context feature table CSV
  const std::string table_path = out_dir + "/context_features.csv";
  {
    std::ofstream out(table_path);
    if (!out) throw DataError("synth_generate: cannot write context table");
    out << "category,context,value\n";
    char buf[32];
    for (const auto& [key, value] : table.all()) {
      std::snprintf(buf, sizeof(buf), "%.2f", value);
      out << key.first << "," << key.second << "," << buf << "\n";
    }
  }

  // appropriateness examples: balanced, margin-separated by construction
  const std::string appropriateness_path = out_dir + "/appropriateness.jsonl";
  {
    std::ofstream out(appropriateness_path);
    if (!out) throw DataError("synth_generate: cannot write appropriateness examples");
    const int half = spec.n_appropriateness / 2;
    int n_pos = 0, n_neg = 0, attempts = 0;
    while ((n_pos < half || n_neg < half) && attempts < spec.n_appropriateness * 200) {
      ++attempts;
      const int n_cats = rng.bernoulli(0.6) ? 2 : 1;
      std::vector<std::string> cats;
      for (int c : sample_distinct(rng, spec.n_categories, n_cats))
        cats.push_back(kCategories[static_cast<std::size_t>(c)]);
      ContextSpec ctx;
      ctx.duration = kContextValues[rng.uniform_int(4)];
      ctx.group = kContextValues[4 + rng.uniform_int(4)];
      ctx.trip_type = kContextValues[8 + rng.uniform_int(3)];

      double mean = 0.0;
      for (const auto& cat : cats)
        mean += table.value(cat, ctx.duration) + table.value(cat, ctx.group) +
                table.value(cat, ctx.trip_type);
      mean /= 3.0 * static_cast<double>(cats.size());

      const double margin = mean - spec.inappropriate_threshold;
      if (std::abs(margin) < 0.08) continue;  // keep the classes separable
      const bool appropriate = margin > 0.0;
      if (appropriate && n_pos >= half) continue;
      if (!appropriate && n_neg >= half) continue;
      (appropriate ? n_pos : n_neg) += 1;

      out << json{{"categories", cats},
                  {"context",
                   json{{"duration", ctx.duration}, {"group", ctx.group}, {"type", ctx.trip_type}}},
                  {"label", appropriate ? "appropriate" : "inappropriate"}}
                 .dump()
          << "\n";
    }
  }

  // planted table, for diagnostics and acceptance checks
  const std::string planted_path = out_dir + "/planted_translation.json";
  {
    std::ofstream out(planted_path);
    if (!out) throw DataError("synth_generate: cannot write planted table");
    out << json{{"format", "poirec-planted"}, {"version", 1}, {"keyword_to_tag", planted}}.dump(2)
        << "\n";
  }

  // ready-to-run config
  const std::string config_path = out_dir + "/poirec.cfg";
  {
    std::ofstream out(config_path);
    if (!out) throw DataError("synth_generate: cannot write config");
    out << "venues = " << venues_path << "\n"
        << "users = " << users_path << "\n"
        << "candidates = " << candidates_path << "\n"
        << "qrels = " << qrels_path << "\n"
        << "context-table = " << table_path << "\n"
        << "appropriateness = " << appropriateness_path << "\n"
        << "out-dir = " << out_dir << "/out\n"
        << "model = PK-Boosting\n"
        << "ltr = listnet\n"
        << "seed = " << spec.seed << "\n";
  }

  result.venues_path = venues_path;
  result.users_path = users_path;
  result.candidates_path = candidates_path;
  result.qrels_path = qrels_path;
  result.context_table_path = table_path;
  result.appropriateness_path = appropriateness_path;
  result.planted_table_path = planted_path;
  result.config_path = config_path;
  return result;
}

}  // namespace poirec
