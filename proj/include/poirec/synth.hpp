#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>

namespace poirec {

// Planted generative process for desk-scale verification. Users carry a
// latent preference over categories, tag groups (hence keywords, through
// the planted keyword->tag table), review styles and venue quality; ratings
// are thresholded affinity plus seeded noise; user tags are drawn through
// the planted table; review text mixes polarity word pools with the
// venue's style word, so quality and style are observable only through
// reviews. Defaults mimic the shape of real LBSN crawls (about 8.5
// keywords and 1.6 categories per venue).
struct SynthSpec {
  int n_users = 200;
  int n_venues = 1000;
  std::uint64_t seed = 7;

  int n_categories = 24;
  int n_keywords = 120;
  int n_tags = 12;
  int n_cities = 6;
  int history_per_city = 18;  // history spans two home cities
  int n_candidates = 28;      // drawn from a third, unseen city
  double candidate_category_bias = 0.35;  // fraction pre-filtered to match preferences
  int n_appropriateness = 600;
  double noise = 0.10;

  // affinity weights; liked (rating >= 4 at threshold 0.74) is impossible
  // without a category match when noise is 0, since the others sum to 0.72
  double w_cat = 0.28;
  double w_key = 0.20;
  double w_qual = 0.32;
  double w_style = 0.20;
  double inappropriate_threshold = -0.25;  // mean F_app below this hurts judgments
};

struct SynthResult {
  std::string venues_path;
  std::string users_path;
  std::string candidates_path;
  std::string qrels_path;
  std::string context_table_path;
  std::string appropriateness_path;
  std::string planted_table_path;
  std::string config_path;
  std::map<std::string, std::string> keyword_to_tag;  // the planted table
  // planted per-user category preferences, for property checks
  std::map<std::string, std::set<std::string>> user_pref_categories;
};

SynthResult synth_generate(const SynthSpec& spec, const std::string& out_dir);

}  // namespace poirec
