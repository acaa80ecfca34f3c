#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace poirec {

// Thrown when input data violates a documented invariant (bad rating scale,
// duplicate venue id, dangling reference, malformed file).
class DataError : public std::runtime_error {
 public:
  explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

enum class RatingScale { FiveStar, Graded };  // 1..5 vs -2..+2
enum class Polarity { Negative, Neutral, Positive };

Polarity rating_polarity(int rating, RatingScale scale);

// Label normalization. Tags and keywords: lowercase, trim, internal
// whitespace runs collapse to a single hyphen ("Good for Groups" ->
// "good-for-groups"). Categories keep spaces but are lowercased and trimmed.
std::string normalize_keyword(const std::string& s);
std::string normalize_category(const std::string& s);

struct Review {
  int rating = 0;  // always 1..5
  std::string text;
};

struct VenueRecord {
  std::string id;
  std::string city;
  std::string name;
  std::vector<std::string> categories;  // normalized, deduplicated
  std::vector<std::string> keywords;    // normalized, deduplicated
  std::vector<Review> reviews;
};

struct CheckIn {
  std::string venue_id;
  int rating = 0;
  std::vector<std::string> tags;  // normalized, deduplicated
};

struct ContextSpec {
  std::string duration;  // day-trip | night-trip | weekend-trip | longer-trip
  std::string group;     // alone | with-friends | with-family | with-others
  std::string trip_type; // business-trip | holiday-trip | other-trip
};

bool valid_context_value(const std::string& value);
void validate_context(const ContextSpec& ctx);

struct UserRecord {
  std::string id;
  std::vector<CheckIn> history;
  std::optional<ContextSpec> context;
};

// Ordered by id; ordered maps keep every downstream artifact deterministic.
class VenueStore {
 public:
  void add(VenueRecord v);
  const VenueRecord* find(const std::string& id) const;
  const VenueRecord& at(const std::string& id) const;
  const std::map<std::string, VenueRecord>& all() const { return venues_; }
  std::size_t size() const { return venues_.size(); }

 private:
  std::map<std::string, VenueRecord> venues_;
};

using FrequencyMap = std::map<std::string, double>;

// User-level normalized frequencies over categories, keywords and tags.
// Numerators count item occurrences in positively (negatively) rated
// history venues; the shared denominator counts occurrences across the
// whole history, so neutral check-ins dilute without contributing mass.
struct UserProfiles {
  FrequencyMap pos_cat, neg_cat;
  FrequencyMap pos_key, neg_key;
  FrequencyMap pos_tag, neg_tag;
  FrequencyMap pos_boost, neg_boost;  // filled by boosting
};

UserProfiles build_profiles(const UserRecord& user, const VenueStore& venues,
                            RatingScale scale);

}  // namespace poirec
