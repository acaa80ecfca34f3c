#include "poirec/domain.hpp"

#include <algorithm>
#include <array>
#include <cctype>

namespace poirec {

Polarity rating_polarity(int rating, RatingScale scale) {
  switch (scale) {
    case RatingScale::FiveStar:
      if (rating < 1 || rating > 5)
        throw DataError("rating " + std::to_string(rating) + " outside 1..5 scale");
      if (rating >= 4) return Polarity::Positive;
      if (rating == 3) return Polarity::Neutral;
      return Polarity::Negative;
    case RatingScale::Graded:
      if (rating < -2 || rating > 2)
        throw DataError("rating " + std::to_string(rating) + " outside -2..+2 scale");
      if (rating > 0) return Polarity::Positive;
      if (rating == 0) return Polarity::Neutral;
      return Polarity::Negative;
  }
  throw DataError("unknown rating scale");
}

namespace {

std::string normalize(const std::string& s, char joiner) {
  std::string out;
  out.reserve(s.size());
  bool in_gap = false;
  for (unsigned char c : s) {
    if (std::isspace(c)) {
      in_gap = !out.empty();
      continue;
    }
    if (in_gap) {
      out.push_back(joiner);
      in_gap = false;
    }
    out.push_back(static_cast<char>(std::tolower(c)));
  }
  return out;
}

}  // namespace

std::string normalize_keyword(const std::string& s) { return normalize(s, '-'); }
std::string normalize_category(const std::string& s) { return normalize(s, ' '); }

bool valid_context_value(const std::string& value) {
  static const std::array<const char*, 11> kValues = {
      "day-trip",  "night-trip",   "weekend-trip", "longer-trip",
      "alone",     "with-friends", "with-family",  "with-others",
      "business-trip", "holiday-trip", "other-trip"};
  return std::find(kValues.begin(), kValues.end(), value) != kValues.end();
}

void validate_context(const ContextSpec& ctx) {
  auto check = [](const std::string& v, const char* field,
                  std::initializer_list<const char*> allowed) {
    for (const char* a : allowed)
      if (v == a) return;
    throw DataError(std::string("context ") + field + " has unknown value '" + v + "'");
  };
  check(ctx.duration, "duration", {"day-trip", "night-trip", "weekend-trip", "longer-trip"});
  check(ctx.group, "group", {"alone", "with-friends", "with-family", "with-others"});
  check(ctx.trip_type, "trip_type", {"business-trip", "holiday-trip", "other-trip"});
}

void VenueStore::add(VenueRecord v) {
  if (v.id.empty()) throw DataError("venue with empty id");
  auto [it, inserted] = venues_.emplace(v.id, std::move(v));
  if (!inserted) throw DataError("duplicate venue id '" + it->first + "'");
}

const VenueRecord* VenueStore::find(const std::string& id) const {
  auto it = venues_.find(id);
  return it == venues_.end() ? nullptr : &it->second;
}

const VenueRecord& VenueStore::at(const std::string& id) const {
  const VenueRecord* v = find(id);
  if (!v) throw DataError("unknown venue id '" + id + "'");
  return *v;
}

namespace {

struct Tally {
  std::map<std::string, double> pos, neg;
  double total = 0.0;

  void count(const std::vector<std::string>& items, Polarity pol) {
    total += static_cast<double>(items.size());
    if (pol == Polarity::Neutral) return;
    auto& side = pol == Polarity::Positive ? pos : neg;
    for (const auto& x : items) side[x] += 1.0;
  }

  void store(FrequencyMap& out_pos, FrequencyMap& out_neg) const {
    if (total <= 0.0) return;
    for (const auto& [k, n] : pos) out_pos[k] = n / total;
    for (const auto& [k, n] : neg) out_neg[k] = n / total;
  }
};

}  // namespace

UserProfiles build_profiles(const UserRecord& user, const VenueStore& venues,
                            RatingScale scale) {
  UserProfiles p;
  Tally cat, key, tag;
  for (const CheckIn& ci : user.history) {
    const VenueRecord& v = venues.at(ci.venue_id);
    const Polarity pol = rating_polarity(ci.rating, scale);
    cat.count(v.categories, pol);
    key.count(v.keywords, pol);
    tag.count(ci.tags, pol);
  }
  cat.store(p.pos_cat, p.neg_cat);
  key.store(p.pos_key, p.neg_key);
  tag.store(p.pos_tag, p.neg_tag);
  return p;
}

}  // namespace poirec
