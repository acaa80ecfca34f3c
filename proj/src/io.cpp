#include "poirec/io.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace poirec {

using nlohmann::json;

namespace {

std::vector<std::string> normalize_dedup(const std::vector<std::string>& raw,
                                         std::string (*normalizer)(const std::string&)) {
  std::vector<std::string> out;
  std::set<std::string> seen;
  for (const auto& s : raw) {
    std::string n = normalizer(s);
    if (n.empty() || !seen.insert(n).second) continue;
    out.push_back(std::move(n));
  }
  return out;
}

// Applies fn to each nonempty line; errors are rethrown with file:line.
template <typename Fn>
void for_each_line(const std::string& path, Fn fn) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path + "'");
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      fn(line);
    } catch (const json::exception& e) {
      throw DataError(path + ":" + std::to_string(line_no) + ": " + e.what());
    } catch (const DataError& e) {
      throw DataError(path + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
}

std::vector<std::string> string_list(const json& j, const char* field) {
  std::vector<std::string> out;
  if (!j.contains(field)) return out;
  for (const auto& x : j.at(field)) out.push_back(x.get<std::string>());
  return out;
}

ContextSpec context_from_json(const json& j) {
  ContextSpec ctx;
  ctx.duration = j.value("duration", "");
  ctx.group = j.value("group", "");
  ctx.trip_type = j.value("type", "");
  validate_context(ctx);
  return ctx;
}

}  // namespace

VenueStore load_venues(const std::string& path) {
  VenueStore store;
  for_each_line(path, [&](const std::string& line) {
    const json j = json::parse(line);
    VenueRecord v;
    v.id = j.at("id").get<std::string>();
    v.city = j.value("city", "");
    v.name = j.value("name", "");
    v.categories = normalize_dedup(string_list(j, "categories"), normalize_category);
    v.keywords = normalize_dedup(string_list(j, "keywords"), normalize_keyword);
    if (j.contains("reviews")) {
      for (const auto& r : j.at("reviews")) {
        Review review;
        review.rating = r.at("rating").get<int>();
        if (review.rating < 1 || review.rating > 5)
          throw DataError("review rating " + std::to_string(review.rating) + " outside 1..5");
        review.text = r.value("text", "");
        v.reviews.push_back(std::move(review));
      }
    }
    store.add(std::move(v));
  });
  return store;
}

std::vector<UserRecord> load_users(const std::string& path) {
  std::vector<UserRecord> users;
  std::set<std::string> ids;
  for_each_line(path, [&](const std::string& line) {
    const json j = json::parse(line);
    UserRecord u;
    u.id = j.at("id").get<std::string>();
    if (u.id.empty() || !ids.insert(u.id).second)
      throw DataError("empty or duplicate user id '" + u.id + "'");
    if (j.contains("history")) {
      for (const auto& h : j.at("history")) {
        CheckIn ci;
        ci.venue_id = h.at("venue_id").get<std::string>();
        ci.rating = h.at("rating").get<int>();
        ci.tags = normalize_dedup(string_list(h, "tags"), normalize_keyword);
        u.history.push_back(std::move(ci));
      }
    }
    if (j.contains("context") && !j.at("context").is_null())
      u.context = context_from_json(j.at("context"));
    users.push_back(std::move(u));
  });
  return users;
}

std::map<std::string, std::vector<std::string>> load_candidates(const std::string& path) {
  std::map<std::string, std::vector<std::string>> out;
  for_each_line(path, [&](const std::string& line) {
    const json j = json::parse(line);
    const std::string user_id = j.at("user_id").get<std::string>();
    if (out.count(user_id)) throw DataError("duplicate candidate list for user '" + user_id + "'");
    out[user_id] = string_list(j, "venue_ids");
  });
  return out;
}

Judgments load_qrels(const std::string& path, std::optional<JudgmentScale> scale) {
  struct Row {
    std::string user, venue;
    int rel;
  };
  std::vector<Row> rows;
  bool graded = false;
  for_each_line(path, [&](const std::string& line) {
    std::istringstream ss(line);
    Row r;
    std::string zero;
    if (!(ss >> r.user >> zero >> r.venue >> r.rel))
      throw DataError("expected 'user_id 0 venue_id relevance'");
    if (r.rel < 0 || r.rel > 1) graded = true;
    rows.push_back(std::move(r));
  });

  Judgments judgments(scale.value_or(graded ? JudgmentScale::Graded : JudgmentScale::Binary));
  for (const auto& r : rows) judgments.add(r.user, r.venue, r.rel);
  return judgments;
}

std::vector<AppropriatenessExample> load_appropriateness(const std::string& path) {
  std::vector<AppropriatenessExample> out;
  for_each_line(path, [&](const std::string& line) {
    const json j = json::parse(line);
    AppropriatenessExample ex;
    ex.categories = normalize_dedup(string_list(j, "categories"), normalize_category);
    ex.context = context_from_json(j.at("context"));
    const std::string label = j.at("label").get<std::string>();
    if (label == "appropriate")
      ex.appropriate = true;
    else if (label == "inappropriate")
      ex.appropriate = false;
    else
      throw DataError("label must be appropriate|inappropriate, got '" + label + "'");
    out.push_back(std::move(ex));
  });
  return out;
}

std::string IntegrityReport::to_json() const {
  json j{{"venues", venue_count},
         {"users", user_count},
         {"checkins", checkin_count},
         {"candidate_users", candidate_user_count},
         {"candidates", candidate_count},
         {"judgments", judgment_count},
         {"context_features", context_feature_count},
         {"appropriateness_examples", appropriateness_count},
         {"dangling_references", dangling_references}};
  return j.dump(2);
}

Dataset ingest(const IngestPaths& paths, std::optional<JudgmentScale> scale) {
  Dataset ds;
  ds.venues = load_venues(paths.venues);
  ds.users = load_users(paths.users);
  if (!paths.candidates.empty()) ds.candidates = load_candidates(paths.candidates);
  if (!paths.qrels.empty()) {
    ds.judgments = load_qrels(paths.qrels, scale);
    ds.has_judgments = true;
  }
  if (!paths.context_table.empty()) ds.context_table = load_feature_table(paths.context_table);
  if (!paths.appropriateness.empty())
    ds.appropriateness = load_appropriateness(paths.appropriateness);

  IntegrityReport& report = ds.report;
  report.venue_count = ds.venues.size();
  report.user_count = ds.users.size();
  report.context_feature_count = ds.context_table.size();
  report.appropriateness_count = ds.appropriateness.size();

  for (auto& user : ds.users) {
    std::vector<CheckIn> kept;
    for (auto& ci : user.history) {
      if (ds.venues.find(ci.venue_id)) {
        kept.push_back(std::move(ci));
      } else {
        report.dangling_references.push_back("user " + user.id + " -> venue " + ci.venue_id);
      }
    }
    user.history = std::move(kept);
    report.checkin_count += user.history.size();
  }

  for (auto& [user_id, venue_ids] : ds.candidates) {
    std::vector<std::string> kept;
    for (auto& vid : venue_ids) {
      if (ds.venues.find(vid)) {
        kept.push_back(std::move(vid));
      } else {
        report.dangling_references.push_back("candidates " + user_id + " -> venue " + vid);
      }
    }
    venue_ids = std::move(kept);
    report.candidate_count += venue_ids.size();
  }
  report.candidate_user_count = ds.candidates.size();
  if (ds.has_judgments)
    for (const auto& [_, per_user] : ds.judgments.by_user())
      report.judgment_count += per_user.size();
  return ds;
}

namespace {

constexpr int kFormatVersion = 1;

json check_header(const std::string& path, const std::string& format) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw DataError(path + ": " + e.what());
  }
  if (j.value("format", "") != format)
    throw DataError(path + ": expected format '" + format + "'");
  if (j.value("version", 0) != kFormatVersion)
    throw DataError(path + ": unsupported version");
  return j;
}

void write_json(const json& j, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write '" + path + "'");
  out << j.dump(2) << "\n";
}

}  // namespace

void save_alignment_models(const std::map<std::string, AlignmentModel>& models,
                           const std::string& path) {
  json all{{"format", "poirec-alignment"}, {"version", kFormatVersion}};
  json entries = json::object();
  for (const auto& [user_id, model] : models) {
    json translation = json::array();
    for (const auto& [tag, row] : model.translation_table())
      for (const auto& [kw, p] : row) translation.push_back(json::array({tag, kw, p}));
    json position = json::array();
    for (const auto& [len, probs] : model.position_table())
      for (std::size_t i = 0; i < probs.size(); ++i)
        position.push_back(json::array({static_cast<int>(i), len, probs[i]}));
    json tag_prior = json::array();
    for (const auto& [tag, p] : model.tag_prior_table())
      tag_prior.push_back(json::array({tag, p}));
    json len_tags = json::array();
    for (const auto& [len, p] : model.tag_length_prior())
      len_tags.push_back(json::array({len, p}));
    json len_keywords = json::array();
    for (const auto& [len, p] : model.keyword_length_prior())
      len_keywords.push_back(json::array({len, p}));
    entries[user_id] = json{{"translation", std::move(translation)},
                            {"position", std::move(position)},
                            {"tag_prior", std::move(tag_prior)},
                            {"length_tags", std::move(len_tags)},
                            {"length_keywords", std::move(len_keywords)}};
  }
  all["models"] = std::move(entries);
  write_json(all, path);
}

std::map<std::string, AlignmentModel> load_alignment_models(const std::string& path) {
  const json all = check_header(path, "poirec-alignment");
  std::map<std::string, AlignmentModel> models;
  for (const auto& [user_id, entry] : all.at("models").items()) {
    AlignmentModel model;
    std::map<std::string, std::map<std::string, double>> translation;
    for (const auto& row : entry.at("translation"))
      translation[row.at(0).get<std::string>()][row.at(1).get<std::string>()] =
          row.at(2).get<double>();
    model.set_translation(std::move(translation));

    std::map<int, std::vector<double>> position;
    for (const auto& row : entry.at("position")) {
      const int i = row.at(0).get<int>();
      const int len = row.at(1).get<int>();
      auto& probs = position[len];
      if (probs.size() <= static_cast<std::size_t>(i))
        probs.resize(static_cast<std::size_t>(i) + 1, 0.0);
      probs[static_cast<std::size_t>(i)] = row.at(2).get<double>();
    }
    model.set_position(std::move(position));

    std::map<std::string, double> tag_prior;
    for (const auto& row : entry.at("tag_prior"))
      tag_prior[row.at(0).get<std::string>()] = row.at(1).get<double>();
    model.set_tag_priors(std::move(tag_prior));

    std::map<int, double> len_tags, len_keywords;
    for (const auto& row : entry.at("length_tags"))
      len_tags[row.at(0).get<int>()] = row.at(1).get<double>();
    for (const auto& row : entry.at("length_keywords"))
      len_keywords[row.at(0).get<int>()] = row.at(1).get<double>();
    model.set_length_priors(std::move(len_tags), std::move(len_keywords));

    models.emplace(user_id, std::move(model));
  }
  return models;
}

void save_tagger_models(const std::map<std::string, TaggerModel>& models,
                        const std::string& path) {
  json all{{"format", "poirec-tagger"}, {"version", kFormatVersion}};
  json entries = json::object();
  for (const auto& [key, model] : models) {
    std::vector<std::string> vocab(model.vocabulary.size());
    for (const auto& [tok, idx] : model.vocabulary)
      vocab[static_cast<std::size_t>(idx)] = tok;
    entries[key] = json{{"kind", model.kind == TaggerKind::Maxent ? "maxent" : "linear-svm-ovr"},
                        {"labels", model.labels},
                        {"vocabulary", vocab},
                        {"weights", model.weights}};
  }
  all["models"] = std::move(entries);
  write_json(all, path);
}

std::map<std::string, TaggerModel> load_tagger_models(const std::string& path) {
  const json all = check_header(path, "poirec-tagger");
  std::map<std::string, TaggerModel> models;
  for (const auto& [key, entry] : all.at("models").items()) {
    TaggerModel model;
    const std::string kind = entry.at("kind").get<std::string>();
    if (kind == "maxent")
      model.kind = TaggerKind::Maxent;
    else if (kind == "linear-svm-ovr")
      model.kind = TaggerKind::LinearSvmOvr;
    else
      throw DataError(path + ": unknown tagger kind '" + kind + "'");
    model.labels = entry.at("labels").get<std::vector<std::string>>();
    const auto vocab = entry.at("vocabulary").get<std::vector<std::string>>();
    for (std::size_t i = 0; i < vocab.size(); ++i)
      model.vocabulary[vocab[i]] = static_cast<int>(i);
    model.weights = entry.at("weights").get<std::vector<std::vector<double>>>();
    models.emplace(key, std::move(model));
  }
  return models;
}

void save_boosted_profiles(const std::map<std::string, BoostedProfile>& profiles,
                           const std::string& path) {
  json all{{"format", "poirec-boosted"}, {"version", kFormatVersion}};
  json entries = json::object();
  for (const auto& [user_id, profile] : profiles) {
    entries[user_id] =
        json{{"keywords", std::vector<std::string>(profile.keywords.begin(),
                                                   profile.keywords.end())},
             {"pos", profile.pos},
             {"neg", profile.neg}};
  }
  all["profiles"] = std::move(entries);
  write_json(all, path);
}

std::map<std::string, BoostedProfile> load_boosted_profiles(const std::string& path) {
  const json all = check_header(path, "poirec-boosted");
  std::map<std::string, BoostedProfile> profiles;
  for (const auto& [user_id, entry] : all.at("profiles").items()) {
    BoostedProfile p;
    p.user_id = user_id;
    for (const auto& kw : entry.at("keywords")) p.keywords.insert(kw.get<std::string>());
    p.pos = entry.at("pos").get<FrequencyMap>();
    p.neg = entry.at("neg").get<FrequencyMap>();
    profiles.emplace(user_id, std::move(p));
  }
  return profiles;
}

void save_ranking_model(const RankingModel& model, const std::string& path) {
  json j{{"format", "poirec-ranker"},
         {"version", kFormatVersion},
         {"kind", ltr_kind_name(model.kind)},
         {"columns", model.columns},
         {"weights", model.weights},
         {"bias", model.bias},
         {"feature_shift", model.feature_shift},
         {"feature_scale", model.feature_scale},
         {"seed", model.seed},
         {"epochs", model.epochs},
         {"learning_rate", model.learning_rate}};
  write_json(j, path);
}

RankingModel load_ranking_model(const std::string& path) {
  const json j = check_header(path, "poirec-ranker");
  RankingModel model;
  model.kind = ltr_kind_from_name(j.at("kind").get<std::string>());
  model.columns = j.at("columns").get<std::vector<std::string>>();
  model.weights = j.at("weights").get<std::vector<double>>();
  model.bias = j.at("bias").get<double>();
  model.feature_shift = j.at("feature_shift").get<std::vector<double>>();
  model.feature_scale = j.at("feature_scale").get<std::vector<double>>();
  model.seed = j.at("seed").get<std::uint64_t>();
  model.epochs = j.at("epochs").get<int>();
  model.learning_rate = j.at("learning_rate").get<double>();
  return model;
}

void save_review_models(const std::map<std::string, ReviewClassifier>& models,
                        const std::string& path) {
  json all{{"format", "poirec-review"}, {"version", kFormatVersion}};
  json entries = json::object();
  for (const auto& [user_id, m] : models) {
    if (!m.available) {
      entries[user_id] = json{{"available", false}};
      continue;
    }
    std::vector<std::string> vocab(m.vectorizer.vocabulary().size());
    for (const auto& [tok, idx] : m.vectorizer.vocabulary())
      vocab[static_cast<std::size_t>(idx)] = tok;
    entries[user_id] = json{{"available", true},
                            {"vocabulary", vocab},
                            {"idf", m.vectorizer.idf()},
                            {"weights", m.model.weights}};
  }
  all["models"] = std::move(entries);
  write_json(all, path);
}

std::map<std::string, ReviewClassifier> load_review_models(const std::string& path) {
  const json all = check_header(path, "poirec-review");
  std::map<std::string, ReviewClassifier> models;
  for (const auto& [user_id, entry] : all.at("models").items()) {
    ReviewClassifier m;
    m.available = entry.at("available").get<bool>();
    if (m.available) {
      const auto vocab = entry.at("vocabulary").get<std::vector<std::string>>();
      std::map<std::string, int> vocab_map;
      for (std::size_t i = 0; i < vocab.size(); ++i)
        vocab_map[vocab[i]] = static_cast<int>(i);
      m.vectorizer.set_state(std::move(vocab_map), entry.at("idf").get<std::vector<double>>());
      m.model.weights = entry.at("weights").get<std::vector<double>>();
    }
    models.emplace(user_id, std::move(m));
  }
  return models;
}

void save_scores(const std::vector<ScoredCandidate>& rows, const std::string& run_columns,
                 const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write '" + path + "'");
  out << json{{"format", "poirec-scores"}, {"version", kFormatVersion},
              {"columns", run_columns}}
             .dump()
      << "\n";
  for (const auto& row : rows) {
    const ScoreVector& s = row.scores;
    out << json{{"user_id", row.user_id},
                {"venue_id", row.venue_id},
                {"s_cat", s.s_cat},
                {"s_rev", s.s_rev},
                {"s_key", s.s_key},
                {"s_fourth", s.s_fourth},
                {"s_cxt", s.s_cxt},
                {"flags",
                 json{{"cat", s.has_cat},
                      {"rev", s.has_rev},
                      {"key", s.has_key},
                      {"fourth", s.has_fourth},
                      {"cxt", s.has_cxt}}}}
               .dump()
        << "\n";
  }
}

std::vector<ScoredCandidate> load_scores(const std::string& path, std::string* columns) {
  std::vector<ScoredCandidate> rows;
  bool first = true;
  for_each_line(path, [&](const std::string& line) {
    const json j = json::parse(line);
    if (first) {
      first = false;
      if (j.value("format", "") != "poirec-scores")
        throw DataError("expected poirec-scores header");
      if (columns) *columns = j.value("columns", "");
      return;
    }
    ScoredCandidate row;
    row.user_id = j.at("user_id").get<std::string>();
    row.venue_id = j.at("venue_id").get<std::string>();
    ScoreVector& s = row.scores;
    s.s_cat = j.at("s_cat").get<double>();
    s.s_rev = j.at("s_rev").get<double>();
    s.s_key = j.at("s_key").get<double>();
    s.s_fourth = j.at("s_fourth").get<double>();
    s.s_cxt = j.at("s_cxt").get<double>();
    const json& flags = j.at("flags");
    s.has_cat = flags.at("cat").get<bool>();
    s.has_rev = flags.at("rev").get<bool>();
    s.has_key = flags.at("key").get<bool>();
    s.has_fourth = flags.at("fourth").get<bool>();
    s.has_cxt = flags.at("cxt").get<bool>();
    rows.push_back(std::move(row));
  });
  return rows;
}

void write_run_file(const std::map<std::string, RankedList>& runs, const std::string& run_tag,
                    const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write '" + path + "'");
  char score_buf[64];
  for (const auto& [user_id, list] : runs) {
    int rank = 1;
    for (const auto& item : list) {
      std::snprintf(score_buf, sizeof(score_buf), "%.6f", item.score);
      out << user_id << " Q0 " << item.venue_id << " " << rank++ << " " << score_buf << " "
          << run_tag << "\n";
    }
  }
}

std::map<std::string, RankedList> read_run_file(const std::string& path) {
  std::map<std::string, RankedList> runs;
  for_each_line(path, [&](const std::string& line) {
    std::istringstream ss(line);
    std::string user, q0, venue, tag;
    int rank;
    double score;
    if (!(ss >> user >> q0 >> venue >> rank >> score >> tag))
      throw DataError("expected 'user_id Q0 venue_id rank score run_tag'");
    runs[user].push_back({venue, score});
  });
  return runs;
}

}  // namespace poirec
