#include "poirec/pipeline.hpp"

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace poirec {

using nlohmann::json;

namespace {

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r");
  std::size_t b = s.find_last_not_of(" \t\r");
  return a == std::string::npos ? "" : s.substr(a, b - a + 1);
}

}  // namespace

std::map<std::string, std::string> load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open config '" + path + "'");
  std::map<std::string, std::string> kv;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw DataError(path + ":" + std::to_string(line_no) + ": expected key = value");
    kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return kv;
}

void apply_config_entry(PipelineConfig& cfg, const std::string& key, const std::string& value) {
  auto as_bool = [&](const std::string& v) {
    if (v == "on" || v == "true" || v == "1") return true;
    if (v == "off" || v == "false" || v == "0") return false;
    throw DataError("config '" + key + "' expects on/off, got '" + v + "'");
  };
  try {
    if (key == "venues") cfg.venues = value;
    else if (key == "users") cfg.users = value;
    else if (key == "candidates") cfg.candidates = value;
    else if (key == "qrels") cfg.qrels = value;
    else if (key == "context-table") cfg.context_table = value;
    else if (key == "appropriateness") cfg.appropriateness = value;
    else if (key == "out-dir") cfg.out_dir = value;
    else if (key == "judgment-scale") cfg.judgment_scale = value;
    else if (key == "model") cfg.model = value;
    else if (key == "ltr") cfg.ltr = value;
    else if (key == "context-mode") cfg.context_mode = value;
    else if (key == "lambda") cfg.lambda = std::stod(value);
    else if (key == "seed") cfg.seed = std::stoull(value);
    else if (key == "em-iters") cfg.em_iters = std::stoi(value);
    else if (key == "em-tol") cfg.em_tol = std::stod(value);
    else if (key == "theta-ml") cfg.theta_ml = std::stod(value);
    else if (key == "i-max") cfg.i_max = std::stoi(value);
    else if (key == "linearcatrev-alpha") cfg.linearcatrev_alpha = std::stod(value);
    else if (key == "tagger-scope") cfg.tagger_scope = value;
    else if (key == "tagger-reg") cfg.tagger_reg = std::stod(value);
    else if (key == "tagger-epochs") cfg.tagger_epochs = std::stoi(value);
    else if (key == "review-reg") cfg.review_reg = std::stod(value);
    else if (key == "review-epochs") cfg.review_epochs = std::stoi(value);
    else if (key == "context-reg") cfg.context_reg = std::stod(value);
    else if (key == "context-epochs") cfg.context_epochs = std::stoi(value);
    else if (key == "ltr-lr") cfg.ltr_lr = std::stod(value);
    else if (key == "ltr-epochs") cfg.ltr_epochs = std::stoi(value);
    else if (key == "ltr-restarts") cfg.ltr_restarts = std::stoi(value);
    else if (key == "ascent-metric") cfg.ascent_metric = value;
    else if (key == "folds") cfg.folds = std::stoi(value);
    else if (key == "max-reviews") cfg.max_reviews = std::stoi(value);
    else if (key == "history-limit") cfg.history_limit = std::stoi(value);
    else if (key == "history-order") cfg.history_order = value;
    else if (key == "keywords-source") cfg.use_keywords = as_bool(value);
    else if (key == "reviews-source") cfg.use_reviews = as_bool(value);
    else if (key == "run-tag") cfg.run_tag = value;
    else if (key == "score-ablate") {
      cfg.ablate_scores.clear();
      std::istringstream ss(value);
      std::string col;
      while (std::getline(ss, col, ',')) {
        col = trim(col);
        for (auto& c : col) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        if (!col.empty()) cfg.ablate_scores.insert(col);
      }
    } else {
      throw DataError("unknown config key '" + key + "'");
    }
  } catch (const std::invalid_argument&) {
    throw DataError("config '" + key + "' has non-numeric value '" + value + "'");
  } catch (const std::out_of_range&) {
    throw DataError("config '" + key + "' value out of range: '" + value + "'");
  }
}

PipelineConfig config_from_map(const std::map<std::string, std::string>& kv) {
  PipelineConfig cfg;
  for (const auto& [k, v] : kv) apply_config_entry(cfg, k, v);
  return cfg;
}

namespace {

RatingScale detect_history_scale(const std::vector<UserRecord>& users) {
  for (const auto& u : users)
    for (const auto& ci : u.history)
      if (ci.rating <= 0) return RatingScale::Graded;
  return RatingScale::FiveStar;
}

// History reordering: `sequential` groups check-ins into one
// block per city (cities in first-appearance order), `interleaved`
// alternates the city blocks.
void reorder_history(UserRecord& user, const VenueStore& venues, const std::string& order) {
  if (order == "as-ingested") return;
  std::vector<std::string> city_order;
  std::map<std::string, std::vector<CheckIn>> blocks;
  for (auto& ci : user.history) {
    const std::string& city = venues.at(ci.venue_id).city;
    if (!blocks.count(city)) city_order.push_back(city);
    blocks[city].push_back(std::move(ci));
  }
  user.history.clear();
  if (order == "sequential") {
    for (const auto& city : city_order)
      for (auto& ci : blocks[city]) user.history.push_back(std::move(ci));
  } else if (order == "interleaved") {
    for (std::size_t i = 0;; ++i) {
      bool any = false;
      for (const auto& city : city_order) {
        auto& block = blocks[city];
        if (i < block.size()) {
          user.history.push_back(std::move(block[i]));
          any = true;
        }
      }
      if (!any) break;
    }
  } else {
    throw DataError("unknown history-order '" + order + "'");
  }
}

std::vector<AlignmentPair> pairs_for_user(const UserRecord& user, const VenueStore& venues) {
  std::vector<AlignmentPair> pairs;
  for (const CheckIn& ci : user.history) {
    if (ci.tags.empty()) continue;
    const VenueRecord& v = venues.at(ci.venue_id);
    if (v.keywords.empty()) continue;
    pairs.push_back({v.keywords, ci.tags, user.id});
  }
  return pairs;
}

double score_by_column(const ScoreVector& s, const std::string& column) {
  if (column == "s_cat") return s.s_cat;
  if (column == "s_rev") return s.s_rev;
  if (column == "s_key") return s.s_key;
  if (column == "s_cxt") return s.s_cxt;
  return s.s_fourth;
}

json frequency_map_to_json(const FrequencyMap& m) { return json(m); }

}  // namespace

RunMetrics evaluate_rankings(const std::map<std::string, RankedList>& rankings,
                             const Judgments& judgments, int k) {
  RunMetrics metrics;
  if (rankings.empty()) return metrics;
  for (const auto& [user_id, list] : rankings) {
    const double p = precision_at_k(list, judgments, user_id, k);
    const double n = ndcg_at_k(list, judgments, user_id, k);
    metrics.per_user_p5[user_id] = p;
    metrics.per_user_ndcg5[user_id] = n;
    metrics.p_at_5 += p;
    metrics.ndcg_at_5 += n;
  }
  const double n_users = static_cast<double>(rankings.size());
  metrics.p_at_5 /= n_users;
  metrics.ndcg_at_5 /= n_users;
  metrics.mrr = mrr(rankings, judgments);
  return metrics;
}

RunResult run_pipeline(const PipelineConfig& cfg) {
  const ModelRow row = model_row_from_name(cfg.model);
  std::filesystem::create_directories(cfg.out_dir);

  // --- stage 1: ingest ---
  IngestPaths paths;
  paths.venues = cfg.venues;
  paths.users = cfg.users;
  paths.candidates = cfg.candidates;
  paths.qrels = cfg.qrels;
  paths.context_table = cfg.context_table;
  paths.appropriateness = cfg.appropriateness;
  std::optional<JudgmentScale> forced_scale;
  if (cfg.judgment_scale == "binary") forced_scale = JudgmentScale::Binary;
  else if (cfg.judgment_scale == "graded") forced_scale = JudgmentScale::Graded;
  else if (!cfg.judgment_scale.empty())
    throw DataError("judgment-scale must be binary or graded");

  Dataset ds = ingest(paths, forced_scale);
  {
    std::ofstream out(cfg.out_dir + "/ingest_report.json");
    out << ds.report.to_json() << "\n";
  }

  // source toggles
  if (!cfg.use_keywords || !cfg.use_reviews) {
    VenueStore filtered;
    for (const auto& [id, v] : ds.venues.all()) {
      VenueRecord copy = v;
      if (!cfg.use_keywords) copy.keywords.clear();
      if (!cfg.use_reviews) copy.reviews.clear();
      filtered.add(std::move(copy));
    }
    ds.venues = std::move(filtered);
  }

  // history ordering and limit
  for (auto& user : ds.users) {
    reorder_history(user, ds.venues, cfg.history_order);
    if (cfg.history_limit > 0 &&
        user.history.size() > static_cast<std::size_t>(cfg.history_limit))
      user.history.resize(static_cast<std::size_t>(cfg.history_limit));
  }

  const RatingScale scale = detect_history_scale(ds.users);

  // --- stage 2: profiles ---
  std::map<std::string, UserProfiles> profiles;
  for (const auto& user : ds.users) profiles[user.id] = build_profiles(user, ds.venues, scale);

  // --- stage 3: per-user alignment ---
  std::map<std::string, AlignmentModel> alignment;
  const bool needs_alignment =
      row == ModelRow::PKBoosting || row == ModelRow::UTML || row == ModelRow::UTCRF ||
      row == ModelRow::UTSVM;
  if (needs_alignment) {
    for (const auto& user : ds.users) {
      const auto pairs = pairs_for_user(user, ds.venues);
      if (pairs.empty()) continue;
      alignment.emplace(user.id, em_train(pairs, cfg.em_iters, cfg.em_tol).model);
    }
    save_alignment_models(alignment, cfg.out_dir + "/alignment.json");
  }

  // --- stage 4: fourth-score artifact ---
  std::map<std::string, BoostedProfile> boosted;
  std::map<std::string, TaggerModel> taggers;
  if (row == ModelRow::PKBoosting) {
    for (const auto& user : ds.users) {
      auto it = alignment.find(user.id);
      if (it == alignment.end()) continue;
      BoostedProfile p = boost_keywords(user, it->second, ds.venues, scale);
      profiles[user.id].pos_boost = p.pos;
      profiles[user.id].neg_boost = p.neg;
      boosted.emplace(user.id, std::move(p));
    }
    save_boosted_profiles(boosted, cfg.out_dir + "/boosted.json");
  } else if (row == ModelRow::PKPCA) {
    for (const auto& user : ds.users) {
      BoostedProfile p = pca_keyword_profile(user, ds.venues, scale);
      profiles[user.id].pos_boost = p.pos;
      profiles[user.id].neg_boost = p.neg;
      boosted.emplace(user.id, std::move(p));
    }
    save_boosted_profiles(boosted, cfg.out_dir + "/boosted.json");
  } else if (row == ModelRow::UTCRF || row == ModelRow::UTSVM) {
    const TaggerKind kind = row == ModelRow::UTCRF ? TaggerKind::Maxent : TaggerKind::LinearSvmOvr;
    if (cfg.tagger_scope == "pooled") {
      std::vector<LabeledSequence> pooled;
      for (const auto& user : ds.users) {
        auto it = alignment.find(user.id);
        if (it == alignment.end()) continue;
        auto seqs = derive_labeled_sequences(user, it->second, ds.venues);
        pooled.insert(pooled.end(), std::make_move_iterator(seqs.begin()),
                      std::make_move_iterator(seqs.end()));
      }
      if (!pooled.empty())
        taggers.emplace("_pooled", train_tagger(pooled, kind, cfg.tagger_reg,
                                                cfg.tagger_epochs, cfg.seed));
    } else if (cfg.tagger_scope == "per-user") {
      for (const auto& user : ds.users) {
        auto it = alignment.find(user.id);
        if (it == alignment.end()) continue;
        const auto seqs = derive_labeled_sequences(user, it->second, ds.venues);
        if (seqs.empty()) continue;
        taggers.emplace(user.id, train_tagger(seqs, kind, cfg.tagger_reg, cfg.tagger_epochs,
                                              cfg.seed));
      }
    } else {
      throw DataError("tagger-scope must be per-user or pooled");
    }
    save_tagger_models(taggers, cfg.out_dir + "/taggers.json");
  }

  // serialized profile store (boost columns included)
  {
    json store{{"format", "poirec-profiles"}, {"version", 1}};
    json entries = json::object();
    for (const auto& [user_id, p] : profiles)
      entries[user_id] = json{{"pos_cat", frequency_map_to_json(p.pos_cat)},
                              {"neg_cat", frequency_map_to_json(p.neg_cat)},
                              {"pos_key", frequency_map_to_json(p.pos_key)},
                              {"neg_key", frequency_map_to_json(p.neg_key)},
                              {"pos_tag", frequency_map_to_json(p.pos_tag)},
                              {"neg_tag", frequency_map_to_json(p.neg_tag)},
                              {"pos_boost", frequency_map_to_json(p.pos_boost)},
                              {"neg_boost", frequency_map_to_json(p.neg_boost)}};
    store["profiles"] = std::move(entries);
    std::ofstream out(cfg.out_dir + "/profiles.json");
    out << store.dump(2) << "\n";
  }

  // --- stage 5: review classifiers ---
  std::map<std::string, ReviewClassifier> reviews;
  if (cfg.use_reviews) {
    HingeParams params{cfg.review_reg, cfg.review_epochs, cfg.seed};
    for (const auto& user : ds.users)
      reviews.emplace(user.id, train_review_classifier(user, ds.venues, scale, params));
  }

  // --- stage 6: contextual appropriateness ---
  AppropriatenessModel context_model;
  bool has_context_model = false;
  if (!ds.appropriateness.empty() && ds.context_table.size() > 0) {
    context_model = train_appropriateness(ds.appropriateness, ds.context_table,
                                          HingeParams{cfg.context_reg, cfg.context_epochs,
                                                      cfg.seed});
    has_context_model = true;
  }

  // --- stage 7: scoring ---
  std::vector<ScoredCandidate> rows;
  for (const auto& user : ds.users) {
    auto cand = ds.candidates.find(user.id);
    if (cand == ds.candidates.end()) continue;

    CandidateScorer scorer;
    scorer.row = row;
    scorer.profiles = &profiles.at(user.id);
    auto bit = boosted.find(user.id);
    scorer.boosted = bit == boosted.end() ? nullptr : &bit->second;
    auto ait = alignment.find(user.id);
    scorer.alignment = ait == alignment.end() ? nullptr : &ait->second;
    const std::string tagger_key = cfg.tagger_scope == "pooled" ? "_pooled" : user.id;
    auto tit = taggers.find(tagger_key);
    scorer.tagger = tit == taggers.end() ? nullptr : &tit->second;
    auto rit = reviews.find(user.id);
    scorer.review = rit == reviews.end() ? nullptr : &rit->second;
    if (has_context_model && user.context) {
      scorer.context_model = &context_model;
      scorer.context_table = &ds.context_table;
      scorer.context = &*user.context;
    }
    scorer.theta_ml = cfg.theta_ml;
    scorer.i_max = cfg.i_max;
    scorer.max_reviews = cfg.max_reviews;

    for (const auto& venue_id : cand->second)
      rows.push_back({user.id, venue_id, scorer.score(ds.venues.at(venue_id))});
  }

  // --- stage 8: fusion columns ---
  std::vector<std::string> columns;
  if (row == ModelRow::LinearCatRev) {
    columns = {"s_cat", "s_rev"};
  } else {
    columns = {"s_cat", "s_rev", "s_key", fourth_score_name(row)};
    if (cfg.context_mode == "fusion" && has_context_model) columns.push_back("s_cxt");
    else if (cfg.context_mode != "fusion" && cfg.context_mode != "rerank")
      throw DataError("context-mode must be fusion or rerank");
  }
  for (const auto& col : cfg.ablate_scores) {
    const auto it = std::find(columns.begin(), columns.end(), col);
    if (it == columns.end())
      throw DataError("score-ablate column '" + col + "' is not part of this model row");
    columns.erase(it);
  }
  if (columns.empty()) throw DataError("score ablation removed every fusion column");

  {
    std::string joined;
    for (const auto& c : columns) joined += (joined.empty() ? "" : ",") + c;
    save_scores(rows, joined, cfg.out_dir + "/scores.jsonl");
  }

  // group rows per user, attach gains/relevance where judgments exist
  std::map<std::string, LtrGroup> groups;
  for (const auto& r : rows) {
    LtrRow lr;
    lr.venue_id = r.venue_id;
    lr.features.reserve(columns.size());
    for (const auto& col : columns) lr.features.push_back(score_by_column(r.scores, col));
    if (ds.has_judgments) {
      lr.gain = ds.judgments.gain(r.user_id, r.venue_id);
      lr.relevant = ds.judgments.is_relevant(r.user_id, r.venue_id);
    }
    groups[r.user_id].push_back(std::move(lr));
  }

  // --- stage 9: learn-to-rank fusion (user-level cross-validation) ---
  RunResult result;
  result.columns = columns;
  std::map<std::string, RankedList> rankings;

  if (groups.empty()) {
    // nothing to rank (empty or fully dangling candidate lists)
  } else if (row == ModelRow::LinearCatRev) {
    RankingModel model;
    model.kind = LtrKind::LinearCatRev;
    model.columns = columns;
    model.weights = {cfg.linearcatrev_alpha, 1.0 - cfg.linearcatrev_alpha};
    model.seed = cfg.seed;
    save_ranking_model(model, cfg.out_dir + "/ranker.json");
    for (const auto& [user_id, group] : groups) rankings[user_id] = rank_candidates(model, group);
  } else if (!ds.has_judgments) {
    // nothing to train on: uniform fusion weights
    RankingModel model;
    model.kind = ltr_kind_from_name(cfg.ltr);
    model.columns = columns;
    model.weights.assign(columns.size(), 1.0 / static_cast<double>(columns.size()));
    model.seed = cfg.seed;
    save_ranking_model(model, cfg.out_dir + "/ranker.json");
    for (const auto& [user_id, group] : groups) rankings[user_id] = rank_candidates(model, group);
  } else {
    std::vector<std::string> group_users;
    for (const auto& [user_id, _] : groups) group_users.push_back(user_id);
    const int folds = std::max(2, std::min(cfg.folds, static_cast<int>(group_users.size())));
    const auto fold_sets = kfold_split(group_users, folds, cfg.seed);

    const LtrKind kind = ltr_kind_from_name(cfg.ltr);
    for (std::size_t fold = 0; fold < fold_sets.size(); ++fold) {
      std::set<std::string> held_out(fold_sets[fold].begin(), fold_sets[fold].end());
      std::vector<LtrGroup> training;
      for (const auto& [user_id, group] : groups)
        if (!held_out.count(user_id)) training.push_back(group);

      LtrTrainOptions opts;
      opts.learning_rate = cfg.ltr_lr;
      opts.epochs = cfg.ltr_epochs;
      opts.restarts = cfg.ltr_restarts;
      opts.seed = cfg.seed + fold;

      RankingModel model;
      switch (kind) {
        case LtrKind::ListNet:
          model = train_listnet(training, columns, opts);
          break;
        case LtrKind::RankNet:
          model = train_ranknet(training, columns, opts);
          break;
        case LtrKind::CoordAscent: {
          AscentMetric metric;
          if (cfg.ascent_metric == "P@5") metric = AscentMetric::PrecisionAt5;
          else if (cfg.ascent_metric == "nDCG@5") metric = AscentMetric::NdcgAt5;
          else throw DataError("ascent-metric must be P@5 or nDCG@5");
          model = coordinate_ascent_train(training, columns, metric, opts);
          break;
        }
        case LtrKind::LinearCatRev:
          throw DataError("ltr must be listnet, ranknet or coord-ascent");
      }
      save_ranking_model(model, cfg.out_dir + "/ranker-fold" + std::to_string(fold) + ".json");

      for (const auto& user_id : fold_sets[fold])
        rankings[user_id] = rank_candidates(model, groups.at(user_id));
    }
  }

  // --- stage 10: context re-ranking mode ---
  if (cfg.context_mode == "rerank" && row != ModelRow::LinearCatRev) {
    std::map<std::string, std::map<std::string, double>> cxt_by_user;
    for (const auto& r : rows) cxt_by_user[r.user_id][r.venue_id] = r.scores.s_cxt;
    for (auto& [user_id, list] : rankings)
      list = rerank_with_context(list, cxt_by_user[user_id], cfg.lambda);
  }

  // --- stage 11: run file + evaluation ---
  result.run_file = cfg.out_dir + "/run.txt";
  write_run_file(rankings, cfg.run_tag, result.run_file);
  result.rankings = std::move(rankings);

  if (ds.has_judgments) {
    result.metrics = evaluate_rankings(result.rankings, ds.judgments, 5);
    result.evaluated = true;
  }
  result.metrics_file = cfg.out_dir + "/metrics.json";
  {
    json m{{"model", cfg.model},
           {"ltr", cfg.ltr},
           {"columns", columns},
           {"users_ranked", result.rankings.size()},
           {"evaluated", result.evaluated}};
    if (result.evaluated) {
      m["P@5"] = result.metrics.p_at_5;
      m["nDCG@5"] = result.metrics.ndcg_at_5;
      m["MRR"] = result.metrics.mrr;
      m["per_user_P@5"] = result.metrics.per_user_p5;
      m["per_user_nDCG@5"] = result.metrics.per_user_ndcg5;
    }
    std::ofstream out(result.metrics_file);
    out << m.dump(2) << "\n";
  }
  return result;
}

std::vector<AblationRow> ablate_scores_experiment(const PipelineConfig& cfg) {
  std::vector<AblationRow> table;
  PipelineConfig base = cfg;
  base.ablate_scores.clear();
  base.out_dir = cfg.out_dir + "/all";
  RunResult full = run_pipeline(base);
  table.push_back({"All", full.metrics});

  for (const auto& col : full.columns) {
    PipelineConfig ablated = base;
    ablated.ablate_scores = {col};
    ablated.out_dir = cfg.out_dir + "/minus-" + col;
    table.push_back({"-" + col, run_pipeline(ablated).metrics});
  }
  return table;
}

std::vector<AblationRow> ablate_sources_experiment(const PipelineConfig& cfg) {
  std::vector<AblationRow> table;
  PipelineConfig base = cfg;
  base.out_dir = cfg.out_dir + "/all";
  table.push_back({"All", run_pipeline(base).metrics});

  PipelineConfig no_keywords = cfg;
  no_keywords.use_keywords = false;
  no_keywords.out_dir = cfg.out_dir + "/no-keywords";
  table.push_back({"-keywords-source", run_pipeline(no_keywords).metrics});

  PipelineConfig no_reviews = cfg;
  no_reviews.use_reviews = false;
  no_reviews.out_dir = cfg.out_dir + "/no-reviews";
  table.push_back({"-reviews-source", run_pipeline(no_reviews).metrics});
  return table;
}

std::vector<AblationRow> history_sweep_experiment(const PipelineConfig& cfg,
                                                  const std::vector<int>& limits) {
  std::vector<AblationRow> table;
  for (int limit : limits) {
    PipelineConfig run = cfg;
    run.history_limit = limit;
    run.out_dir = cfg.out_dir + "/limit-" + std::to_string(limit);
    table.push_back({"history=" + std::to_string(limit), run_pipeline(run).metrics});
  }
  return table;
}

}  // namespace poirec
