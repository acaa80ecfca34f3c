#include <cstdio>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "poirec/io.hpp"
#include "poirec/pipeline.hpp"
#include "poirec/synth.hpp"

using namespace poirec;

namespace {

std::optional<JudgmentScale> parse_scale(const std::string& s) {
  if (s.empty()) return std::nullopt;
  if (s == "binary") return JudgmentScale::Binary;
  if (s == "graded") return JudgmentScale::Graded;
  throw DataError("judgment scale must be binary or graded");
}

PipelineConfig build_config(const std::string& config_path,
                            const std::vector<std::string>& overrides) {
  std::map<std::string, std::string> kv;
  if (!config_path.empty()) kv = load_config_file(config_path);
  for (const auto& o : overrides) {
    const std::size_t eq = o.find('=');
    if (eq == std::string::npos) throw DataError("--set expects key=value, got '" + o + "'");
    kv[o.substr(0, eq)] = o.substr(eq + 1);
  }
  return config_from_map(kv);
}

void print_metrics(const std::string& label, const RunMetrics& m) {
  std::printf("%-24s P@5 %.4f  nDCG@5 %.4f  MRR %.4f\n", label.c_str(), m.p_at_5, m.ndcg_at_5,
              m.mrr);
}

ModelRow row_or_throw(const std::string& name) { return model_row_from_name(name); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"personalized context-aware POI recommendation pipeline"};
  app.require_subcommand(1);

  // --- synth ---
  auto* synth = app.add_subcommand("synth", "generate a planted synthetic dataset");
  SynthSpec synth_spec;
  std::string synth_out = "data";
  synth->add_option("--out-dir", synth_out, "output directory");
  synth->add_option("--users", synth_spec.n_users, "number of users (>= 10)");
  synth->add_option("--venues", synth_spec.n_venues, "number of venues (>= 50)");
  synth->add_option("--seed", synth_spec.seed, "generator seed");
  synth->add_option("--noise", synth_spec.noise, "rating noise sigma");
  synth->add_option("--candidates", synth_spec.n_candidates, "candidates per user");
  synth->add_option("--history-per-city", synth_spec.history_per_city, "check-ins per home city");
  synth->add_option("--appropriateness", synth_spec.n_appropriateness,
                    "annotated context examples");
  synth->add_option("--categories", synth_spec.n_categories, "category vocabulary size");
  synth->add_option("--keywords", synth_spec.n_keywords, "keyword vocabulary size");
  synth->add_option("--tags", synth_spec.n_tags, "tag vocabulary size");
  synth->add_option("--w-cat", synth_spec.w_cat, "category affinity weight");
  synth->add_option("--w-key", synth_spec.w_key, "keyword affinity weight");
  synth->add_option("--w-qual", synth_spec.w_qual, "venue quality affinity weight");
  synth->add_option("--w-style", synth_spec.w_style, "review style affinity weight");

  // --- ingest ---
  auto* ingest_cmd = app.add_subcommand("ingest", "load and validate a dataset");
  IngestPaths ingest_paths;
  std::string ingest_scale, ingest_report;
  ingest_cmd->add_option("--venues", ingest_paths.venues, "venues.jsonl")->required();
  ingest_cmd->add_option("--users", ingest_paths.users, "users.jsonl")->required();
  ingest_cmd->add_option("--candidates", ingest_paths.candidates, "candidates.jsonl");
  ingest_cmd->add_option("--qrels", ingest_paths.qrels, "qrels file");
  ingest_cmd->add_option("--context-table", ingest_paths.context_table, "context_features.csv");
  ingest_cmd->add_option("--appropriateness", ingest_paths.appropriateness,
                         "appropriateness.jsonl");
  ingest_cmd->add_option("--judgment-scale", ingest_scale, "binary|graded (default: auto)");
  ingest_cmd->add_option("--report", ingest_report, "write the integrity report here");

  // --- train-mapping ---
  auto* train_mapping = app.add_subcommand("train-mapping", "per-user EM keyword-tag mapping");
  std::string tm_venues, tm_users, tm_out, tm_scope = "per-user";
  int tm_iters = 50;
  double tm_tol = 1e-6;
  train_mapping->add_option("--venues", tm_venues)->required();
  train_mapping->add_option("--users", tm_users)->required();
  train_mapping->add_option("--out", tm_out, "mappings.json")->required();
  train_mapping->add_option("--em-iters", tm_iters);
  train_mapping->add_option("--em-tol", tm_tol);
  train_mapping->add_option("--scope", tm_scope, "per-user|pooled");

  // --- boost ---
  auto* boost_cmd = app.add_subcommand("boost", "boosted keyword profiles from the mapping");
  std::string b_venues, b_users, b_mappings, b_out;
  boost_cmd->add_option("--venues", b_venues)->required();
  boost_cmd->add_option("--users", b_users)->required();
  boost_cmd->add_option("--mappings", b_mappings)->required();
  boost_cmd->add_option("--out", b_out, "boosted.json")->required();

  // --- train-tagger ---
  auto* train_tagger_cmd = app.add_subcommand("train-tagger", "zero-order sequence taggers");
  std::string tt_venues, tt_users, tt_mappings, tt_out, tt_kind = "maxent",
                                                        tt_scope = "per-user";
  double tt_reg = 1e-4;
  int tt_epochs = 200;
  std::uint64_t tt_seed = 7;
  train_tagger_cmd->add_option("--venues", tt_venues)->required();
  train_tagger_cmd->add_option("--users", tt_users)->required();
  train_tagger_cmd->add_option("--mappings", tt_mappings)->required();
  train_tagger_cmd->add_option("--out", tt_out)->required();
  train_tagger_cmd->add_option("--kind", tt_kind, "maxent|svm");
  train_tagger_cmd->add_option("--scope", tt_scope, "per-user|pooled");
  train_tagger_cmd->add_option("--reg", tt_reg);
  train_tagger_cmd->add_option("--epochs", tt_epochs);
  train_tagger_cmd->add_option("--seed", tt_seed);

  // --- score ---
  auto* score_cmd = app.add_subcommand("score", "per-candidate score vectors");
  std::string sc_venues, sc_users, sc_candidates, sc_model = "PK-Boosting", sc_out;
  std::string sc_mappings, sc_boosted, sc_taggers, sc_table, sc_appr, sc_review_in,
      sc_review_out, sc_tagger_scope = "per-user";
  double sc_theta = 0.5;
  int sc_imax = 5, sc_max_reviews = 0;
  std::uint64_t sc_seed = 7;
  score_cmd->add_option("--venues", sc_venues)->required();
  score_cmd->add_option("--users", sc_users)->required();
  score_cmd->add_option("--candidates", sc_candidates)->required();
  score_cmd->add_option("--model", sc_model, "PK-Boosting|UT-ML|UT-CRF|UT-SVM|PK-PCA|LinearCatRev");
  score_cmd->add_option("--out", sc_out, "scores.jsonl")->required();
  score_cmd->add_option("--mappings", sc_mappings, "needed for UT-ML");
  score_cmd->add_option("--boosted", sc_boosted, "needed for PK-Boosting");
  score_cmd->add_option("--taggers", sc_taggers, "needed for UT-CRF/UT-SVM");
  score_cmd->add_option("--tagger-scope", sc_tagger_scope, "per-user|pooled");
  score_cmd->add_option("--context-table", sc_table);
  score_cmd->add_option("--appropriateness", sc_appr);
  score_cmd->add_option("--review-models", sc_review_in, "reuse serialized review models");
  score_cmd->add_option("--review-models-out", sc_review_out, "serialize review models");
  score_cmd->add_option("--theta-ml", sc_theta);
  score_cmd->add_option("--i-max", sc_imax);
  score_cmd->add_option("--max-reviews", sc_max_reviews, "0 = all reviews");
  score_cmd->add_option("--seed", sc_seed);

  // --- train-ranker ---
  auto* train_ranker = app.add_subcommand("train-ranker", "fit a fusion model on score rows");
  std::string tr_scores, tr_qrels, tr_out, tr_ltr = "listnet", tr_metric = "P@5", tr_scale;
  double tr_lr = 0.05;
  int tr_epochs = 200, tr_restarts = 3;
  std::uint64_t tr_seed = 7;
  train_ranker->add_option("--scores", tr_scores)->required();
  train_ranker->add_option("--qrels", tr_qrels)->required();
  train_ranker->add_option("--out", tr_out)->required();
  train_ranker->add_option("--ltr", tr_ltr, "listnet|ranknet|coord-ascent");
  train_ranker->add_option("--lr", tr_lr);
  train_ranker->add_option("--epochs", tr_epochs);
  train_ranker->add_option("--restarts", tr_restarts);
  train_ranker->add_option("--metric", tr_metric, "P@5|nDCG@5 (coordinate ascent)");
  train_ranker->add_option("--seed", tr_seed);
  train_ranker->add_option("--judgment-scale", tr_scale, "binary|graded");

  // --- rank ---
  auto* rank_cmd = app.add_subcommand("rank", "rank candidates with a trained fusion model");
  std::string rk_scores, rk_ranker, rk_out, rk_mode = "fusion", rk_tag = "poirec";
  double rk_lambda = 0.5;
  rank_cmd->add_option("--scores", rk_scores)->required();
  rank_cmd->add_option("--ranker", rk_ranker)->required();
  rank_cmd->add_option("--out", rk_out, "run file")->required();
  rank_cmd->add_option("--context-mode", rk_mode, "fusion|rerank");
  rank_cmd->add_option("--lambda", rk_lambda);
  rank_cmd->add_option("--run-tag", rk_tag);

  // --- evaluate ---
  auto* evaluate_cmd = app.add_subcommand("evaluate", "P@k / nDCG@k / MRR of a run file");
  std::string ev_run, ev_qrels, ev_scale;
  int ev_k = 5;
  evaluate_cmd->add_option("--run", ev_run)->required();
  evaluate_cmd->add_option("--qrels", ev_qrels)->required();
  evaluate_cmd->add_option("--k", ev_k);
  evaluate_cmd->add_option("--judgment-scale", ev_scale, "binary|graded");

  // --- run ---
  auto* run_cmd = app.add_subcommand("run", "full pipeline from a config file");
  std::string run_config;
  std::vector<std::string> run_overrides;
  run_cmd->add_option("--config", run_config, "key = value config file");
  run_cmd->add_option("--set", run_overrides, "override config entries (key=value)");

  // --- ablate ---
  auto* ablate_cmd = app.add_subcommand("ablate", "score/source/history ablation experiments");
  std::string ab_config, ab_kind = "scores", ab_limits = "10,20,30,40,50,60";
  std::vector<std::string> ab_overrides;
  ablate_cmd->add_option("--config", ab_config);
  ablate_cmd->add_option("--set", ab_overrides, "override config entries (key=value)");
  ablate_cmd->add_option("--kind", ab_kind, "scores|sources|history");
  ablate_cmd->add_option("--limits", ab_limits, "history sweep limits, comma-separated");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*synth) {
      const SynthResult r = synth_generate(synth_spec, synth_out);
      std::printf("synthetic dataset written under %s\n", synth_out.c_str());
      std::printf("  venues:      %s\n", r.venues_path.c_str());
      std::printf("  users:       %s\n", r.users_path.c_str());
      std::printf("  qrels:       %s\n", r.qrels_path.c_str());
      std::printf("  run config:  %s\n", r.config_path.c_str());
    } else if (*ingest_cmd) {
      const Dataset ds = ingest(ingest_paths, parse_scale(ingest_scale));
      const std::string report = ds.report.to_json();
      if (!ingest_report.empty()) {
        std::ofstream out(ingest_report);
        out << report << "\n";
      }
      std::printf("%s\n", report.c_str());
      for (const auto& w : ds.report.dangling_references)
        std::fprintf(stderr, "warning: dangling reference %s\n", w.c_str());
      if (!ingest_paths.candidates.empty() && ds.candidates.empty())
        std::fprintf(stderr, "warning: candidate file is empty, nothing to rank\n");
    } else if (*train_mapping) {
      const VenueStore venues = load_venues(tm_venues);
      const auto users = load_users(tm_users);
      std::map<std::string, AlignmentModel> models;
      if (tm_scope == "pooled") {
        std::vector<AlignmentPair> pooled;
        for (const auto& user : users)
          for (const CheckIn& ci : user.history) {
            if (ci.tags.empty()) continue;
            const VenueRecord& v = venues.at(ci.venue_id);
            if (!v.keywords.empty()) pooled.push_back({v.keywords, ci.tags, user.id});
          }
        if (pooled.empty()) throw DataError("no tagged check-ins to train on");
        models.emplace("_pooled", em_train(pooled, tm_iters, tm_tol).model);
      } else if (tm_scope == "per-user") {
        for (const auto& user : users) {
          std::vector<AlignmentPair> pairs;
          for (const CheckIn& ci : user.history) {
            if (ci.tags.empty()) continue;
            const VenueRecord& v = venues.at(ci.venue_id);
            if (!v.keywords.empty()) pairs.push_back({v.keywords, ci.tags, user.id});
          }
          if (pairs.empty()) continue;
          models.emplace(user.id, em_train(pairs, tm_iters, tm_tol).model);
        }
      } else {
        throw DataError("--scope must be per-user or pooled");
      }
      save_alignment_models(models, tm_out);
      std::printf("trained %zu mapping model(s) -> %s\n", models.size(), tm_out.c_str());
    } else if (*boost_cmd) {
      const VenueStore venues = load_venues(b_venues);
      const auto users = load_users(b_users);
      const auto models = load_alignment_models(b_mappings);
      std::map<std::string, BoostedProfile> boosted;
      RatingScale scale = RatingScale::FiveStar;
      for (const auto& u : users)
        for (const auto& ci : u.history)
          if (ci.rating <= 0) scale = RatingScale::Graded;
      for (const auto& user : users) {
        auto it = models.find(user.id);
        if (it == models.end()) continue;
        boosted.emplace(user.id, boost_keywords(user, it->second, venues, scale));
      }
      save_boosted_profiles(boosted, b_out);
      std::printf("boosted profiles for %zu user(s) -> %s\n", boosted.size(), b_out.c_str());
    } else if (*train_tagger_cmd) {
      const VenueStore venues = load_venues(tt_venues);
      const auto users = load_users(tt_users);
      const auto models = load_alignment_models(tt_mappings);
      TaggerKind kind;
      if (tt_kind == "maxent") kind = TaggerKind::Maxent;
      else if (tt_kind == "svm") kind = TaggerKind::LinearSvmOvr;
      else throw DataError("--kind must be maxent or svm");

      std::map<std::string, TaggerModel> taggers;
      if (tt_scope == "pooled") {
        std::vector<LabeledSequence> pooled;
        for (const auto& user : users) {
          auto it = models.find(user.id);
          if (it == models.end()) continue;
          auto seqs = derive_labeled_sequences(user, it->second, venues);
          pooled.insert(pooled.end(), std::make_move_iterator(seqs.begin()),
                        std::make_move_iterator(seqs.end()));
        }
        if (pooled.empty()) throw DataError("no labeled sequences to train on");
        taggers.emplace("_pooled", train_tagger(pooled, kind, tt_reg, tt_epochs, tt_seed));
      } else if (tt_scope == "per-user") {
        for (const auto& user : users) {
          auto it = models.find(user.id);
          if (it == models.end()) continue;
          const auto seqs = derive_labeled_sequences(user, it->second, venues);
          if (seqs.empty()) continue;
          taggers.emplace(user.id, train_tagger(seqs, kind, tt_reg, tt_epochs, tt_seed));
        }
      } else {
        throw DataError("--scope must be per-user or pooled");
      }
      save_tagger_models(taggers, tt_out);
      std::printf("trained %zu tagger(s) -> %s\n", taggers.size(), tt_out.c_str());
    } else if (*score_cmd) {
      const ModelRow row = row_or_throw(sc_model);
      const VenueStore venues = load_venues(sc_venues);
      const auto users = load_users(sc_users);
      const auto candidates = load_candidates(sc_candidates);

      RatingScale scale = RatingScale::FiveStar;
      for (const auto& u : users)
        for (const auto& ci : u.history)
          if (ci.rating <= 0) scale = RatingScale::Graded;

      std::map<std::string, UserProfiles> profiles;
      for (const auto& user : users) profiles[user.id] = build_profiles(user, venues, scale);

      std::map<std::string, AlignmentModel> mappings;
      if (!sc_mappings.empty()) mappings = load_alignment_models(sc_mappings);
      std::map<std::string, BoostedProfile> boosted;
      if (!sc_boosted.empty()) boosted = load_boosted_profiles(sc_boosted);
      if (row == ModelRow::PKPCA)
        for (const auto& user : users)
          boosted.emplace(user.id, pca_keyword_profile(user, venues, scale));
      std::map<std::string, TaggerModel> taggers;
      if (!sc_taggers.empty()) taggers = load_tagger_models(sc_taggers);

      std::map<std::string, ReviewClassifier> review_models;
      if (!sc_review_in.empty()) {
        review_models = load_review_models(sc_review_in);
      } else {
        HingeParams params{1e-4, 20, sc_seed};
        for (const auto& user : users)
          review_models.emplace(user.id,
                                train_review_classifier(user, venues, scale, params));
      }
      if (!sc_review_out.empty()) save_review_models(review_models, sc_review_out);

      ContextFeatureTable table;
      AppropriatenessModel ctx_model;
      bool has_ctx = false;
      if (!sc_table.empty() && !sc_appr.empty()) {
        table = load_feature_table(sc_table);
        ctx_model = train_appropriateness(load_appropriateness(sc_appr), table,
                                          HingeParams{1e-4, 30, sc_seed});
        has_ctx = true;
      }

      std::vector<ScoredCandidate> rows;
      for (const auto& user : users) {
        auto cand = candidates.find(user.id);
        if (cand == candidates.end()) continue;
        CandidateScorer scorer;
        scorer.row = row;
        scorer.profiles = &profiles.at(user.id);
        auto bit = boosted.find(user.id);
        scorer.boosted = bit == boosted.end() ? nullptr : &bit->second;
        auto ait = mappings.find(user.id);
        if (ait == mappings.end()) ait = mappings.find("_pooled");
        scorer.alignment = ait == mappings.end() ? nullptr : &ait->second;
        auto tit = taggers.find(sc_tagger_scope == "pooled" ? "_pooled" : user.id);
        scorer.tagger = tit == taggers.end() ? nullptr : &tit->second;
        auto rit = review_models.find(user.id);
        scorer.review = rit == review_models.end() ? nullptr : &rit->second;
        if (has_ctx && user.context) {
          scorer.context_model = &ctx_model;
          scorer.context_table = &table;
          scorer.context = &*user.context;
        }
        scorer.theta_ml = sc_theta;
        scorer.i_max = sc_imax;
        scorer.max_reviews = sc_max_reviews;
        for (const auto& venue_id : cand->second)
          rows.push_back({user.id, venue_id, scorer.score(venues.at(venue_id))});
      }

      std::string columns = "s_cat,s_rev";
      if (row != ModelRow::LinearCatRev) {
        columns += ",s_key," + fourth_score_name(row);
        if (has_ctx) columns += ",s_cxt";
      }
      save_scores(rows, columns, sc_out);
      std::printf("scored %zu (user, candidate) rows -> %s\n", rows.size(), sc_out.c_str());
    } else if (*train_ranker) {
      std::string columns_csv;
      const auto rows = load_scores(tr_scores, &columns_csv);
      const Judgments judgments = load_qrels(tr_qrels, parse_scale(tr_scale));

      std::vector<std::string> columns;
      std::istringstream ss(columns_csv);
      std::string col;
      while (std::getline(ss, col, ',')) columns.push_back(col);

      std::map<std::string, LtrGroup> groups;
      for (const auto& r : rows) {
        LtrRow lr;
        lr.venue_id = r.venue_id;
        for (const auto& c : columns) {
          if (c == "s_cat") lr.features.push_back(r.scores.s_cat);
          else if (c == "s_rev") lr.features.push_back(r.scores.s_rev);
          else if (c == "s_key") lr.features.push_back(r.scores.s_key);
          else if (c == "s_cxt") lr.features.push_back(r.scores.s_cxt);
          else lr.features.push_back(r.scores.s_fourth);
        }
        lr.gain = judgments.gain(r.user_id, r.venue_id);
        lr.relevant = judgments.is_relevant(r.user_id, r.venue_id);
        groups[r.user_id].push_back(std::move(lr));
      }
      std::vector<LtrGroup> training;
      for (auto& [_, g] : groups) training.push_back(std::move(g));

      LtrTrainOptions opts;
      opts.learning_rate = tr_lr;
      opts.epochs = tr_epochs;
      opts.restarts = tr_restarts;
      opts.seed = tr_seed;

      RankingModel model;
      const LtrKind kind = ltr_kind_from_name(tr_ltr);
      if (kind == LtrKind::ListNet) model = train_listnet(training, columns, opts);
      else if (kind == LtrKind::RankNet) model = train_ranknet(training, columns, opts);
      else if (kind == LtrKind::CoordAscent)
        model = coordinate_ascent_train(training, columns,
                                        tr_metric == "nDCG@5" ? AscentMetric::NdcgAt5
                                                              : AscentMetric::PrecisionAt5,
                                        opts);
      else throw DataError("--ltr must be listnet, ranknet or coord-ascent");
      save_ranking_model(model, tr_out);
      std::printf("trained %s fusion over %zu user group(s) -> %s\n", tr_ltr.c_str(),
                  training.size(), tr_out.c_str());
    } else if (*rank_cmd) {
      std::string columns_csv;
      const auto rows = load_scores(rk_scores, &columns_csv);
      const RankingModel model = load_ranking_model(rk_ranker);

      std::map<std::string, LtrGroup> groups;
      std::map<std::string, std::map<std::string, double>> cxt;
      for (const auto& r : rows) {
        LtrRow lr;
        lr.venue_id = r.venue_id;
        for (const auto& c : model.columns) {
          if (c == "s_cat") lr.features.push_back(r.scores.s_cat);
          else if (c == "s_rev") lr.features.push_back(r.scores.s_rev);
          else if (c == "s_key") lr.features.push_back(r.scores.s_key);
          else if (c == "s_cxt") lr.features.push_back(r.scores.s_cxt);
          else lr.features.push_back(r.scores.s_fourth);
        }
        cxt[r.user_id][r.venue_id] = r.scores.s_cxt;
        groups[r.user_id].push_back(std::move(lr));
      }

      std::map<std::string, RankedList> runs;
      for (const auto& [user_id, group] : groups) {
        RankedList list = rank_candidates(model, group);
        if (rk_mode == "rerank") list = rerank_with_context(list, cxt[user_id], rk_lambda);
        else if (rk_mode != "fusion") throw DataError("--context-mode must be fusion or rerank");
        runs[user_id] = std::move(list);
      }
      write_run_file(runs, rk_tag, rk_out);
      std::printf("ranked %zu user(s) -> %s\n", runs.size(), rk_out.c_str());
    } else if (*evaluate_cmd) {
      const auto runs = read_run_file(ev_run);
      const Judgments judgments = load_qrels(ev_qrels, parse_scale(ev_scale));
      if (runs.empty()) throw DataError("run file has no rankings");
      double p = 0.0, n = 0.0;
      for (const auto& [user_id, list] : runs) {
        p += precision_at_k(list, judgments, user_id, ev_k);
        n += ndcg_at_k(list, judgments, user_id, ev_k);
      }
      p /= static_cast<double>(runs.size());
      n /= static_cast<double>(runs.size());
      std::printf("users %zu\n", runs.size());
      std::printf("P@%d    %.4f\n", ev_k, p);
      std::printf("nDCG@%d %.4f\n", ev_k, n);
      std::printf("MRR    %.4f\n", mrr(runs, judgments));
    } else if (*run_cmd) {
      const PipelineConfig cfg = build_config(run_config, run_overrides);
      const RunResult result = run_pipeline(cfg);
      std::printf("run file: %s\n", result.run_file.c_str());
      if (result.rankings.empty())
        std::fprintf(stderr, "warning: no candidates were ranked\n");
      if (result.evaluated) print_metrics(cfg.model, result.metrics);
      else std::printf("no judgments provided, skipping evaluation\n");
    } else if (*ablate_cmd) {
      const PipelineConfig cfg = build_config(ab_config, ab_overrides);
      std::vector<AblationRow> table;
      if (ab_kind == "scores") table = ablate_scores_experiment(cfg);
      else if (ab_kind == "sources") table = ablate_sources_experiment(cfg);
      else if (ab_kind == "history") {
        std::vector<int> limits;
        std::istringstream ss(ab_limits);
        std::string tok;
        while (std::getline(ss, tok, ',')) limits.push_back(std::stoi(tok));
        table = history_sweep_experiment(cfg, limits);
      } else {
        throw DataError("--kind must be scores, sources or history");
      }
      for (const auto& row : table) print_metrics(row.label, row.metrics);
    }
  } catch (const DataError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
