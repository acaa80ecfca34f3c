#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "poirec/io.hpp"
#include "poirec/synth.hpp"

namespace poirec {

// All knobs of a full run. Loaded from a plain key = value file; CLI flags
// override file entries.
struct PipelineConfig {
  // inputs
  std::string venues, users, candidates, qrels;
  std::string context_table, appropriateness;
  std::string out_dir = "out";
  std::string judgment_scale;  // "", "binary", "graded" (empty = auto)

  // model selection (exactly one row)
  std::string model = "PK-Boosting";  // see model_row_from_name for the full list
  std::string ltr = "listnet";        // listnet | ranknet | coord-ascent
  std::string context_mode = "fusion";  // fusion | rerank
  double lambda = 0.5;                  // rerank strength

  // hyperparameters
  std::uint64_t seed = 7;
  int em_iters = 50;
  double em_tol = 1e-6;
  double theta_ml = 0.5;
  int i_max = 5;
  double linearcatrev_alpha = 0.5;
  std::string tagger_scope = "per-user";  // per-user | pooled
  double tagger_reg = 1e-4;
  int tagger_epochs = 200;
  double review_reg = 1e-4;
  int review_epochs = 20;
  double context_reg = 1e-4;
  int context_epochs = 30;
  double ltr_lr = 0.05;
  int ltr_epochs = 200;
  int ltr_restarts = 3;
  std::string ascent_metric = "P@5";  // P@5 | nDCG@5
  int folds = 5;
  int max_reviews = 0;  // 0 = all

  // experiment switches
  int history_limit = 0;                      // 0 = full history
  std::string history_order = "as-ingested";  // sequential | interleaved | as-ingested
  bool use_keywords = true;                   // keyword-source toggle
  bool use_reviews = true;                    // review-source toggle
  std::set<std::string> ablate_scores;        // column names to drop before fusion
  std::string run_tag = "poirec";
};

std::map<std::string, std::string> load_config_file(const std::string& path);
PipelineConfig config_from_map(const std::map<std::string, std::string>& kv);
void apply_config_entry(PipelineConfig& cfg, const std::string& key, const std::string& value);

struct RunMetrics {
  double p_at_5 = 0.0;
  double ndcg_at_5 = 0.0;
  double mrr = 0.0;
  std::map<std::string, double> per_user_p5;
  std::map<std::string, double> per_user_ndcg5;
};

struct RunResult {
  RunMetrics metrics;
  bool evaluated = false;
  std::string run_file;
  std::string metrics_file;
  std::vector<std::string> columns;  // fused score columns
  std::map<std::string, RankedList> rankings;
};

// Executes the full staged pipeline: ingest, profiles, per-user alignment,
// fourth-score artifact (boosting / PCA / taggers), review and context
// models, scoring, cross-validated fusion, optional context re-rank,
// run-file emission and evaluation. Every stage output is serialized under
// cfg.out_dir. Deterministic for a fixed config and seed.
RunResult run_pipeline(const PipelineConfig& cfg);

// Evaluation of already-ranked lists against judgments.
RunMetrics evaluate_rankings(const std::map<std::string, RankedList>& rankings,
                             const Judgments& judgments, int k = 5);

struct AblationRow {
  std::string label;
  RunMetrics metrics;
};

// One run per single removed score column, retraining the fusion each time.
std::vector<AblationRow> ablate_scores_experiment(const PipelineConfig& cfg);
// Full model, then keyword source off, then review source off.
std::vector<AblationRow> ablate_sources_experiment(const PipelineConfig& cfg);
// One run per history limit.
std::vector<AblationRow> history_sweep_experiment(const PipelineConfig& cfg,
                                                  const std::vector<int>& limits);

}  // namespace poirec
