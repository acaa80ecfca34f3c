#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "poirec/alignment.hpp"
#include "poirec/boosting.hpp"
#include "poirec/context.hpp"
#include "poirec/evaluation.hpp"
#include "poirec/ranking.hpp"
#include "poirec/scoring.hpp"
#include "poirec/tagging.hpp"

namespace poirec {

VenueStore load_venues(const std::string& path);
std::vector<UserRecord> load_users(const std::string& path);
std::map<std::string, std::vector<std::string>> load_candidates(const std::string& path);
// `user_id 0 venue_id relevance`; scale auto-detected unless forced
Judgments load_qrels(const std::string& path,
                     std::optional<JudgmentScale> scale = std::nullopt);
std::vector<AppropriatenessExample> load_appropriateness(const std::string& path);

struct IngestPaths {
  std::string venues;
  std::string users;
  std::string candidates;       // optional, empty = absent
  std::string qrels;            // optional
  std::string context_table;    // optional
  std::string appropriateness;  // optional
};

struct IntegrityReport {
  std::size_t venue_count = 0;
  std::size_t user_count = 0;
  std::size_t checkin_count = 0;
  std::size_t candidate_user_count = 0;
  std::size_t candidate_count = 0;
  std::size_t judgment_count = 0;
  std::size_t context_feature_count = 0;
  std::size_t appropriateness_count = 0;
  std::vector<std::string> dangling_references;  // dropped, listed as warnings

  std::string to_json() const;
};

struct Dataset {
  VenueStore venues;
  std::vector<UserRecord> users;
  std::map<std::string, std::vector<std::string>> candidates;
  Judgments judgments{JudgmentScale::Binary};
  bool has_judgments = false;
  ContextFeatureTable context_table;
  std::vector<AppropriatenessExample> appropriateness;
  IntegrityReport report;
};

// Loads everything, validates referential integrity, drops dangling
// references with a warning entry in the report.
Dataset ingest(const IngestPaths& paths,
               std::optional<JudgmentScale> scale = std::nullopt);

// --- model persistence (versioned JSON, full-precision round trip) ---

void save_alignment_models(const std::map<std::string, AlignmentModel>& models,
                           const std::string& path);
std::map<std::string, AlignmentModel> load_alignment_models(const std::string& path);

void save_tagger_models(const std::map<std::string, TaggerModel>& models,
                        const std::string& path);
std::map<std::string, TaggerModel> load_tagger_models(const std::string& path);

void save_boosted_profiles(const std::map<std::string, BoostedProfile>& profiles,
                           const std::string& path);
std::map<std::string, BoostedProfile> load_boosted_profiles(const std::string& path);

void save_ranking_model(const RankingModel& model, const std::string& path);
RankingModel load_ranking_model(const std::string& path);

void save_review_models(const std::map<std::string, ReviewClassifier>& models,
                        const std::string& path);
std::map<std::string, ReviewClassifier> load_review_models(const std::string& path);

// --- score rows ---

struct ScoredCandidate {
  std::string user_id;
  std::string venue_id;
  ScoreVector scores;
};

void save_scores(const std::vector<ScoredCandidate>& rows, const std::string& run_columns,
                 const std::string& path);
std::vector<ScoredCandidate> load_scores(const std::string& path, std::string* columns = nullptr);

// --- TREC run files: `user_id Q0 venue_id rank score run_tag` ---

void write_run_file(const std::map<std::string, RankedList>& runs, const std::string& run_tag,
                    const std::string& path);
std::map<std::string, RankedList> read_run_file(const std::string& path);

}  // namespace poirec
