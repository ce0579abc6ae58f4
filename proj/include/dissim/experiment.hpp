#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dissim/classifier.hpp"
#include "dissim/data_model.hpp"
#include "dissim/optimizer.hpp"
#include "dissim/synthetic.hpp"

// Full-protocol orchestration: load or generate data, split writers per
// replication, build and condense the training set, optimize under each
// strategy, evaluate final masks on the held-out exploitation writers, and
// emit a comparison table plus per-run artifacts.

namespace dissim {

inline constexpr const char* kBaselineApproach = "no_feature_selection";

struct ExperimentConfig {
  std::optional<std::string> data_file;        // exactly one of data_file /
  std::optional<GeneratorConfig> generator;    // generator must be set
  SplitCounts split{20, 10, 10, 10, 10};
  std::size_t references = 12;
  std::size_t train_genuine = 10;
  std::size_t train_random_forgery = 10;
  std::size_t eval_genuine = 10;
  std::size_t eval_skilled = 10;
  std::vector<Strategy> strategies{Strategy::NoValidation, Strategy::LastIteration,
                                   Strategy::GlobalValidation};
  std::size_t replications = 5;
  std::uint64_t seed = 1;
  std::string out_dir = "out";
  unsigned workers = 0;  // 0 = hardware concurrency
  SwarmConfig swarm{};   // strategy and seed are set per run
  SvmHyper svm{};
};

// One (approach, replication) outcome. `run` is absent for the baseline and
// for failed rows.
struct ReplicationRow {
  std::size_t replication = 0;
  std::string approach;
  double test_eer = 0.0;  // fraction
  std::size_t n_features = 0;
  std::uint64_t swarm_seed = 0;
  std::vector<RatePoint> test_curve;  // raw FAR/FRR sweep on the test trials
  std::optional<RunResult> run;
  bool failed = false;
  std::string error;
};

struct ApproachSummary {
  std::string approach;
  std::size_t completed = 0;
  double n_features_mean = 0.0;
  double eer_mean_pct = 0.0;
  double eer_std_pct = 0.0;  // sample standard deviation over replications
};

struct ExperimentReport {
  ExperimentConfig config;
  std::vector<ReplicationRow> rows;
  std::vector<ApproachSummary> summaries;  // baseline first, then strategies in config order
};

ExperimentReport run_experiment(const ExperimentConfig& config);

/// Writes table1.csv, history_<approach>_<rep>.csv and run_<approach>_<rep>.json
/// under `dir`. Deterministic: the same report always produces byte-identical
/// files.
void emit_report(const ExperimentReport& report, const std::string& dir);

/// Rebuilds table1.csv from the run_*.json artifacts found in `dir`.
std::vector<ApproachSummary> summarize_run_dir(const std::string& dir);
void write_table(const std::vector<ApproachSummary>& summaries, const std::string& path);

std::string config_to_json(const ExperimentConfig& config);
ExperimentConfig config_from_json(const std::string& json_text);
ExperimentConfig load_config(const std::string& path);

}  // namespace dissim
