#include "dissim/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "dissim/dichotomy.hpp"
#include "dissim/errors.hpp"
#include "dissim/text.hpp"

namespace dissim {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

namespace {

void validate(const ExperimentConfig& config) {
  if (config.data_file.has_value() == config.generator.has_value()) {
    throw ConfigError("config: exactly one of data.file / data.generator must be set");
  }
  if (config.replications < 1) throw ConfigError("config: replications must be >= 1");
  if (config.strategies.empty()) throw ConfigError("config: strategies must be nonempty");
  if (config.references < 1) throw ConfigError("config: references must be >= 1");
  if (config.split.train < 2) throw ConfigError("config: split.train must be >= 2");
  if (config.split.opt < 1 || config.split.sel < 1 || config.split.exploitation < 1) {
    throw ConfigError("config: split.opt, split.sel and split.exploitation must be >= 1");
  }
}

Dataset obtain_dataset(const ExperimentConfig& config) {
  if (config.data_file) return load_feature_file(*config.data_file);
  return generate(*config.generator);
}

double mean_of(const std::vector<double>& v) {
  double sum = 0.0;
  for (const double x : v) sum += x;
  return sum / static_cast<double>(v.size());
}

double sample_std(const std::vector<double>& v, double mean) {
  if (v.size() < 2) return 0.0;
  double acc = 0.0;
  for (const double x : v) acc += (x - mean) * (x - mean);
  return std::sqrt(acc / static_cast<double>(v.size() - 1));
}

ApproachSummary summarize(const std::string& approach,
                          const std::vector<const ReplicationRow*>& rows) {
  ApproachSummary s;
  s.approach = approach;
  std::vector<double> eers;
  std::vector<double> features;
  for (const auto* row : rows) {
    if (row->failed) continue;
    eers.push_back(row->test_eer * 100.0);
    features.push_back(static_cast<double>(row->n_features));
  }
  s.completed = eers.size();
  if (!eers.empty()) {
    s.eer_mean_pct = mean_of(eers);
    s.eer_std_pct = sample_std(eers, s.eer_mean_pct);
    s.n_features_mean = mean_of(features);
  }
  return s;
}

std::vector<ApproachSummary> summarize_rows(const std::vector<ReplicationRow>& rows,
                                            const std::vector<std::string>& approach_order) {
  std::vector<ApproachSummary> out;
  for (const auto& approach : approach_order) {
    std::vector<const ReplicationRow*> subset;
    for (const auto& row : rows) {
      if (row.approach == approach) subset.push_back(&row);
    }
    out.push_back(summarize(approach, subset));
  }
  return out;
}

ordered_json swarm_to_json(const SwarmConfig& c) {
  return ordered_json{{"size", c.swarm_size},
                      {"iterations", c.max_iterations},
                      {"w_start", c.w_start},
                      {"w_end", c.w_end},
                      {"c1_start", c.c1_start},
                      {"c1_end", c.c1_end},
                      {"c2_start", c.c2_start},
                      {"c2_end", c.c2_end},
                      {"v_max", c.v_max},
                      {"archive_capacity", c.archive_capacity}};
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot open '" + path + "' for writing");
  out << content;
  if (!out) throw DataError("write failed for '" + path + "'");
}

std::string csv_double(double v) { return format_double(v); }

}  // namespace

ExperimentReport run_experiment(const ExperimentConfig& config) {
  validate(config);
  const Dataset dataset = obtain_dataset(config);

  ExperimentReport report;
  report.config = config;

  for (std::size_t rep = 0; rep < config.replications; ++rep) {
    const std::uint64_t rep_seed = Rng(config.seed, {stream::kReplication, rep}).next_u64();
    const std::uint64_t swarm_seed = Rng(rep_seed, {stream::kSwarm}).next_u64();

    WriterSplit split;
    std::optional<FitnessContext> ctx;
    std::optional<EvalSet> test_eval;
    std::string setup_error;
    try {
      split = split_writers(dataset, config.split, rep_seed);
      if (!split.pairwise_disjoint()) {
        throw DataError("writer split produced overlapping subsets");  // unreachable by design
      }
      auto training = build_training_set(dataset, split.train_writers, config.references,
                                         config.train_genuine, config.train_random_forgery,
                                         rep_seed);
      auto condensed = condense(training, rep_seed);
      auto opt_eval = build_eval_set(dataset, split.opt_writers, config.references,
                                     config.eval_genuine, config.eval_skilled,
                                     Rng(rep_seed, {stream::kEvalBuild, 0}).next_u64());
      auto sel_eval = build_eval_set(dataset, split.sel_writers, config.references,
                                     config.eval_genuine, config.eval_skilled,
                                     Rng(rep_seed, {stream::kEvalBuild, 1}).next_u64());
      test_eval = build_eval_set(dataset, split.exploitation_writers, config.references,
                                 config.eval_genuine, config.eval_skilled,
                                 Rng(rep_seed, {stream::kEvalBuild, 2}).next_u64());
      ctx.emplace(std::move(condensed), std::move(opt_eval), std::move(sel_eval), config.svm,
                  config.workers);
    } catch (const Error& e) {
      setup_error = e.what();
    }

    auto evaluate_on_test = [&](const FeatureMask& mask, ReplicationRow& row) {
      const auto model = ctx->model_for(mask);
      const auto trials = score_eval_set(*test_eval, *model);
      row.test_eer = eer_user(trials).eer;
      row.test_curve = far_frr_curve(trials);
    };

    // Baseline: all-ones mask, no optimizer, same evaluation path.
    {
      ReplicationRow row;
      row.replication = rep;
      row.approach = kBaselineApproach;
      row.swarm_seed = swarm_seed;
      if (!setup_error.empty()) {
        row.failed = true;
        row.error = setup_error;
      } else {
        try {
          const FeatureMask all_ones(dataset.dim(), true);
          evaluate_on_test(all_ones, row);
          row.n_features = dataset.dim();
        } catch (const Error& e) {
          row.failed = true;
          row.error = e.what();
        }
      }
      report.rows.push_back(std::move(row));
    }

    for (const Strategy strategy : config.strategies) {
      ReplicationRow row;
      row.replication = rep;
      row.approach = strategy_name(strategy);
      row.swarm_seed = swarm_seed;
      if (!setup_error.empty()) {
        row.failed = true;
        row.error = setup_error;
        report.rows.push_back(std::move(row));
        continue;
      }
      try {
        SwarmConfig swarm = config.swarm;
        swarm.strategy = strategy;
        // Strategies within a replication share one seed: identical swarm
        // trajectories isolate the effect of the validation stage.
        swarm.seed = swarm_seed;
        RunResult res = run(swarm, *ctx);
        evaluate_on_test(res.final_mask, row);
        row.n_features = res.final_mask.cardinality();
        row.run = std::move(res);
      } catch (const Error& e) {
        row.failed = true;
        row.error = e.what();
      }
      report.rows.push_back(std::move(row));
    }
  }

  std::vector<std::string> approach_order{kBaselineApproach};
  for (const Strategy s : config.strategies) approach_order.emplace_back(strategy_name(s));
  report.summaries = summarize_rows(report.rows, approach_order);
  return report;
}

void write_table(const std::vector<ApproachSummary>& summaries, const std::string& path) {
  std::string out = "approach,n_features_mean,eer_mean_pct,eer_std_pct\n";
  for (const auto& s : summaries) {
    out += s.approach;
    out += ',';
    if (s.completed > 0) {
      out += csv_double(s.n_features_mean);
      out += ',';
      out += csv_double(s.eer_mean_pct);
      out += ',';
      out += csv_double(s.eer_std_pct);
    } else {
      out += ",,";  // incomplete cells
    }
    out += '\n';
  }
  write_file(path, out);
}

void emit_report(const ExperimentReport& report, const std::string& dir) {
  fs::create_directories(dir);
  write_table(report.summaries, (fs::path(dir) / "table1.csv").string());

  for (const auto& row : report.rows) {
    const std::string tag = row.approach + "_" + std::to_string(row.replication);

    ordered_json j;
    j["approach"] = row.approach;
    j["replication"] = row.replication;
    j["seed"] = row.swarm_seed;
    j["swarm"] = swarm_to_json(report.config.swarm);
    j["failed"] = row.failed;
    if (row.failed) {
      j["error"] = row.error;
    } else {
      j["test_eer"] = row.test_eer;
      j["n_features"] = row.n_features;
    }
    if (row.run) {
      const RunResult& res = *row.run;
      j["final_mask_hex"] = res.final_mask.to_hex();
      j["final_opt_fitness"] = res.final_opt_fitness;
      if (res.final_sel_fitness) j["final_sel_fitness"] = *res.final_sel_fitness;
      ordered_json archive = ordered_json::array();
      for (const auto& e : res.archive) {
        archive.push_back({{"mask_hex", e.mask.to_hex()},
                           {"opt_fitness", e.opt_fitness},
                           {"sel_fitness", e.sel_fitness},
                           {"iteration_found", e.iteration_found}});
      }
      j["archive"] = archive;
      ordered_json history = ordered_json::array();
      for (const auto& rec : res.history) {
        ordered_json h{{"iteration", rec.iteration},
                       {"best_opt", rec.best_opt},
                       {"best_sel", nullptr},
                       {"mean_cardinality", rec.mean_cardinality}};
        if (rec.best_sel) h["best_sel"] = *rec.best_sel;
        history.push_back(h);
      }
      j["history"] = history;
    } else if (!row.failed) {
      // Baseline row: the all-ones mask over all n_features dimensions.
      j["final_mask_hex"] = FeatureMask(row.n_features, true).to_hex();
    }
    write_file((fs::path(dir) / ("run_" + tag + ".json")).string(), j.dump(2) + "\n");

    if (row.run) {
      std::string csv = "iteration,best_opt,best_sel,mean_cardinality\n";
      for (const auto& rec : row.run->history) {
        csv += std::to_string(rec.iteration);
        csv += ',';
        csv += csv_double(rec.best_opt);
        csv += ',';
        if (rec.best_sel) csv += csv_double(*rec.best_sel);
        csv += ',';
        csv += csv_double(rec.mean_cardinality);
        csv += '\n';
      }
      write_file((fs::path(dir) / ("history_" + tag + ".csv")).string(), csv);
    }

    // Raw FAR/FRR sweep of the test trials; rendering is left to external
    // tooling.
    if (!row.test_curve.empty()) {
      std::string csv = "threshold,far,frr\n";
      for (const auto& pt : row.test_curve) {
        csv += csv_double(pt.threshold);
        csv += ',';
        csv += csv_double(pt.far);
        csv += ',';
        csv += csv_double(pt.frr);
        csv += '\n';
      }
      write_file((fs::path(dir) / ("roc_" + tag + ".csv")).string(), csv);
    }
  }
}

std::vector<ApproachSummary> summarize_run_dir(const std::string& dir) {
  std::vector<fs::path> paths;
  for (const auto& entry : fs::directory_iterator(dir)) {
    const std::string name = entry.path().filename().string();
    if (name.rfind("run_", 0) == 0 && name.size() > 9 &&
        name.compare(name.size() - 5, 5, ".json") == 0) {
      paths.push_back(entry.path());
    }
  }
  if (paths.empty()) throw DataError("no run_*.json artifacts found in '" + dir + "'");
  std::sort(paths.begin(), paths.end());

  std::vector<ReplicationRow> rows;
  for (const auto& path : paths) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    try {
      const auto j = nlohmann::json::parse(ss.str());
      ReplicationRow row;
      row.approach = j.at("approach").get<std::string>();
      row.replication = j.at("replication").get<std::size_t>();
      row.failed = j.value("failed", false);
      if (!row.failed) {
        row.test_eer = j.at("test_eer").get<double>();
        row.n_features = j.at("n_features").get<std::size_t>();
      }
      rows.push_back(std::move(row));
    } catch (const nlohmann::json::exception& e) {
      throw ParseError("'" + path.string() + "': " + e.what());
    }
  }

  // Canonical order: baseline, then the three strategies, then anything else.
  std::vector<std::string> order{kBaselineApproach, strategy_name(Strategy::NoValidation),
                                 strategy_name(Strategy::LastIteration),
                                 strategy_name(Strategy::GlobalValidation)};
  std::set<std::string> seen;
  for (const auto& row : rows) seen.insert(row.approach);
  for (auto it = order.begin(); it != order.end();) {
    it = seen.count(*it) ? std::next(it) : order.erase(it);
  }
  for (const auto& approach : seen) {
    if (std::find(order.begin(), order.end(), approach) == order.end()) order.push_back(approach);
  }
  return summarize_rows(rows, order);
}

std::string config_to_json(const ExperimentConfig& c) {
  ordered_json data;
  if (c.data_file) {
    data["file"] = *c.data_file;
  } else if (c.generator) {
    const GeneratorConfig& g = *c.generator;
    data["generator"] = ordered_json{{"writers", g.n_writers},
                                     {"genuine_per_writer", g.genuine_per_writer},
                                     {"skilled_per_writer", g.skilled_per_writer},
                                     {"dim", g.dim},
                                     {"informative_dims", g.informative_dims},
                                     {"writer_spread", g.writer_spread},
                                     {"forgery_offset", g.forgery_offset},
                                     {"seed", g.seed}};
  }
  ordered_json j;
  j["data"] = data;
  j["split"] = ordered_json{{"train", c.split.train},
                            {"validation", c.split.validation},
                            {"opt", c.split.opt},
                            {"sel", c.split.sel},
                            {"exploitation", c.split.exploitation}};
  j["references"] = c.references;
  j["train_genuine"] = c.train_genuine;
  j["train_random_forgery"] = c.train_random_forgery;
  j["eval_genuine"] = c.eval_genuine;
  j["eval_skilled"] = c.eval_skilled;
  ordered_json strategies = ordered_json::array();
  for (const Strategy s : c.strategies) strategies.push_back(strategy_name(s));
  j["strategies"] = strategies;
  j["replications"] = c.replications;
  j["seed"] = c.seed;
  j["out_dir"] = c.out_dir;
  j["workers"] = c.workers;
  j["swarm"] = swarm_to_json(c.swarm);
  j["svm"] = ordered_json{{"c", c.svm.c},
                          {"max_epochs", c.svm.max_epochs},
                          {"tol", c.svm.tol},
                          {"seed", c.svm.seed}};
  return j.dump(2) + "\n";
}

namespace {

template <typename T>
void read_field(const nlohmann::json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

void check_keys(const nlohmann::json& j, const std::set<std::string>& allowed,
                const std::string& where) {
  for (const auto& [key, _] : j.items()) {
    if (!allowed.count(key)) throw ConfigError("config: unknown key '" + key + "' in " + where);
  }
}

}  // namespace

ExperimentConfig config_from_json(const std::string& json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config: invalid JSON: ") + e.what());
  }
  try {
    check_keys(j, {"data", "split", "references", "train_genuine", "train_random_forgery",
                   "eval_genuine", "eval_skilled", "strategies", "replications", "seed",
                   "out_dir", "workers", "swarm", "svm"},
               "top level");
    ExperimentConfig c;
    if (!j.contains("data")) throw ConfigError("config: missing 'data'");
    const auto& data = j.at("data");
    check_keys(data, {"file", "generator"}, "data");
    if (data.contains("file") && data.contains("generator")) {
      throw ConfigError("config: data.file and data.generator are mutually exclusive");
    }
    if (data.contains("file")) c.data_file = data.at("file").get<std::string>();
    if (data.contains("generator")) {
      const auto& g = data.at("generator");
      check_keys(g,
                 {"writers", "genuine_per_writer", "skilled_per_writer", "dim",
                  "informative_dims", "writer_spread", "forgery_offset", "seed"},
                 "data.generator");
      GeneratorConfig gc;
      read_field(g, "writers", gc.n_writers);
      read_field(g, "genuine_per_writer", gc.genuine_per_writer);
      read_field(g, "skilled_per_writer", gc.skilled_per_writer);
      read_field(g, "dim", gc.dim);
      read_field(g, "informative_dims", gc.informative_dims);
      read_field(g, "writer_spread", gc.writer_spread);
      read_field(g, "forgery_offset", gc.forgery_offset);
      read_field(g, "seed", gc.seed);
      c.generator = gc;
    }
    if (j.contains("split")) {
      const auto& s = j.at("split");
      check_keys(s, {"train", "validation", "opt", "sel", "exploitation"}, "split");
      read_field(s, "train", c.split.train);
      read_field(s, "validation", c.split.validation);
      read_field(s, "opt", c.split.opt);
      read_field(s, "sel", c.split.sel);
      read_field(s, "exploitation", c.split.exploitation);
    }
    read_field(j, "references", c.references);
    read_field(j, "train_genuine", c.train_genuine);
    read_field(j, "train_random_forgery", c.train_random_forgery);
    read_field(j, "eval_genuine", c.eval_genuine);
    read_field(j, "eval_skilled", c.eval_skilled);
    if (j.contains("strategies")) {
      c.strategies.clear();
      for (const auto& name : j.at("strategies")) {
        const auto s = strategy_from_name(name.get<std::string>());
        if (!s) throw ConfigError("config: unknown strategy '" + name.get<std::string>() + "'");
        c.strategies.push_back(*s);
      }
    }
    read_field(j, "replications", c.replications);
    read_field(j, "seed", c.seed);
    read_field(j, "out_dir", c.out_dir);
    read_field(j, "workers", c.workers);
    if (j.contains("swarm")) {
      const auto& s = j.at("swarm");
      check_keys(s,
                 {"size", "iterations", "w_start", "w_end", "c1_start", "c1_end", "c2_start",
                  "c2_end", "v_max", "archive_capacity"},
                 "swarm");
      read_field(s, "size", c.swarm.swarm_size);
      read_field(s, "iterations", c.swarm.max_iterations);
      read_field(s, "w_start", c.swarm.w_start);
      read_field(s, "w_end", c.swarm.w_end);
      read_field(s, "c1_start", c.swarm.c1_start);
      read_field(s, "c1_end", c.swarm.c1_end);
      read_field(s, "c2_start", c.swarm.c2_start);
      read_field(s, "c2_end", c.swarm.c2_end);
      read_field(s, "v_max", c.swarm.v_max);
      read_field(s, "archive_capacity", c.swarm.archive_capacity);
    }
    if (j.contains("svm")) {
      const auto& s = j.at("svm");
      check_keys(s, {"c", "max_epochs", "tol", "seed"}, "svm");
      read_field(s, "c", c.svm.c);
      read_field(s, "max_epochs", c.svm.max_epochs);
      read_field(s, "tol", c.svm.tol);
      read_field(s, "seed", c.svm.seed);
    }
    if (!c.data_file && !c.generator) {
      throw ConfigError("config: one of data.file / data.generator must be set");
    }
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return config_from_json(ss.str());
}

}  // namespace dissim
