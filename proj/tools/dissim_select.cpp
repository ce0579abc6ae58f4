// dissim-select: synthetic data generation, experiment runs and report
// re-emission for writer-independent signature verification with BPSO
// feature selection.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dissim/errors.hpp"
#include "dissim/experiment.hpp"
#include "dissim/synthetic.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitConfig = 2;
constexpr int kExitData = 3;

void print_table(const std::vector<dissim::ApproachSummary>& summaries) {
  std::printf("%-24s %14s %14s %12s\n", "approach", "n_features", "eer_mean_%", "eer_std_%");
  for (const auto& s : summaries) {
    if (s.completed == 0) {
      std::printf("%-24s %14s %14s %12s\n", s.approach.c_str(), "-", "-", "-");
      continue;
    }
    std::printf("%-24s %14.2f %14.3f %12.3f\n", s.approach.c_str(), s.n_features_mean,
                s.eer_mean_pct, s.eer_std_pct);
  }
}

int run_gen(const dissim::GeneratorConfig& config, const std::string& out_path) {
  const dissim::Dataset dataset = dissim::generate(config);
  dissim::save_feature_file(dataset, out_path);
  std::printf("wrote %zu records (%zu writers, dim %zu) to %s\n", dataset.size(),
              dataset.writer_ids().size(), dataset.dim(), out_path.c_str());
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Writer-independent signature verification in a dissimilarity space with "
               "BPSO wrapper feature selection"};
  app.require_subcommand(1);

  // gen
  auto* gen = app.add_subcommand("gen", "Generate a synthetic feature CSV");
  dissim::GeneratorConfig gen_config;
  std::string gen_out;
  gen->add_option("--out", gen_out, "Output CSV path (.gz for gzip)")->required();
  gen->add_option("--writers", gen_config.n_writers, "Number of writers");
  gen->add_option("--genuine", gen_config.genuine_per_writer, "Genuine signatures per writer");
  gen->add_option("--skilled", gen_config.skilled_per_writer, "Skilled forgeries per writer");
  gen->add_option("--dim", gen_config.dim, "Feature dimensions");
  gen->add_option("--informative", gen_config.informative_dims, "Informative dimensions");
  gen->add_option("--spread", gen_config.writer_spread, "Within-writer noise scale");
  gen->add_option("--offset", gen_config.forgery_offset, "Skilled-forgery displacement scale");
  gen->add_option("--seed", gen_config.seed, "Generator seed");

  // run
  auto* run_cmd = app.add_subcommand("run", "Run the full experiment from a config JSON");
  std::string config_path;
  std::uint64_t seed_override = 0;
  bool seed_given = false;
  std::string out_override;
  std::vector<std::string> strategy_override;
  unsigned workers_override = 0;
  bool workers_given = false;
  run_cmd->add_option("--config", config_path, "Experiment config JSON")->required();
  run_cmd->add_option("--seed", seed_override, "Override master seed")
      ->each([&](const std::string&) { seed_given = true; });
  run_cmd->add_option("--out", out_override, "Override output directory");
  run_cmd->add_option("--strategies", strategy_override,
                      "Override strategies (comma separated)")
      ->delimiter(',');
  run_cmd->add_option("--workers", workers_override, "Override worker threads (0 = hardware)")
      ->each([&](const std::string&) { workers_given = true; });

  // report
  auto* report_cmd =
      app.add_subcommand("report", "Rebuild table1.csv from run_*.json artifacts");
  std::string report_dir;
  std::string report_out;
  report_cmd->add_option("--dir", report_dir, "Directory containing run_*.json")->required();
  report_cmd->add_option("--out", report_out, "Output table path (default <dir>/table1.csv)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (gen->parsed()) return run_gen(gen_config, gen_out);

    if (run_cmd->parsed()) {
      dissim::ExperimentConfig config = dissim::load_config(config_path);
      if (seed_given) config.seed = seed_override;
      if (!out_override.empty()) config.out_dir = out_override;
      if (workers_given) config.workers = workers_override;
      if (!strategy_override.empty()) {
        config.strategies.clear();
        for (const auto& name : strategy_override) {
          const auto s = dissim::strategy_from_name(name);
          if (!s) throw dissim::ConfigError("unknown strategy '" + name + "'");
          config.strategies.push_back(*s);
        }
      }
      const dissim::ExperimentReport report = dissim::run_experiment(config);
      dissim::emit_report(report, config.out_dir);
      print_table(report.summaries);
      std::printf("artifacts written to %s\n", config.out_dir.c_str());
      for (const auto& row : report.rows) {
        if (row.failed) {
          std::fprintf(stderr, "warning: %s replication %zu failed: %s\n", row.approach.c_str(),
                       row.replication, row.error.c_str());
        }
      }
      return kExitOk;
    }

    if (report_cmd->parsed()) {
      const auto summaries = dissim::summarize_run_dir(report_dir);
      const std::string out_path =
          report_out.empty() ? (std::filesystem::path(report_dir) / "table1.csv").string()
                             : report_out;
      dissim::write_table(summaries, out_path);
      print_table(summaries);
      std::printf("table written to %s\n", out_path.c_str());
      return kExitOk;
    }
  } catch (const dissim::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfig;
  } catch (const dissim::UsageError& e) {
    std::fprintf(stderr, "usage error: %s\n", e.what());
    return kExitConfig;
  } catch (const dissim::ParseError& e) {
    std::fprintf(stderr, "data error: %s\n", e.what());
    return kExitData;
  } catch (const dissim::SchemaError& e) {
    std::fprintf(stderr, "data error: %s\n", e.what());
    return kExitData;
  } catch (const dissim::DataError& e) {
    std::fprintf(stderr, "data error: %s\n", e.what());
    return kExitData;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitError;
  }
  return kExitOk;
}
