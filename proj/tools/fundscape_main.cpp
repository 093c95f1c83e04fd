// fundscape: rare-disease publication retrieval, funding classification and
// field-normalized indicator reporting over open bibliographic snapshots.

#include <fstream>
#include <iostream>
#include <memory>

#include <CLI11.hpp>

#include "fundscape/pipeline.hpp"
#include "fundscape/version.hpp"

using namespace fundscape;

namespace {

struct CommonArgs {
  std::string config_path;
  std::string out;
  int workers = 0;          // 0 = use config value
  int census_year = 0;      // 0 = use config/sidecar value
};

PipelineConfig load_with_overrides(const CommonArgs& args) {
  PipelineConfig config = load_pipeline_config(args.config_path);
  if (!args.out.empty()) config.output_dir = args.out;
  if (args.workers > 0) config.worker_count = args.workers;
  if (args.census_year > 0) config.census_year = args.census_year;
  return config;
}

// Shared by the single-stage subcommands: stream to --out file or stdout.
int emit_to(const std::string& out_path, const std::function<void(std::ostream&)>& write) {
  if (out_path.empty() || out_path == "-") {
    write(std::cout);
    return 0;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) {
    std::cerr << "error: cannot write " << out_path << "\n";
    return 2;
  }
  write(out);
  return out ? 0 : 2;
}

int guarded(const std::function<int()>& body) {
  try {
    return body();
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fundscape: rare-disease publication funding analysis pipeline"};
  app.set_version_flag("--version", std::string("fundscape ") + kVersion);
  app.require_subcommand(1);

  CommonArgs args;

  auto add_common = [&](CLI::App* cmd, bool with_out) {
    cmd->add_option("-c,--config", args.config_path, "pipeline config JSON")->required();
    if (with_out) cmd->add_option("-o,--out", args.out, "output file ('-' = stdout)");
    cmd->add_option("-w,--workers", args.workers, "worker threads (overrides config)");
    cmd->add_option("--census-year", args.census_year, "census year (overrides config/sidecar)");
  };

  auto* validate_cmd =
      app.add_subcommand("validate", "check config and inputs without running the pipeline");
  add_common(validate_cmd, false);

  auto* match_cmd = app.add_subcommand("match", "emit matched publications as JSON lines");
  add_common(match_cmd, true);

  auto* classify_cmd =
      app.add_subcommand("classify", "emit per-country funding classifications as JSON lines");
  add_common(classify_cmd, true);

  std::string plot_out;
  auto* indicators_cmd =
      app.add_subcommand("indicators", "emit the (country, year, category) indicator CSV");
  add_common(indicators_cmd, true);
  indicators_cmd->add_option("--plot", plot_out, "also write plot-data JSON to this file");

  auto* run_cmd = app.add_subcommand("run", "full pipeline: write all artifacts to the output dir");
  run_cmd->add_option("-c,--config", args.config_path, "pipeline config JSON")->required();
  run_cmd->add_option("-o,--out", args.out, "output directory (overrides config)");
  run_cmd->add_option("-w,--workers", args.workers, "worker threads (overrides config)");
  run_cmd->add_option("--census-year", args.census_year, "census year (overrides config/sidecar)");

  std::string report_from;
  auto* report_cmd =
      app.add_subcommand("report", "rebuild plot data from a previous run's indicators.csv");
  report_cmd->add_option("--from", report_from, "output directory of a previous run")->required();
  report_cmd->add_option("-o,--out", args.out, "output file ('-' = stdout)");

  CLI11_PARSE(app, argc, argv);

  if (validate_cmd->parsed()) {
    return guarded([&] {
      PipelineConfig config = load_with_overrides(args);
      auto diags = validate_inputs(config);
      for (const auto& d : diags) std::cout << "[" << d.stage << "] " << d.message << "\n";
      if (diags.empty()) {
        std::cerr << "inputs OK\n";
        return 0;
      }
      std::cerr << diags.size() << " problem(s) found\n";
      return 1;
    });
  }
  if (match_cmd->parsed()) {
    return guarded([&] {
      PipelineConfig config = load_with_overrides(args);
      PipelineArtifacts art = execute_pipeline(config, PipelineStage::kMatch);
      return emit_to(args.out, [&](std::ostream& o) { write_matched_jsonl(art, o); });
    });
  }
  if (classify_cmd->parsed()) {
    return guarded([&] {
      PipelineConfig config = load_with_overrides(args);
      PipelineArtifacts art = execute_pipeline(config, PipelineStage::kClassify);
      return emit_to(args.out, [&](std::ostream& o) { write_classification_jsonl(art, o); });
    });
  }
  if (indicators_cmd->parsed()) {
    return guarded([&] {
      PipelineConfig config = load_with_overrides(args);
      PipelineArtifacts art = execute_pipeline(config);
      if (!plot_out.empty()) {
        int rc = emit_to(plot_out, [&](std::ostream& o) { write_plot_data(art.report, o); });
        if (rc != 0) return rc;
      }
      return emit_to(args.out, [&](std::ostream& o) { write_indicator_csv(art.report, o); });
    });
  }
  if (run_cmd->parsed()) {
    return guarded([&] {
      PipelineConfig config = load_with_overrides(args);
      return run_pipeline(config);
    });
  }
  if (report_cmd->parsed()) {
    return guarded([&] {
      std::ifstream in(report_from + "/indicators.csv", std::ios::binary);
      if (!in) {
        std::cerr << "error: cannot open " << report_from << "/indicators.csv\n";
        return 2;
      }
      IndicatorReport report = read_indicator_csv(in);
      return emit_to(args.out, [&](std::ostream& o) { write_plot_data(report, o); });
    });
  }
  return 0;
}
