// corrobench: corrupt datasets, score predictions, and build robustness reports.

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "corrobench/commands.hpp"

using namespace corrobench;

namespace {

struct Raw {
  std::string corruptions = "all";
  std::string severities = "all";
  std::string format = "csv";
  std::string layout = "paired-suffix";
  std::optional<std::uint64_t> seed;
  std::uint16_t ignore_id = kDefaultIgnoreId;
};

void add_common(CLI::App* cmd, Raw& raw, RunConfig& cfg) {
  cmd->add_option("--seed", raw.seed, "Global seed (default: $CORROBENCH_SEED or 0)");
  cmd->add_option("--workers", cfg.workers, "Worker threads")->check(CLI::PositiveNumber);
  cmd->add_option("--corruptions", raw.corruptions, "Kinds or families, comma separated, or 'all'");
  cmd->add_option("--severities", raw.severities, "e.g. 1-3, 1,3,5 or 'all'");
  cmd->add_option("--severity-table", cfg.severity_table, "Severity override file");
  cmd->add_option("--frost-assets", cfg.frost_assets, "Directory of frost overlay images");
  cmd->add_option("--psf-grid", cfg.psf_grid, "PSF grid file replacing the radial presets");
  cmd->add_option("--format", raw.format, "Output format: csv or json");
  cmd->add_option("--layout", raw.layout, "paired-suffix or parallel-dirs");
  cmd->add_option("--num-classes", cfg.num_classes, "Class count");
  cmd->add_option("--ignore-id", raw.ignore_id, "Ignored label id");
}

void finalize(const Raw& raw, RunConfig& cfg) {
  cfg.global_seed = raw.seed ? *raw.seed : seed_from_env();
  cfg.kinds = parse_kind_filter(raw.corruptions);
  cfg.severities = parse_severities(raw.severities);
  cfg.format = parse_format(raw.format);
  cfg.layout = parse_layout(raw.layout);
  cfg.ignore_id = raw.ignore_id;
  cfg.resolve();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Image corruption generation and segmentation robustness evaluation"};
  app.set_version_flag("--version", CORROBENCH_VERSION);
  app.require_subcommand(1);

  Raw raw;
  RunConfig cfg;
  std::string in, out, preds, corrupted, model, ref_model, manifest_out;
  std::vector<std::string> records;
  bool bench = false, subtract_once = false;
  int bench_frames = 8;

  auto* corrupt = app.add_subcommand("corrupt", "Write corrupted copies of a dataset");
  add_common(corrupt, raw, cfg);
  corrupt->add_option("--in", in, "Dataset root or manifest");
  corrupt->add_option("--out", out, "Output root");
  corrupt->add_flag("--bench", bench, "Time each kind on 2048x1024 synthetic frames instead");
  corrupt->add_option("--bench-frames", bench_frames, "Frames per kind for --bench");

  auto* evaluate = app.add_subcommand("evaluate", "Score predictions against ground truth");
  add_common(evaluate, raw, cfg);
  evaluate->add_option("--in", in, "Ground-truth dataset root or manifest")->required();
  evaluate->add_option("--preds", preds, "Prediction root (clean/, <kind>/<severity>/)")->required();
  evaluate->add_option("--model", model, "Model id")->required();
  evaluate->add_option("--corrupted", corrupted, "Corrupted tree holding distorted labels");
  evaluate->add_option("--out", out, "Directory for <model>.records.{csv,json}")->required();

  auto* report = app.add_subcommand("report", "Mean mIoU, CD and rCD tables");
  add_common(report, raw, cfg);
  report->add_option("--records", records, "Record files (.csv or .json)")->required();
  report->add_option("--ref-model", ref_model, "Reference model id")->required();
  report->add_option("--out", out, "Output directory")->required();
  report->add_flag("--subtract-clean-once", subtract_once,
                   "rCD: subtract clean degradation once instead of per severity");

  auto* validate = app.add_subcommand("validate", "Check a dataset for pairing, size and id problems");
  add_common(validate, raw, cfg);
  validate->add_option("--in", in, "Dataset root or manifest")->required();

  auto* scan = app.add_subcommand("scan", "Write a dataset manifest (JSON Lines)");
  add_common(scan, raw, cfg);
  scan->add_option("--in", in, "Dataset root")->required();
  scan->add_option("--out", manifest_out, "Manifest path (default: stdout)");

  auto* catalog = app.add_subcommand("catalog", "Dump corruption kinds and severity parameters as JSON");
  add_common(catalog, raw, cfg);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  try {
    finalize(raw, cfg);
    if (*corrupt) {
      if (bench) return cmd_bench(cfg, bench_frames, std::cout);
      if (in.empty() || out.empty()) throw ConfigError("corrupt needs --in and --out (or --bench)");
      return cmd_corrupt(cfg, in, out, std::cout);
    }
    if (*evaluate) return cmd_evaluate(cfg, {in, preds, corrupted, out, model}, std::cout);
    if (*report) {
      ReportArgs args{{records.begin(), records.end()}, ref_model, out,
                      subtract_once ? CleanSubtraction::once : CleanSubtraction::per_severity};
      return cmd_report(cfg, args, std::cout);
    }
    if (*validate) return cmd_validate(cfg, in, std::cout);
    if (*scan) return cmd_scan(cfg, in, manifest_out, std::cout);
    if (*catalog) {
      write_catalog_json(std::cout, cfg.context().table);
      return kExitOk;
    }
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const InvalidSpecError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ParameterError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  }
  return kExitUsage;
}
