#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "corrobench/corruption.hpp"
#include "corrobench/dataset.hpp"
#include "corrobench/evaluation.hpp"

namespace corrobench {

enum ExitCode : int {
  kExitOk = 0,
  kExitMissingData = 1,
  kExitUsage = 2,
  kExitIo = 3,
};

enum class OutputFormat { csv, json };

struct RunConfig {
  std::uint64_t global_seed = 0;
  std::vector<CorruptionKind> kinds;  // empty: every catalog kind
  std::vector<int> severities;        // empty: 1..5
  fs::path severity_table;            // optional override file
  fs::path frost_assets;
  fs::path psf_grid;                  // optional grid file replacing the radial presets
  int workers = 1;
  OutputFormat format = OutputFormat::csv;
  Layout layout = Layout::paired_suffix;
  int num_classes = kDefaultClassCount;
  std::uint16_t ignore_id = kDefaultIgnoreId;

  /// Fills empty selections with the defaults; ConfigError on bad values.
  void resolve();
  /// Severity table with overrides, frost assets and psf grid loaded.
  CorruptionContext context() const;
};

/// "3", "1-3", "1,3,5" or "all" -> sorted unique severities in 1..5.
std::vector<int> parse_severities(std::string_view text);
OutputFormat parse_format(std::string_view text);
/// CORROBENCH_SEED, or 0 when unset. ConfigError on a malformed value.
std::uint64_t seed_from_env();

/// `root` may be a dataset directory or a saved manifest (.jsonl).
DatasetManifest load_dataset(const fs::path& root, const RunConfig& cfg);

int cmd_corrupt(const RunConfig& cfg, const fs::path& in, const fs::path& out, std::ostream& log);

struct EvaluateArgs {
  fs::path gt_root;
  fs::path pred_root;
  fs::path corrupted_root;
  fs::path out_dir;
  std::string model;
};
int cmd_evaluate(const RunConfig& cfg, const EvaluateArgs& args, std::ostream& log);

struct ReportArgs {
  std::vector<fs::path> record_files;
  std::string reference;
  fs::path out_dir;
  CleanSubtraction subtraction = CleanSubtraction::per_severity;
};
int cmd_report(const RunConfig& cfg, const ReportArgs& args, std::ostream& log);

int cmd_validate(const RunConfig& cfg, const fs::path& root, std::ostream& log);

int cmd_scan(const RunConfig& cfg, const fs::path& root, const fs::path& out, std::ostream& log);

/// `corrupt --bench`: per-kind rates on 2048x1024 synthetic frames.
int cmd_bench(const RunConfig& cfg, int frames_per_kind, std::ostream& log);

/// JSON dump of every kind with its per-severity parameters.
void write_catalog_json(std::ostream& os, const SeverityTable& table);

struct BenchResult {
  std::string name;      // kind name, or a family aggregate such as "noise"
  std::size_t frames = 0;
  double seconds = 0.0;
  double images_per_sec() const { return seconds > 0 ? frames / seconds : 0.0; }
};

/// Times apply() on synthetic frames: `frames_per_kind` per kind, severities
/// cycled, `workers` threads over all tasks of one kind at a time.
std::vector<BenchResult> bench_kinds(const std::vector<CorruptionKind>& kinds,
                                     const std::vector<int>& severities, int frames_per_kind,
                                     int width, int height, int workers,
                                     const CorruptionContext& ctx);

/// All tasks of every listed kind in one parallel batch; reports the aggregate rate.
BenchResult bench_batch(const std::string& name, const std::vector<CorruptionKind>& kinds,
                        const std::vector<int>& severities, int frames_per_kind, int width,
                        int height, int workers, const CorruptionContext& ctx);

}  // namespace corrobench
