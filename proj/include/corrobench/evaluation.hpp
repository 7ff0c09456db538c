#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "corrobench/dataset.hpp"
#include "corrobench/kinds.hpp"
#include "corrobench/metrics.hpp"

namespace corrobench {

inline constexpr int kReportSchemaVersion = 1;
inline constexpr std::string_view kCleanName = "clean";

/// One mIoU measurement. The clean record has corruption "clean", severity 0.
struct EvaluationRecord {
  std::string model;
  std::string corruption;
  int severity = 0;
  double miou = 0.0;

  bool operator==(const EvaluationRecord&) const = default;
};

/// `model,corruption,severity,miou` with mIoU printed to 17 significant digits.
void write_records_csv(std::ostream& os, const std::vector<EvaluationRecord>& records);
std::vector<EvaluationRecord> read_records_csv(std::istream& is);
void write_records_json(std::ostream& os, const std::vector<EvaluationRecord>& records);
std::vector<EvaluationRecord> read_records_json(std::istream& is);
/// Dispatches on extension (.csv or .json).
std::vector<EvaluationRecord> load_records(const fs::path& path);

/// Severities that enter a corruption's aggregates: {1,2,3} for noise, {1..5} otherwise.
std::vector<int> aggregate_severities(const CorruptionKind& kind);

struct EvaluateOptions {
  std::string model;
  fs::path pred_root;       // clean/<id>.png and <kind>/<severity>/<id>.png
  fs::path corrupted_root;  // source of distorted labels for geometric subtrees
  std::vector<CorruptionKind> kinds;
  std::vector<int> severities;
  int workers = 1;
};

struct EvaluationResult {
  std::vector<EvaluationRecord> records;  // clean first, then catalog order
  std::vector<std::string> absent;        // subtrees or files that were missing
};

/// Scores every selected subtree against the manifest's labels (distorted
/// labels for geometric distortion). A subtree with any missing prediction is
/// listed in `absent` and produces no record.
EvaluationResult evaluate(const DatasetManifest& manifest, const EvaluateOptions& opt);

/// Confusion matrix of one prediction directory against ground truth.
ConfusionMatrix score_directory(const DatasetManifest& manifest, const fs::path& pred_dir,
                                const std::optional<fs::path>& gt_dir, int workers,
                                std::vector<std::string>* missing);

struct CorruptionCell {
  std::vector<int> severities_used;
  double mean_miou = 0.0;
  std::optional<double> cd;
  std::optional<double> rcd;
};

struct ModelReport {
  std::string model;
  std::optional<double> clean_miou;
  std::map<std::string, CorruptionCell> cells;  // keyed by corruption name
  std::optional<double> mean_cd;   // over corruptions except psf
  std::optional<double> mean_rcd;
};

struct Report {
  std::string reference;
  CleanSubtraction subtraction = CleanSubtraction::per_severity;
  std::vector<std::string> corruptions;  // column order (catalog order)
  std::vector<std::string> mean_columns; // corruptions entering mean_cd / mean_rcd
  std::vector<ModelReport> models;       // reference first, then by name
  std::vector<std::string> problems;     // incomplete series, skipped cells
};

/// Builds the mean-mIoU table and CD/rCD against `reference`. Throws
/// ConfigError when the reference has no records.
Report build_report(const std::vector<EvaluationRecord>& records, const std::string& reference,
                    CleanSubtraction subtraction = CleanSubtraction::per_severity);

/// report.json: full-precision values, severity audit, schema_version.
void write_report_json(std::ostream& os, const Report& r);
/// Three tables rounded to 0.1: miou (percent), cd, rcd.
void write_report_csv(std::ostream& miou, std::ostream& cd, std::ostream& rcd, const Report& r);

}  // namespace corrobench
