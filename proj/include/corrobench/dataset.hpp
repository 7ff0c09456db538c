#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "corrobench/corruption.hpp"
#include "corrobench/image.hpp"

namespace corrobench {

namespace fs = std::filesystem;

enum class Layout {
  paired_suffix,  // <id>.png next to <id>_label.png
  parallel_dirs,  // images/<id>.png, labels/<id>.png, preds/<model>/<id>.png
};

std::string_view layout_name(Layout l);
Layout parse_layout(std::string_view name);  // ConfigError on unknown names

struct ManifestEntry {
  std::string image_id;  // path relative to the image root, '/'-separated, no extension
  fs::path image_path;
  fs::path label_path;
  std::map<std::string, fs::path> predictions;  // model id -> label png

  bool operator==(const ManifestEntry&) const = default;
};

inline constexpr int kManifestSchemaVersion = 1;
inline constexpr int kDefaultClassCount = 19;

struct DatasetManifest {
  Layout layout = Layout::paired_suffix;
  int class_count = kDefaultClassCount;
  std::uint16_t ignore_id = kDefaultIgnoreId;
  std::vector<ManifestEntry> entries;    // sorted by image_id, ids unique
  std::vector<std::string> unmatched;    // image ids without a label file

  /// JSON Lines: a header object, then one object per entry.
  void write_jsonl(std::ostream& os) const;
  static DatasetManifest read_jsonl(std::istream& is);
  void save(const fs::path& path) const;
  static DatasetManifest load(const fs::path& path);

  bool operator==(const DatasetManifest&) const = default;
};

/// Walks `root` and pairs images with labels (and predictions, for
/// parallel-dirs). Missing root -> IoError. Images are .png/.jpg/.jpeg.
DatasetManifest scan_dataset(const fs::path& root, Layout layout,
                             int class_count = kDefaultClassCount,
                             std::uint16_t ignore_id = kDefaultIgnoreId);

struct TreeFailure {
  fs::path path;
  std::string message;
};

struct TreeSummary {
  std::map<std::string, std::size_t> images_per_kind;  // kind name -> files written
  std::size_t images_written = 0;
  std::size_t labels_written = 0;
  std::vector<TreeFailure> failures;
  double seconds = 0.0;

  std::size_t expected(const DatasetManifest& m, std::size_t spec_count) const {
    return m.entries.size() * spec_count;
  }
};

/// out_root/<kind>/<severity>/<image_id>.png, plus <image_id>_label.png for
/// geometric distortion. Each spec's seed field is ignored: per-image seeds
/// come from derive_seed(global_seed, image_id, spec). Always writes
/// out_root/run.json. Per-file errors are collected in the summary; the
/// metadata file failing to write throws IoError.
TreeSummary write_corrupted_tree(const DatasetManifest& manifest,
                                 const std::vector<CorruptionSpec>& specs, const fs::path& out_root,
                                 std::uint64_t global_seed, const CorruptionContext& ctx,
                                 int workers = 1);

/// Relative output path of one corrupted image (or its label map).
fs::path corrupted_image_path(const CorruptionKind& kind, int severity, std::string_view image_id);
fs::path corrupted_label_path(const CorruptionKind& kind, int severity, std::string_view image_id);

}  // namespace corrobench
