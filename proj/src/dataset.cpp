#include "corrobench/dataset.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <set>
#include <sstream>

#include <json.hpp>

#include "corrobench/image_io.hpp"
#include "corrobench/thread_pool.hpp"

namespace corrobench {

using nlohmann::ordered_json;

std::string_view layout_name(Layout l) {
  return l == Layout::paired_suffix ? "paired-suffix" : "parallel-dirs";
}

Layout parse_layout(std::string_view name) {
  if (name == "paired-suffix") return Layout::paired_suffix;
  if (name == "parallel-dirs") return Layout::parallel_dirs;
  throw ConfigError("unknown layout '" + std::string(name) +
                    "' (expected paired-suffix or parallel-dirs)");
}

namespace {

constexpr std::string_view kLabelSuffix = "_label";

bool is_image_ext(const fs::path& p) {
  std::string ext = p.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  return ext == ".png" || ext == ".jpg" || ext == ".jpeg";
}

bool ends_with(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

// Sorted (id, path) pairs for every image file under dir. Directory iteration
// errors surface as IoError naming the path.
std::vector<std::pair<std::string, fs::path>> list_images(const fs::path& dir) {
  std::vector<std::pair<std::string, fs::path>> out;
  std::error_code ec;
  fs::recursive_directory_iterator it(dir, ec), end;
  if (ec) throw IoError("cannot read directory " + dir.string() + ": " + ec.message());
  for (; it != end; it.increment(ec)) {
    if (ec) throw IoError("cannot read directory entry under " + dir.string() + ": " + ec.message());
    if (!it->is_regular_file() || !is_image_ext(it->path())) continue;
    fs::path rel = it->path().lexically_relative(dir);
    rel.replace_extension();
    out.emplace_back(rel.generic_string(), it->path());
  }
  std::sort(out.begin(), out.end());
  return out;
}

fs::path find_png(const fs::path& dir, std::string_view id, std::string_view suffix = {}) {
  fs::path p = dir / (std::string(id) + std::string(suffix) + ".png");
  return fs::is_regular_file(p) ? p : fs::path{};
}

void check_unique(const std::vector<ManifestEntry>& entries) {
  for (std::size_t i = 1; i < entries.size(); ++i) {
    if (entries[i].image_id == entries[i - 1].image_id) {
      throw InputError("duplicate image id '" + entries[i].image_id +
                       "' (same name with different extensions?)");
    }
  }
}

}  // namespace

DatasetManifest scan_dataset(const fs::path& root, Layout layout, int class_count,
                             std::uint16_t ignore_id) {
  if (!fs::is_directory(root)) throw IoError("dataset root " + root.string() + " is not a directory");
  DatasetManifest m;
  m.layout = layout;
  m.class_count = class_count;
  m.ignore_id = ignore_id;

  if (layout == Layout::paired_suffix) {
    for (const auto& [id, path] : list_images(root)) {
      if (ends_with(id, kLabelSuffix)) continue;
      fs::path label = find_png(root, id, kLabelSuffix);
      if (label.empty()) {
        m.unmatched.push_back(id);
        continue;
      }
      m.entries.push_back({id, path, label, {}});
    }
  } else {
    const fs::path images = root / "images";
    const fs::path labels = root / "labels";
    const fs::path preds = root / "preds";
    if (!fs::is_directory(images)) throw IoError("missing images/ directory under " + root.string());
    std::vector<std::pair<std::string, fs::path>> models;
    if (fs::is_directory(preds)) {
      for (const auto& d : fs::directory_iterator(preds)) {
        if (d.is_directory()) models.emplace_back(d.path().filename().string(), d.path());
      }
      std::sort(models.begin(), models.end());
    }
    for (const auto& [id, path] : list_images(images)) {
      fs::path label = find_png(labels, id);
      if (label.empty()) {
        m.unmatched.push_back(id);
        continue;
      }
      ManifestEntry e{id, path, label, {}};
      for (const auto& [model, dir] : models) {
        fs::path p = find_png(dir, id);
        if (!p.empty()) e.predictions.emplace(model, p);
      }
      m.entries.push_back(std::move(e));
    }
  }
  check_unique(m.entries);
  return m;
}

void DatasetManifest::write_jsonl(std::ostream& os) const {
  ordered_json header;
  header["schema_version"] = kManifestSchemaVersion;
  header["layout"] = layout_name(layout);
  header["class_count"] = class_count;
  header["ignore_id"] = ignore_id;
  header["entry_count"] = entries.size();
  header["unmatched"] = unmatched;
  os << header.dump() << "\n";
  for (const auto& e : entries) {
    ordered_json j;
    j["image_id"] = e.image_id;
    j["image_path"] = e.image_path.generic_string();
    j["label_path"] = e.label_path.generic_string();
    ordered_json preds = ordered_json::object();
    for (const auto& [model, p] : e.predictions) preds[model] = p.generic_string();
    j["predictions"] = preds;
    os << j.dump() << "\n";
  }
}

DatasetManifest DatasetManifest::read_jsonl(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw InputError("manifest is empty");
  DatasetManifest m;
  std::size_t expected = 0;
  try {
    const auto header = ordered_json::parse(line);
    if (header.at("schema_version").get<int>() != kManifestSchemaVersion) {
      throw InputError("unsupported manifest schema_version");
    }
    m.layout = parse_layout(header.at("layout").get<std::string>());
    m.class_count = header.at("class_count").get<int>();
    m.ignore_id = header.at("ignore_id").get<std::uint16_t>();
    expected = header.at("entry_count").get<std::size_t>();
    m.unmatched = header.at("unmatched").get<std::vector<std::string>>();
    while (std::getline(is, line)) {
      if (line.empty()) continue;
      const auto j = ordered_json::parse(line);
      ManifestEntry e;
      e.image_id = j.at("image_id").get<std::string>();
      e.image_path = j.at("image_path").get<std::string>();
      e.label_path = j.at("label_path").get<std::string>();
      for (const auto& [model, p] : j.at("predictions").items()) {
        e.predictions.emplace(model, p.get<std::string>());
      }
      m.entries.push_back(std::move(e));
    }
  } catch (const nlohmann::json::exception& ex) {
    throw InputError(std::string("malformed manifest: ") + ex.what());
  }
  if (m.entries.size() != expected) {
    throw InputError("manifest declares " + std::to_string(expected) + " entries but has " +
                     std::to_string(m.entries.size()));
  }
  if (!std::is_sorted(m.entries.begin(), m.entries.end(),
                      [](const auto& a, const auto& b) { return a.image_id < b.image_id; })) {
    throw InputError("manifest entries are not sorted by image_id");
  }
  check_unique(m.entries);
  return m;
}

void DatasetManifest::save(const fs::path& path) const {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot write " + path.string());
  write_jsonl(os);
  if (!os.flush()) throw IoError("write failed: " + path.string());
}

DatasetManifest DatasetManifest::load(const fs::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot read " + path.string());
  return read_jsonl(is);
}

fs::path corrupted_image_path(const CorruptionKind& kind, int severity, std::string_view image_id) {
  return fs::path(kind.name()) / std::to_string(severity) / (std::string(image_id) + ".png");
}

fs::path corrupted_label_path(const CorruptionKind& kind, int severity, std::string_view image_id) {
  return fs::path(kind.name()) / std::to_string(severity) /
         (std::string(image_id) + std::string(kLabelSuffix) + ".png");
}

namespace {

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

void write_run_metadata(const fs::path& out_root, const DatasetManifest& manifest,
                        const std::vector<CorruptionSpec>& specs, std::uint64_t global_seed,
                        const CorruptionContext& ctx, const TreeSummary& summary) {
  ordered_json j;
  j["schema_version"] = 1;
  j["tool_version"] = CORROBENCH_VERSION;
  j["global_seed"] = global_seed;
  j["severity_table_hash"] = hex64(ctx.table.hash());
  j["psf_grid"] = ctx.psf_grid ? "file" : "radial-preset";
  j["frost_assets"] = ctx.frost_assets ? ctx.frost_assets->overlays.size() : 0;
  j["image_count"] = manifest.entries.size();
  ordered_json list = ordered_json::array();
  for (const auto& s : specs) list.push_back({{"corruption", s.kind.name()}, {"severity", s.severity}});
  j["specs"] = list;
  j["images_written"] = summary.images_written;
  j["labels_written"] = summary.labels_written;
  ordered_json failures = ordered_json::array();
  for (const auto& f : summary.failures) {
    failures.push_back({{"path", f.path.generic_string()}, {"error", f.message}});
  }
  j["partial"] = !summary.failures.empty();
  j["failures"] = failures;

  std::error_code ec;
  fs::create_directories(out_root, ec);
  const fs::path path = out_root / "run.json";
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot write " + path.string());
  os << j.dump(2) << "\n";
  if (!os.flush()) throw IoError("write failed: " + path.string());
}

}  // namespace

TreeSummary write_corrupted_tree(const DatasetManifest& manifest,
                                 const std::vector<CorruptionSpec>& specs, const fs::path& out_root,
                                 std::uint64_t global_seed, const CorruptionContext& ctx,
                                 int workers) {
  const auto t0 = std::chrono::steady_clock::now();
  TreeSummary summary;
  for (const auto& s : specs) {
    s.validate();
    summary.images_per_kind.try_emplace(s.kind.name(), 0);
  }
  std::mutex mu;
  const std::size_t n_specs = specs.size();

  parallel_for(manifest.entries.size() * n_specs, workers, [&](std::size_t task) {
    const ManifestEntry& e = manifest.entries[task / n_specs];
    CorruptionSpec spec = specs[task % n_specs];
    spec.seed = derive_seed(global_seed, e.image_id, spec);
    const bool geometric = spec.kind.id == Corruption::geometric_distortion;
    const fs::path img_out = out_root / corrupted_image_path(spec.kind, spec.severity, e.image_id);
    try {
      const RasterImage img = read_image(e.image_path);
      std::optional<LabelMap> labels;
      if (geometric) labels = read_label_png(e.label_path, manifest.ignore_id);
      const Corrupted out = apply(spec, img, labels, ctx);
      fs::create_directories(img_out.parent_path());
      write_png(img_out, out.image);
      bool wrote_label = false;
      if (geometric) {
        write_label_png(out_root / corrupted_label_path(spec.kind, spec.severity, e.image_id),
                        *out.labels);
        wrote_label = true;
      }
      std::lock_guard lock(mu);
      ++summary.images_written;
      ++summary.images_per_kind[spec.kind.name()];
      if (wrote_label) ++summary.labels_written;
    } catch (const std::exception& ex) {
      std::lock_guard lock(mu);
      summary.failures.push_back({img_out, ex.what()});
    }
  });
  std::sort(summary.failures.begin(), summary.failures.end(),
            [](const auto& a, const auto& b) { return a.path < b.path; });
  summary.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  write_run_metadata(out_root, manifest, specs, global_seed, ctx, summary);
  return summary;
}

}  // namespace corrobench
