#include "corrobench/commands.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <mutex>
#include <ostream>
#include <set>

#include <json.hpp>

#include "corrobench/image_io.hpp"
#include "corrobench/synthetic.hpp"
#include "corrobench/thread_pool.hpp"

namespace corrobench {

using nlohmann::ordered_json;

namespace {

int parse_int(std::string_view s, const char* what) {
  int v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size()) {
    throw ConfigError(std::string("bad ") + what + " '" + std::string(s) + "'");
  }
  return v;
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return std::string(s.substr(b, e - b + 1));
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot write " + path.string());
  return os;
}

void finish(std::ofstream& os, const fs::path& path) {
  if (!os.flush()) throw IoError("write failed: " + path.string());
}

}  // namespace

std::vector<int> parse_severities(std::string_view text) {
  const std::string t = trim(text);
  if (t.empty() || t == "all") return {1, 2, 3, 4, 5};
  std::set<int> out;
  std::string_view rest = t;
  while (!rest.empty()) {
    const auto comma = rest.find(',');
    const std::string item = trim(rest.substr(0, comma));
    rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
    const auto dash = item.find('-');
    int lo, hi;
    if (dash == std::string::npos) {
      lo = hi = parse_int(item, "severity");
    } else {
      lo = parse_int(trim(std::string_view(item).substr(0, dash)), "severity");
      hi = parse_int(trim(std::string_view(item).substr(dash + 1)), "severity");
    }
    if (lo < 1 || hi > kSeverityLevels || lo > hi) {
      throw ConfigError("severity range '" + item + "' outside 1-5");
    }
    for (int s = lo; s <= hi; ++s) out.insert(s);
  }
  return {out.begin(), out.end()};
}

OutputFormat parse_format(std::string_view text) {
  if (text == "csv") return OutputFormat::csv;
  if (text == "json") return OutputFormat::json;
  throw ConfigError("unknown format '" + std::string(text) + "' (expected csv or json)");
}

std::uint64_t seed_from_env() {
  const char* v = std::getenv("CORROBENCH_SEED");
  if (!v || !*v) return 0;
  std::uint64_t seed = 0;
  const std::string_view s(v);
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), seed);
  if (ec != std::errc{} || p != s.data() + s.size()) {
    throw ConfigError("CORROBENCH_SEED='" + std::string(s) + "' is not an unsigned 64-bit integer");
  }
  return seed;
}

void RunConfig::resolve() {
  if (kinds.empty()) kinds = parse_kind_filter("all");
  if (severities.empty()) severities = {1, 2, 3, 4, 5};
  if (workers < 1) throw ConfigError("worker count must be at least 1");
  if (num_classes < 1) throw ConfigError("class count must be at least 1");
}

CorruptionContext RunConfig::context() const {
  CorruptionContext ctx;
  if (!severity_table.empty()) ctx.table.load_overrides(severity_table);
  if (!frost_assets.empty()) {
    if (!fs::is_directory(frost_assets)) {
      throw ConfigError("frost asset directory " + frost_assets.string() + " does not exist");
    }
    ctx.frost_assets = std::make_shared<const FrostAssets>(FrostAssets::load(frost_assets));
  }
  if (!psf_grid.empty()) ctx.psf_grid = std::make_shared<const PsfGrid>(read_psf_grid(psf_grid));
  return ctx;
}

DatasetManifest load_dataset(const fs::path& root, const RunConfig& cfg) {
  if (fs::is_regular_file(root)) return DatasetManifest::load(root);
  return scan_dataset(root, cfg.layout, cfg.num_classes, cfg.ignore_id);
}

namespace {

void warn_manifest(const DatasetManifest& m, std::ostream& log) {
  if (m.entries.empty()) log << "warning: dataset has no image/label pairs\n";
  for (const auto& id : m.unmatched) log << "warning: image '" << id << "' has no label, skipped\n";
}

}  // namespace

int cmd_corrupt(const RunConfig& cfg, const fs::path& in, const fs::path& out, std::ostream& log) {
  const DatasetManifest manifest = load_dataset(in, cfg);
  warn_manifest(manifest, log);
  const CorruptionContext ctx = cfg.context();
  std::vector<CorruptionSpec> specs;
  for (const auto& k : cfg.kinds) {
    for (int s : cfg.severities) specs.push_back({k, s, 0});
  }
  const TreeSummary summary =
      write_corrupted_tree(manifest, specs, out, cfg.global_seed, ctx, cfg.workers);

  for (const auto& k : cfg.kinds) {
    log << k.name() << ": " << summary.images_per_kind.at(k.name()) << " images\n";
  }
  const std::size_t expected = summary.expected(manifest, specs.size());
  char rate[64];
  std::snprintf(rate, sizeof rate, "%.2f", summary.seconds > 0 ? summary.images_written / summary.seconds : 0.0);
  log << "total: " << summary.images_written << "/" << expected << " images, "
      << summary.labels_written << " label maps, " << rate << " images/sec\n";
  for (const auto& f : summary.failures) {
    log << "error: " << f.path.generic_string() << ": " << f.message << "\n";
  }
  if (!summary.failures.empty()) return kExitIo;
  return manifest.entries.empty() ? kExitMissingData : kExitOk;
}

int cmd_evaluate(const RunConfig& cfg, const EvaluateArgs& args, std::ostream& log) {
  if (args.model.empty()) throw ConfigError("--model is required");
  const DatasetManifest manifest = load_dataset(args.gt_root, cfg);
  warn_manifest(manifest, log);
  if (!fs::is_directory(args.pred_root)) {
    throw IoError("prediction root " + args.pred_root.string() + " is not a directory");
  }
  EvaluateOptions opt{args.model, args.pred_root, args.corrupted_root, cfg.kinds, cfg.severities,
                      cfg.workers};
  const EvaluationResult res = evaluate(manifest, opt);

  fs::create_directories(args.out_dir);
  const fs::path path = args.out_dir / (args.model + (cfg.format == OutputFormat::json
                                                          ? ".records.json"
                                                          : ".records.csv"));
  auto os = open_out(path);
  if (cfg.format == OutputFormat::json) {
    write_records_json(os, res.records);
  } else {
    write_records_csv(os, res.records);
  }
  finish(os, path);
  log << res.records.size() << " records written to " << path.generic_string() << "\n";
  for (const auto& a : res.absent) log << "absent: " << a << "\n";
  return res.absent.empty() ? kExitOk : kExitMissingData;
}

int cmd_report(const RunConfig& cfg, const ReportArgs& args, std::ostream& log) {
  if (args.record_files.empty()) throw ConfigError("no record files given");
  if (args.reference.empty()) throw ConfigError("--ref-model is required");
  std::vector<EvaluationRecord> records;
  for (const auto& f : args.record_files) {
    auto r = load_records(f);
    records.insert(records.end(), r.begin(), r.end());
  }
  const Report report = build_report(records, args.reference, args.subtraction);

  fs::create_directories(args.out_dir);
  if (cfg.format == OutputFormat::json) {
    const fs::path path = args.out_dir / "report.json";
    auto os = open_out(path);
    write_report_json(os, report);
    finish(os, path);
    log << "wrote " << path.generic_string() << "\n";
  } else {
    const fs::path pm = args.out_dir / "miou.csv", pc = args.out_dir / "cd.csv",
                   pr = args.out_dir / "rcd.csv";
    auto om = open_out(pm);
    auto oc = open_out(pc);
    auto orc = open_out(pr);
    write_report_csv(om, oc, orc, report);
    finish(om, pm);
    finish(oc, pc);
    finish(orc, pr);
    log << "wrote " << pm.generic_string() << ", " << pc.generic_string() << ", "
        << pr.generic_string() << "\n";
  }
  for (const auto& p : report.problems) log << "warning: " << p << "\n";
  return report.problems.empty() ? kExitOk : kExitMissingData;
}

namespace {

// First out-of-range id, if any.
std::optional<std::string> check_ids(const LabelMap& m, int num_classes) {
  for (int y = 0; y < m.height(); ++y) {
    for (int x = 0; x < m.width(); ++x) {
      const std::uint16_t id = m.at(x, y);
      if (id != m.ignore_id() && id >= num_classes) {
        return "label id " + std::to_string(id) + " >= class_count " + std::to_string(num_classes) +
               " and != ignore_id " + std::to_string(m.ignore_id()) + " at pixel (" +
               std::to_string(x) + "," + std::to_string(y) + ")";
      }
    }
  }
  return std::nullopt;
}

std::string dims(int w, int h) { return std::to_string(w) + "x" + std::to_string(h); }

}  // namespace

int cmd_validate(const RunConfig& cfg, const fs::path& root, std::ostream& log) {
  const DatasetManifest m = load_dataset(root, cfg);
  std::vector<std::string> problems;
  bool io_failure = false;
  for (const auto& id : m.unmatched) problems.push_back("unmatched image '" + id + "': no label file");
  std::mutex mu;
  std::vector<std::vector<std::string>> per_entry(m.entries.size());
  parallel_for(m.entries.size(), cfg.workers, [&](std::size_t i) {
    const ManifestEntry& e = m.entries[i];
    auto& out = per_entry[i];
    try {
      const RasterImage img = read_image(e.image_path);
      const LabelMap gt = read_label_png(e.label_path, m.ignore_id);
      if (img.width() != gt.width() || img.height() != gt.height()) {
        out.push_back(e.image_id + ": label " + e.label_path.generic_string() + " is " +
                      dims(gt.width(), gt.height()) + " but image is " +
                      dims(img.width(), img.height()));
      }
      if (auto bad = check_ids(gt, m.class_count)) {
        out.push_back(e.label_path.generic_string() + ": " + *bad);
      }
      for (const auto& [model, path] : e.predictions) {
        const LabelMap p = read_label_png(path, m.ignore_id);
        if (p.width() != gt.width() || p.height() != gt.height()) {
          out.push_back(path.generic_string() + ": prediction is " + dims(p.width(), p.height()) +
                        " but ground truth is " + dims(gt.width(), gt.height()));
        }
        if (auto bad = check_ids(p, m.class_count)) out.push_back(path.generic_string() + ": " + *bad);
      }
    } catch (const Error& ex) {
      std::lock_guard lock(mu);
      io_failure = true;
      out.push_back(e.image_id + ": " + ex.what());
    }
  });
  for (auto& v : per_entry) problems.insert(problems.end(), v.begin(), v.end());
  for (const auto& p : problems) log << "problem: " << p << "\n";
  log << m.entries.size() << " entries, " << problems.size() << " problems\n";
  if (io_failure) return kExitIo;
  return problems.empty() ? kExitOk : kExitMissingData;
}

int cmd_scan(const RunConfig& cfg, const fs::path& root, const fs::path& out, std::ostream& log) {
  const DatasetManifest m = scan_dataset(root, cfg.layout, cfg.num_classes, cfg.ignore_id);
  warn_manifest(m, log);
  if (out.empty()) {
    m.write_jsonl(log);
  } else {
    m.save(out);
    log << m.entries.size() << " entries written to " << out.generic_string() << "\n";
  }
  return m.entries.empty() ? kExitMissingData : kExitOk;
}

void write_catalog_json(std::ostream& os, const SeverityTable& table) {
  ordered_json j;
  j["schema_version"] = kReportSchemaVersion;
  ordered_json kinds = ordered_json::array();
  for (const auto& entry : list_catalog(table)) {
    ordered_json k;
    k["name"] = entry.kind.name();
    k["family"] = family_name(entry.kind.family());
    ordered_json sev = ordered_json::array();
    for (int s = 0; s < kSeverityLevels; ++s) {
      ordered_json params = ordered_json::object();
      for (const auto& [name, value] : entry.severities[s].values()) params[name] = value;
      sev.push_back({{"severity", s + 1}, {"params", params}});
    }
    k["severities"] = sev;
    kinds.push_back(k);
  }
  j["corruptions"] = kinds;
  os << j.dump(2) << "\n";
}

namespace {

struct BenchTask {
  CorruptionSpec spec;
  int frame;
};

double run_tasks(const std::vector<BenchTask>& tasks, const std::vector<SyntheticFrame>& frames,
                 int workers, const CorruptionContext& ctx) {
  const auto t0 = std::chrono::steady_clock::now();
  parallel_for(tasks.size(), workers, [&](std::size_t i) {
    const SyntheticFrame& f = frames[tasks[i].frame];
    const bool geometric = tasks[i].spec.kind.id == Corruption::geometric_distortion;
    const Corrupted out = apply(tasks[i].spec, f.image,
                                geometric ? std::optional<LabelMap>(f.labels) : std::nullopt, ctx);
    if (out.image.width() != f.image.width()) throw Error("bench: dimension drift");
  });
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::vector<BenchTask> make_tasks(const std::vector<CorruptionKind>& kinds,
                                  const std::vector<int>& severities, int frames_per_kind,
                                  int frame_count) {
  std::vector<BenchTask> tasks;
  for (const auto& k : kinds) {
    for (int i = 0; i < frames_per_kind; ++i) {
      const int s = severities[i % severities.size()];
      tasks.push_back({{k, s, 0x9e3779b9ULL * (i + 1)}, i % frame_count});
    }
  }
  return tasks;
}

std::vector<SyntheticFrame> bench_frames(int width, int height, int count) {
  std::vector<SyntheticFrame> frames;
  for (int i = 0; i < count; ++i) frames.push_back(synthetic_frame(width, height, 1000 + i));
  return frames;
}

}  // namespace

std::vector<BenchResult> bench_kinds(const std::vector<CorruptionKind>& kinds,
                                     const std::vector<int>& severities, int frames_per_kind,
                                     int width, int height, int workers,
                                     const CorruptionContext& ctx) {
  const int frame_count = std::max(1, std::min(frames_per_kind, 4));
  const auto frames = bench_frames(width, height, frame_count);
  std::vector<BenchResult> out;
  for (const auto& k : kinds) {
    const auto tasks = make_tasks({k}, severities, frames_per_kind, frame_count);
    out.push_back({k.name(), tasks.size(), run_tasks(tasks, frames, workers, ctx)});
  }
  return out;
}

BenchResult bench_batch(const std::string& name, const std::vector<CorruptionKind>& kinds,
                        const std::vector<int>& severities, int frames_per_kind, int width,
                        int height, int workers, const CorruptionContext& ctx) {
  const int frame_count = std::max(1, std::min(frames_per_kind, 4));
  const auto frames = bench_frames(width, height, frame_count);
  const auto tasks = make_tasks(kinds, severities, frames_per_kind, frame_count);
  return {name, tasks.size(), run_tasks(tasks, frames, workers, ctx)};
}

int cmd_bench(const RunConfig& cfg, int frames_per_kind, std::ostream& log) {
  if (frames_per_kind < 1) throw ConfigError("bench frame count must be at least 1");
  const CorruptionContext ctx = cfg.context();
  log << "bench: 2048x1024 synthetic frames, " << cfg.workers << " workers, " << frames_per_kind
      << " frames per kind\n";
  for (const auto& r : bench_kinds(cfg.kinds, cfg.severities, frames_per_kind, 2048, 1024,
                                   cfg.workers, ctx)) {
    char line[160];
    std::snprintf(line, sizeof line, "%-22s %4zu frames %8.3f s %8.2f images/sec\n", r.name.c_str(),
                  r.frames, r.seconds, r.images_per_sec());
    log << line;
  }
  return kExitOk;
}

}  // namespace corrobench
