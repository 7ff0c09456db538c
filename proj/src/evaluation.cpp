#include "corrobench/evaluation.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <mutex>
#include <ostream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "corrobench/image_io.hpp"
#include "corrobench/thread_pool.hpp"

namespace corrobench {

using nlohmann::ordered_json;

namespace {

std::string format17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void check_field(const std::string& s, const char* what) {
  if (s.empty() || s.find_first_of(",\n\r") != std::string::npos) {
    throw InputError(std::string(what) + " '" + s + "' is empty or contains a comma or newline");
  }
}

}  // namespace

void write_records_csv(std::ostream& os, const std::vector<EvaluationRecord>& records) {
  os << "model,corruption,severity,miou\n";
  for (const auto& r : records) {
    check_field(r.model, "model id");
    check_field(r.corruption, "corruption name");
    os << r.model << ',' << r.corruption << ',' << r.severity << ',' << format17(r.miou) << "\n";
  }
}

std::vector<EvaluationRecord> read_records_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != "model,corruption,severity,miou") {
    throw InputError("records csv must start with 'model,corruption,severity,miou'");
  }
  std::vector<EvaluationRecord> out;
  int lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) f.push_back(cell);
    if (f.size() != 4) throw InputError("records csv line " + std::to_string(lineno) + ": expected 4 fields");
    EvaluationRecord r{f[0], f[1], 0, 0.0};
    auto [p1, e1] = std::from_chars(f[2].data(), f[2].data() + f[2].size(), r.severity);
    auto [p2, e2] = std::from_chars(f[3].data(), f[3].data() + f[3].size(), r.miou);
    if (e1 != std::errc{} || e2 != std::errc{} || p1 != f[2].data() + f[2].size() ||
        p2 != f[3].data() + f[3].size()) {
      throw InputError("records csv line " + std::to_string(lineno) + ": bad number");
    }
    out.push_back(std::move(r));
  }
  return out;
}

void write_records_json(std::ostream& os, const std::vector<EvaluationRecord>& records) {
  ordered_json j;
  j["schema_version"] = kReportSchemaVersion;
  ordered_json list = ordered_json::array();
  for (const auto& r : records) {
    list.push_back({{"model", r.model}, {"corruption", r.corruption}, {"severity", r.severity},
                    {"miou", r.miou}});
  }
  j["records"] = list;
  os << j.dump(2) << "\n";
}

std::vector<EvaluationRecord> read_records_json(std::istream& is) {
  std::vector<EvaluationRecord> out;
  try {
    const auto j = ordered_json::parse(is);
    for (const auto& r : j.at("records")) {
      out.push_back({r.at("model").get<std::string>(), r.at("corruption").get<std::string>(),
                     r.at("severity").get<int>(), r.at("miou").get<double>()});
    }
  } catch (const nlohmann::json::exception& ex) {
    throw InputError(std::string("malformed records json: ") + ex.what());
  }
  return out;
}

std::vector<EvaluationRecord> load_records(const fs::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot read " + path.string());
  if (path.extension() == ".json") return read_records_json(is);
  return read_records_csv(is);
}

std::vector<int> aggregate_severities(const CorruptionKind& kind) {
  if (is_noise(kind)) return {1, 2, 3};
  return {1, 2, 3, 4, 5};
}

ConfusionMatrix score_directory(const DatasetManifest& manifest, const fs::path& pred_dir,
                                const std::optional<fs::path>& gt_dir, int workers,
                                std::vector<std::string>* missing) {
  const std::size_t n = manifest.entries.size();
  std::vector<ConfusionMatrix> shards(n, ConfusionMatrix(manifest.class_count));
  std::vector<char> present(n, 0);
  parallel_for(n, workers, [&](std::size_t i) {
    const ManifestEntry& e = manifest.entries[i];
    const fs::path pred = pred_dir / (e.image_id + ".png");
    const fs::path gt = gt_dir ? *gt_dir / (e.image_id + "_label.png") : e.label_path;
    if (!fs::is_regular_file(pred) || !fs::is_regular_file(gt)) return;
    const LabelMap g = read_label_png(gt, manifest.ignore_id);
    const LabelMap p = read_label_png(pred, manifest.ignore_id);
    try {
      accumulate(shards[i], g, p);
    } catch (const InputError& ex) {
      throw InputError(pred.string() + ": " + ex.what());
    }
    present[i] = 1;
  });
  ConfusionMatrix total(manifest.class_count);
  for (std::size_t i = 0; i < n; ++i) {
    if (present[i]) {
      total.merge(shards[i]);
    } else if (missing) {
      missing->push_back((pred_dir / (manifest.entries[i].image_id + ".png")).generic_string());
    }
  }
  return total;
}

EvaluationResult evaluate(const DatasetManifest& manifest, const EvaluateOptions& opt) {
  EvaluationResult res;
  auto score = [&](const std::string& name, int severity, const fs::path& pred_dir,
                   const std::optional<fs::path>& gt_dir) {
    if (!fs::is_directory(pred_dir)) {
      res.absent.push_back(pred_dir.generic_string() + " (subtree missing)");
      return;
    }
    std::vector<std::string> missing;
    const ConfusionMatrix cm = score_directory(manifest, pred_dir, gt_dir, opt.workers, &missing);
    if (!missing.empty()) {
      for (auto& m : missing) res.absent.push_back(std::move(m) + " (prediction or label missing)");
      return;
    }
    try {
      res.records.push_back({opt.model, name, severity, miou(cm)});
    } catch (const UndefinedMetricError& ex) {
      res.absent.push_back(pred_dir.generic_string() + " (" + ex.what() + ")");
    }
  };

  score(std::string(kCleanName), 0, opt.pred_root / kCleanName, std::nullopt);
  for (const auto& kind : opt.kinds) {
    for (int s : opt.severities) {
      const fs::path rel = fs::path(kind.name()) / std::to_string(s);
      std::optional<fs::path> gt_dir;
      if (kind.id == Corruption::geometric_distortion) {
        if (opt.corrupted_root.empty()) {
          res.absent.push_back(rel.generic_string() + " (distorted labels need --corrupted)");
          continue;
        }
        gt_dir = opt.corrupted_root / rel;
      }
      score(kind.name(), s, opt.pred_root / rel, gt_dir);
    }
  }
  return res;
}

namespace {

struct KindOrder {
  bool operator()(const CorruptionKind& a, const CorruptionKind& b) const {
    if (a.id != b.id) return a.id < b.id;
    return a.variant < b.variant;
  }
};

}  // namespace

Report build_report(const std::vector<EvaluationRecord>& records, const std::string& reference,
                    CleanSubtraction subtraction) {
  Report r;
  r.reference = reference;
  r.subtraction = subtraction;

  // model -> corruption -> severity -> mIoU
  std::map<std::string, std::map<std::string, std::map<int, double>>> data;
  std::set<CorruptionKind, KindOrder> kinds;
  std::set<std::string> unknown;
  for (const auto& rec : records) {
    if (rec.corruption != kCleanName) {
      try {
        kinds.insert(parse_kind(rec.corruption));
      } catch (const InvalidSpecError&) {
        if (unknown.insert(rec.corruption).second) {
          r.problems.push_back("unknown corruption '" + rec.corruption + "' ignored");
        }
        continue;
      }
    }
    auto [it, fresh] = data[rec.model][rec.corruption].insert_or_assign(rec.severity, rec.miou);
    if (!fresh) {
      r.problems.push_back("duplicate record " + rec.model + "/" + rec.corruption + "/" +
                           std::to_string(rec.severity) + ": last one wins");
    }
  }
  if (!data.count(reference)) throw ConfigError("reference model '" + reference + "' has no records");

  for (const auto& k : kinds) {
    r.corruptions.push_back(k.name());
    if (!is_psf(k)) r.mean_columns.push_back(k.name());
  }

  std::vector<std::string> order{reference};
  for (const auto& [model, _] : data) {
    if (model != reference) order.push_back(model);
  }

  // Degradation series of one model on one corruption, if complete.
  auto series = [&](const std::string& model, const CorruptionKind& k) -> std::optional<DegradationSeries> {
    const auto& per_model = data.at(model);
    auto it = per_model.find(k.name());
    if (it == per_model.end()) return std::nullopt;
    DegradationSeries s{model, k.name(), {}, 0.0};
    for (int sev : aggregate_severities(k)) {
      auto v = it->second.find(sev);
      if (v == it->second.end()) return std::nullopt;
      s.by_severity[sev] = degradation(v->second);
    }
    return s;
  };
  auto clean_of = [&](const std::string& model) -> std::optional<double> {
    const auto& per_model = data.at(model);
    auto it = per_model.find(std::string(kCleanName));
    if (it == per_model.end() || !it->second.count(0)) return std::nullopt;
    return it->second.at(0);
  };

  const auto ref_clean = clean_of(reference);
  for (const auto& model : order) {
    ModelReport m;
    m.model = model;
    m.clean_miou = clean_of(model);
    if (!m.clean_miou) r.problems.push_back(model + ": no clean record, rCD not computed");
    std::vector<double> cds, rcds;
    bool cd_complete = true, rcd_complete = true;
    for (const auto& k : kinds) {
      const auto f = series(model, k);
      if (!f) {
        if (data.at(model).count(k.name())) {
          r.problems.push_back(model + "/" + k.name() + ": incomplete severity set, cell skipped");
        }
        if (!is_psf(k)) cd_complete = rcd_complete = false;
        continue;
      }
      CorruptionCell cell;
      std::vector<double> mious;
      for (const auto& [sev, d] : f->by_severity) {
        cell.severities_used.push_back(sev);
        mious.push_back(data.at(model).at(k.name()).at(sev));
      }
      cell.mean_miou = aggregate_mean(mious);

      if (auto ref = series(reference, k)) {
        try {
          cell.cd = corruption_degradation(*f, *ref);
        } catch (const UndefinedMetricError& ex) {
          r.problems.push_back(model + "/" + k.name() + ": " + ex.what());
        }
        if (m.clean_miou && ref_clean) {
          DegradationSeries fc = *f, rc = *ref;
          fc.clean = degradation(*m.clean_miou);
          rc.clean = degradation(*ref_clean);
          try {
            cell.rcd = relative_corruption_degradation(fc, rc, subtraction);
          } catch (const UndefinedMetricError& ex) {
            r.problems.push_back(model + "/" + k.name() + ": " + ex.what());
          }
        }
      } else {
        r.problems.push_back(k.name() + ": reference series incomplete, no CD for " + model);
      }
      if (!is_psf(k)) {
        if (cell.cd) cds.push_back(*cell.cd); else cd_complete = false;
        if (cell.rcd) rcds.push_back(*cell.rcd); else rcd_complete = false;
      }
      m.cells.emplace(k.name(), std::move(cell));
    }
    if (cd_complete && !cds.empty()) m.mean_cd = aggregate_mean(cds);
    if (rcd_complete && !rcds.empty()) m.mean_rcd = aggregate_mean(rcds);
    r.models.push_back(std::move(m));
  }
  return r;
}

namespace {

ordered_json opt_json(const std::optional<double>& v) { return v ? ordered_json(*v) : ordered_json(); }

std::string cell_text(const std::optional<double>& v) {
  if (!v) return "";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f", round_tenth(*v));
  return buf;
}

}  // namespace

void write_report_json(std::ostream& os, const Report& r) {
  ordered_json j;
  j["schema_version"] = kReportSchemaVersion;
  j["reference"] = r.reference;
  j["clean_subtraction"] = r.subtraction == CleanSubtraction::per_severity ? "per-severity" : "once";
  j["corruptions"] = r.corruptions;
  j["mean_columns"] = r.mean_columns;
  ordered_json excluded = ordered_json::array();
  for (const auto& c : r.corruptions) {
    if (std::find(r.mean_columns.begin(), r.mean_columns.end(), c) == r.mean_columns.end()) {
      excluded.push_back(c);
    }
  }
  j["mean_excluded"] = excluded;

  ordered_json audit = ordered_json::object();
  for (const auto& c : r.corruptions) {
    const CorruptionKind k = parse_kind(c);
    ordered_json a;
    a["family"] = family_name(k.family());
    a["required_severities"] = aggregate_severities(k);
    ordered_json used = ordered_json::object();
    for (const auto& m : r.models) {
      auto it = m.cells.find(c);
      if (it != m.cells.end()) used[m.model] = it->second.severities_used;
    }
    a["severities_used"] = used;
    audit[c] = a;
  }
  j["severity_audit"] = audit;

  ordered_json models = ordered_json::array();
  for (const auto& m : r.models) {
    ordered_json mj;
    mj["model"] = m.model;
    mj["clean_miou"] = opt_json(m.clean_miou);
    ordered_json cells = ordered_json::object();
    for (const auto& c : r.corruptions) {
      auto it = m.cells.find(c);
      if (it == m.cells.end()) continue;
      cells[c] = {{"mean_miou", it->second.mean_miou},
                  {"record_count", it->second.severities_used.size()},
                  {"cd", opt_json(it->second.cd)},
                  {"rcd", opt_json(it->second.rcd)}};
    }
    mj["corruptions"] = cells;
    mj["mean_cd"] = opt_json(m.mean_cd);
    mj["mean_rcd"] = opt_json(m.mean_rcd);
    models.push_back(mj);
  }
  j["models"] = models;
  j["problems"] = r.problems;
  os << j.dump(2) << "\n";
}

void write_report_csv(std::ostream& miou_os, std::ostream& cd_os, std::ostream& rcd_os,
                      const Report& r) {
  miou_os << "model,clean";
  cd_os << "model";
  rcd_os << "model";
  for (const auto& c : r.corruptions) {
    miou_os << ',' << c;
    cd_os << ',' << c;
    rcd_os << ',' << c;
  }
  miou_os << "\n";
  cd_os << ",mean_excl_psf\n";
  rcd_os << ",mean_excl_psf\n";
  auto pct = [](const std::optional<double>& v) {
    return v ? std::optional<double>(*v * 100.0) : std::nullopt;
  };
  for (const auto& m : r.models) {
    miou_os << m.model << ',' << cell_text(pct(m.clean_miou));
    cd_os << m.model;
    rcd_os << m.model;
    for (const auto& c : r.corruptions) {
      auto it = m.cells.find(c);
      const bool has = it != m.cells.end();
      miou_os << ',' << (has ? cell_text(it->second.mean_miou * 100.0) : "");
      cd_os << ',' << (has ? cell_text(it->second.cd) : "");
      rcd_os << ',' << (has ? cell_text(it->second.rcd) : "");
    }
    miou_os << "\n";
    cd_os << ',' << cell_text(m.mean_cd) << "\n";
    rcd_os << ',' << cell_text(m.mean_rcd) << "\n";
  }
}

}  // namespace corrobench
