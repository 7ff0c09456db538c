// Acceptance checks: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "corrobench/color.hpp"
#include "corrobench/commands.hpp"
#include "corrobench/image_io.hpp"
#include "fixtures.hpp"

using namespace corrobench;
namespace fs = std::filesystem;

namespace {

int failures = 0;

void report(bool ok, const char* id, const std::string& what) {
  std::printf("%s  %s %s\n", ok ? "PASS" : "FAIL", id, what.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

// Per-class |g ∩ p| / |g ∪ p| over explicit pixel-index sets.
double pixel_set_miou(const LabelMap& gt, const LabelMap& pred, int classes) {
  std::vector<std::set<int>> g(classes), p(classes);
  for (int y = 0; y < gt.height(); ++y) {
    for (int x = 0; x < gt.width(); ++x) {
      if (gt.at(x, y) == gt.ignore_id()) continue;
      const int i = y * gt.width() + x;
      g[gt.at(x, y)].insert(i);
      if (pred.at(x, y) != pred.ignore_id()) p[pred.at(x, y)].insert(i);
    }
  }
  double sum = 0;
  int n = 0;
  for (int k = 0; k < classes; ++k) {
    std::set<int> u = g[k];
    u.insert(p[k].begin(), p[k].end());
    if (u.empty()) continue;
    int inter = 0;
    for (int i : g[k]) inter += static_cast<int>(p[k].count(i));
    sum += static_cast<double>(inter) / static_cast<double>(u.size());
    ++n;
  }
  return sum / n;
}

void criterion_1() {
  const auto t0 = std::chrono::steady_clock::now();
  int equal = 0;
  for (int t = 0; t < 1000; ++t) {
    const LabelMap gt = fx::random_labels(16, 16, 4, 2 * t + 1, 0.1);
    const LabelMap pred = fx::random_labels(16, 16, 4, 2 * t + 2, 0.1);
    ConfusionMatrix cm(4);
    accumulate(cm, gt, pred);
    equal += miou(cm) == pixel_set_miou(gt, pred, 4);
  }
  const double dt = seconds_since(t0);
  report(equal == 1000 && dt < 5.0, "[1]",
         fmt("metric oracle equivalence: %d/1000 bitwise equal, %.2f s (limit 5 s)", equal, dt));
}

void write_records(const fs::path& p, const std::vector<EvaluationRecord>& r) {
  std::ofstream os(p);
  write_records_csv(os, r);
}

std::vector<EvaluationRecord> mean_records(const std::string& model, double clean,
                                           const std::string& corruption, double mean) {
  std::vector<EvaluationRecord> r{{model, "clean", 0, clean}};
  for (int s = 1; s <= 5; ++s) r.push_back({model, corruption, s, mean});
  return r;
}

void criterion_2() {
  const fs::path dir = fx::temp_dir("acc_means");
  write_records(dir / "mobilenet.csv", mean_records("mobilenet-v2", 0.720, "motion", 0.535));
  write_records(dir / "xception.csv", mean_records("xception-71", 0.786, "motion", 0.641));
  write_records(dir / "resnet.csv", mean_records("resnet-101", 0.0, "defocus", 0.563));
  write_records(dir / "ablated.csv", mean_records("resnet-101-ablated", 0.0, "defocus", 0.525));

  RunConfig cfg;
  cfg.format = OutputFormat::json;
  std::ostringstream log;
  cmd_report(cfg, {{dir / "mobilenet.csv", dir / "xception.csv"}, "mobilenet-v2", dir / "motion"}, log);
  cmd_report(cfg, {{dir / "resnet.csv", dir / "ablated.csv"}, "resnet-101", dir / "defocus"}, log);
  const auto motion = nlohmann::json::parse(slurp(dir / "motion/report.json"));
  const auto defocus = nlohmann::json::parse(slurp(dir / "defocus/report.json"));
  const auto& x = motion.at("models")[1].at("corruptions").at("motion");
  const double cd = x.at("cd"), rcd = x.at("rcd");
  const double cd_ab = defocus.at("models")[1].at("corruptions").at("defocus").at("cd");
  const bool ok = std::abs(cd - 77.2) <= 0.1 && std::abs(rcd - 78.4) <= 0.1 &&
                  std::abs(cd_ab - 109.0) <= 0.5;
  report(ok, "[2]",
         fmt("table arithmetic: CD %.3f (77.2 +/- 0.1), rCD %.3f (78.4 +/- 0.1), "
             "ablation CD %.3f (109 +/- 0.5)", cd, rcd, cd_ab));
}

std::map<std::string, std::string> tree_bytes(const fs::path& root) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::recursive_directory_iterator(root)) {
    if (e.is_regular_file()) out[e.path().lexically_relative(root).generic_string()] = slurp(e.path());
  }
  return out;
}

void criterion_3() {
  const auto t0 = std::chrono::steady_clock::now();
  const fs::path in = fx::temp_dir("acc_det_in");
  for (int i = 0; i < 10; ++i) {
    const auto f = fx::synthetic_frame(192, 128, 300 + i);
    write_png(in / fmt("frame%02d.png", i), f.image);
    write_label_png(in / fmt("frame%02d_label.png", i), f.labels);
  }
  const DatasetManifest m = scan_dataset(in, Layout::paired_suffix);
  std::vector<CorruptionSpec> specs;
  for (const auto& k : parse_kind_filter("all"))
    for (int s = 1; s <= 5; ++s) specs.push_back({k, s, 0});
  const CorruptionContext ctx;
  const fs::path a = fx::temp_dir("acc_det_a"), b = fx::temp_dir("acc_det_b");
  const TreeSummary sa = write_corrupted_tree(m, specs, a, 2024, ctx, 1);
  const TreeSummary sb = write_corrupted_tree(m, specs, b, 2024, ctx, 4);
  const auto ta = tree_bytes(a), tb = tree_bytes(b);
  int same = 0, differ = 0, jpeg_same = 0;
  for (const auto& [path, bytes] : ta) {
    auto it = tb.find(path);
    const bool eq = it != tb.end() && it->second == bytes;
    (eq ? same : differ)++;
    if (eq && path.rfind("jpeg/", 0) == 0) ++jpeg_same;
  }
  const double dt = seconds_since(t0);
  const std::size_t expected = 10 * 95 + 10 * 5 + 1;  // images, distorted labels, run.json
  const bool ok = ta.size() == expected && tb.size() == expected && differ == 0 &&
                  sa.failures.empty() && sb.failures.empty() && jpeg_same == 50 && dt < 120;
  report(ok, "[3]",
         fmt("determinism: %d/%zu files identical across two runs (1 vs 4 workers), "
             "jpeg %d/50 identical, %.1f s (limit 120 s)", same, expected, jpeg_same, dt));
}

void criterion_4() {
  // Flat fields at the bytes closest to linear 0.1 and 0.9. The sigmas keep
  // every sample away from the [0,1] clamp so the measured std is the
  // injected std.
  const std::uint8_t dark_b = 89, bright_b = 243;
  const double dark_l = srgb_byte_to_linear(dark_b), bright_l = srgb_byte_to_linear(bright_b);
  auto measure = [&](double alpha) {
    double qd = 0, qb = 0;
    long n = 0;
    for (int seed = 0; seed < 20; ++seed) {
      const IntensityNoiseParams p{0.01, 0.005, alpha};
      for (auto [byte, acc] : {std::pair{dark_b, &qd}, std::pair{bright_b, &qb}}) {
        const RasterImage flat = fx::flat_raster(256, 256, byte);
        RandomStream rng(derive_seed(seed, "flat", {parse_kind("intensity"), 1, 0}) + byte);
        const RasterImage out = intensity_dependent_noise(flat, p, rng);
        const double base = srgb_byte_to_linear(byte);
        for (auto v : out.data()) {
          const double d = srgb_byte_to_linear(v) - base;
          *acc += d * d;
        }
      }
      n += 256 * 256 * 3;
    }
    return std::sqrt(qd / n) / std::sqrt(qb / n);
  };
  const double r2 = measure(2.0), r0 = measure(0.0);
  const bool ok = std::abs(r2 - 2.33) <= 0.233 && std::abs(r0 - 1.0) <= 0.05;
  report(ok, "[4]",
         fmt("intensity noise law: std ratio %.3f at alpha=2 (2.33 +/- 10%%), %.3f at alpha=0 "
             "(1.0 +/- 5%%); fields at linear %.4f / %.4f, 20 seeds",
             r2, r0, dark_l, bright_l));
}

void criterion_5() {
  const auto frames = fx::photos(160, 120);
  // zero coefficients
  CorruptionContext zero;
  for (int s = 1; s <= 5; ++s)
    for (const char* k : {"k1", "k2", "k3", "k4"}) zero.table.set("geometric-distortion", s, k, 0.0);
  bool identity = true;
  for (const auto& f : frames) {
    for (int s = 1; s <= 5; ++s) {
      const Corrupted out = apply({parse_kind("geometric-distortion"), s, 1}, f.image, f.labels, zero);
      identity &= out.image == f.image && *out.labels == f.labels;
    }
  }
  // label subset
  bool subset = true;
  for (const auto& f : frames) {
    std::set<int> allowed{f.labels.ignore_id()};
    for (int y = 0; y < f.labels.height(); ++y)
      for (int x = 0; x < f.labels.width(); ++x) allowed.insert(f.labels.at(x, y));
    for (int s = 1; s <= 5; ++s) {
      const Corrupted out = apply({parse_kind("geometric-distortion"), s, 1}, f.image, f.labels);
      for (int y = 0; y < out.labels->height(); ++y)
        for (int x = 0; x < out.labels->width(); ++x) subset &= allowed.count(out.labels->at(x, y)) > 0;
    }
  }
  // Iso-radius: the label warp must follow the radial model. Each label
  // carries its own coordinates; the decoded source may deviate from the
  // analytic source by at most the nearest-neighbor rounding.
  const int w = 200, h = 150;
  LabelMap coords(w, h, 0, 65535);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) coords.at(x, y) = static_cast<std::uint16_t>(y * w + x);
  double spread = 0, analytic_iso = 0;
  std::vector<double> disp;
  const SeverityTable table = SeverityTable::defaults();
  for (int s = 1; s <= 5; ++s) {
    const DistortionParams p = distortion_params(table.at("geometric-distortion", s));
    const auto [img, out] = barrel_distort(fx::flat_raster(w, h, 128), coords, p);
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        if (out.at(x, y) == 65535) continue;
        const Eigen::Vector2d src = distortion_source(p, w, h, x, y);
        spread = std::max({spread, std::abs(out.at(x, y) % w - src.x()), std::abs(out.at(x, y) / w - src.y())});
      }
    }
    // mirrored pixels share a radius and must share the analytic displacement
    for (int y = 0; y < h / 2; ++y) {
      for (int x = 0; x < w / 2; ++x) {
        const double d0 = (distortion_source(p, w, h, x, y) - Eigen::Vector2d(x, y)).norm();
        const double d1 = (distortion_source(p, w, h, w - 1 - x, h - 1 - y) -
                           Eigen::Vector2d(w - 1 - x, h - 1 - y)).norm();
        analytic_iso = std::max(analytic_iso, std::abs(d0 - d1));
      }
    }
    disp.push_back(mean_displacement(p, 2048, 1024));
  }
  bool monotone = true;
  for (std::size_t i = 1; i < disp.size(); ++i) monotone &= disp[i] > disp[i - 1];
  const bool ok = identity && subset && spread < 0.51 && analytic_iso < 1e-9 && monotone;
  report(ok, "[5]",
         fmt("geometric contract: zero-coefficient identity %s, label subset %s, iso-radius spread "
             "%.3f px (< 0.51), mean displacement %.2f/%.2f/%.2f/%.2f/%.2f px %s",
             identity ? "yes" : "NO", subset ? "yes" : "NO", spread, disp[0], disp[1], disp[2],
             disp[3], disp[4], monotone ? "strictly increasing" : "NOT monotone"));
}

double region_variance(const LinearImage& img, int x0, int y0, int size) {
  double s = 0, q = 0;
  for (int y = y0; y < y0 + size; ++y) {
    for (int x = x0; x < x0 + size; ++x) {
      const double v = img.channel(1)(y, x);
      s += v;
      q += v * v;
    }
  }
  const double n = double(size) * size;
  return q / n - (s / n) * (s / n);
}

void criterion_6() {
  const SeverityTable table = SeverityTable::defaults();
  // normalization of every generated kernel
  std::vector<Kernel2D> kernels;
  for (int s = 1; s <= 5; ++s) {
    kernels.push_back(make_gaussian_kernel(table.at("gaussian-blur", s).get("sigma")));
    kernels.push_back(make_disk_kernel(table.at("defocus", s).get("radius")));
    kernels.push_back(make_gaussian_kernel(table.at("frosted-glass", s).get("post_sigma")));
    kernels.push_back(make_gaussian_kernel(table.at("spatter", s).get("blob_sigma")));
    for (int a = 0; a < 16; ++a) {
      kernels.push_back(make_motion_kernel(table.at("motion", s).get("length"), a * 0.19635));
    }
    kernels.push_back(make_motion_kernel(table.at("snow", s).get("length"),
                                         table.at("snow", s).get("angle_deg") * 0.0174533));
    for (int v = 1; v <= 3; ++v) {
      const PsfGrid g = psf_preset(table.at("psf", s), v);
      kernels.insert(kernels.end(), g.kernels().begin(), g.kernels().end());
    }
  }
  double worst_sum = 0;
  for (const auto& k : kernels) worst_sum = std::max(worst_sum, std::abs(k.weights().sum() - 1.0));

  // constant images
  bool constant_ok = true;
  const std::vector<CorruptionKind> blurs = parse_kind_filter("blur,psf-2,psf-3");
  for (std::uint8_t v : {0, 37, 128, 200, 255}) {
    const RasterImage flat = fx::flat_raster(64, 48, v);
    for (const auto& k : blurs)
      for (int s = 1; s <= 5; ++s) constant_ok &= apply({k, s, 9}, flat).image == flat;
  }

  // local-variance reduction strictly increasing with severity
  const auto photos = fx::photos(160, 120);
  int monotone = 0, total = 0;
  for (const char* name : {"gaussian-blur", "defocus", "motion"}) {
    for (std::size_t i = 0; i < photos.size(); ++i) {
      const double v0 = fx::local_variance(photos[i].image);
      double prev = -1;
      bool ok = true;
      for (int s = 1; s <= 5; ++s) {
        const RasterImage out = apply({parse_kind(name), s, 77 + i}, photos[i].image).image;
        const double red = 1.0 - fx::local_variance(out) / v0;
        ok &= red > prev;
        prev = red;
      }
      monotone += ok;
      ++total;
    }
  }

  // PSF: variance removed in the corners vs the center, on a texture that is
  // statistically the same everywhere
  const int w = 512, h = 256, patch = 48;
  const LinearImage tex = srgb_to_linear(fx::random_raster(w, h, 5));
  const LinearImage blurred = psf_blur(tex, psf_preset(table.at("psf", 3), 1));
  auto reduction = [&](int x0, int y0) {
    return 1.0 - region_variance(blurred, x0, y0, patch) / region_variance(tex, x0, y0, patch);
  };
  const double center = reduction(w / 2 - patch / 2, h / 2 - patch / 2);
  const double corners = (reduction(0, 0) + reduction(w - patch, 0) + reduction(0, h - patch) +
                          reduction(w - patch, h - patch)) / 4;
  const double ratio = corners / center;

  const bool ok = worst_sum <= 1e-6 && constant_ok && monotone == total && ratio > 1.2;
  report(ok, "[6]",
         fmt("blur contracts: %zu kernels, max |sum-1| %.1e (<= 1e-6), constant images %s, "
             "variance reduction monotone %d/%d, psf corner/center reduction %.3f (> 1.2)",
             kernels.size(), worst_sum, constant_ok ? "invariant" : "CHANGED", monotone, total,
             ratio));
}

void criterion_7() {
  const fs::path dir = fx::temp_dir("acc_audit");
  RandomStream rng(3);
  for (const char* model : {"ref", "other"}) {
    std::vector<EvaluationRecord> r{{model, "clean", 0, 0.75 + 0.1 * rng.uniform()}};
    for (const auto& k : parse_kind_filter("all"))
      for (int s = 1; s <= 5; ++s) r.push_back({model, k.name(), s, 0.7 - 0.08 * s * rng.uniform()});
    write_records(dir / (std::string(model) + ".csv"), r);
  }
  RunConfig cfg;
  cfg.format = OutputFormat::json;
  std::ostringstream log;
  cmd_report(cfg, {{dir / "ref.csv", dir / "other.csv"}, "ref", dir / "out"}, log);
  const auto j = nlohmann::json::parse(slurp(dir / "out/report.json"));

  int noise_ok = 0, other_ok = 0, noise_n = 0, other_n = 0;
  for (const auto& [name, audit] : j.at("severity_audit").items()) {
    const bool noise = audit.at("family") == "noise";
    const nlohmann::json want = noise ? nlohmann::json({1, 2, 3}) : nlohmann::json({1, 2, 3, 4, 5});
    bool all = audit.at("required_severities") == want;
    for (const auto& [model, used] : audit.at("severities_used").items()) all &= used == want;
    all &= audit.at("severities_used").size() == 2;
    (noise ? noise_n : other_n)++;
    if (all) (noise ? noise_ok : other_ok)++;
  }
  const auto cols = j.at("mean_columns");
  bool psf_excluded = j.at("mean_excluded") == nlohmann::json({"psf"}) && cols.size() == 18;
  for (const auto& c : cols) psf_excluded &= c != "psf";
  // the reported mean is the mean of the 18 listed columns
  const auto& other = j.at("models")[1];
  double sum = 0;
  for (const auto& c : cols) sum += other.at("corruptions").at(c.get<std::string>()).at("cd").get<double>();
  const bool mean_ok = std::abs(other.at("mean_cd").get<double>() - sum / 18) < 1e-9;
  const bool ok = noise_ok == 5 && noise_n == 5 && other_ok == 14 && other_n == 14 && psf_excluded && mean_ok;
  report(ok, "[7]",
         fmt("severity-set rule: noise kinds on {1,2,3} %d/5, others on {1..5} %d/14, "
             "overall mean over %zu columns without psf %s",
             noise_ok, other_ok, cols.size(), psf_excluded && mean_ok ? "yes" : "NO"));
}

}  // namespace

int main() {
  const auto run = [](const char* id, void (*fn)()) {
    try {
      fn();
    } catch (const std::exception& e) {
      report(false, id, std::string("threw: ") + e.what());
    }
  };
  run("[1]", criterion_1);
  run("[2]", criterion_2);
  run("[3]", criterion_3);
  run("[4]", criterion_4);
  run("[5]", criterion_5);
  run("[6]", criterion_6);
  run("[7]", criterion_7);
  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
