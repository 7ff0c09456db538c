#include <doctest.h>

#include <map>
#include <set>
#include <sstream>

#include "corrobench/metrics.hpp"
#include "fixtures.hpp"

using namespace corrobench;

namespace {

LabelMap row(std::initializer_list<int> ids) {
  LabelMap m(static_cast<int>(ids.size()), 1);
  int x = 0;
  for (int v : ids) m.at(x++, 0) = static_cast<std::uint16_t>(v);
  return m;
}

// IoU from pixel sets, no confusion matrix involved. Pixels whose prediction
// is ignore belong to no class's prediction set.
double oracle_miou(const LabelMap& gt, const LabelMap& pred, int classes) {
  std::vector<std::set<int>> g(classes), p(classes);
  for (int y = 0; y < gt.height(); ++y) {
    for (int x = 0; x < gt.width(); ++x) {
      const int i = y * gt.width() + x;
      if (gt.at(x, y) == gt.ignore_id()) continue;
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
    for (int i : g[k]) inter += p[k].count(i);
    sum += static_cast<double>(inter) / static_cast<double>(u.size());
    ++n;
  }
  return sum / n;
}

DegradationSeries flat_series(const std::string& model, double miou_corrupted, double miou_clean,
                              int levels = 5) {
  DegradationSeries s{model, "motion", {}, 1.0 - miou_clean};
  for (int i = 1; i <= levels; ++i) s.by_severity[i] = 1.0 - miou_corrupted;
  return s;
}

}  // namespace

TEST_CASE("accumulate") {
  SUBCASE("hand example") {
    ConfusionMatrix cm(2);
    accumulate(cm, row({0, 0, 1, 1}), row({0, 1, 1, 1}));
    CHECK(cm.count(0, 0) == 1);
    CHECK(cm.count(0, 1) == 1);
    CHECK(cm.count(1, 1) == 2);
    CHECK(cm.count(1, 0) == 0);
    CHECK(miou(cm) == doctest::Approx(7.0 / 12));
    const auto ious = per_class_iou(cm);
    CHECK(ious[0].iou == doctest::Approx(0.5));
    CHECK(ious[1].iou == doctest::Approx(2.0 / 3));
  }
  SUBCASE("perfect prediction is diagonal") {
    const LabelMap gt = fx::random_labels(16, 16, 4, 1);
    ConfusionMatrix cm(4);
    accumulate(cm, gt, gt);
    CHECK(cm.counts().diagonal().sum() == 256);
    CHECK(cm.total() == 256);
    CHECK(miou(cm) == 1.0);
  }
  SUBCASE("all-ignore ground truth") {
    ConfusionMatrix cm(3);
    accumulate(cm, LabelMap(5, 5, 255), fx::random_labels(5, 5, 3, 2));
    CHECK(cm.total() == 0);
    CHECK_THROWS_AS(miou(cm), UndefinedMetricError);
  }
  SUBCASE("ignored predictions are misses") {
    ConfusionMatrix cm(2);
    accumulate(cm, row({0, 0, 1}), row({0, 255, 1}));
    CHECK(cm.rejected(0) == 1);
    CHECK(miou(cm) == doctest::Approx((0.5 + 1.0) / 2));
  }
  SUBCASE("errors") {
    ConfusionMatrix cm(2);
    CHECK_THROWS_AS(accumulate(cm, row({0, 1}), row({0, 1, 1})), InputError);
    CHECK_THROWS_AS(accumulate(cm, row({0, 2}), row({0, 1})), InputError);
    CHECK_THROWS_AS(accumulate(cm, row({0, 1}), row({0, 7})), InputError);
  }
}

TEST_CASE("miou equals the pixel-set oracle bit for bit") {
  for (int t = 0; t < 300; ++t) {
    const LabelMap gt = fx::random_labels(16, 16, 4, 1000 + t, 0.1);
    const LabelMap pred = fx::random_labels(16, 16, 4, 5000 + t, 0.05);
    ConfusionMatrix cm(4);
    accumulate(cm, gt, pred);
    CHECK(miou(cm) == oracle_miou(gt, pred, 4));
  }
}

TEST_CASE("classes absent from gt and pred do not enter the mean") {
  ConfusionMatrix cm(5);
  accumulate(cm, row({0, 1}), row({0, 1}));
  CHECK(per_class_iou(cm).size() == 2);
  CHECK(miou(cm) == 1.0);
}

TEST_CASE("merge is associative, commutative and matches one pass") {
  const LabelMap gt = fx::random_labels(30, 30, 5, 3), pred = fx::random_labels(30, 30, 5, 4, 0.1);
  ConfusionMatrix whole(5);
  accumulate(whole, gt, pred);
  std::vector<ConfusionMatrix> shards(3, ConfusionMatrix(5));
  for (int s = 0; s < 3; ++s) {
    LabelMap g(30, 10), p(30, 10);
    for (int y = 0; y < 10; ++y)
      for (int x = 0; x < 30; ++x) {
        g.at(x, y) = gt.at(x, y + 10 * s);
        p.at(x, y) = pred.at(x, y + 10 * s);
      }
    accumulate(shards[s], g, p);
  }
  ConfusionMatrix a = shards[0];
  a.merge(shards[1]).merge(shards[2]);
  ConfusionMatrix bc = shards[1];
  bc.merge(shards[2]);
  ConfusionMatrix b = shards[0];
  b.merge(bc);
  ConfusionMatrix c = shards[2];
  c.merge(shards[0]).merge(shards[1]);
  CHECK(a == whole);
  CHECK(b == whole);
  CHECK(c == whole);
  CHECK_THROWS_AS(a.merge(ConfusionMatrix(4)), InputError);
}

TEST_CASE("confusion csv round trip") {
  ConfusionMatrix cm(3);
  accumulate(cm, fx::random_labels(9, 9, 3, 1), fx::random_labels(9, 9, 3, 2, 0.2));
  std::stringstream ss;
  cm.write_csv(ss);
  CHECK(ss.str().rfind("num_classes,3\n", 0) == 0);
  CHECK(ConfusionMatrix::read_csv(ss) == cm);
}

TEST_CASE("degradation") {
  CHECK(degradation(1.0) == 0.0);
  CHECK(degradation(0.0) == 1.0);
  CHECK(degradation(0.720) == doctest::Approx(0.280));
}

TEST_CASE("corruption degradation") {
  const auto ref = flat_series("mobilenet", 0.535, 0.720);
  const auto f = flat_series("xception", 0.641, 0.786);
  CHECK(corruption_degradation(ref, ref) == doctest::Approx(100.0));
  CHECK(corruption_degradation(f, ref) == doctest::Approx(100 * 0.359 / 0.465));
  CHECK(round_tenth(corruption_degradation(f, ref)) == doctest::Approx(77.2));
  const auto ablated = flat_series("a", 0.525, 0.8), base = flat_series("b", 0.563, 0.8);
  CHECK(corruption_degradation(ablated, base) == doctest::Approx(108.696).epsilon(1e-4));

  auto zero = flat_series("z", 1.0, 1.0);
  CHECK_THROWS_AS(corruption_degradation(f, zero), UndefinedMetricError);
  auto short_set = flat_series("s", 0.5, 0.7, 3);
  CHECK_THROWS_AS(corruption_degradation(short_set, ref), InputError);
}

TEST_CASE("relative corruption degradation") {
  const auto ref = flat_series("mobilenet", 0.535, 0.720);
  const auto f = flat_series("xception", 0.641, 0.786);
  CHECK(relative_corruption_degradation(ref, ref) == doctest::Approx(100.0));
  CHECK(relative_corruption_degradation(f, ref) ==
        doctest::Approx(100 * (0.359 - 0.214) / (0.465 - 0.280)));
  CHECK(round_tenth(relative_corruption_degradation(f, ref)) == doctest::Approx(78.4));
  // clean-equals-corrupted model has no corruption loss
  CHECK(relative_corruption_degradation(flat_series("c", 0.7, 0.7), ref) == 0.0);
  // subtract-once convention
  const double once = relative_corruption_degradation(f, ref, CleanSubtraction::once);
  CHECK(once == doctest::Approx(100 * (5 * 0.359 - 0.214) / (5 * 0.465 - 0.280)));
  CHECK_THROWS_AS(relative_corruption_degradation(f, flat_series("z", 0.7, 0.7)), UndefinedMetricError);
}

TEST_CASE("cd and rcd invariances") {
  fx::RandomStream rng(12);
  for (int t = 0; t < 200; ++t) {
    DegradationSeries f{"f", "c", {}, 0.05 + 0.2 * rng.uniform()};
    DegradationSeries r{"r", "c", {}, 0.05 + 0.2 * rng.uniform()};
    for (int s = 1; s <= 5; ++s) {
      f.by_severity[s] = 0.3 + 0.6 * rng.uniform();
      r.by_severity[s] = 0.3 + 0.6 * rng.uniform();
    }
    const double cd = corruption_degradation(f, r), rcd = relative_corruption_degradation(f, r);
    // scale
    const double k = 0.1 + rng.uniform();
    auto fs = f, rs = r;
    for (auto* s : {&fs, &rs})
      for (auto& [sev, d] : s->by_severity) d *= k;
    CHECK(corruption_degradation(fs, rs) == doctest::Approx(cd).epsilon(1e-12));
    // shift everything, clean included
    const double c = 0.05 * rng.uniform();
    auto ft = f, rt = r;
    for (auto* s : {&ft, &rt}) {
      s->clean += c;
      for (auto& [sev, d] : s->by_severity) d += c;
    }
    CHECK(relative_corruption_degradation(ft, rt) == doctest::Approx(rcd).epsilon(1e-9));
    // ordering
    CHECK((cd < 100.0) == (f.sum() < r.sum()));
  }
}

TEST_CASE("aggregate mean") {
  const std::vector<double> one{3.5};
  CHECK(aggregate_mean(one) == 3.5);
  std::vector<double> v{1, 2, 3, 10};
  const double m = aggregate_mean(v);
  std::reverse(v.begin(), v.end());
  CHECK(aggregate_mean(v) == m);
  CHECK_THROWS_AS(aggregate_mean(std::vector<double>{}), UndefinedMetricError);
  CHECK(round_tenth(77.2043) == doctest::Approx(77.2));
  CHECK(round_tenth(108.696) == doctest::Approx(108.7));
}
