#include "corrobench/metrics.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

namespace corrobench {

ConfusionMatrix::ConfusionMatrix(int num_classes) {
  if (num_classes < 1) throw InputError("confusion matrix needs at least one class");
  counts_ = Counts::Zero(num_classes, num_classes + 1);
}

ConfusionMatrix& ConfusionMatrix::merge(const ConfusionMatrix& other) {
  if (other.num_classes() != num_classes()) {
    throw InputError("cannot merge confusion matrices of different class counts");
  }
  counts_ += other.counts_;
  return *this;
}

void ConfusionMatrix::write_csv(std::ostream& os) const {
  os << "num_classes," << num_classes() << "\n";
  for (int g = 0; g < counts_.rows(); ++g) {
    for (int p = 0; p < counts_.cols(); ++p) {
      if (p) os << ',';
      os << counts_(g, p);
    }
    os << "\n";
  }
}

ConfusionMatrix ConfusionMatrix::read_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line.rfind("num_classes,", 0) != 0) {
    throw InputError("confusion csv: missing num_classes header");
  }
  const int n = std::stoi(line.substr(12));
  ConfusionMatrix cm(n);
  for (int g = 0; g < n; ++g) {
    if (!std::getline(is, line)) throw InputError("confusion csv: truncated");
    std::stringstream ss(line);
    std::string cell;
    for (int p = 0; p <= n; ++p) {
      if (!std::getline(ss, cell, ',')) throw InputError("confusion csv: short row");
      cm.counts_(g, p) = std::stoll(cell);
    }
  }
  return cm;
}

void accumulate(ConfusionMatrix& cm, const LabelMap& gt, const LabelMap& pred) {
  if (gt.width() != pred.width() || gt.height() != pred.height()) {
    throw InputError("prediction is " + std::to_string(pred.width()) + "x" +
                     std::to_string(pred.height()) + " but ground truth is " +
                     std::to_string(gt.width()) + "x" + std::to_string(gt.height()));
  }
  const int n = cm.num_classes();
  const std::uint16_t ignore = gt.ignore_id();
  const std::uint16_t pred_ignore = pred.ignore_id();
  for (int y = 0; y < gt.height(); ++y) {
    for (int x = 0; x < gt.width(); ++x) {
      const std::uint16_t g = gt.at(x, y);
      const std::uint16_t p = pred.at(x, y);
      if (g == ignore) continue;
      if (g >= n) {
        throw InputError("ground-truth id " + std::to_string(g) + " at (" + std::to_string(x) +
                         "," + std::to_string(y) + ") is out of range");
      }
      if (p == pred_ignore) {
        cm.add_rejected(g);
      } else if (p >= n) {
        throw InputError("predicted id " + std::to_string(p) + " at (" + std::to_string(x) + "," +
                         std::to_string(y) + ") is out of range");
      } else {
        cm.add(g, p);
      }
    }
  }
}

std::vector<ClassIou> per_class_iou(const ConfusionMatrix& cm) {
  const int n = cm.num_classes();
  const auto& c = cm.counts();
  std::vector<ClassIou> out;
  for (int k = 0; k < n; ++k) {
    const std::int64_t tp = c(k, k);
    const std::int64_t fn = c.row(k).sum() - tp;  // includes rejects
    const std::int64_t fp = c.col(k).sum() - tp;
    const std::int64_t uni = tp + fp + fn;
    if (uni > 0) out.push_back({k, static_cast<double>(tp) / static_cast<double>(uni)});
  }
  return out;
}

double miou(const ConfusionMatrix& cm) {
  const auto ious = per_class_iou(cm);
  if (ious.empty()) throw UndefinedMetricError("mIoU undefined: no scored pixels");
  double sum = 0.0;
  for (const auto& c : ious) sum += c.iou;
  return sum / static_cast<double>(ious.size());
}

std::vector<int> DegradationSeries::severities() const {
  std::vector<int> s;
  for (const auto& [sev, d] : by_severity) s.push_back(sev);
  return s;
}

double DegradationSeries::sum() const {
  double s = 0.0;
  for (const auto& [sev, d] : by_severity) s += d;
  return s;
}

namespace {

void require_same_severities(const DegradationSeries& f, const DegradationSeries& ref) {
  if (f.severities() != ref.severities() || f.by_severity.empty()) {
    throw InputError("degradation series for '" + f.model + "' and '" + ref.model +
                     "' cover different severity sets on " + f.corruption);
  }
}

}  // namespace

double corruption_degradation(const DegradationSeries& f, const DegradationSeries& ref) {
  require_same_severities(f, ref);
  const double denom = ref.sum();
  if (denom == 0.0) throw UndefinedMetricError("CD undefined: reference degradation is zero");
  return 100.0 * f.sum() / denom;
}

double relative_corruption_degradation(const DegradationSeries& f, const DegradationSeries& ref,
                                       CleanSubtraction mode) {
  require_same_severities(f, ref);
  auto excess = [mode](const DegradationSeries& s) {
    if (mode == CleanSubtraction::once) return s.sum() - s.clean;
    double e = 0.0;
    for (const auto& [sev, d] : s.by_severity) e += d - s.clean;
    return e;
  };
  const double denom = excess(ref);
  if (denom == 0.0) throw UndefinedMetricError("rCD undefined: reference shows no corruption loss");
  return 100.0 * excess(f) / denom;
}

double aggregate_mean(std::span<const double> values) {
  if (values.empty()) throw UndefinedMetricError("mean of an empty set");
  double s = 0.0;
  for (double v : values) s += v;
  return s / static_cast<double>(values.size());
}

double round_tenth(double value) { return std::round(value * 10.0) / 10.0; }

}  // namespace corrobench
