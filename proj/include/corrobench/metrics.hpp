#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "corrobench/image.hpp"

namespace corrobench {

/// counts(gt, pred) over scored pixels, plus a reject column (index
/// num_classes) for pixels whose prediction is the ignore id. Rejects count
/// against the ground-truth class and toward no class's true positives.
class ConfusionMatrix {
 public:
  using Counts = Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

  explicit ConfusionMatrix(int num_classes);

  int num_classes() const { return static_cast<int>(counts_.rows()); }
  std::int64_t count(int gt, int pred) const { return counts_(gt, pred); }
  std::int64_t rejected(int gt) const { return counts_(gt, num_classes()); }
  std::int64_t total() const { return counts_.sum(); }
  const Counts& counts() const { return counts_; }

  void add(int gt, int pred, std::int64_t n = 1) { counts_(gt, pred) += n; }
  void add_rejected(int gt, std::int64_t n = 1) { counts_(gt, num_classes()) += n; }

  ConfusionMatrix& merge(const ConfusionMatrix& other);
  bool operator==(const ConfusionMatrix& o) const {
    return counts_.rows() == o.counts_.rows() && counts_ == o.counts_;
  }

  /// First line `num_classes,C`, then C rows of C+1 integers (last: reject).
  void write_csv(std::ostream& os) const;
  static ConfusionMatrix read_csv(std::istream& is);

 private:
  Counts counts_;
};

/// Adds every pixel whose ground truth is not the ignore id. Throws InputError
/// on size mismatch or ids >= num_classes that are not the ignore id.
void accumulate(ConfusionMatrix& cm, const LabelMap& gt, const LabelMap& pred);

struct ClassIou {
  int class_id;
  double iou;
};

/// IoU_k = TP / (TP + FP + FN) for classes with a non-empty union.
std::vector<ClassIou> per_class_iou(const ConfusionMatrix& cm);

/// Mean over classes with TP + FP + FN > 0, summed in class order.
/// Throws UndefinedMetricError when no class qualifies.
double miou(const ConfusionMatrix& cm);

inline double degradation(double miou_value) { return 1.0 - miou_value; }

/// Per-severity degradations of one model on one corruption, plus its clean
/// degradation.
struct DegradationSeries {
  std::string model;
  std::string corruption;
  std::map<int, double> by_severity;  // severity -> D
  double clean = 0.0;

  std::vector<int> severities() const;
  double sum() const;
};

enum class CleanSubtraction {
  per_severity,  // sum_s (D_s - D_clean)
  once,          // (sum_s D_s) - D_clean
};

/// Sum of f's degradations over sum of ref's, in percent. Series must cover the
/// same severities; zero reference sum -> UndefinedMetricError.
double corruption_degradation(const DegradationSeries& f, const DegradationSeries& ref);

/// CD after subtracting clean degradation, in percent.
double relative_corruption_degradation(const DegradationSeries& f, const DegradationSeries& ref,
                                       CleanSubtraction mode = CleanSubtraction::per_severity);

/// Arithmetic mean; empty input -> UndefinedMetricError.
double aggregate_mean(std::span<const double> values);

/// Rounds to one decimal place (reports use 0.1-point precision).
double round_tenth(double value);

}  // namespace corrobench
