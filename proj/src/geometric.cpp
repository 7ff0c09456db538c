#include "corrobench/geometric.hpp"

#include <cmath>

#include "corrobench/color.hpp"
#include "corrobench/sampling.hpp"

namespace corrobench {
namespace {

struct Frame {
  double cx, cy, r_norm;
};

Frame frame_of(const DistortionParams& p, int width, int height) {
  return {p.center.x() * (width - 1), p.center.y() * (height - 1),
          0.5 * std::hypot(width - 1.0, height - 1.0)};
}

double farthest_corner(const Frame& f, int width, int height) {
  if (f.r_norm == 0.0) return 1.0;
  double r = 0.0;
  for (double x : {0.0, width - 1.0}) {
    for (double y : {0.0, height - 1.0}) r = std::max(r, std::hypot(x - f.cx, y - f.cy));
  }
  return r / f.r_norm;
}

}  // namespace

void DistortionParams::validate(double max_radius) const {
  for (double v : k) {
    if (!std::isfinite(v)) throw ParameterError("distortion coefficients must be finite");
  }
  if (!std::isfinite(center.x()) || !std::isfinite(center.y())) {
    throw ParameterError("distortion center must be finite");
  }
  const double top = std::max(1.0, max_radius);
  double prev = 0.0;
  for (int i = 1; i < 1024; ++i) {
    const double r = top * i / 1023.0;
    const double mapped = r * scale_at(r);
    if (!(mapped > prev)) throw ParameterError("radial distortion mapping is not monotone");
    prev = mapped;
  }
}

Eigen::Vector2d distortion_source(const DistortionParams& p, int width, int height, double x,
                                  double y) {
  const Frame f = frame_of(p, width, height);
  const Eigen::Vector2d offset(x - f.cx, y - f.cy);
  if (f.r_norm == 0.0) return {x, y};
  const double r = offset.norm() / f.r_norm;
  return Eigen::Vector2d(f.cx, f.cy) + offset * p.scale_at(r);
}

RasterImage barrel_distort(const RasterImage& img, const DistortionParams& p) {
  const int w = img.width();
  const int h = img.height();
  p.validate(farthest_corner(frame_of(p, w, h), w, h));
  const LinearImage lin = srgb_to_linear(img);
  LinearImage out(w, h);
  const BorderPolicy black = BorderPolicy::constant(0.0f);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const Eigen::Vector2d s = distortion_source(p, w, h, x, y);
      out.set_pixel(x, y, sample_bilinear(lin, s.x(), s.y(), black));
    }
  }
  return linear_to_srgb(out);
}

std::pair<RasterImage, LabelMap> barrel_distort(const RasterImage& img, const LabelMap& labels,
                                                const DistortionParams& p) {
  if (img.width() != labels.width() || img.height() != labels.height()) {
    throw InputError("image and label dimensions differ");
  }
  RasterImage warped = barrel_distort(img, p);
  LabelMap out_labels = labels;
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      const Eigen::Vector2d s = distortion_source(p, img.width(), img.height(), x, y);
      out_labels.at(x, y) = sample_nearest(labels, s.x(), s.y());
    }
  }
  return {std::move(warped), std::move(out_labels)};
}

double mean_displacement(const DistortionParams& p, int width, int height) {
  double total = 0.0;
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      total += (distortion_source(p, width, height, x, y) - Eigen::Vector2d(x, y)).norm();
    }
  }
  return total / (static_cast<double>(width) * height);
}

}  // namespace corrobench
