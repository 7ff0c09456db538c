#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>

#include "corrobench/image.hpp"

namespace corrobench {

struct BorderPolicy {
  enum class Kind { constant, clamp_to_edge };
  Kind kind = Kind::clamp_to_edge;
  float value = 0.0f;

  static BorderPolicy constant(float v) { return {Kind::constant, v}; }
  static BorderPolicy clamp_to_edge() { return {Kind::clamp_to_edge, 0.0f}; }
};

/// Bilinear sample at a real pixel coordinate; pixel centers sit on integers.
template <typename Scalar>
Pixel<Scalar> sample_bilinear(const ImageT<Scalar>& img, double x, double y,
                              const BorderPolicy& border) {
  const int w = img.width();
  const int h = img.height();
  const double fx = std::floor(x);
  const double fy = std::floor(y);
  const int x0 = static_cast<int>(fx);
  const int y0 = static_cast<int>(fy);
  const Scalar ax = static_cast<Scalar>(x - fx);
  const Scalar ay = static_cast<Scalar>(y - fy);

  auto tap = [&](int xi, int yi) -> Pixel<Scalar> {
    if (xi < 0 || yi < 0 || xi >= w || yi >= h) {
      if (border.kind == BorderPolicy::Kind::constant) {
        return Pixel<Scalar>::Constant(static_cast<Scalar>(border.value));
      }
      xi = std::clamp(xi, 0, w - 1);
      yi = std::clamp(yi, 0, h - 1);
    }
    return img.pixel(xi, yi);
  };

  // Lattice points are returned exactly, without blending in a zero-weight
  // neighbor that may lie outside the frame.
  if (ax == Scalar(0) && ay == Scalar(0)) return tap(x0, y0);
  if (ay == Scalar(0)) {
    return tap(x0, y0) * (Scalar(1) - ax) + tap(x0 + 1, y0) * ax;
  }
  if (ax == Scalar(0)) {
    return tap(x0, y0) * (Scalar(1) - ay) + tap(x0, y0 + 1) * ay;
  }
  const Pixel<Scalar> top = tap(x0, y0) * (Scalar(1) - ax) + tap(x0 + 1, y0) * ax;
  const Pixel<Scalar> bottom = tap(x0, y0 + 1) * (Scalar(1) - ax) + tap(x0 + 1, y0 + 1) * ax;
  return top * (Scalar(1) - ay) + bottom * ay;
}

/// Nearest-lattice class id; exact halves resolve toward the smaller index.
/// Coordinates outside the frame yield the map's ignore id.
inline std::uint16_t sample_nearest(const LabelMap& labels, double x, double y) {
  const double rx = std::ceil(x - 0.5);
  const double ry = std::ceil(y - 0.5);
  if (!(rx >= 0.0) || !(ry >= 0.0) || rx >= labels.width() || ry >= labels.height()) {
    return labels.ignore_id();
  }
  return labels.at(static_cast<int>(rx), static_cast<int>(ry));
}

}  // namespace corrobench
