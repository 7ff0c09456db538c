#pragma once

#include <array>
#include <utility>

#include <Eigen/Core>

#include "corrobench/image.hpp"

namespace corrobench {

/// Radial warp r_s = r_d (1 + k1 r_d + k2 r_d^2 + k3 r_d^3 + k4 r_d^4), where r_d
/// is the destination radius normalized by the half-diagonal of the pixel
/// lattice and r_s the radius sampled in the source. Positive coefficients
/// give barrel distortion.
struct DistortionParams {
  std::array<double, 4> k{0.0, 0.0, 0.0, 0.0};
  Eigen::Vector2d center{0.5, 0.5};  // normalized image coordinates

  /// Radial scale factor r_s / r_d at normalized destination radius r.
  double scale_at(double r) const {
    return 1.0 + r * (k[0] + r * (k[1] + r * (k[2] + r * k[3])));
  }
  bool is_identity() const { return k == std::array<double, 4>{0.0, 0.0, 0.0, 0.0}; }

  /// Throws ParameterError unless r -> r * scale_at(r) is strictly increasing,
  /// checked at 1024 radii spanning [0, max(1, max_radius)].
  void validate(double max_radius = 1.0) const;
};

/// Exact (pre-rasterization) source position of destination pixel (x, y).
Eigen::Vector2d distortion_source(const DistortionParams& p, int width, int height, double x,
                                  double y);

/// Inverse-mapping warp of image (bilinear in linear RGB, black outside the
/// frame) and labels (nearest, ignore id outside the frame).
std::pair<RasterImage, LabelMap> barrel_distort(const RasterImage& img, const LabelMap& labels,
                                                const DistortionParams& p);
RasterImage barrel_distort(const RasterImage& img, const DistortionParams& p);

/// Mean source-to-destination distance over all pixels, in pixels.
double mean_displacement(const DistortionParams& p, int width, int height);

}  // namespace corrobench
