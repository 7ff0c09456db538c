#pragma once

#include "corrobench/image.hpp"

namespace corrobench {

/// HSV value channel shifted by `delta`, clamped.
RasterImage brightness(const RasterImage& img, double delta);
/// (x - mean) * factor + mean per channel, mean taken over the whole image.
RasterImage contrast(const RasterImage& img, double factor);
/// HSV saturation mapped to clamp(s * scale + offset).
RasterImage saturate(const RasterImage& img, double scale, double offset);
/// Baseline JPEG round trip. Not bit-exact across libjpeg builds.
RasterImage jpeg_compress(const RasterImage& img, int quality);

}  // namespace corrobench
