#pragma once

#include "corrobench/image.hpp"
#include "corrobench/random.hpp"

namespace corrobench {

// The classic noises operate on sRGB-encoded samples scaled to [0,1] and clamp
// before re-quantizing.

RasterImage gaussian_noise(const RasterImage& img, double sigma, RandomStream& rng);
/// Poisson(x * photon_scale) / photon_scale per sample.
RasterImage shot_noise(const RasterImage& img, double photon_scale, RandomStream& rng);
/// Each pixel, with probability `fraction`, becomes black or white (even odds).
RasterImage impulse_noise(const RasterImage& img, double fraction, RandomStream& rng);
/// x * (1 + N(0, sigma^2)).
RasterImage speckle_noise(const RasterImage& img, double sigma, RandomStream& rng);

struct IntensityNoiseParams {
  double sigma_lum = 0.0;     // luminance std at full intensity
  double sigma_chroma = 0.0;  // per-channel std at full intensity
  double alpha = 0.0;         // gain of the low-intensity boost

  void validate() const;
  /// Noise std multiplier at linear luminance y: 1 + alpha (1 - y).
  double gain(double luminance) const { return 1.0 + alpha * (1.0 - luminance); }
};

/// Camera-style noise in linear RGB. Per pixel, with y the mean of the three
/// linear channels and g = gain(y): one luminance draw N(0, (sigma_lum g)^2) is
/// added to every channel, plus an independent N(0, (sigma_chroma g)^2) per
/// channel. Darker pixels receive more noise whenever alpha > 0.
RasterImage intensity_dependent_noise(const RasterImage& img, const IntensityNoiseParams& p,
                                      RandomStream& rng);

}  // namespace corrobench
