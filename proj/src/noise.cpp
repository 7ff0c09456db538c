#include "corrobench/noise.hpp"

#include <array>
#include <cmath>
#include <vector>

#include "corrobench/color.hpp"

namespace corrobench {
namespace {

constexpr double kInv255 = 1.0 / 255.0;

void require(bool ok, const char* message) {
  if (!ok) throw ParameterError(message);
}

}  // namespace

RasterImage gaussian_noise(const RasterImage& img, double sigma, RandomStream& rng) {
  require(std::isfinite(sigma) && sigma >= 0.0, "gaussian noise sigma must be >= 0");
  if (sigma == 0.0) return img;
  RasterImage out = img;
  for (auto& b : out.data()) {
    b = quantize_unit(b * kInv255 + sigma * rng.normal());
  }
  return out;
}

RasterImage shot_noise(const RasterImage& img, double photon_scale, RandomStream& rng) {
  require(std::isfinite(photon_scale) && photon_scale > 0.0, "shot noise photon_scale must be > 0");
  std::vector<PoissonSampler> samplers;
  samplers.reserve(256);
  for (int v = 0; v < 256; ++v) samplers.emplace_back(v * kInv255 * photon_scale);
  RasterImage out = img;
  const double inv_scale = 1.0 / photon_scale;
  for (auto& b : out.data()) {
    b = quantize_unit(static_cast<double>(samplers[b](rng)) * inv_scale);
  }
  return out;
}

RasterImage impulse_noise(const RasterImage& img, double fraction, RandomStream& rng) {
  require(std::isfinite(fraction) && fraction >= 0.0 && fraction <= 1.0,
          "impulse fraction must be in [0,1]");
  if (fraction == 0.0) return img;
  RasterImage out = img;
  auto* px = out.data().data();
  const std::size_t n = static_cast<std::size_t>(img.width()) * img.height();
  for (std::size_t i = 0; i < n; ++i) {
    if (rng.uniform() < fraction) {
      const std::uint8_t v = rng.coin() ? 255 : 0;
      px[3 * i] = px[3 * i + 1] = px[3 * i + 2] = v;
    }
  }
  return out;
}

RasterImage speckle_noise(const RasterImage& img, double sigma, RandomStream& rng) {
  require(std::isfinite(sigma) && sigma >= 0.0, "speckle sigma must be >= 0");
  if (sigma == 0.0) return img;
  RasterImage out = img;
  for (auto& b : out.data()) {
    const double x = b * kInv255;
    b = quantize_unit(x + x * sigma * rng.normal());
  }
  return out;
}

void IntensityNoiseParams::validate() const {
  require(std::isfinite(sigma_lum) && sigma_lum >= 0.0, "sigma_lum must be >= 0");
  require(std::isfinite(sigma_chroma) && sigma_chroma >= 0.0, "sigma_chroma must be >= 0");
  require(std::isfinite(alpha) && alpha >= 0.0, "alpha must be >= 0");
}

RasterImage intensity_dependent_noise(const RasterImage& img, const IntensityNoiseParams& p,
                                      RandomStream& rng) {
  p.validate();
  RasterImage out = img;
  auto* px = out.data().data();
  const std::size_t n = static_cast<std::size_t>(img.width()) * img.height();
  for (std::size_t i = 0; i < n; ++i) {
    std::array<double, 3> lin;
    for (int c = 0; c < 3; ++c) lin[c] = srgb_byte_to_linear(px[3 * i + c]);
    const double y = (lin[0] + lin[1] + lin[2]) / 3.0;
    const double g = p.gain(y);
    const double n_lum = p.sigma_lum * g * rng.normal();
    for (int c = 0; c < 3; ++c) {
      const double n_chroma = p.sigma_chroma * g * rng.normal();
      const double v = std::clamp(lin[c] + n_lum + n_chroma, 0.0, 1.0);
      px[3 * i + c] = linear_to_srgb_byte(v);
    }
  }
  return out;
}

}  // namespace corrobench
