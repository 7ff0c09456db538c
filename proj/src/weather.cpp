#include "corrobench/weather.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "corrobench/blur.hpp"
#include "corrobench/color.hpp"
#include "corrobench/image_io.hpp"
#include "corrobench/sampling.hpp"

namespace corrobench {
namespace {

using PlaneF = Plane<float>;

void stretch01(PlaneF& p) {
  const float lo = p.minCoeff();
  const float hi = p.maxCoeff();
  if (hi > lo) {
    p = (p - lo) / (hi - lo);
  } else {
    p.setConstant(0.5f);
  }
}

PlaneF white_noise(int width, int height, RandomStream& rng) {
  PlaneF p(height, width);
  float* d = p.data();
  for (Eigen::Index i = 0; i < p.size(); ++i) d[i] = rng.uniform_float();
  return p;
}

}  // namespace

PlaneF plasma_fractal(int width, int height, double roughness, RandomStream& rng) {
  if (!(roughness > 0.0) || roughness > 1.0) throw ParameterError("fog roughness must be in (0,1]");
  int size = 2;
  while (size + 1 < std::max(width, height)) size *= 2;
  const int n = size + 1;
  Eigen::ArrayXXd g(n, n);
  auto jitter = [&rng](double amp) { return amp * (rng.uniform() - 0.5); };
  g(0, 0) = rng.uniform();
  g(0, size) = rng.uniform();
  g(size, 0) = rng.uniform();
  g(size, size) = rng.uniform();
  double amp = 1.0;
  for (int step = size; step > 1; step /= 2) {
    const int half = step / 2;
    for (int y = half; y < n; y += step) {
      for (int x = half; x < n; x += step) {
        g(y, x) = 0.25 * (g(y - half, x - half) + g(y - half, x + half) + g(y + half, x - half) +
                          g(y + half, x + half)) +
                  jitter(amp);
      }
    }
    for (int y = 0; y < n; y += half) {
      for (int x = (y / half) % 2 == 0 ? half : 0; x < n; x += step) {
        double sum = 0.0;
        int count = 0;
        if (y >= half) sum += g(y - half, x), ++count;
        if (y + half < n) sum += g(y + half, x), ++count;
        if (x >= half) sum += g(y, x - half), ++count;
        if (x + half < n) sum += g(y, x + half), ++count;
        g(y, x) = sum / count + jitter(amp);
      }
    }
    amp *= roughness;
  }
  PlaneF out = g.block(0, 0, height, width).cast<float>();
  stretch01(out);
  return out;
}

RasterImage fog_composite(const RasterImage& img, double thickness, const PlaneF& field) {
  if (!(thickness >= 0.0 && thickness <= 1.0)) throw ParameterError("fog thickness must be in [0,1]");
  if (field.rows() != img.height() || field.cols() != img.width()) {
    throw InputError("fog field size differs from image");
  }
  if (thickness == 0.0) return img;
  LinearImage x = to_unit(img);
  const PlaneF tf = static_cast<float>(thickness) * field;
  x.apply_planes([&](PlaneF& p) { p = p * (1.0f - tf) + tf; });
  return from_unit(x.clamp01());
}

RasterImage fog(const RasterImage& img, double thickness, double roughness, RandomStream& rng) {
  if (thickness == 0.0) return img;
  return fog_composite(img, thickness, plasma_fractal(img.width(), img.height(), roughness, rng));
}

RasterImage snow(const RasterImage& img, const SnowParams& p, RandomStream& rng) {
  if (!(p.density >= 0.0 && p.density <= 1.0)) throw ParameterError("snow density must be in [0,1]");
  if (!(p.whitening >= 0.0 && p.whitening <= 1.0)) {
    throw ParameterError("snow whitening must be in [0,1]");
  }
  if (!(p.intensity >= 0.0)) throw ParameterError("snow intensity must be >= 0");
  // No flakes, no snowfall: the whitening term belongs to the snow layer.
  if (p.density == 0.0) return img;
  const int w = img.width();
  const int h = img.height();
  PlaneF flakes = PlaneF::Zero(h, w);
  float* f = flakes.data();
  for (Eigen::Index i = 0; i < flakes.size(); ++i) {
    if (rng.uniform() < p.density) {
      f[i] = static_cast<float>(p.intensity * (0.5 + 0.5 * rng.uniform()));
    }
  }
  const Kernel2D streak =
      make_motion_kernel(p.length, p.angle_deg * std::numbers::pi / 180.0);
  const PlaneF layer = convolve_plane(flakes, streak) * static_cast<float>(p.length);

  LinearImage x = to_unit(img);
  const PlaneF gray = (x.channel(0) + x.channel(1) + x.channel(2)) / 3.0f;
  const PlaneF sky = (1.5f * gray + 0.5f).min(1.0f);
  const auto wh = static_cast<float>(p.whitening);
  x.apply_planes([&](PlaneF& c) { c = (1.0f - wh) * c + wh * c.max(sky) + layer; });
  return from_unit(x.clamp01());
}

RasterImage spatter(const RasterImage& img, const SpatterParams& p, RandomStream& rng) {
  if (!(p.density >= 0.0 && p.density <= 1.0)) throw ParameterError("spatter density must be in [0,1]");
  if (!(p.opacity >= 0.0 && p.opacity <= 1.0)) throw ParameterError("spatter opacity must be in [0,1]");
  if (!(p.blob_sigma > 0.0)) throw ParameterError("spatter blob_sigma must be > 0");
  if (p.density == 0.0 || p.opacity == 0.0) return img;
  const int w = img.width();
  const int h = img.height();
  const PlaneF field = convolve_plane(white_noise(w, h, rng), make_gaussian_kernel(p.blob_sigma));

  // Threshold at the (1 - density) quantile; a soft ramp up to the
  // (1 - density/2) quantile anti-aliases the blob rims.
  std::vector<float> sorted(field.data(), field.data() + field.size());
  auto quantile = [&](double q) {
    const auto k = static_cast<std::size_t>(
        std::clamp(q, 0.0, 1.0) * static_cast<double>(sorted.size() - 1));
    std::nth_element(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(k), sorted.end());
    return sorted[k];
  };
  const float lo = quantile(1.0 - p.density);
  float hi = quantile(1.0 - p.density / 2.0);
  if (hi <= lo) hi = lo + 1e-6f;
  const PlaneF mask = ((field - lo) / (hi - lo)).max(0.0f).min(1.0f) * static_cast<float>(p.opacity);

  static constexpr float kMud[3] = {0.12f, 0.09f, 0.06f};
  LinearImage x = to_unit(img);
  for (int c = 0; c < 3; ++c) {
    PlaneF& ch = x.channel(c);
    const PlaneF liquid = 0.45f * ch + kMud[c];
    ch = (1.0f - mask) * ch + mask * liquid;
  }
  return from_unit(x.clamp01());
}

FrostAssets FrostAssets::load(const std::filesystem::path& dir) {
  FrostAssets assets;
  std::error_code ec;
  if (!std::filesystem::is_directory(dir, ec)) return assets;
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    std::string ext = entry.path().extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
    if (ext == ".png" || ext == ".jpg" || ext == ".jpeg") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  for (const auto& f : files) assets.overlays.push_back(read_image(f));
  return assets;
}

LinearImage frost_overlay(int width, int height, const FrostAssets& assets, RandomStream& rng) {
  if (assets.overlays.empty()) {
    PlaneF noise = white_noise(width, height, rng);
    PlaneF fine = convolve_plane(noise, make_gaussian_kernel(1.5));
    PlaneF coarse = convolve_plane(noise, make_gaussian_kernel(6.0));
    stretch01(fine);
    stretch01(coarse);
    PlaneF ice = 0.55f * fine + 0.45f * coarse;
    stretch01(ice);
    ice = ((ice - 0.3f) / 0.7f).max(0.0f).pow(1.5f);
    static constexpr float kTint[3] = {0.85f, 0.92f, 1.0f};
    std::array<PlaneF, 3> planes;
    for (int c = 0; c < 3; ++c) planes[c] = kTint[c] * ice;
    return LinearImage(std::move(planes));
  }
  const auto idx = static_cast<std::size_t>(
      rng.uniform_int(0, static_cast<std::int64_t>(assets.overlays.size()) - 1));
  LinearImage src = to_unit(assets.overlays[idx]);
  const double scale = std::max({1.0, static_cast<double>(width) / src.width(),
                                 static_cast<double>(height) / src.height()});
  const int sw = static_cast<int>(std::ceil(src.width() * scale));
  const int sh = static_cast<int>(std::ceil(src.height() * scale));
  const int ox = static_cast<int>(rng.uniform_int(0, sw - width));
  const int oy = static_cast<int>(rng.uniform_int(0, sh - height));
  LinearImage out(width, height);
  const BorderPolicy border = BorderPolicy::clamp_to_edge();
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      const double sx = (x + ox) / scale;
      const double sy = (y + oy) / scale;
      out.set_pixel(x, y, sample_bilinear(src, sx, sy, border));
    }
  }
  return out;
}

RasterImage frost(const RasterImage& img, const FrostAssets& assets, double w_image,
                  double w_overlay, RandomStream& rng) {
  if (!std::isfinite(w_image) || !std::isfinite(w_overlay) || w_image < 0.0 || w_overlay < 0.0) {
    throw ParameterError("frost weights must be finite and >= 0");
  }
  if (w_overlay == 0.0 && w_image == 1.0) return img;
  const LinearImage overlay = frost_overlay(img.width(), img.height(), assets, rng);
  LinearImage x = to_unit(img);
  for (int c = 0; c < 3; ++c) {
    x.channel(c) = static_cast<float>(w_image) * x.channel(c) +
                   static_cast<float>(w_overlay) * overlay.channel(c);
  }
  return from_unit(x.clamp01());
}

}  // namespace corrobench
