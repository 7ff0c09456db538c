#pragma once

#include <filesystem>
#include <vector>

#include "corrobench/image.hpp"
#include "corrobench/random.hpp"

namespace corrobench {

// Weather corruptions work on sRGB-encoded samples scaled to [0,1].

/// Diamond-square fractal cropped to width x height and stretched to [0,1].
/// Each finer octave's amplitude is the previous one times `roughness`.
Plane<float> plasma_fractal(int width, int height, double roughness, RandomStream& rng);

/// x' = clamp(x (1 - t F) + t F): pulls pixels toward white where the field is dense.
RasterImage fog_composite(const RasterImage& img, double thickness, const Plane<float>& field);
RasterImage fog(const RasterImage& img, double thickness, double roughness, RandomStream& rng);

struct SnowParams {
  double density = 0.0;    // probability that a pixel seeds a flake
  double length = 1.0;     // streak length in pixels
  double angle_deg = 0.0;  // streak direction, image coordinates (y down)
  double intensity = 1.0;  // flake brightness
  double whitening = 0.0;  // blend toward the washed-out sky term
};
RasterImage snow(const RasterImage& img, const SnowParams& p, RandomStream& rng);

struct SpatterParams {
  double density = 0.0;     // fraction of the frame covered by liquid blobs
  double blob_sigma = 1.0;  // blur applied to the seed noise, pixels
  double opacity = 0.0;
};
RasterImage spatter(const RasterImage& img, const SpatterParams& p, RandomStream& rng);

/// Frost overlay images, loaded once and shared read-only.
struct FrostAssets {
  std::vector<RasterImage> overlays;

  /// Missing directory -> empty set (procedural fallback). Present directory:
  /// every .png/.jpg/.jpeg entry must decode, otherwise IoError.
  static FrostAssets load(const std::filesystem::path& dir);
};

/// Overlay in [0,1] covering the frame: a random crop of a random asset
/// (upscaled when smaller than the frame) or, with no assets, band-limited noise.
LinearImage frost_overlay(int width, int height, const FrostAssets& assets, RandomStream& rng);

/// x' = clamp(w_image x + w_overlay overlay).
RasterImage frost(const RasterImage& img, const FrostAssets& assets, double w_image,
                  double w_overlay, RandomStream& rng);

}  // namespace corrobench
