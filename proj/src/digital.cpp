#include "corrobench/digital.hpp"

#include <cmath>

#include "corrobench/color.hpp"
#include "corrobench/image_io.hpp"

namespace corrobench {
namespace {

template <typename Fn>
RasterImage map_hsv(const RasterImage& img, Fn&& fn) {
  RasterImage out = img;
  auto* px = out.data().data();
  const std::size_t n = static_cast<std::size_t>(img.width()) * img.height();
  for (std::size_t i = 0; i < n; ++i) {
    Pixel<double> rgb(px[3 * i] / 255.0, px[3 * i + 1] / 255.0, px[3 * i + 2] / 255.0);
    Pixel<double> hsv = rgb_to_hsv(rgb);
    fn(hsv);
    rgb = hsv_to_rgb(hsv);
    for (int c = 0; c < 3; ++c) px[3 * i + c] = quantize_unit(rgb[c]);
  }
  return out;
}

}  // namespace

RasterImage brightness(const RasterImage& img, double delta) {
  if (!std::isfinite(delta)) throw ParameterError("brightness delta must be finite");
  return map_hsv(img, [delta](Pixel<double>& hsv) {
    hsv[2] = std::clamp(hsv[2] + delta, 0.0, 1.0);
  });
}

RasterImage contrast(const RasterImage& img, double factor) {
  if (!std::isfinite(factor) || factor <= 0.0) throw ParameterError("contrast factor must be > 0");
  const LinearImaged unit = to_unit<double>(img);
  LinearImaged out = unit;
  for (int c = 0; c < 3; ++c) {
    const double mean = unit.channel(c).mean();
    out.channel(c) = (unit.channel(c) - mean) * factor + mean;
  }
  return from_unit(out.clamp01());
}

RasterImage saturate(const RasterImage& img, double scale, double offset) {
  if (!std::isfinite(scale) || !std::isfinite(offset) || scale < 0.0) {
    throw ParameterError("saturate requires finite scale >= 0 and finite offset");
  }
  return map_hsv(img, [scale, offset](Pixel<double>& hsv) {
    hsv[1] = std::clamp(hsv[1] * scale + offset, 0.0, 1.0);
  });
}

RasterImage jpeg_compress(const RasterImage& img, int quality) {
  const auto bytes = encode_jpeg(img, quality);
  return decode_jpeg(bytes);
}

}  // namespace corrobench
