#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>

#include "corrobench/image.hpp"

namespace corrobench {

/// Piecewise sRGB electro-optical transfer on an encoded value in [0,1].
inline double srgb_eotf(double c) {
  return c <= 0.04045 ? c / 12.92 : std::pow((c + 0.055) / 1.055, 2.4);
}

inline double srgb_oetf(double l) {
  return l <= 0.0031308 ? l * 12.92 : 1.055 * std::pow(l, 1.0 / 2.4) - 0.055;
}

/// Byte -> linear value, exact EOTF evaluated in double.
double srgb_byte_to_linear(std::uint8_t b);

/// Linear value -> nearest byte under the inverse transfer, halves rounded up.
/// Inputs are clamped to [0,1]. Exact (table-driven, no pow per sample).
std::uint8_t linear_to_srgb_byte(double l);

template <typename Scalar = float>
ImageT<Scalar> srgb_to_linear(const RasterImage& img) {
  ImageT<Scalar> out(img.width(), img.height());
  const auto* src = img.data().data();
  for (int c = 0; c < 3; ++c) {
    Scalar* dst = out.channel(c).data();
    const std::size_t n = static_cast<std::size_t>(img.width()) * img.height();
    for (std::size_t i = 0; i < n; ++i) {
      dst[i] = static_cast<Scalar>(srgb_byte_to_linear(src[i * 3 + c]));
    }
  }
  return out;
}

template <typename Scalar>
RasterImage linear_to_srgb(const ImageT<Scalar>& img) {
  RasterImage out(img.width(), img.height());
  auto* dst = out.data().data();
  const std::size_t n = static_cast<std::size_t>(img.width()) * img.height();
  for (int c = 0; c < 3; ++c) {
    const Scalar* src = img.channel(c).data();
    for (std::size_t i = 0; i < n; ++i) {
      dst[i * 3 + c] = linear_to_srgb_byte(static_cast<double>(src[i]));
    }
  }
  return out;
}

/// Half-away-from-zero quantization of an encoded [0,1] value (clamped first).
template <typename Scalar>
inline std::uint8_t quantize_unit(Scalar v) {
  v = v < Scalar(0) ? Scalar(0) : (v > Scalar(1) ? Scalar(1) : v);
  return static_cast<std::uint8_t>(static_cast<int>(v * Scalar(255) + Scalar(0.5)));
}

/// sRGB-encoded bytes rescaled to [0,1] without linearization.
template <typename Scalar = float>
ImageT<Scalar> to_unit(const RasterImage& img) {
  ImageT<Scalar> out(img.width(), img.height());
  const auto* src = img.data().data();
  const std::size_t n = static_cast<std::size_t>(img.width()) * img.height();
  for (int c = 0; c < 3; ++c) {
    Scalar* dst = out.channel(c).data();
    for (std::size_t i = 0; i < n; ++i) {
      dst[i] = static_cast<Scalar>(src[i * 3 + c]) / Scalar(255);
    }
  }
  return out;
}

template <typename Scalar>
RasterImage from_unit(const ImageT<Scalar>& img) {
  RasterImage out(img.width(), img.height());
  auto* dst = out.data().data();
  const std::size_t n = static_cast<std::size_t>(img.width()) * img.height();
  for (int c = 0; c < 3; ++c) {
    const Scalar* src = img.channel(c).data();
    for (std::size_t i = 0; i < n; ++i) dst[i * 3 + c] = quantize_unit(src[i]);
  }
  return out;
}

/// HSV with hue in [0,6), saturation and value in [0,1].
template <typename Scalar>
inline Pixel<Scalar> rgb_to_hsv(const Pixel<Scalar>& rgb) {
  const Scalar mx = rgb.maxCoeff();
  const Scalar mn = rgb.minCoeff();
  const Scalar delta = mx - mn;
  Scalar h = 0;
  if (delta > Scalar(0)) {
    if (mx == rgb[0]) {
      h = (rgb[1] - rgb[2]) / delta;
      if (h < Scalar(0)) h += Scalar(6);
    } else if (mx == rgb[1]) {
      h = (rgb[2] - rgb[0]) / delta + Scalar(2);
    } else {
      h = (rgb[0] - rgb[1]) / delta + Scalar(4);
    }
  }
  const Scalar s = mx > Scalar(0) ? delta / mx : Scalar(0);
  return {h, s, mx};
}

template <typename Scalar>
inline Pixel<Scalar> hsv_to_rgb(const Pixel<Scalar>& hsv) {
  const Scalar h = hsv[0], s = hsv[1], v = hsv[2];
  if (s <= Scalar(0)) return {v, v, v};
  const int sector = std::min(5, static_cast<int>(std::floor(h)));
  const Scalar f = h - Scalar(sector);
  const Scalar p = v * (Scalar(1) - s);
  const Scalar q = v * (Scalar(1) - s * f);
  const Scalar t = v * (Scalar(1) - s * (Scalar(1) - f));
  switch (sector) {
    case 0: return {v, t, p};
    case 1: return {q, v, p};
    case 2: return {p, v, t};
    case 3: return {p, q, v};
    case 4: return {t, p, v};
    default: return {v, p, q};
  }
}

}  // namespace corrobench
