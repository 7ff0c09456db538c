#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "corrobench/errors.hpp"

namespace corrobench {

template <typename Scalar>
using Plane = Eigen::Array<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

template <typename Scalar>
using Pixel = Eigen::Array<Scalar, 3, 1>;

/// Planar three-channel image of real samples, indexed (row, col) per channel.
/// Holds either linear RGB or sRGB-encoded values scaled to [0,1]; the element
/// functions that consume it document which.
template <typename Scalar>
class ImageT {
 public:
  using PlaneType = Plane<Scalar>;

  ImageT() = default;

  ImageT(int width, int height, Scalar fill = Scalar(0)) {
    if (width < 1 || height < 1) {
      throw InputError("image dimensions must be >= 1");
    }
    for (auto& c : channels_) {
      c = PlaneType::Constant(height, width, fill);
    }
  }

  explicit ImageT(std::array<PlaneType, 3> channels) : channels_(std::move(channels)) {
    if (channels_[0].size() == 0) {
      throw InputError("image dimensions must be >= 1");
    }
    for (const auto& c : channels_) {
      if (c.rows() != channels_[0].rows() || c.cols() != channels_[0].cols()) {
        throw InputError("image channel planes differ in size");
      }
    }
  }

  int width() const { return static_cast<int>(channels_[0].cols()); }
  int height() const { return static_cast<int>(channels_[0].rows()); }

  PlaneType& channel(int c) { return channels_[c]; }
  const PlaneType& channel(int c) const { return channels_[c]; }

  Pixel<Scalar> pixel(int x, int y) const {
    return {channels_[0](y, x), channels_[1](y, x), channels_[2](y, x)};
  }
  void set_pixel(int x, int y, const Pixel<Scalar>& p) {
    for (int c = 0; c < 3; ++c) channels_[c](y, x) = p[c];
  }

  template <typename Fn>
  ImageT& apply_planes(Fn&& fn) {
    for (auto& c : channels_) fn(c);
    return *this;
  }

  ImageT& clamp01() {
    return apply_planes([](PlaneType& p) { p = p.max(Scalar(0)).min(Scalar(1)); });
  }

  bool operator==(const ImageT& o) const {
    for (int c = 0; c < 3; ++c) {
      if (channels_[c].rows() != o.channels_[c].rows() ||
          channels_[c].cols() != o.channels_[c].cols() ||
          !(channels_[c] == o.channels_[c]).all()) {
        return false;
      }
    }
    return true;
  }

 private:
  std::array<PlaneType, 3> channels_;
};

using LinearImage = ImageT<float>;
using LinearImaged = ImageT<double>;

/// 8-bit sRGB, interleaved RGB, row-major.
class RasterImage {
 public:
  RasterImage() = default;
  RasterImage(int width, int height, std::uint8_t fill = 0);
  RasterImage(int width, int height, std::vector<std::uint8_t> pixels);

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t size() const { return pixels_.size(); }

  std::uint8_t& at(int x, int y, int c) {
    return pixels_[(static_cast<std::size_t>(y) * width_ + x) * 3 + c];
  }
  std::uint8_t at(int x, int y, int c) const {
    return pixels_[(static_cast<std::size_t>(y) * width_ + x) * 3 + c];
  }

  std::vector<std::uint8_t>& data() { return pixels_; }
  const std::vector<std::uint8_t>& data() const { return pixels_; }

  bool operator==(const RasterImage&) const = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> pixels_;
};

inline constexpr std::uint16_t kDefaultIgnoreId = 255;

using LabelIds = Eigen::Array<std::uint16_t, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Per-pixel class ids. Ground truth and predictions share this type.
class LabelMap {
 public:
  LabelMap() = default;
  LabelMap(int width, int height, std::uint16_t fill = 0,
           std::uint16_t ignore_id = kDefaultIgnoreId);
  LabelMap(LabelIds ids, std::uint16_t ignore_id = kDefaultIgnoreId);

  int width() const { return static_cast<int>(ids_.cols()); }
  int height() const { return static_cast<int>(ids_.rows()); }
  std::uint16_t ignore_id() const { return ignore_id_; }

  std::uint16_t& at(int x, int y) { return ids_(y, x); }
  std::uint16_t at(int x, int y) const { return ids_(y, x); }

  const LabelIds& ids() const { return ids_; }
  LabelIds& ids() { return ids_; }

  bool operator==(const LabelMap& o) const {
    return ignore_id_ == o.ignore_id_ && ids_.rows() == o.ids_.rows() &&
           ids_.cols() == o.ids_.cols() && (ids_ == o.ids_).all();
  }

 private:
  LabelIds ids_;
  std::uint16_t ignore_id_ = kDefaultIgnoreId;
};

}  // namespace corrobench
