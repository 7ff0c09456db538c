#include "corrobench/image.hpp"

namespace corrobench {

RasterImage::RasterImage(int width, int height, std::uint8_t fill)
    : width_(width), height_(height) {
  if (width < 1 || height < 1) throw InputError("image dimensions must be >= 1");
  pixels_.assign(static_cast<std::size_t>(width) * height * 3, fill);
}

RasterImage::RasterImage(int width, int height, std::vector<std::uint8_t> pixels)
    : width_(width), height_(height), pixels_(std::move(pixels)) {
  if (width < 1 || height < 1) throw InputError("image dimensions must be >= 1");
  if (pixels_.size() != static_cast<std::size_t>(width) * height * 3) {
    throw InputError("pixel buffer length must equal width*height*3");
  }
}

LabelMap::LabelMap(int width, int height, std::uint16_t fill, std::uint16_t ignore_id)
    : ignore_id_(ignore_id) {
  if (width < 1 || height < 1) throw InputError("label map dimensions must be >= 1");
  ids_ = LabelIds::Constant(height, width, fill);
}

LabelMap::LabelMap(LabelIds ids, std::uint16_t ignore_id)
    : ids_(std::move(ids)), ignore_id_(ignore_id) {
  if (ids_.size() == 0) throw InputError("label map dimensions must be >= 1");
}

}  // namespace corrobench
