#pragma once

#include <cstdint>

#include "corrobench/image.hpp"

namespace corrobench {

/// A street-scene-like frame: sky/road split, textured blocks and discs, with
/// a matching label map (ids < 19, plus a few ignore pixels along the bottom
/// edge). Used by --bench and by tests that need natural-ish content.
struct SyntheticFrame {
  RasterImage image;
  LabelMap labels;
};

SyntheticFrame synthetic_frame(int width, int height, std::uint64_t seed);

}  // namespace corrobench
