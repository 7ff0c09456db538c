#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "corrobench/image.hpp"

namespace corrobench {

/// Decodes an 8-bit PNG as RGB. Gray inputs are replicated to three channels,
/// palettes expanded, alpha dropped. Anything above 8 bits per sample is rejected.
RasterImage read_png(const std::filesystem::path& path);
void write_png(const std::filesystem::path& path, const RasterImage& img);

/// Single-channel 8- or 16-bit PNG; palette PNGs yield their raw indices.
LabelMap read_label_png(const std::filesystem::path& path,
                        std::uint16_t ignore_id = kDefaultIgnoreId);
/// Writes 8-bit when every id fits, 16-bit otherwise.
void write_label_png(const std::filesystem::path& path, const LabelMap& labels);

std::vector<std::uint8_t> encode_jpeg(const RasterImage& img, int quality);
RasterImage decode_jpeg(std::span<const std::uint8_t> bytes);

/// Dispatches on file signature (PNG or JPEG).
RasterImage read_image(const std::filesystem::path& path);

}  // namespace corrobench
