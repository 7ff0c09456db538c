#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <string_view>
#include <vector>

#include "corrobench/blur.hpp"
#include "corrobench/geometric.hpp"
#include "corrobench/image.hpp"
#include "corrobench/kinds.hpp"
#include "corrobench/noise.hpp"
#include "corrobench/severity.hpp"
#include "corrobench/weather.hpp"

namespace corrobench {

/// One corruption at one severity. Severity 0 ("clean") is not a spec: clean
/// data is simply never passed through apply().
struct CorruptionSpec {
  CorruptionKind kind;
  int severity = 1;
  std::uint64_t seed = 0;

  void validate() const;
};

/// Read-only resources shared by every worker.
struct CorruptionContext {
  SeverityTable table = SeverityTable::defaults();
  std::shared_ptr<const FrostAssets> frost_assets;  // null or empty: procedural frost
  std::shared_ptr<const PsfGrid> psf_grid;          // null: radial preset per severity
};

struct Corrupted {
  RasterImage image;
  std::optional<LabelMap> labels;
};

/// FNV-1a 64 over: global seed (8 bytes LE), 0x00, image id, 0x00, kind name,
/// 0x00, severity byte.
std::uint64_t derive_seed(std::uint64_t global_seed, std::string_view image_id,
                          const CorruptionSpec& spec);

/// Applies one corruption. Output dimensions equal input dimensions.
/// Geometric distortion requires labels and warps them with the image; every
/// other kind returns the labels untouched.
Corrupted apply(const CorruptionSpec& spec, const RasterImage& img,
                const std::optional<LabelMap>& labels, const CorruptionContext& ctx);
Corrupted apply(const CorruptionSpec& spec, const RasterImage& img,
                const std::optional<LabelMap>& labels = std::nullopt);

// Parameter resolution, exposed for tests and the catalog.
DistortionParams distortion_params(const ParamTuple& p);
PsfGrid psf_preset(const ParamTuple& p, int variant);
IntensityNoiseParams intensity_params(const ParamTuple& p);
SnowParams snow_params(const ParamTuple& p);
SpatterParams spatter_params(const ParamTuple& p);

struct CatalogEntry {
  CorruptionKind kind;
  std::array<ParamTuple, kSeverityLevels> severities;
};

/// All 19 kinds in benchmark column order: blur, noise, digital, weather, geometric.
std::vector<CatalogEntry> list_catalog(const SeverityTable& table = SeverityTable::defaults());

}  // namespace corrobench
