#include "corrobench/corruption.hpp"

#include <cmath>
#include <numbers>

#include "corrobench/color.hpp"
#include "corrobench/digital.hpp"

namespace corrobench {
namespace {

int as_int(double v, const char* what) {
  const double r = std::round(v);
  if (!std::isfinite(v) || r != v) {
    throw ConfigError(std::string(what) + " must be an integer");
  }
  return static_cast<int>(r);
}

template <typename Op>
RasterImage in_linear(const RasterImage& img, Op&& op) {
  return linear_to_srgb(op(srgb_to_linear(img)));
}

}  // namespace

void CorruptionSpec::validate() const {
  if (severity < 1 || severity > kSeverityLevels) {
    throw InvalidSpecError("severity must be in 1..5, got " + std::to_string(severity));
  }
  if (kind.id == Corruption::psf ? (kind.variant < 1 || kind.variant > kPsfVariants)
                                 : kind.variant != 1) {
    throw InvalidSpecError("invalid variant for " + std::string(kind.base_name()));
  }
  if (static_cast<int>(kind.id) < 0 || static_cast<int>(kind.id) >= kCorruptionCount) {
    throw InvalidSpecError("unknown corruption kind");
  }
}

std::uint64_t derive_seed(std::uint64_t global_seed, std::string_view image_id,
                          const CorruptionSpec& spec) {
  if (image_id.empty()) throw InputError("image id must not be empty");
  char seed_bytes[8];
  for (int i = 0; i < 8; ++i) seed_bytes[i] = static_cast<char>(global_seed >> (8 * i));
  const char sep = '\0';
  std::uint64_t h = fnv1a64(std::string_view(seed_bytes, 8));
  h = fnv1a64(std::string_view(&sep, 1), h);
  h = fnv1a64(image_id, h);
  h = fnv1a64(std::string_view(&sep, 1), h);
  h = fnv1a64(spec.kind.name(), h);
  h = fnv1a64(std::string_view(&sep, 1), h);
  const char sev = static_cast<char>(spec.severity);
  return fnv1a64(std::string_view(&sev, 1), h);
}

DistortionParams distortion_params(const ParamTuple& p) {
  DistortionParams d;
  d.k = {p.get("k1"), p.get("k2"), p.get("k3"), p.get("k4")};
  return d;
}

PsfGrid psf_preset(const ParamTuple& p, int variant) {
  const std::string edge = "sigma_edge_" + std::to_string(variant);
  return generate_radial_psf_grid(as_int(p.get("rows"), "psf rows"), as_int(p.get("cols"), "psf cols"),
                                  as_int(p.get("kernel_size"), "psf kernel_size"),
                                  p.get("sigma_center"), p.get(edge));
}

IntensityNoiseParams intensity_params(const ParamTuple& p) {
  return {p.get("sigma_lum"), p.get("sigma_chroma"), p.get("alpha")};
}

SnowParams snow_params(const ParamTuple& p) {
  return {p.get("density"), p.get("length"), p.get("angle_deg"), p.get("intensity"),
          p.get("whitening")};
}

SpatterParams spatter_params(const ParamTuple& p) {
  return {p.get("density"), p.get("blob_sigma"), p.get("opacity")};
}

Corrupted apply(const CorruptionSpec& spec, const RasterImage& img,
                const std::optional<LabelMap>& labels) {
  static const CorruptionContext default_ctx;
  return apply(spec, img, labels, default_ctx);
}

Corrupted apply(const CorruptionSpec& spec, const RasterImage& img,
                const std::optional<LabelMap>& labels, const CorruptionContext& ctx) {
  spec.validate();
  if (labels && (labels->width() != img.width() || labels->height() != img.height())) {
    throw InputError("image is " + std::to_string(img.width()) + "x" + std::to_string(img.height()) +
                     " but labels are " + std::to_string(labels->width()) + "x" +
                     std::to_string(labels->height()));
  }
  const ParamTuple& p = ctx.table.at(spec.kind, spec.severity);
  RandomStream rng(spec.seed);
  Corrupted out{RasterImage{}, labels};

  switch (spec.kind.id) {
    case Corruption::motion: {
      const double angle = rng.uniform() * std::numbers::pi;
      const Kernel2D k = make_motion_kernel(p.get("length"), angle);
      out.image = in_linear(img, [&](const LinearImage& l) { return convolve(l, k); });
      break;
    }
    case Corruption::defocus: {
      const Kernel2D k = make_disk_kernel(p.get("radius"));
      out.image = in_linear(img, [&](const LinearImage& l) { return convolve(l, k); });
      break;
    }
    case Corruption::frosted_glass:
      out.image = in_linear(img, [&](const LinearImage& l) {
        return frosted_glass(l, as_int(p.get("max_shift"), "max_shift"),
                             as_int(p.get("iterations"), "iterations"), p.get("post_sigma"), rng);
      });
      break;
    case Corruption::gaussian_blur: {
      const Kernel2D k = make_gaussian_kernel(p.get("sigma"));
      out.image = in_linear(img, [&](const LinearImage& l) { return convolve(l, k); });
      break;
    }
    case Corruption::psf: {
      const PsfGrid grid = ctx.psf_grid ? *ctx.psf_grid : psf_preset(p, spec.kind.variant);
      out.image = in_linear(img, [&](const LinearImage& l) { return psf_blur(l, grid); });
      break;
    }
    case Corruption::gaussian_noise:
      out.image = gaussian_noise(img, p.get("sigma"), rng);
      break;
    case Corruption::impulse:
      out.image = impulse_noise(img, p.get("fraction"), rng);
      break;
    case Corruption::shot:
      out.image = shot_noise(img, p.get("photon_scale"), rng);
      break;
    case Corruption::speckle:
      out.image = speckle_noise(img, p.get("sigma"), rng);
      break;
    case Corruption::intensity:
      out.image = intensity_dependent_noise(img, intensity_params(p), rng);
      break;
    case Corruption::brightness:
      out.image = brightness(img, p.get("delta"));
      break;
    case Corruption::contrast:
      out.image = contrast(img, p.get("factor"));
      break;
    case Corruption::saturate:
      out.image = saturate(img, p.get("scale"), p.get("offset"));
      break;
    case Corruption::jpeg:
      out.image = jpeg_compress(img, as_int(p.get("quality"), "jpeg quality"));
      break;
    case Corruption::snow:
      out.image = snow(img, snow_params(p), rng);
      break;
    case Corruption::spatter:
      out.image = spatter(img, spatter_params(p), rng);
      break;
    case Corruption::fog:
      out.image = fog(img, p.get("thickness"), p.get("roughness"), rng);
      break;
    case Corruption::frost: {
      static const FrostAssets kNoAssets;
      const FrostAssets& assets = ctx.frost_assets ? *ctx.frost_assets : kNoAssets;
      out.image = frost(img, assets, p.get("w_image"), p.get("w_overlay"), rng);
      break;
    }
    case Corruption::geometric_distortion: {
      if (!labels) throw InputError("geometric distortion requires the label map");
      auto [image, warped] = barrel_distort(img, *labels, distortion_params(p));
      out.image = std::move(image);
      out.labels = std::move(warped);
      break;
    }
    default:
      throw InvalidSpecError("unknown corruption kind");
  }
  return out;
}

std::vector<CatalogEntry> list_catalog(const SeverityTable& table) {
  std::vector<CatalogEntry> out;
  for (Corruption c : all_corruptions()) {
    CatalogEntry e{{c, 1}, {}};
    for (int s = 1; s <= kSeverityLevels; ++s) e.severities[s - 1] = table.at(e.kind, s);
    out.push_back(std::move(e));
  }
  return out;
}

}  // namespace corrobench
