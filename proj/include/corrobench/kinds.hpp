#pragma once

#include <array>
#include <string>
#include <string_view>
#include <vector>

namespace corrobench {

enum class Family { blur, noise, digital, weather, geometric };

/// The nineteen corruptions, in benchmark column order.
enum class Corruption {
  motion,
  defocus,
  frosted_glass,
  gaussian_blur,
  psf,
  gaussian_noise,
  impulse,
  shot,
  speckle,
  intensity,
  brightness,
  contrast,
  saturate,
  jpeg,
  snow,
  spatter,
  fog,
  frost,
  geometric_distortion,
};

inline constexpr int kCorruptionCount = 19;
inline constexpr int kSeverityLevels = 5;
inline constexpr int kPsfVariants = 3;

struct CorruptionKind {
  Corruption id = Corruption::motion;
  int variant = 1;  // psf only: which of the three lens presets

  Family family() const;
  /// Table name, e.g. "frosted-glass"; psf variants 2 and 3 are "psf-2", "psf-3".
  std::string name() const;
  /// Severity-table key (variant-free).
  std::string_view base_name() const;

  bool operator==(const CorruptionKind&) const = default;
};

std::string_view family_name(Family f);
const std::array<Corruption, kCorruptionCount>& all_corruptions();

/// Parses a corruption name (including "psf-2"/"psf-3"). Throws InvalidSpecError.
CorruptionKind parse_kind(std::string_view name);
/// Comma-separated kind names, family names, or "all", expanded in catalog order.
std::vector<CorruptionKind> parse_kind_filter(std::string_view filter);
/// Every valid kind name, comma separated, for error messages.
std::string valid_kind_names();

bool is_noise(const CorruptionKind& k);
bool is_psf(const CorruptionKind& k);

}  // namespace corrobench
