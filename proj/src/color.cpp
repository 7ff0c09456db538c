#include "corrobench/color.hpp"

#include <array>
#include <limits>

namespace corrobench {
namespace {

struct SrgbTables {
  std::array<double, 256> to_linear{};
  // thresholds[k] is the linear value at which the encoded byte steps from k to k+1.
  std::array<double, 256> thresholds{};
  static constexpr int kBins = 4096;
  // Number of thresholds <= bin start. Thresholds are spaced wider than a bin,
  // so at most one threshold falls inside any bin.
  std::array<std::uint8_t, kBins + 1> coarse{};

  SrgbTables() {
    for (int b = 0; b < 256; ++b) to_linear[b] = srgb_eotf(b / 255.0);
    for (int k = 0; k < 255; ++k) thresholds[k] = srgb_eotf((k + 0.5) / 255.0);
    thresholds[255] = std::numeric_limits<double>::infinity();
    int k = 0;
    for (int bin = 0; bin <= kBins; ++bin) {
      const double start = static_cast<double>(bin) / kBins;
      while (k < 255 && thresholds[k] <= start) ++k;
      coarse[bin] = static_cast<std::uint8_t>(k);
    }
  }
};

const SrgbTables& tables() {
  static const SrgbTables t;
  return t;
}

}  // namespace

double srgb_byte_to_linear(std::uint8_t b) { return tables().to_linear[b]; }

std::uint8_t linear_to_srgb_byte(double l) {
  const auto& t = tables();
  if (!(l > 0.0)) return 0;
  if (l >= 1.0) return 255;
  const int bin = static_cast<int>(l * SrgbTables::kBins);
  int k = t.coarse[bin];
  if (l >= t.thresholds[k]) ++k;
  return static_cast<std::uint8_t>(k);
}

}  // namespace corrobench
