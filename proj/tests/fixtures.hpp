#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "corrobench/image.hpp"
#include "corrobench/random.hpp"
#include "corrobench/synthetic.hpp"

namespace fx {

using namespace corrobench;

inline RasterImage random_raster(int w, int h, std::uint64_t seed) {
  RandomStream rng(seed);
  RasterImage img(w, h);
  for (auto& b : img.data()) b = static_cast<std::uint8_t>(rng.next_u32() & 0xff);
  return img;
}

inline RasterImage flat_raster(int w, int h, std::uint8_t v) {
  RasterImage img(w, h);
  for (auto& b : img.data()) b = v;
  return img;
}

inline LabelMap random_labels(int w, int h, int classes, std::uint64_t seed,
                              double ignore_p = 0.0) {
  RandomStream rng(seed);
  LabelMap m(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      m.at(x, y) = rng.uniform() < ignore_p ? m.ignore_id()
                                            : static_cast<std::uint16_t>(rng.uniform_int(0, classes - 1));
    }
  }
  return m;
}

/// Five photo-like frames.
inline std::vector<SyntheticFrame> photos(int w = 96, int h = 64) {
  std::vector<SyntheticFrame> out;
  for (int i = 0; i < 5; ++i) out.push_back(synthetic_frame(w, h, 40 + i));
  return out;
}

/// Mean 3x3 local variance over interior pixels and channels, in byte units.
inline double local_variance(const RasterImage& a) {
  double s = 0;
  long n = 0;
  for (int y = 1; y + 1 < a.height(); ++y) {
    for (int x = 1; x + 1 < a.width(); ++x) {
      for (int c = 0; c < 3; ++c) {
        double m = 0, q = 0;
        for (int dy = -1; dy <= 1; ++dy) {
          for (int dx = -1; dx <= 1; ++dx) {
            const double v = a.at(x + dx, y + dy, c);
            m += v;
            q += v * v;
          }
        }
        m /= 9;
        s += q / 9 - m * m;
        ++n;
      }
    }
  }
  return s / n;
}

inline double mse(const RasterImage& a, const RasterImage& b) {
  double s = 0;
  for (std::size_t i = 0; i < a.data().size(); ++i) {
    const double d = double(a.data()[i]) - b.data()[i];
    s += d * d;
  }
  return s / a.data().size();
}

/// Fresh empty directory under the system temp dir.
inline std::filesystem::path temp_dir(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("corrobench_test_" + name);
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p;
}

}  // namespace fx
