#include "corrobench/synthetic.hpp"

#include <algorithm>
#include <cmath>

#include "corrobench/random.hpp"
#include "corrobench/weather.hpp"

namespace corrobench {

SyntheticFrame synthetic_frame(int width, int height, std::uint64_t seed) {
  RandomStream rng(seed, 0x5c3ee);
  const Plane<float> texture = plasma_fractal(width, height, 0.6, rng);

  struct Shape {
    bool disc;
    double x0, y0, x1, y1;  // box, or centre + radius in x0,y0,x1
    std::uint16_t id;
    double r, g, b;
  };
  std::vector<Shape> shapes;
  const int blocks = 3 + static_cast<int>(rng.uniform_int(0, 3));
  for (int i = 0; i < blocks; ++i) {
    const double x0 = rng.uniform() * width * 0.8;
    const double w = (0.1 + 0.25 * rng.uniform()) * width;
    const double top = (0.1 + 0.3 * rng.uniform()) * height;
    shapes.push_back({false, x0, top, x0 + w, 0.6 * height, 2, 0.3 + 0.5 * rng.uniform(),
                      0.25 + 0.4 * rng.uniform(), 0.2 + 0.3 * rng.uniform()});
  }
  const int discs = 2 + static_cast<int>(rng.uniform_int(0, 3));
  for (int i = 0; i < discs; ++i) {
    const double r = (0.04 + 0.08 * rng.uniform()) * std::min(width, height);
    shapes.push_back({true, rng.uniform() * width, (0.5 + 0.4 * rng.uniform()) * height, r, 0,
                      static_cast<std::uint16_t>(11 + rng.uniform_int(0, 2)), rng.uniform(),
                      rng.uniform(), rng.uniform()});
  }

  SyntheticFrame f{RasterImage(width, height), LabelMap(width, height, 0)};
  const int ignore_rows = std::max(1, height / 50);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      const double t = texture(y, x);
      const bool sky = y < 0.6 * height;
      double r = sky ? 0.45 + 0.3 * y / height : 0.35;
      double g = sky ? 0.6 + 0.2 * y / height : 0.33;
      double b = sky ? 0.9 : 0.32;
      std::uint16_t id = sky ? 10 : 0;
      for (const Shape& s : shapes) {
        const bool inside = s.disc ? std::hypot(x - s.x0, y - s.y0) <= s.x1
                                   : (x >= s.x0 && x < s.x1 && y >= s.y0 && y < s.y1);
        if (inside) {
          r = s.r;
          g = s.g;
          b = s.b;
          id = s.id;
        }
      }
      const double m = 0.7 + 0.6 * t;
      const double px[3] = {r * m, g * m, b * m};
      for (int c = 0; c < 3; ++c) {
        f.image.at(x, y, c) = static_cast<std::uint8_t>(std::lround(std::clamp(px[c], 0.0, 1.0) * 255.0));
      }
      f.labels.ids()(y, x) = y >= height - ignore_rows ? kDefaultIgnoreId : id;
    }
  }
  return f;
}

}  // namespace corrobench
