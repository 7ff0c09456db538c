#include "corrobench/blur.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <numbers>

namespace corrobench {
namespace {

using PlaneF = Plane<float>;

void require_finite_positive(double v, const char* what) {
  if (!std::isfinite(v) || v <= 0.0) {
    throw ParameterError(std::string(what) + " must be finite and positive");
  }
}

PlaneF pad_clamped(const PlaneF& p, int r) {
  const int h = static_cast<int>(p.rows());
  const int w = static_cast<int>(p.cols());
  PlaneF out(h + 2 * r, w + 2 * r);
  out.block(r, r, h, w) = p;
  for (int x = 0; x < r; ++x) {
    out.block(r, x, h, 1) = p.col(0);
    out.block(r, w + r + x, h, 1) = p.col(w - 1);
  }
  for (int y = 0; y < r; ++y) {
    out.row(y) = out.row(r);
    out.row(h + r + y) = out.row(h + r - 1);
  }
  return out;
}

// Convolution of the region [y0, y0+h) x [x0, x0+w) of the unpadded plane,
// reading from `padded` (padded by kernel.radius()).
PlaneF convolve_region(const PlaneF& padded, const Kernel2D& k, int pad, int y0, int x0, int h,
                       int w) {
  const int r = k.radius();
  const int off = pad - r;  // padded may carry a wider border than this kernel needs
  PlaneF out = PlaneF::Zero(h, w);
  if (k.factor()) {
    const Eigen::VectorXf f = k.factor()->cast<float>();
    PlaneF tmp = PlaneF::Zero(h + 2 * r, w);
    for (int j = 0; j < k.size(); ++j) {
      tmp += f[j] * padded.block(y0 + off, x0 + off + 2 * r - j, h + 2 * r, w);
    }
    for (int i = 0; i < k.size(); ++i) {
      out += f[i] * tmp.block(2 * r - i, 0, h, w);
    }
    return out;
  }
  const Eigen::MatrixXf kw = k.weights().cast<float>();
  for (int i = 0; i < k.size(); ++i) {
    for (int j = 0; j < k.size(); ++j) {
      const float wt = kw(i, j);
      if (wt == 0.0f) continue;
      out += wt * padded.block(y0 + off + 2 * r - i, x0 + off + 2 * r - j, h, w);
    }
  }
  return out;
}

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

std::uint32_t get_u32(const std::vector<std::uint8_t>& in, std::size_t at) {
  if (at + 4 > in.size()) throw IoError("psf grid: truncated file");
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(in[at + i]) << (8 * i);
  return v;
}

}  // namespace

Kernel2D::Kernel2D(Weights weights) : weights_(std::move(weights)) {
  if (weights_.rows() != weights_.cols() || weights_.rows() % 2 == 0) {
    throw ParameterError("kernel must be square with odd size");
  }
  if (!weights_.allFinite() || (weights_.array() < 0.0).any()) {
    throw ParameterError("kernel weights must be finite and non-negative");
  }
  if (std::abs(weights_.sum() - 1.0) > kSumTolerance) {
    throw ParameterError("kernel weights must sum to 1");
  }
}

Kernel2D Kernel2D::normalized(Weights weights) {
  const double s = weights.sum();
  if (!(s > 0.0) || !std::isfinite(s)) throw ParameterError("kernel has no mass");
  weights /= s;
  return Kernel2D(std::move(weights));
}

Kernel2D Kernel2D::separable(Eigen::VectorXd profile) {
  const double s = profile.sum();
  if (!(s > 0.0)) throw ParameterError("kernel profile has no mass");
  profile /= s;
  Kernel2D k(profile * profile.transpose());
  k.factor_ = std::move(profile);
  return k;
}

Kernel2D Kernel2D::identity(int size) {
  if (size < 1 || size % 2 == 0) throw ParameterError("kernel size must be odd");
  Weights w = Weights::Zero(size, size);
  w(size / 2, size / 2) = 1.0;
  Kernel2D k(std::move(w));
  Eigen::VectorXd f = Eigen::VectorXd::Zero(size);
  f[size / 2] = 1.0;
  k.factor_ = std::move(f);
  return k;
}

Kernel2D make_gaussian_kernel(double sigma, int size) {
  require_finite_positive(sigma, "gaussian sigma");
  if (size < 1 || size % 2 == 0) throw ParameterError("kernel size must be odd");
  const int r = size / 2;
  Eigen::VectorXd g(size);
  for (int i = 0; i < size; ++i) {
    const double d = i - r;
    g[i] = std::exp(-d * d / (2.0 * sigma * sigma));
  }
  return Kernel2D::separable(std::move(g));
}

Kernel2D make_gaussian_kernel(double sigma) {
  require_finite_positive(sigma, "gaussian sigma");
  const int r = std::max(1, static_cast<int>(std::ceil(4.0 * sigma)));
  return make_gaussian_kernel(sigma, 2 * r + 1);
}

Kernel2D make_disk_kernel(double radius) {
  if (!std::isfinite(radius) || radius < 0.5) {
    throw ParameterError("disk radius must be finite and >= 0.5");
  }
  const int r = static_cast<int>(std::ceil(radius - 0.5));
  const int size = 2 * r + 1;
  constexpr int kSub = 32;
  const double r2 = radius * radius;
  Kernel2D::Weights w = Kernel2D::Weights::Zero(size, size);
  for (int i = 0; i < size; ++i) {
    for (int j = 0; j < size; ++j) {
      int inside = 0;
      for (int a = 0; a < kSub; ++a) {
        const double y = (i - r) - 0.5 + (a + 0.5) / kSub;
        for (int b = 0; b < kSub; ++b) {
          const double x = (j - r) - 0.5 + (b + 0.5) / kSub;
          if (x * x + y * y <= r2) ++inside;
        }
      }
      w(i, j) = static_cast<double>(inside) / (kSub * kSub);
    }
  }
  return Kernel2D::normalized(std::move(w));
}

Kernel2D make_motion_kernel(double length, double angle_radians) {
  if (!std::isfinite(length) || length < 1.0) {
    throw ParameterError("motion length must be finite and >= 1");
  }
  if (!std::isfinite(angle_radians)) throw ParameterError("motion angle must be finite");
  constexpr double pi = std::numbers::pi;
  double theta = angle_radians - pi * std::floor(angle_radians / pi);
  if (theta >= pi) theta -= pi;
  const double dx = std::cos(theta);
  const double dy = std::sin(theta);
  const int r = static_cast<int>(std::ceil(length / 2.0));
  const int size = 2 * r + 1;
  Kernel2D::Weights w = Kernel2D::Weights::Zero(size, size);
  const int samples = static_cast<int>(std::ceil(length * 8.0)) + 1;
  for (int s = 0; s < samples; ++s) {
    const double t = length * (static_cast<double>(s) / (samples - 1) - 0.5);
    const double px = r + t * dx;
    const double py = r + t * dy;
    const int x0 = static_cast<int>(std::floor(px));
    const int y0 = static_cast<int>(std::floor(py));
    const double ax = px - x0;
    const double ay = py - y0;
    auto splat = [&](int x, int y, double wt) {
      if (x >= 0 && y >= 0 && x < size && y < size) w(y, x) += wt;
    };
    splat(x0, y0, (1 - ax) * (1 - ay));
    splat(x0 + 1, y0, ax * (1 - ay));
    splat(x0, y0 + 1, (1 - ax) * ay);
    splat(x0 + 1, y0 + 1, ax * ay);
  }
  const Kernel2D::Weights flipped = w.reverse();
  return Kernel2D::normalized(0.5 * (w + flipped));
}

Plane<float> convolve_plane(const Plane<float>& plane, const Kernel2D& kernel) {
  const int r = kernel.radius();
  const PlaneF padded = pad_clamped(plane, r);
  return convolve_region(padded, kernel, r, 0, 0, static_cast<int>(plane.rows()),
                         static_cast<int>(plane.cols()));
}

LinearImage convolve(const LinearImage& img, const Kernel2D& kernel) {
  LinearImage out = img;
  for (int c = 0; c < 3; ++c) out.channel(c) = convolve_plane(img.channel(c), kernel);
  return out;
}

PsfGrid::PsfGrid(int rows, int cols, std::vector<Kernel2D> kernels)
    : rows_(rows), cols_(cols), kernels_(std::move(kernels)) {
  if (rows < 2 || cols < 2) throw ParameterError("psf grid needs at least 2x2 nodes");
  if (kernels_.size() != static_cast<std::size_t>(rows) * cols) {
    throw ParameterError("psf grid kernel count must equal rows*cols");
  }
  for (const auto& k : kernels_) {
    if (k.size() != kernels_.front().size()) {
      throw ParameterError("psf grid kernels must share one size");
    }
  }
}

std::vector<std::uint8_t> serialize_psf_grid(const PsfGrid& grid) {
  std::vector<std::uint8_t> out = {'P', 'S', 'F', 'G'};
  put_u32(out, static_cast<std::uint32_t>(grid.rows()));
  put_u32(out, static_cast<std::uint32_t>(grid.cols()));
  put_u32(out, static_cast<std::uint32_t>(grid.kernel_size()));
  for (const auto& k : grid.kernels()) {
    for (int i = 0; i < k.size(); ++i) {
      for (int j = 0; j < k.size(); ++j) {
        put_u32(out, std::bit_cast<std::uint32_t>(static_cast<float>(k.weights()(i, j))));
      }
    }
  }
  return out;
}

PsfGrid parse_psf_grid(const std::vector<std::uint8_t>& bytes) {
  if (bytes.size() < 16 || std::memcmp(bytes.data(), "PSFG", 4) != 0) {
    throw IoError("psf grid: bad magic");
  }
  const auto rows = get_u32(bytes, 4);
  const auto cols = get_u32(bytes, 8);
  const auto ks = get_u32(bytes, 12);
  if (rows < 2 || cols < 2 || ks % 2 == 0 || rows > 4096 || cols > 4096 || ks > 4095) {
    throw IoError("psf grid: invalid header");
  }
  const std::size_t expected = 16 + static_cast<std::size_t>(rows) * cols * ks * ks * 4;
  if (bytes.size() != expected) throw IoError("psf grid: size does not match header");
  std::vector<Kernel2D> kernels;
  kernels.reserve(static_cast<std::size_t>(rows) * cols);
  std::size_t at = 16;
  for (std::uint32_t n = 0; n < rows * cols; ++n) {
    Kernel2D::Weights w(ks, ks);
    for (std::uint32_t i = 0; i < ks; ++i) {
      for (std::uint32_t j = 0; j < ks; ++j, at += 4) {
        w(i, j) = std::bit_cast<float>(get_u32(bytes, at));
      }
    }
    // Float32 storage loses a few ulps of normalization; anything coarser is a bad file.
    if (std::abs(w.sum() - 1.0) > 1e-4) throw IoError("psf grid: kernel not normalized");
    kernels.push_back(Kernel2D::normalized(std::move(w)));
  }
  return PsfGrid(static_cast<int>(rows), static_cast<int>(cols), std::move(kernels));
}

PsfGrid read_psf_grid(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open psf grid '" + path.string() + "'");
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  return parse_psf_grid(bytes);
}

void write_psf_grid(const std::filesystem::path& path, const PsfGrid& grid) {
  const auto bytes = serialize_psf_grid(grid);
  std::ofstream out(path, std::ios::binary);
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("cannot write psf grid '" + path.string() + "'");
}

LinearImage psf_blur(const LinearImage& img, const PsfGrid& grid) {
  const int w = img.width();
  const int h = img.height();
  if (grid.kernel_size() > std::min(w, h)) {
    throw ParameterError("psf kernel size exceeds the image's smaller dimension");
  }
  int pad = 0;
  for (const auto& k : grid.kernels()) pad = std::max(pad, k.radius());

  // Cell boundaries in pixel units; pixel x lies in cell j when
  // node_x[j] <= x < node_x[j+1] (the last cell is closed on the right).
  auto node_pos = [](int i, int n, int extent) {
    return static_cast<double>(i) * (extent - 1) / (n - 1);
  };
  auto cell_start = [&](int i, int n, int extent) {
    return i == 0 ? 0 : static_cast<int>(std::ceil(node_pos(i, n, extent)));
  };

  LinearImage out = img;
  for (int c = 0; c < 3; ++c) {
    const PlaneF padded = pad_clamped(img.channel(c), pad);
    PlaneF& dst = out.channel(c);
    for (int gi = 0; gi + 1 < grid.rows(); ++gi) {
      const int y0 = cell_start(gi, grid.rows(), h);
      const int y1 = gi + 2 == grid.rows() ? h : cell_start(gi + 1, grid.rows(), h);
      if (y1 <= y0) continue;
      const double ya = node_pos(gi, grid.rows(), h);
      const double yb = node_pos(gi + 1, grid.rows(), h);
      Eigen::ArrayXf wy(y1 - y0);
      for (int y = y0; y < y1; ++y) wy[y - y0] = static_cast<float>((y - ya) / (yb - ya));
      for (int gj = 0; gj + 1 < grid.cols(); ++gj) {
        const int x0 = cell_start(gj, grid.cols(), w);
        const int x1 = gj + 2 == grid.cols() ? w : cell_start(gj + 1, grid.cols(), w);
        if (x1 <= x0) continue;
        const double xa = node_pos(gj, grid.cols(), w);
        const double xb = node_pos(gj + 1, grid.cols(), w);
        Eigen::ArrayXf wx(x1 - x0);
        for (int x = x0; x < x1; ++x) wx[x - x0] = static_cast<float>((x - xa) / (xb - xa));
        const int ch = y1 - y0;
        const int cw = x1 - x0;
        auto outer = [](const Eigen::ArrayXf& col, const Eigen::ArrayXf& row) -> PlaneF {
          return (col.matrix() * row.matrix().transpose()).array();
        };
        const Eigen::ArrayXf wy0 = 1.0f - wy;
        const Eigen::ArrayXf wx0 = 1.0f - wx;
        PlaneF acc = outer(wy0, wx0) * convolve_region(padded, grid.at(gi, gj), pad, y0, x0, ch, cw);
        acc += outer(wy0, wx) * convolve_region(padded, grid.at(gi, gj + 1), pad, y0, x0, ch, cw);
        acc += outer(wy, wx0) * convolve_region(padded, grid.at(gi + 1, gj), pad, y0, x0, ch, cw);
        acc += outer(wy, wx) * convolve_region(padded, grid.at(gi + 1, gj + 1), pad, y0, x0, ch, cw);
        dst.block(y0, x0, ch, cw) = acc;
      }
    }
  }
  return out;
}

PsfGrid generate_radial_psf_grid(int rows, int cols, int kernel_size, double sigma_center,
                                 double sigma_edge) {
  if (!std::isfinite(sigma_center) || !std::isfinite(sigma_edge) || sigma_center <= 0.0 ||
      sigma_edge < sigma_center) {
    throw ParameterError("psf grid requires sigma_edge >= sigma_center > 0");
  }
  if (rows < 2 || cols < 2) throw ParameterError("psf grid needs at least 2x2 nodes");
  const double r_max = std::sqrt(2.0);
  std::vector<Kernel2D> kernels;
  kernels.reserve(static_cast<std::size_t>(rows) * cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) {
      const double u = 2.0 * j / (cols - 1) - 1.0;
      const double v = 2.0 * i / (rows - 1) - 1.0;
      const double r = std::min(1.0, std::sqrt(u * u + v * v) / r_max);
      const double sigma = sigma_center + (sigma_edge - sigma_center) * r;
      kernels.push_back(make_gaussian_kernel(sigma, kernel_size));
    }
  }
  return PsfGrid(rows, cols, std::move(kernels));
}

std::vector<std::int32_t> shuffle_permutation(int width, int height, int max_shift,
                                              int iterations, RandomStream& rng) {
  if (max_shift < 1) throw ParameterError("frosted glass max_shift must be >= 1");
  if (iterations < 0) throw ParameterError("frosted glass iterations must be >= 0");
  std::vector<std::int32_t> perm(static_cast<std::size_t>(width) * height);
  for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = static_cast<std::int32_t>(i);
  const std::uint32_t span = static_cast<std::uint32_t>(2 * max_shift + 1);
  for (int it = 0; it < iterations; ++it) {
    for (int y = 0; y < height; ++y) {
      for (int x = 0; x < width; ++x) {
        // One 32-bit draw per offset; the modulo bias is < span / 2^32.
        const int dx = static_cast<int>(rng.next_u32() % span) - max_shift;
        const int dy = static_cast<int>(rng.next_u32() % span) - max_shift;
        const int tx = x + dx;
        const int ty = y + dy;
        if (tx < 0 || ty < 0 || tx >= width || ty >= height) continue;
        std::swap(perm[static_cast<std::size_t>(y) * width + x],
                  perm[static_cast<std::size_t>(ty) * width + tx]);
      }
    }
  }
  return perm;
}

LinearImage shuffle_pixels(const LinearImage& img, const std::vector<std::int32_t>& perm) {
  LinearImage out = img;
  for (int c = 0; c < 3; ++c) {
    const float* src = img.channel(c).data();
    float* dst = out.channel(c).data();
    for (std::size_t i = 0; i < perm.size(); ++i) dst[i] = src[perm[i]];
  }
  return out;
}

LinearImage frosted_glass(const LinearImage& img, int max_shift, int iterations,
                          double post_sigma, RandomStream& rng) {
  const auto perm = shuffle_permutation(img.width(), img.height(), max_shift, iterations, rng);
  LinearImage shuffled = shuffle_pixels(img, perm);
  if (post_sigma <= 0.0) return shuffled;
  return convolve(shuffled, make_gaussian_kernel(post_sigma));
}

}  // namespace corrobench
