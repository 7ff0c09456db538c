#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

#include <Eigen/Core>

#include "corrobench/image.hpp"
#include "corrobench/random.hpp"

namespace corrobench {

/// Square, odd-sized, non-negative kernel with unit sum. Kernels built as an
/// outer product keep their 1-D factor so convolution can run in two passes.
class Kernel2D {
 public:
  using Weights = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

  static constexpr double kSumTolerance = 1e-6;

  /// Validates size, sign and normalization; throws ParameterError otherwise.
  explicit Kernel2D(Weights weights);

  /// Scales to unit sum, then validates.
  static Kernel2D normalized(Weights weights);
  /// Outer product of a 1-D profile with itself (profile normalized first).
  static Kernel2D separable(Eigen::VectorXd profile);
  static Kernel2D identity(int size = 1);

  int size() const { return static_cast<int>(weights_.rows()); }
  int radius() const { return size() / 2; }
  const Weights& weights() const { return weights_; }
  const std::optional<Eigen::VectorXd>& factor() const { return factor_; }

 private:
  Weights weights_;
  std::optional<Eigen::VectorXd> factor_;
};

/// Sampled Gaussian over a window of radius ceil(4 sigma).
Kernel2D make_gaussian_kernel(double sigma);
/// Sampled Gaussian truncated to a fixed odd window.
Kernel2D make_gaussian_kernel(double sigma, int size);
/// Uniform disk, edge pixels weighted by their area coverage.
Kernel2D make_disk_kernel(double radius);
/// Line segment of the given length through the center, point-symmetric, so
/// `angle` and `angle + pi` give the same kernel.
Kernel2D make_motion_kernel(double length, double angle_radians);

/// Per-channel convolution, clamp-to-edge borders.
LinearImage convolve(const LinearImage& img, const Kernel2D& kernel);
Plane<float> convolve_plane(const Plane<float>& plane, const Kernel2D& kernel);

/// Kernels anchored at evenly spaced image positions: node (i, j) sits at
/// x = j (W-1)/(cols-1), y = i (H-1)/(rows-1).
class PsfGrid {
 public:
  PsfGrid(int rows, int cols, std::vector<Kernel2D> kernels);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  int kernel_size() const { return kernels_.front().size(); }
  const Kernel2D& at(int row, int col) const { return kernels_[row * cols_ + col]; }
  const std::vector<Kernel2D>& kernels() const { return kernels_; }

 private:
  int rows_;
  int cols_;
  std::vector<Kernel2D> kernels_;
};

/// Binary layout: "PSFG", u32 rows, cols, kernel_size (little-endian), then
/// rows*cols*kernel_size^2 little-endian float32 weights, kernels row-major.
PsfGrid read_psf_grid(const std::filesystem::path& path);
void write_psf_grid(const std::filesystem::path& path, const PsfGrid& grid);
std::vector<std::uint8_t> serialize_psf_grid(const PsfGrid& grid);
PsfGrid parse_psf_grid(const std::vector<std::uint8_t>& bytes);

/// Spatially varying blur: a pixel's kernel is the bilinear blend of the four
/// surrounding node kernels.
LinearImage psf_blur(const LinearImage& img, const PsfGrid& grid);

/// Gaussian nodes whose sigma grows linearly with normalized distance from the
/// frame center, reaching `sigma_edge` at the corners. Distances are measured
/// in [-1,1]^2 grid coordinates.
PsfGrid generate_radial_psf_grid(int rows, int cols, int kernel_size, double sigma_center,
                                 double sigma_edge);

/// Destination -> source index map produced by `iterations` raster-order passes
/// of random swaps with a neighbor at most `max_shift` away in each axis.
std::vector<std::int32_t> shuffle_permutation(int width, int height, int max_shift,
                                              int iterations, RandomStream& rng);

LinearImage frosted_glass(const LinearImage& img, int max_shift, int iterations,
                          double post_sigma, RandomStream& rng);

/// Local-shuffle stage of frosted glass alone (no post blur).
LinearImage shuffle_pixels(const LinearImage& img, const std::vector<std::int32_t>& perm);

}  // namespace corrobench
