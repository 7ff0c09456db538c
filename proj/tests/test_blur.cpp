#include <doctest.h>

#include <cmath>
#include <numbers>

#include "corrobench/blur.hpp"
#include "corrobench/color.hpp"
#include "fixtures.hpp"

using namespace corrobench;

namespace {

// Direct 2-D convolution with flipped kernel and clamped borders, in double.
Plane<float> oracle_convolve(const Plane<float>& p, const Kernel2D::Weights& k) {
  const int h = p.rows(), w = p.cols(), r = k.rows() / 2;
  Plane<float> out(h, w);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double s = 0;
      for (int i = -r; i <= r; ++i) {
        for (int j = -r; j <= r; ++j) {
          const int yy = std::clamp(y - i, 0, h - 1), xx = std::clamp(x - j, 0, w - 1);
          s += k(i + r, j + r) * p(yy, xx);
        }
      }
      out(y, x) = static_cast<float>(s);
    }
  }
  return out;
}

double second_moment_x(const Kernel2D& k) {
  double m = 0;
  for (int i = 0; i < k.size(); ++i)
    for (int j = 0; j < k.size(); ++j) m += k.weights()(i, j) * (j - k.radius()) * (j - k.radius());
  return m;
}

}  // namespace

TEST_CASE("kernel validation") {
  CHECK_THROWS_AS(Kernel2D(Kernel2D::Weights::Ones(2, 2) / 4), ParameterError);
  CHECK_THROWS_AS(Kernel2D(Kernel2D::Weights::Ones(3, 3)), ParameterError);
  Kernel2D::Weights neg = Kernel2D::Weights::Zero(3, 3);
  neg(1, 1) = 1.5;
  neg(0, 0) = -0.5;
  CHECK_THROWS_AS(Kernel2D{neg}, ParameterError);
  CHECK_NOTHROW(Kernel2D::normalized(Kernel2D::Weights::Ones(5, 5)));
}

TEST_CASE("generated kernels are normalized") {
  std::vector<Kernel2D> ks;
  for (double s : {0.3, 1.0, 2.5, 6.0}) ks.push_back(make_gaussian_kernel(s));
  for (double r : {0.5, 1.0, 2.0, 4.5, 8.0}) ks.push_back(make_disk_kernel(r));
  for (double l : {1.0, 3.0, 7.0, 29.0})
    for (double a : {0.0, 0.3, 1.2, 2.9}) ks.push_back(make_motion_kernel(l, a));
  for (const auto& k : ks) {
    CHECK(std::abs(k.weights().sum() - 1.0) < 1e-6);
    CHECK(k.weights().minCoeff() >= 0.0);
    CHECK(k.size() % 2 == 1);
  }
}

TEST_CASE("gaussian second moment matches sigma") {
  for (double s : {1.0, 2.0, 3.0, 4.0, 6.0}) {
    CHECK(second_moment_x(make_gaussian_kernel(s)) == doctest::Approx(s * s).epsilon(0.02));
  }
}

TEST_CASE("disk kernel approximates the disk") {
  const Kernel2D k = make_disk_kernel(6.0);
  // second moment of a uniform disk along one axis is r^2/4
  CHECK(second_moment_x(k) == doctest::Approx(9.0).epsilon(0.03));
  CHECK(k.weights()(k.radius(), k.radius()) == doctest::Approx(1.0 / (std::numbers::pi * 36)).epsilon(0.02));
}

TEST_CASE("motion kernel is a segment") {
  const Kernel2D h = make_motion_kernel(9.0, 0.0);
  CHECK(h.size() >= 9);
  // horizontal: weight only on the middle row, spread over 9 pixels
  CHECK(h.weights().row(h.radius()).sum() == doctest::Approx(1.0));
  CHECK(second_moment_x(h) == doctest::Approx(9.0 * 9.0 / 12).epsilon(0.1));
  const Kernel2D a = make_motion_kernel(9.0, 0.7), b = make_motion_kernel(9.0, 0.7 + std::numbers::pi);
  CHECK((a.weights() - b.weights()).cwiseAbs().maxCoeff() < 1e-12);
  // point symmetric
  CHECK((a.weights() - a.weights().reverse()).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("convolution matches a direct oracle") {
  const LinearImage img = srgb_to_linear(fx::random_raster(23, 17, 4));
  for (const Kernel2D& k : {make_gaussian_kernel(1.5), make_disk_kernel(2.5), make_motion_kernel(7, 0.4)}) {
    const LinearImage out = convolve(img, k);
    for (int c = 0; c < 3; ++c) {
      const Plane<float> ref = oracle_convolve(img.channel(c), k.weights());
      CHECK((out.channel(c) - ref).abs().maxCoeff() < 2e-6f);
    }
  }
  // asymmetric kernel checks the flip
  Kernel2D::Weights w = Kernel2D::Weights::Zero(3, 3);
  w(0, 0) = 1.0;
  const Kernel2D shift(w);
  const LinearImage out = convolve(img, shift);
  CHECK(out.channel(0)(5, 5) == img.channel(0)(6, 6));
}

TEST_CASE("constant images are invariant under every blur") {
  const LinearImage flat(31, 20, 0.37f);
  for (const Kernel2D& k : {make_gaussian_kernel(3), make_disk_kernel(4), make_motion_kernel(15, 1.0)}) {
    CHECK((convolve(flat, k).channel(1) - 0.37f).abs().maxCoeff() < 1e-6f);
  }
  const PsfGrid g = generate_radial_psf_grid(3, 5, 9, 0.4, 2.0);
  CHECK((psf_blur(flat, g).channel(2) - 0.37f).abs().maxCoeff() < 1e-6f);
}

TEST_CASE("psf grid of identical kernels equals plain convolution") {
  const Kernel2D k = make_gaussian_kernel(1.2, 9);
  const PsfGrid g(2, 3, std::vector<Kernel2D>(6, k));
  const LinearImage img = srgb_to_linear(fx::random_raster(40, 30, 6));
  const LinearImage a = psf_blur(img, g), b = convolve(img, k);
  for (int c = 0; c < 3; ++c) CHECK((a.channel(c) - b.channel(c)).abs().maxCoeff() < 1e-5f);
}

TEST_CASE("psf blend at a node uses that node's kernel") {
  std::vector<Kernel2D> ks;
  for (int i = 0; i < 4; ++i) ks.push_back(make_gaussian_kernel(0.5 + i, 9));
  const PsfGrid g(2, 2, ks);
  const LinearImage img = srgb_to_linear(fx::random_raster(20, 12, 8));
  const LinearImage out = psf_blur(img, g);
  const LinearImage corner = convolve(img, ks[3]);
  CHECK(std::abs(out.channel(0)(11, 19) - corner.channel(0)(11, 19)) < 1e-6f);
  CHECK(std::abs(out.channel(0)(0, 0) - convolve(img, ks[0]).channel(0)(0, 0)) < 1e-6f);
}

TEST_CASE("radial psf grid blurs corners more than the center") {
  const PsfGrid g = generate_radial_psf_grid(5, 9, 17, 0.4, 2.4);
  CHECK(second_moment_x(g.at(0, 0)) > 4 * second_moment_x(g.at(2, 4)));
  CHECK(second_moment_x(g.at(4, 8)) == doctest::Approx(second_moment_x(g.at(0, 0))));
  CHECK_THROWS_AS(psf_blur(LinearImage(10, 10), g), ParameterError);
}

TEST_CASE("psf grid serialization round trip") {
  const PsfGrid g = generate_radial_psf_grid(3, 4, 7, 0.5, 1.5);
  const auto bytes = serialize_psf_grid(g);
  CHECK(bytes.size() == 16 + 3 * 4 * 49 * 4);
  const PsfGrid back = parse_psf_grid(bytes);
  REQUIRE(back.rows() == 3);
  REQUIRE(back.cols() == 4);
  for (std::size_t i = 0; i < g.kernels().size(); ++i) {
    CHECK((back.kernels()[i].weights() - g.kernels()[i].weights()).cwiseAbs().maxCoeff() < 1e-7);
  }
  auto bad = bytes;
  bad[0] = 'X';
  CHECK_THROWS_AS(parse_psf_grid(bad), IoError);
  bad = bytes;
  bad.resize(bad.size() - 4);
  CHECK_THROWS_AS(parse_psf_grid(bad), IoError);
  const auto dir = fx::temp_dir("psfg");
  write_psf_grid(dir / "g.psfg", g);
  CHECK(read_psf_grid(dir / "g.psfg").kernel_size() == 7);
}

TEST_CASE("shuffle permutation is a bounded permutation") {
  RandomStream rng(5);
  const int w = 21, h = 13, m = 2;
  const auto perm = shuffle_permutation(w, h, m, 3, rng);
  std::vector<int> seen(w * h);
  for (int i = 0; i < w * h; ++i) {
    REQUIRE((perm[i] >= 0 && perm[i] < w * h));
    ++seen[perm[i]];
  }
  for (int s : seen) CHECK(s == 1);
  RandomStream again(5);
  CHECK(shuffle_permutation(w, h, m, 3, again) == perm);
}
