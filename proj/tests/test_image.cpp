#include <doctest.h>

#include <cmath>
#include <vector>

#include "dipstop/image.hpp"
#include "dipstop/rng.hpp"

using namespace dipstop;

namespace {

// Dense 2-D convolution with the same clamped-edge Gaussian kernel; the
// oracle the separable implementation must match.
Image blur_reference(const Image& src, float sigma) {
  const int radius = std::max(1, static_cast<int>(std::ceil(3.0f * sigma)));
  std::vector<double> k(2 * radius + 1);
  double sum = 0.0;
  for (int i = -radius; i <= radius; ++i) {
    k[i + radius] = std::exp(-0.5 * (i * i) / (static_cast<double>(sigma) * sigma));
    sum += k[i + radius];
  }
  for (double& v : k) v /= sum;
  auto edge = [](int i, int n) { return std::clamp(i, 0, n - 1); };
  Image dst(src.height, src.width, src.channels);
  for (int c = 0; c < src.channels; ++c)
    for (int y = 0; y < src.height; ++y)
      for (int x = 0; x < src.width; ++x) {
        double acc = 0.0;
        for (int dy = -radius; dy <= radius; ++dy)
          for (int dx = -radius; dx <= radius; ++dx)
            acc += k[dy + radius] * k[dx + radius] *
                   src.at(c, edge(y + dy, src.height), edge(x + dx, src.width));
        dst.at(c, y, x) = static_cast<float>(acc);
      }
  return dst;
}

}  // namespace

TEST_SUITE("image") {

TEST_CASE("gaussian blur matches a dense convolution oracle") {
  Rng rng(31);
  Image img(7, 9, 3);
  for (float& v : img.data) v = static_cast<float>(rng.uniform());
  for (float sigma : {0.6f, 1.5f}) {
    const Image fast = gaussian_blur(img, sigma);
    const Image slow = blur_reference(img, sigma);
    for (std::size_t i = 0; i < img.data.size(); ++i)
      CHECK(fast.data[i] == doctest::Approx(slow.data[i]).epsilon(1e-5));
  }
}

TEST_CASE("gaussian blur preserves constants and flat means") {
  Image flat(6, 6, 1, 0.37f);
  const Image out = gaussian_blur(flat, 2.0f);
  for (float v : out.data) CHECK(v == doctest::Approx(0.37f));
}

TEST_CASE("non-positive sigma is the identity") {
  Rng rng(32);
  Image img(4, 4, 1);
  for (float& v : img.data) v = static_cast<float>(rng.uniform());
  const Image same = gaussian_blur(img, 0.0f);
  for (std::size_t i = 0; i < img.data.size(); ++i)
    CHECK(same.data[i] == img.data[i]);
}

TEST_CASE("blur attenuates high frequencies more than low") {
  // A single-pixel impulse spreads out; its peak must drop as sigma grows.
  Image impulse(11, 11, 1, 0.0f);
  impulse.at(0, 5, 5) = 1.0f;
  const Image narrow = gaussian_blur(impulse, 0.8f);
  const Image wide = gaussian_blur(impulse, 1.5f);
  CHECK(narrow.at(0, 5, 5) > wide.at(0, 5, 5));
  CHECK(wide.at(0, 5, 5) > 0.0f);
  // At sigma 1.5 the radius-5 kernel sits fully inside the frame, so the
  // normalized taps conserve the impulse mass exactly.
  double total = 0.0;
  for (float v : wide.data) total += v;
  CHECK(total == doctest::Approx(1.0).epsilon(1e-4));
}

}  // TEST_SUITE
