#include "dipstop/synth.hpp"

#include <algorithm>
#include <cmath>

namespace dipstop::synth {

namespace {

constexpr float kPi = 3.14159265358979323846f;

// Smoothstep-style soft edge: 1 inside, 0 outside, feathered over `soft`.
float soft_mask(float signed_dist, float soft) {
  const float t = std::clamp(0.5f - signed_dist / (2.0f * soft), 0.0f, 1.0f);
  return t * t * (3.0f - 2.0f * t);
}

}  // namespace

Image random_scene(int height, int width, Rng& rng) {
  Image img(height, width, 3);

  // Gradient background between two random colors along a random direction.
  float c0[3], c1[3];
  for (int c = 0; c < 3; ++c) {
    c0[c] = static_cast<float>(rng.uniform(0.15, 0.85));
    c1[c] = static_cast<float>(rng.uniform(0.15, 0.85));
  }
  const float angle = static_cast<float>(rng.uniform(0.0, 2.0 * kPi));
  const float dx = std::cos(angle), dy = std::sin(angle);
  const float diag = std::sqrt(static_cast<float>(width) * width +
                               static_cast<float>(height) * height);
  for (int y = 0; y < height; ++y)
    for (int x = 0; x < width; ++x) {
      const float t =
          std::clamp((dx * x + dy * y) / diag * 0.5f + 0.5f, 0.0f, 1.0f);
      for (int c = 0; c < 3; ++c)
        img.at(c, y, x) = c0[c] * (1.0f - t) + c1[c] * t;
    }

  // Soft-edged ellipses.
  const int n_ellipses = rng.uniform_int(2, 4);
  for (int e = 0; e < n_ellipses; ++e) {
    const float cx = static_cast<float>(rng.uniform(0.1, 0.9)) * width;
    const float cy = static_cast<float>(rng.uniform(0.1, 0.9)) * height;
    const float rx = static_cast<float>(rng.uniform(0.08, 0.3)) * width;
    const float ry = static_cast<float>(rng.uniform(0.08, 0.3)) * height;
    const float soft = 0.04f * std::min(width, height) + 1.0f;
    float col[3];
    for (int c = 0; c < 3; ++c)
      col[c] = static_cast<float>(rng.uniform(0.1, 0.9));
    for (int y = 0; y < height; ++y)
      for (int x = 0; x < width; ++x) {
        const float nx = (x - cx) / rx;
        const float ny = (y - cy) / ry;
        const float d = (std::sqrt(nx * nx + ny * ny) - 1.0f) *
                        std::min(rx, ry);
        const float m = soft_mask(d, soft);
        if (m <= 0.0f) continue;
        for (int c = 0; c < 3; ++c)
          img.at(c, y, x) = img.at(c, y, x) * (1.0f - m) + col[c] * m;
      }
  }

  // One axis-aligned soft rectangle.
  {
    const int x0 = static_cast<int>(rng.uniform(0.05, 0.6) * width);
    const int y0 = static_cast<int>(rng.uniform(0.05, 0.6) * height);
    const int rw = static_cast<int>(rng.uniform(0.15, 0.35) * width);
    const int rh = static_cast<int>(rng.uniform(0.15, 0.35) * height);
    const float soft = 0.03f * std::min(width, height) + 1.0f;
    float col[3];
    for (int c = 0; c < 3; ++c)
      col[c] = static_cast<float>(rng.uniform(0.1, 0.9));
    for (int y = 0; y < height; ++y)
      for (int x = 0; x < width; ++x) {
        const float ex = std::max({static_cast<float>(x0 - x),
                                   static_cast<float>(x - (x0 + rw)), 0.0f});
        const float ey = std::max({static_cast<float>(y0 - y),
                                   static_cast<float>(y - (y0 + rh)), 0.0f});
        const float m = soft_mask(std::sqrt(ex * ex + ey * ey), soft);
        if (m <= 0.0f) continue;
        for (int c = 0; c < 3; ++c)
          img.at(c, y, x) = img.at(c, y, x) * (1.0f - m) + col[c] * m;
      }
  }

  // Gentle low-frequency luminance wave.
  const float wx = static_cast<float>(rng.uniform(1.0, 3.0));
  const float wy = static_cast<float>(rng.uniform(1.0, 3.0));
  const float phase = static_cast<float>(rng.uniform(0.0, 2.0 * kPi));
  const float amp = 0.05f;
  for (int y = 0; y < height; ++y)
    for (int x = 0; x < width; ++x) {
      const float v = amp * std::sin(2.0f * kPi * (wx * x / width +
                                                   wy * y / height) + phase);
      for (int c = 0; c < 3; ++c)
        img.at(c, y, x) = std::clamp(img.at(c, y, x) + v, 0.0f, 1.0f);
    }

  return img;
}

Image add_gaussian_noise(const Image& image, float sigma, Rng& rng) {
  Image out = image;
  for (auto& v : out.data)
    v = std::clamp(v + static_cast<float>(rng.normal(0.0, sigma)), 0.0f, 1.0f);
  return out;
}

}  // namespace dipstop::synth
