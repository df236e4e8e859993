#include "dipstop/image.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dipstop {

Image::Image(int h, int w, int c, float fill)
    : height(h),
      width(w),
      channels(c),
      data(static_cast<std::size_t>(h) * w * c, fill) {
  if (h < 1 || w < 1 || c < 1) throw std::invalid_argument("Image: non-positive shape");
}

void Image::clamp01() {
  for (float& v : data) v = std::clamp(v, 0.0f, 1.0f);
}

bool in_unit_range(const Image& img) {
  for (float v : img.data) {
    if (!(v >= 0.0f && v <= 1.0f)) return false;
  }
  return true;
}

Image resize_bilinear(const Image& src, int out_h, int out_w) {
  if (out_h < 1 || out_w < 1) throw std::invalid_argument("resize_bilinear: bad size");
  Image dst(out_h, out_w, src.channels);
  const double sy = static_cast<double>(src.height) / out_h;
  const double sx = static_cast<double>(src.width) / out_w;
  for (int c = 0; c < src.channels; ++c) {
    for (int y = 0; y < out_h; ++y) {
      // Half-pixel centers; edge samples clamp.
      double fy = (y + 0.5) * sy - 0.5;
      fy = std::clamp(fy, 0.0, static_cast<double>(src.height - 1));
      const int y0 = static_cast<int>(fy);
      const int y1 = std::min(y0 + 1, src.height - 1);
      const double wy = fy - y0;
      for (int x = 0; x < out_w; ++x) {
        double fx = (x + 0.5) * sx - 0.5;
        fx = std::clamp(fx, 0.0, static_cast<double>(src.width - 1));
        const int x0 = static_cast<int>(fx);
        const int x1 = std::min(x0 + 1, src.width - 1);
        const double wx = fx - x0;
        const double top = (1.0 - wx) * src.at(c, y0, x0) + wx * src.at(c, y0, x1);
        const double bot = (1.0 - wx) * src.at(c, y1, x0) + wx * src.at(c, y1, x1);
        dst.at(c, y, x) = static_cast<float>((1.0 - wy) * top + wy * bot);
      }
    }
  }
  return dst;
}

Image crop(const Image& src, int x0, int y0, int w, int h) {
  if (x0 < 0 || y0 < 0 || w < 1 || h < 1 || x0 + w > src.width || y0 + h > src.height)
    throw std::invalid_argument("crop: region out of bounds");
  Image dst(h, w, src.channels);
  for (int c = 0; c < src.channels; ++c)
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x) dst.at(c, y, x) = src.at(c, y0 + y, x0 + x);
  return dst;
}

Image center_crop(const Image& src, int size) {
  if (src.height < size || src.width < size)
    throw std::invalid_argument("center_crop: image smaller than crop");
  return crop(src, (src.width - size) / 2, (src.height - size) / 2, size, size);
}

Image hflip(const Image& src) {
  Image dst(src.height, src.width, src.channels);
  for (int c = 0; c < src.channels; ++c)
    for (int y = 0; y < src.height; ++y)
      for (int x = 0; x < src.width; ++x)
        dst.at(c, y, x) = src.at(c, y, src.width - 1 - x);
  return dst;
}

Image gaussian_blur(const Image& src, float sigma) {
  if (sigma <= 0.0f) return src;
  const int radius = std::max(1, static_cast<int>(std::ceil(3.0f * sigma)));
  std::vector<double> kernel(2 * radius + 1);
  double sum = 0.0;
  for (int i = -radius; i <= radius; ++i) {
    kernel[i + radius] = std::exp(-0.5 * (i * i) / (sigma * sigma));
    sum += kernel[i + radius];
  }
  for (double& k : kernel) k /= sum;

  // Separable pass with clamped edges: horizontal, then vertical.
  const auto edge = [](int i, int n) { return std::clamp(i, 0, n - 1); };
  Image mid(src.height, src.width, src.channels);
  for (int c = 0; c < src.channels; ++c)
    for (int y = 0; y < src.height; ++y)
      for (int x = 0; x < src.width; ++x) {
        double acc = 0.0;
        for (int i = -radius; i <= radius; ++i)
          acc += kernel[i + radius] * src.at(c, y, edge(x + i, src.width));
        mid.at(c, y, x) = static_cast<float>(acc);
      }
  Image dst(src.height, src.width, src.channels);
  for (int c = 0; c < src.channels; ++c)
    for (int y = 0; y < src.height; ++y)
      for (int x = 0; x < src.width; ++x) {
        double acc = 0.0;
        for (int i = -radius; i <= radius; ++i)
          acc += kernel[i + radius] * mid.at(c, edge(y + i, src.height), x);
        dst.at(c, y, x) = static_cast<float>(acc);
      }
  return dst;
}

Image pad_to_multiple_reflect(const Image& src, int multiple) {
  const int ph = (multiple - src.height % multiple) % multiple;
  const int pw = (multiple - src.width % multiple) % multiple;
  if (ph == 0 && pw == 0) return src;
  if (ph >= src.height || pw >= src.width)
    throw std::invalid_argument("pad_to_multiple_reflect: image too small to reflect-pad");
  Image dst(src.height + ph, src.width + pw, src.channels);
  for (int c = 0; c < src.channels; ++c)
    for (int y = 0; y < dst.height; ++y) {
      const int sy = y < src.height ? y : 2 * src.height - 2 - y;
      for (int x = 0; x < dst.width; ++x) {
        const int sx = x < src.width ? x : 2 * src.width - 2 - x;
        dst.at(c, y, x) = src.at(c, sy, sx);
      }
    }
  return dst;
}

}  // namespace dipstop
