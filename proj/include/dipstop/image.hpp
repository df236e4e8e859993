#pragma once

#include <cstddef>
#include <vector>

namespace dipstop {

// Planar float image, channel-major (CHW). Pixel values are nominally in
// [0, 1]; helpers that require this validate explicitly.
struct Image {
  int height = 0;
  int width = 0;
  int channels = 0;
  std::vector<float> data;

  Image() = default;
  Image(int h, int w, int c, float fill = 0.0f);

  float& at(int c, int y, int x) {
    return data[(static_cast<std::size_t>(c) * height + y) * width + x];
  }
  float at(int c, int y, int x) const {
    return data[(static_cast<std::size_t>(c) * height + y) * width + x];
  }

  std::size_t size() const { return data.size(); }
  bool same_shape(const Image& o) const {
    return height == o.height && width == o.width && channels == o.channels;
  }

  void clamp01();
};

// True when every value is finite and inside [0, 1].
bool in_unit_range(const Image& img);

Image resize_bilinear(const Image& src, int out_h, int out_w);
Image crop(const Image& src, int x0, int y0, int w, int h);
Image center_crop(const Image& src, int size);
Image hflip(const Image& src);

// Separable Gaussian low-pass with clamped edges; sigma <= 0 returns the
// input unchanged. Kernel radius is ceil(3*sigma).
Image gaussian_blur(const Image& src, float sigma);

// Reflection-pads each side so both dimensions become multiples of
// `multiple`; original content stays at the top-left corner.
Image pad_to_multiple_reflect(const Image& src, int multiple);

}  // namespace dipstop
