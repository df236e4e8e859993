#pragma once

#include <string>

#include "dipstop/image.hpp"

namespace dipstop {

// Reads any PNG as 8-bit RGB and scales to [0, 1]. Grayscale and palette
// images are expanded; alpha is dropped.
Image read_png(const std::string& path);

// Writes a 3-channel image as 8-bit RGB. Values are clamped to [0, 1] and
// rounded to the nearest of 256 levels.
void write_png(const std::string& path, const Image& img);

}  // namespace dipstop
