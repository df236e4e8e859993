#pragma once

#include <cstdint>
#include <vector>

#include "dipstop/image.hpp"
#include "dipstop/rng.hpp"

namespace dipstop::pipeline {

struct CropOffset {
  int x = 0;
  int y = 0;
};

// `count` distinct top-left offsets for size x size regions inside a
// width x height image, drawn from the given stream. Throws when the image
// is too small or cannot host `count` distinct regions.
std::vector<CropOffset> crop_offsets(int width, int height, int size, int count,
                                     Rng& rng);

// Seeded region extraction. Applying the same (size, count, seed) to the
// clean and noisy member of a pair yields co-registered regions because the
// offsets depend only on the seed and the image dimensions.
std::vector<Image> crop_regions(const Image& image, int size, int count,
                                std::uint64_t seed);

}  // namespace dipstop::pipeline
