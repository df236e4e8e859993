#include "dipstop/pipeline/crops.hpp"

#include <set>
#include <stdexcept>
#include <string>

namespace dipstop::pipeline {

std::vector<CropOffset> crop_offsets(int width, int height, int size, int count,
                                     Rng& rng) {
  if (size < 1) throw std::invalid_argument("crop_offsets: size must be >= 1");
  if (count < 1) throw std::invalid_argument("crop_offsets: count must be >= 1");
  if (width < size || height < size)
    throw std::invalid_argument("crop_offsets: image " + std::to_string(width) +
                                "x" + std::to_string(height) +
                                " is smaller than crop size " +
                                std::to_string(size));
  const int max_x = width - size;
  const int max_y = height - size;
  const std::int64_t distinct =
      static_cast<std::int64_t>(max_x + 1) * (max_y + 1);
  if (count > distinct)
    throw std::invalid_argument("crop_offsets: only " + std::to_string(distinct) +
                                " distinct positions exist, " +
                                std::to_string(count) + " requested");

  // Dense requests enumerate-and-shuffle; sparse ones use rejection, which
  // terminates quickly when the candidate space dwarfs the request.
  if (distinct <= 2 * static_cast<std::int64_t>(count)) {
    std::vector<CropOffset> all;
    all.reserve(static_cast<std::size_t>(distinct));
    for (int y = 0; y <= max_y; ++y)
      for (int x = 0; x <= max_x; ++x) all.push_back({x, y});
    rng.shuffle(all);
    all.resize(count);
    return all;
  }

  std::vector<CropOffset> out;
  std::set<std::pair<int, int>> used;
  while (static_cast<int>(out.size()) < count) {
    const int x = max_x > 0 ? rng.uniform_int(0, max_x) : 0;
    const int y = max_y > 0 ? rng.uniform_int(0, max_y) : 0;
    if (used.insert({x, y}).second) out.push_back({x, y});
  }
  return out;
}

std::vector<Image> crop_regions(const Image& image, int size, int count,
                                std::uint64_t seed) {
  Rng rng = Rng(seed).stream("crop-offsets");
  const std::vector<CropOffset> offsets =
      crop_offsets(image.width, image.height, size, count, rng);
  std::vector<Image> out;
  out.reserve(offsets.size());
  for (const auto& o : offsets) out.push_back(crop(image, o.x, o.y, size, size));
  return out;
}

}  // namespace dipstop::pipeline
