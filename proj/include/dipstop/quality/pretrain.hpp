#pragma once

#include <cstdint>
#include <functional>
#include <string>

#include "dipstop/quality/backbone.hpp"

namespace dipstop::quality {

struct PretrainOptions {
  BackboneSpec spec;
  int steps = 200;        // 0 = random initialization only
  int batch_size = 8;
  int image_size = 96;    // pretext images are square; any size works (GAP)
  float learning_rate = 0.001f;
  std::uint64_t seed = 0;
  std::function<void(const std::string&)> log;
};

// Produces backbone weights for transfer. With steps > 0 the whole network
// is trained on a synthetic pretext task: procedurally generated scenes are
// degraded to one of ten severity levels (heavy smoothing plus structured
// blotches at the worst, sharp with trace noise at the best) and the network
// classifies the level under the distance-aware histogram loss. The
// throwaway pretext head is not part of the returned blobs.
nn::ParamBlobs pretrain_backbone(const PretrainOptions& options);

}  // namespace dipstop::quality
