#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "dipstop/image.hpp"
#include "dipstop/quality/score_model.hpp"
#include "dipstop/rng.hpp"

namespace dipstop::quality {

// One training example: a snapshot image, its target score histogram, and
// the identity of the source image it was reconstructed from. The split
// keeps all samples of one source on the same side.
struct TrainSample {
  Image image;
  ScoreDistribution target;
  std::string group_id;
  float psnr = 0.0f;  // carried for evaluation; training never reads it
};

struct TrainOptions {
  TrainSchedule schedule;
  std::uint64_t seed = 0;
  std::string corpus_id;
  float min_psnr = 0.0f;
  float max_psnr = 0.0f;
  std::function<void(const std::string&)> log;  // optional progress sink
};

// Indices held out for validation: whole groups are moved until at least
// `fraction` of the samples are on the validation side. Deterministic in
// (corpus order, rng). Returns an empty set when fraction is 0 or when
// holding out any group would empty the training side.
std::vector<int> validation_indices(const std::vector<TrainSample>& corpus,
                                    float fraction, Rng& rng);

// Two-stage schedule: stage 1 fits the head over the frozen pretrained
// backbone; stage 2 continues with the final depthwise-separable block
// unfrozen. Per-epoch train/validation EMD is recorded in the metadata.
ScoreModel train_quality_model(const std::vector<TrainSample>& corpus,
                               const BackboneCheckpoint& backbone,
                               const TrainOptions& options);

}  // namespace dipstop::quality
