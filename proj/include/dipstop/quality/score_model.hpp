#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "dipstop/image.hpp"
#include "dipstop/quality/backbone.hpp"
#include "dipstop/quality/distribution.hpp"

namespace dipstop::quality {

// Optimization settings for the two-stage schedule: stage 1 trains the head
// with every convolutional layer frozen; stage 2 additionally unfreezes the
// final depthwise-separable block.
struct TrainSchedule {
  int stage1_epochs = 10;
  int stage2_epochs = 20;
  float learning_rate = 0.001f;
  int batch_size = 32;
  int input_resize = 256;
  int train_crop = 224;
  bool random_flip = true;
  float validation_fraction = 0.1f;

  void validate() const;
};

struct StageLosses {
  std::vector<float> train;       // mean EMD per epoch
  std::vector<float> validation;  // mean EMD per epoch (empty if no val split)
};

struct ModelMetadata {
  std::string corpus_id;
  float min_psnr = 0.0f;
  float max_psnr = 0.0f;
  std::uint64_t seed = 0;
  TrainSchedule schedule;
  StageLosses stage1;
  StageLosses stage2;

  std::string to_json() const;
  static ModelMetadata from_json(const std::string& text);
};

// A quality scorer: the classifier network plus the training provenance
// needed to interpret its scores.
struct ScoreModel {
  QualityNet net;
  ModelMetadata meta;

  explicit ScoreModel(const BackboneSpec& spec) : net(spec) {}
};

// Deterministic inference geometry: resize to `input_resize`, center-crop
// `train_crop`, standardize with the backbone's channel constants.
nn::Tensor preprocess_for_scoring(const BackboneSpec& spec, int resize_to,
                                  int crop_to, const Image& image);

ScoreDistribution predict_distribution(ScoreModel& model, const Image& image);

// Binary weights file plus a sidecar JSON metadata document at
// `path + ".meta.json"`. Loading tolerates a missing sidecar.
void save_model(ScoreModel& model, const std::filesystem::path& path);
ScoreModel load_model(const std::filesystem::path& path);

}  // namespace dipstop::quality
