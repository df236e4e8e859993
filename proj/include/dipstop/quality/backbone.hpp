#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "dipstop/nn/layers.hpp"
#include "dipstop/nn/serialize.hpp"
#include "dipstop/quality/distribution.hpp"

namespace dipstop::quality {

// Structure of the lightweight classifier: a strided stem convolution
// followed by depthwise-separable blocks, global average pooling, and a
// 10-way softmax head. The normalization constants describe how the
// pretrained weights expect inputs to be standardized per channel.
struct BackboneSpec {
  struct Block {
    int out_channels = 0;
    int stride = 1;
  };

  int stem_filters = 8;
  std::vector<Block> blocks;
  std::array<float, 3> input_mean = {0.5f, 0.5f, 0.5f};
  std::array<float, 3> input_std = {0.25f, 0.25f, 0.25f};

  // Desk-scale default: stem 8, blocks 16/32/64/64 all stride 2.
  static BackboneSpec defaults();

  void validate() const;
  std::string to_json() const;
  static BackboneSpec from_json(const std::string& text);
  std::uint64_t fingerprint() const;  // structural fields only
};

// Depthwise-separable unit: depthwise conv + affine + relu, then pointwise
// conv + affine + relu. Per-channel affine rather than per-image
// normalization: the scorer's signal IS the absolute activation energy, and
// instance statistics would normalize it away.
struct DsBlock {
  nn::DepthwiseConv2d dw;
  nn::ChannelAffine dw_norm;
  nn::LeakyReLU dw_act;
  nn::Conv2d pw;
  nn::ChannelAffine pw_norm;
  nn::LeakyReLU pw_act;

  DsBlock(int in_ch, int out_ch, int stride);
  nn::Tensor forward(const nn::Tensor& x, bool train);
  nn::Tensor backward(const nn::Tensor& dy);
  void collect_params(const std::string& prefix, std::vector<nn::ParamRef>& out);
  void init(Rng& rng);
};

// Which parameters a training stage may update. Backward passes stop at the
// lowest trainable layer, so frozen layers are untouched bit-for-bit.
enum class TrainScope {
  kHeadOnly,          // the fully-connected head
  kHeadAndLastBlock,  // head plus the final depthwise-separable block
  kAll                // everything, used when pretraining the backbone
};

class QualityNet {
 public:
  explicit QualityNet(const BackboneSpec& spec);

  void init(Rng& rng);       // backbone and head
  void init_head(Rng& rng);  // head only, for use after a backbone import

  // Input: N x 3 x H x W, already normalized. Output: N x 10 x 1 x 1 of
  // probabilities.
  nn::Tensor forward(const nn::Tensor& x, bool train);

  // Backpropagates dy through the head and, if scope allows, the final
  // block. Parameter gradients accumulate; no input gradient is returned.
  void backward(const nn::Tensor& dy, TrainScope scope);

  std::vector<nn::ParamRef> all_params();
  std::vector<nn::ParamRef> backbone_params();
  std::vector<nn::ParamRef> head_params();
  std::vector<nn::ParamRef> trainable_params(TrainScope scope);

  const BackboneSpec& spec() const { return spec_; }
  int feature_channels() const { return feature_channels_; }

 private:
  BackboneSpec spec_;
  nn::Conv2d stem_;
  nn::ChannelAffine stem_norm_;
  nn::LeakyReLU stem_act_;
  std::vector<DsBlock> blocks_;
  nn::GlobalAvgPool pool_;
  nn::Linear fc_;
  nn::Softmax softmax_;
  int feature_channels_ = 0;
};

// Pretrained-backbone checkpoint: spec plus backbone weights only.
void save_backbone(const BackboneSpec& spec, const nn::ParamBlobs& weights,
                   const std::filesystem::path& path);
struct BackboneCheckpoint {
  BackboneSpec spec;
  nn::ParamBlobs weights;
};
BackboneCheckpoint load_backbone(const std::filesystem::path& path);

}  // namespace dipstop::quality
