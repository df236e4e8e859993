#pragma once

#include <cstddef>
#include <vector>

#include "dipstop/dip/config.hpp"
#include "dipstop/nn/layers.hpp"

namespace dipstop::dip {

// Hourglass encoder-decoder with per-scale skip paths. The encoder halves
// the spatial extent at every scale with strided convolutions; the decoder
// mirrors it with bilinear upsampling. Each decoder scale consumes the
// concatenation of its skip branch and the upsampled deeper signal.
// Input spatial dimensions must be multiples of 2^depth; the output then has
// the input's spatial shape and 3 channels in (0, 1).
class DipNetwork {
 public:
  explicit DipNetwork(const DipConfig& config);

  // Deterministic weight init; draws in a fixed traversal order.
  void init(Rng& rng);

  nn::Tensor forward(const nn::Tensor& input, bool train);

  // Gradient w.r.t. the input; parameter gradients accumulate in place.
  nn::Tensor backward(const nn::Tensor& dout);

  std::vector<nn::ParamRef> params();
  std::size_t parameter_count();

  // Throws if (h, w) cannot pass through `depth` halvings with the
  // configured kernels' reflection padding.
  void check_spatial(int h, int w) const;

  const DipConfig& config() const { return cfg_; }

 private:
  struct ConvBlock {
    nn::Conv2d conv;
    nn::InstanceNorm norm;
    nn::LeakyReLU act;

    ConvBlock(int in_ch, int out_ch, int kernel, int stride);
    nn::Tensor forward(const nn::Tensor& x, bool train);
    nn::Tensor backward(const nn::Tensor& dy);
    void collect_params(const std::string& prefix, std::vector<nn::ParamRef>& out);
    void init(Rng& rng);
  };

  DipConfig cfg_;
  std::vector<ConvBlock> down1_, down2_, skip_;
  std::vector<nn::UpsampleBilinear2x> upsample_;
  std::vector<nn::InstanceNorm> catnorm_;
  std::vector<ConvBlock> up1_, up2_;
  nn::Conv2d final_conv_;
  nn::Sigmoid out_act_;
  std::vector<int> inner_channels_;  // channels entering the upsample at scale i
};

}  // namespace dipstop::dip
