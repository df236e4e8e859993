#pragma once

#include <string>
#include <vector>

#include "dipstop/nn/tensor.hpp"
#include "dipstop/rng.hpp"

namespace dipstop::nn {

// Named view of one parameter blob and its gradient accumulator.
struct ParamRef {
  std::string name;
  std::vector<float>* value = nullptr;
  std::vector<float>* grad = nullptr;
};

// Layers cache activations only when forward() runs with train=true; an
// inference pass mutates no member state, so a frozen network is safe to
// call from several threads at once.
class Layer {
 public:
  virtual ~Layer() = default;
  virtual Tensor forward(const Tensor& x, bool train) = 0;
  virtual Tensor backward(const Tensor& dy) = 0;
  virtual void collect_params(const std::string& prefix, std::vector<ParamRef>& out) {}
  virtual void init(Rng& rng) {}
};

enum class Padding { kZero, kReflect };

class Conv2d final : public Layer {
 public:
  Conv2d(int in_ch, int out_ch, int kernel, int stride = 1,
         Padding pad = Padding::kZero);

  Tensor forward(const Tensor& x, bool train) override;
  Tensor backward(const Tensor& dy) override;
  void collect_params(const std::string& prefix, std::vector<ParamRef>& out) override;
  void init(Rng& rng) override;

  int in_channels() const { return in_ch_; }
  int out_channels() const { return out_ch_; }
  int kernel() const { return k_; }
  std::size_t parameter_count() const { return weight_.size() + bias_.size(); }

 private:
  void im2col(const float* padded, int ph, int pw, int out_h, int out_w,
              float* col) const;

  int in_ch_, out_ch_, k_, stride_, pad_;
  Padding pad_mode_;
  std::vector<float> weight_, bias_, wgrad_, bgrad_;  // weight: [out, in*k*k]
  Tensor padded_cache_;
  int in_h_ = 0, in_w_ = 0;
};

// 3x3-style per-channel convolution (zero padding).
class DepthwiseConv2d final : public Layer {
 public:
  DepthwiseConv2d(int channels, int kernel, int stride = 1);

  Tensor forward(const Tensor& x, bool train) override;
  Tensor backward(const Tensor& dy) override;
  void collect_params(const std::string& prefix, std::vector<ParamRef>& out) override;
  void init(Rng& rng) override;
  std::size_t parameter_count() const { return weight_.size() + bias_.size(); }

 private:
  int ch_, k_, stride_, pad_;
  std::vector<float> weight_, bias_, wgrad_, bgrad_;  // weight: [ch, k*k]
  Tensor input_cache_;
};

// Per-sample, per-channel spatial normalization with learned affine. Has no
// running statistics, so behavior is identical in train and eval mode.
class InstanceNorm final : public Layer {
 public:
  explicit InstanceNorm(int channels, float eps = 1e-5f);

  Tensor forward(const Tensor& x, bool train) override;
  Tensor backward(const Tensor& dy) override;
  void collect_params(const std::string& prefix, std::vector<ParamRef>& out) override;
  std::size_t parameter_count() const { return gamma_.size() + beta_.size(); }

 private:
  int ch_;
  float eps_;
  std::vector<float> gamma_, beta_, ggrad_, bgrad_;
  Tensor xhat_cache_;
  std::vector<float> inv_std_cache_;  // per (n, c)
};

// Per-channel learned affine y = gamma[c]·x + beta[c]: the inference form
// of batch normalization once its statistics are folded in. Unlike
// per-image normalization it keeps absolute activation energy visible to
// downstream layers, which matters when the network's job is to judge how
// noisy its input is.
class ChannelAffine final : public Layer {
 public:
  explicit ChannelAffine(int channels);

  Tensor forward(const Tensor& x, bool train) override;
  Tensor backward(const Tensor& dy) override;
  void collect_params(const std::string& prefix, std::vector<ParamRef>& out) override;
  std::size_t parameter_count() const { return gamma_.size() + beta_.size(); }

 private:
  int ch_;
  std::vector<float> gamma_, beta_, ggrad_, bgrad_;
  Tensor input_cache_;
};

class LeakyReLU final : public Layer {
 public:
  explicit LeakyReLU(float slope) : slope_(slope) {}
  Tensor forward(const Tensor& x, bool train) override;
  Tensor backward(const Tensor& dy) override;

 private:
  float slope_;
  Tensor input_cache_;
};

class Sigmoid final : public Layer {
 public:
  Tensor forward(const Tensor& x, bool train) override;
  Tensor backward(const Tensor& dy) override;

 private:
  Tensor output_cache_;
};

// Doubles both spatial dimensions with half-pixel-center bilinear sampling.
class UpsampleBilinear2x final : public Layer {
 public:
  Tensor forward(const Tensor& x, bool train) override;
  Tensor backward(const Tensor& dy) override;

 private:
  int in_h_ = 0, in_w_ = 0, n_ = 0, c_ = 0;
};

class GlobalAvgPool final : public Layer {
 public:
  Tensor forward(const Tensor& x, bool train) override;
  Tensor backward(const Tensor& dy) override;

 private:
  int in_h_ = 0, in_w_ = 0, n_ = 0, c_ = 0;
};

// Fully-connected over flattened per-sample features.
class Linear final : public Layer {
 public:
  Linear(int in_features, int out_features);

  Tensor forward(const Tensor& x, bool train) override;
  Tensor backward(const Tensor& dy) override;
  void collect_params(const std::string& prefix, std::vector<ParamRef>& out) override;
  void init(Rng& rng) override;
  std::size_t parameter_count() const { return weight_.size() + bias_.size(); }

 private:
  int in_, out_;
  std::vector<float> weight_, bias_, wgrad_, bgrad_;  // weight: [out, in]
  Tensor input_cache_;
};

// Softmax over the channel axis; expects 1x1 spatial extent.
class Softmax final : public Layer {
 public:
  Tensor forward(const Tensor& x, bool train) override;
  Tensor backward(const Tensor& dy) override;

 private:
  Tensor output_cache_;
};

}  // namespace dipstop::nn
