#pragma once

#include <cstdint>
#include <vector>

#include "dipstop/nn/layers.hpp"

namespace dipstop::nn {

// Adaptive-moment gradient descent over a fixed parameter set.
class Adam {
 public:
  Adam(std::vector<ParamRef> params, float lr, float beta1 = 0.9f,
       float beta2 = 0.999f, float eps = 1e-8f);

  void zero_grad();
  void step();

  float learning_rate() const { return lr_; }

 private:
  std::vector<ParamRef> params_;
  float lr_, beta1_, beta2_, eps_;
  std::int64_t t_ = 0;
  std::vector<std::vector<float>> m_, v_;
};

}  // namespace dipstop::nn
