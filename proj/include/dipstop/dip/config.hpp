#pragma once

#include <cstdint>
#include <vector>

namespace dipstop::dip {

// Hyperparameters of the hourglass prior network and its optimization loop.
// Per-scale vectors must have exactly `depth` entries.
struct DipConfig {
  int depth = 5;
  std::vector<int> filters_down;
  std::vector<int> filters_up;
  std::vector<int> filters_skip;
  std::vector<int> kernel_down;
  std::vector<int> kernel_up;
  std::vector<int> kernel_skip;
  int input_channels = 32;
  float input_noise_amplitude = 0.1f;
  float perturb_sigma = 1.0f / 30.0f;
  float learning_rate = 0.01f;
  int max_iterations = 5000;
  int eval_every = 10;
  std::uint64_t seed = 0;

  // Reference configuration: depth 5, 128 filters down/up, 4 skip channels,
  // 3x3 down/up kernels, 1x1 skip kernels.
  static DipConfig defaults();

  // Uniform small configuration, handy for desk-scale runs.
  static DipConfig with_scales(int depth, int filters, int skip_filters);

  // Throws std::invalid_argument naming the offending field.
  void validate() const;

  // Hash of the structural fields only (depth, filters, kernels,
  // input_channels); optimization settings do not participate.
  std::uint64_t fingerprint() const;
};

}  // namespace dipstop::dip
