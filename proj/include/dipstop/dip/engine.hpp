#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "dipstop/dip/network.hpp"
#include "dipstop/image.hpp"
#include "dipstop/nn/serialize.hpp"

namespace dipstop::dip {

// Everything needed to resume or warm-start a reconstruction: the weights,
// the fixed noise input they were fitted against, and a structural hash that
// guards against loading them into an incompatible architecture.
struct NetworkState {
  std::uint64_t fingerprint = 0;
  nn::Tensor base_input;  // 1 x input_channels x padded_h x padded_w
  nn::ParamBlobs weights;
};

struct TraceEntry {
  int iteration = 0;
  float raw_score = 0.0f;
  float smoothed_score = 0.0f;
  bool scored = false;        // raw/smoothed are meaningful only when true
  std::string snapshot_ref;   // snapshot filename, empty when not persisted
};

struct ReconstructionTrace {
  std::vector<TraceEntry> entries;
  int final_choice = -1;          // iteration index of the retained snapshot
  std::vector<float> loss_curve;  // one value per completed iteration
};

// Observer verdict for a scored snapshot. `stop=true` ends the loop after
// the current iteration.
struct ObserverVerdict {
  bool stop = false;
  bool scored = false;
  float raw_score = 0.0f;
  float smoothed_score = 0.0f;
};

// Called synchronously every eval_every iterations with the clamped snapshot.
using SnapshotObserver =
    std::function<ObserverVerdict(int iteration, const Image& snapshot)>;

// Builds a freshly initialized hourglass for images of the given size.
// Identical (config, seed, height, width) produce bit-identical states.
NetworkState build_network(const DipConfig& config, std::uint64_t seed,
                           int height, int width);

// base_input + N(0, perturb_sigma^2); base_input itself is never mutated.
nn::Tensor perturb_input(const nn::Tensor& base_input, float perturb_sigma,
                         Rng& rng);

// Mean squared per-element difference.
float l2_loss(const Image& output, const Image& reference);

// Throws when `state` cannot warm-start a run with this config/image size:
// structural fingerprint mismatch or base-input spatial mismatch.
void check_warm_start(const NetworkState& state, const DipConfig& config,
                      int height, int width);

struct ReconstructResult {
  ReconstructionTrace trace;
  NetworkState state;
};

// Fits the prior network to `noisy` by iterative gradient descent. Every
// eval_every iterations the current output is clamped to [0, 1], optionally
// written to snapshot_dir as snap_{iteration:06d}.png, and handed to the
// observer, whose verdict is recorded in the trace and may stop the loop.
// `warm_start` (optional) supplies initial weights and the base input.
ReconstructResult reconstruct(const Image& noisy, const DipConfig& config,
                              const NetworkState* warm_start,
                              const SnapshotObserver& observer,
                              const std::filesystem::path& snapshot_dir = {});

void save_state(const NetworkState& state, const std::filesystem::path& path);
NetworkState load_state(const std::filesystem::path& path);

// Conversions between the 3-channel image type and NCHW tensors.
nn::Tensor image_to_tensor(const Image& img);
Image tensor_to_image(const nn::Tensor& t);

}  // namespace dipstop::dip
