#pragma once

#include <functional>
#include <string>
#include <vector>

#include "dipstop/dip/engine.hpp"
#include "dipstop/pipeline/manifest.hpp"

namespace dipstop::pipeline {

// Paired cold/warm comparison for one evaluation image. Steps are counted
// in scored steps (1-based): steps_to_band is the first step whose snapshot
// PSNR reaches the cold run's best PSNR minus the tolerance.
struct WarmstartPairOutcome {
  std::string id;
  float cold_best_psnr = 0.0f;
  float warm_best_psnr = 0.0f;
  float best_delta_db = 0.0f;  // warm best minus cold best
  int cold_steps_to_band = 0;
  int warm_steps_to_band = 0;
  bool warm_reached_band = false;
  float reduction = 0.0f;  // 1 - warm_steps/cold_steps, when reached
};

struct WarmstartStudy {
  int typical_iterations = 0;
  float tolerance_db = 0.5f;
  std::vector<WarmstartPairOutcome> pairs;
  float mean_reduction = 0.0f;         // over pairs that reached the band
  float reference_reduction = 0.36f;   // external reference figure for the
                                       // transfer protocol, for comparison
};

// Fits the prior network on the typical pair's noisy image, then runs every
// other pair cold and warm with identical settings and seeds, tracking the
// per-step PSNR against each pair's clean reference. All runs share the
// root seed so that a zero-iteration typical state reproduces the cold runs
// exactly (null-transfer control).
WarmstartStudy run_warmstart_study(
    const PairManifest& pairs, const std::string& typical_id,
    const dip::DipConfig& config, int typical_iterations, float tolerance_db,
    const std::function<void(const std::string&)>& log = {});

}  // namespace dipstop::pipeline
