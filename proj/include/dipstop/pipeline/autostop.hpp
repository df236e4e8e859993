#pragma once

#include <filesystem>
#include <vector>

#include "dipstop/dip/engine.hpp"
#include "dipstop/quality/score_model.hpp"
#include "dipstop/stop_controller.hpp"

namespace dipstop::pipeline {

struct AutoStopOptions {
  dip::DipConfig dip;
  stopctl::StopPolicy policy;
  const dip::NetworkState* warm_start = nullptr;
  std::filesystem::path snapshot_dir;  // snapshots persist here
  const Image* clean = nullptr;        // optional reference for a PSNR curve
};

struct AutoStopRun {
  dip::ReconstructionTrace trace;      // final_choice set to the chosen iteration
  stopctl::StopDecision decision;
  std::vector<float> psnr_curve;       // per scored step; empty without clean
  int chosen_iteration = 0;
  dip::NetworkState state;
};

// One reconstruction with the stop controller wired in as the observer:
// each snapshot is scored by the model (mean of the predicted histogram),
// the controller smooths the stream and may command early termination, and
// the fine search picks the final snapshot.
AutoStopRun run_autostop(const Image& noisy, quality::ScoreModel& model,
                         const AutoStopOptions& options);

// Deletes every snap_*.png in `dir` except `keep`.
void prune_snapshots(const std::filesystem::path& dir, const std::string& keep);

}  // namespace dipstop::pipeline
